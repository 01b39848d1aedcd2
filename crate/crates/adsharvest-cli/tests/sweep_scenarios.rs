//! Scenario-level behavior of the sweep engine: the records it emits must
//! carry the same physics the library computes point by point.

use adsharvest_cli::{
    run_sweep, Axis, AxisParam, AxisScale, FixedParams, Scenario, SweepSpec, ZetaChoice,
};
use adsharvest_core::BoundaryCondition;

#[test]
fn island_sweep_shows_the_zero_plateau_and_x_minimum() {
    // Dirichlet, moderate AdS length, gap 3.6: the concurrence column dips
    // to an interior zero plateau bracketed by positive values, around a
    // local minimum of |X|
    let spec = SweepSpec {
        scenario: Scenario::StaticHarvest,
        axes: vec![Axis {
            param: AxisParam::Separation,
            min: 3.0,
            max: 9.0,
            count: 61,
            scale: AxisScale::Linear,
        }],
        fixed: FixedParams {
            ell: 2.5,
            gap: 3.6,
            delay: 0.0,
            origin_offset: 0.0,
            ..FixedParams::default()
        },
        zeta: ZetaChoice::One(BoundaryCondition::Dirichlet),
        rel_tol: 1e-10,
    };
    let rows = run_sweep(&spec).unwrap();
    assert_eq!(rows.len(), 61);
    assert!(rows.iter().all(|r| r.status == "ok"));

    let clamped: Vec<bool> = rows.iter().map(|r| r.clamp_flag.unwrap()).collect();
    let first = clamped.iter().position(|&c| c).expect("no zero plateau");
    let after = first + clamped[first..].iter().position(|&c| !c).expect("no return");
    assert!(first > 0 && after < clamped.len());
    assert!(clamped[after..].iter().all(|&c| !c), "plateau not contiguous");

    let xs: Vec<f64> = rows.iter().map(|r| r.abs_x.unwrap()).collect();
    let min_idx = (1..xs.len() - 1)
        .filter(|&i| xs[i] < xs[i - 1] && xs[i] < xs[i + 1])
        .min_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap())
        .expect("no interior |X| minimum");
    assert!(
        first.saturating_sub(1) <= min_idx && min_idx <= after,
        "|X| minimum at row {min_idx} is away from the plateau [{first}, {})",
        after
    );
}

#[test]
fn zeta_sweep_rows_satisfy_boundary_affinity() {
    let spec = SweepSpec {
        scenario: Scenario::StaticHarvest,
        axes: vec![Axis {
            param: AxisParam::Gap,
            min: 0.2,
            max: 1.0,
            count: 2,
            scale: AxisScale::Linear,
        }],
        fixed: FixedParams {
            ell: 1.0,
            separation: 0.8,
            ..FixedParams::default()
        },
        zeta: ZetaChoice::All,
        rel_tol: 1e-10,
    };
    let rows = run_sweep(&spec).unwrap();
    assert_eq!(rows.len(), 6);
    for gap_rows in rows.chunks(3) {
        let by = |z: f64| gap_rows.iter().find(|r| r.zeta == z).unwrap();
        let (n, t, d) = (by(-1.0), by(0.0), by(1.0));
        let p_gap = (t.p_a.unwrap() - 0.5 * (n.p_a.unwrap() + d.p_a.unwrap())).abs();
        assert!(p_gap <= 1e-10 * t.p_a.unwrap());
        let re_gap = (t.re_x.unwrap() - 0.5 * (n.re_x.unwrap() + d.re_x.unwrap())).abs();
        let im_gap = (t.im_x.unwrap() - 0.5 * (n.im_x.unwrap() + d.im_x.unwrap())).abs();
        assert!(re_gap.hypot(im_gap) <= 1e-10 * t.abs_x.unwrap().max(1e-4));
    }
}

#[test]
fn perturbative_scenario_matches_the_series() {
    let spec = SweepSpec {
        scenario: Scenario::Perturbative,
        axes: vec![Axis {
            param: AxisParam::Ell,
            min: 10.0,
            max: 40.0,
            count: 3,
            scale: AxisScale::Log,
        }],
        fixed: FixedParams {
            gap: 0.5,
            ..FixedParams::default()
        },
        zeta: ZetaChoice::One(BoundaryCondition::Neumann),
        rel_tol: 1e-10,
    };
    let rows = run_sweep(&spec).unwrap();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        let want = adsharvest_core::perturbative::perturbative_transition_probability(
            0.5,
            adsharvest_core::AdsLength::new(r.ell_over_sigma.unwrap()).unwrap(),
            BoundaryCondition::Neumann,
            0.0,
            4,
        )
        .unwrap();
        assert_eq!(r.p_a, Some(want));
    }
    // below the validity floor the row fails gracefully instead of aborting
    let mut bad = spec.clone();
    bad.axes[0].min = 2.0;
    let rows = run_sweep(&bad).unwrap();
    assert!(rows[0].status.starts_with("error"));
    assert_eq!(rows[2].status, "ok");
}
