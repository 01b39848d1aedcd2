//! Command-line front end: single-point evaluations, parameter sweeps, and
//! the assembled-vs-direct consistency check.

use adsharvest_cli::{
    emit_plot_script, parse_zeta, run_sweep_to_file, Axis, FixedParams, OutputFormat, PlotKind,
    Scenario, SweepSpec, ZetaChoice,
};
use adsharvest_core::direct::{self, BruteOptions, SpacetimeMode, Trajectory, WightmanEvaluator};
use adsharvest_core::{
    evaluate_pair, transition_probability_circular, transition_probability_static, AdsLength,
    BoundaryCondition, CircularPair, PairConfig, RadialPosition, StaticDetector, StaticPair,
    Tolerance,
};
use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "adsharvest",
    about = "Detector response and entanglement harvesting in AdS3",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonParams {
    /// AdS curvature radius over the switching width, ell/sigma
    #[arg(long, default_value_t = 1.0)]
    ell: f64,
    /// Detector energy gap Omega*sigma (negative = initially excited)
    #[arg(long, default_value_t = 0.1)]
    gap: f64,
    /// Proper distance of detector A from the origin, d(0,R_A)/sigma
    #[arg(long = "origin-distance", default_value_t = 0.0)]
    origin_distance: f64,
    /// Boundary condition: dirichlet | transparent | neumann | all
    #[arg(long, default_value = "transparent")]
    zeta: String,
    /// Relative tolerance of the evaluators
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Transition probability of a single detector
    Transition {
        #[command(flatten)]
        common: CommonParams,
        /// Worldline family: static | circular
        #[arg(long, default_value = "static")]
        trajectory: String,
    },
    /// Evaluate a detector pair: P_A, P_B, X, and the concurrence
    Harvest {
        #[command(flatten)]
        common: CommonParams,
        #[arg(long, default_value = "static")]
        trajectory: String,
        /// Proper separation of the detectors, d(R_A,R_B)/sigma
        #[arg(long, default_value_t = 1.0)]
        separation: f64,
        /// Switching delay t0/sigma (positive = A couples first)
        #[arg(long, default_value_t = 0.0)]
        delay: f64,
        /// Output: text | json
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Scan one or two parameters over a grid, writing CSV or JSON lines
    Sweep {
        #[command(flatten)]
        common: CommonParams,
        /// Scenario: static-P | static-harvest | circular-harvest | flat |
        /// perturbative | oracle-compare
        #[arg(long, default_value = "static-harvest")]
        scenario: String,
        /// First axis as param:min:max:count[:linear|log]
        #[arg(long)]
        axis: Option<String>,
        /// Second axis (same syntax)
        #[arg(long)]
        axis2: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        separation: f64,
        #[arg(long, default_value_t = 0.0)]
        delay: f64,
        /// Output file
        #[arg(long)]
        out: PathBuf,
        /// File format: csv | json (JSON is one record per line)
        #[arg(long, default_value = "csv")]
        format: String,
        /// Keep completed rows of an interrupted run and continue
        #[arg(long)]
        resume: bool,
        /// Worker threads (default: available parallelism)
        #[arg(long)]
        jobs: Option<usize>,
        /// Also write a gnuplot script next to the data
        #[arg(long = "plot-script")]
        plot_script: Option<PathBuf>,
    },
    /// Compare the assembled evaluators against direct integration of the
    /// defining correlator integrals
    OracleCheck {
        /// Smaller grid (a few seconds instead of minutes)
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Transition { common, trajectory } => {
            let tol = Tolerance::new(common.tol).map_err(|e| anyhow!("{e}"))?;
            let ell = AdsLength::new(common.ell).map_err(|e| anyhow!("{e}"))?;
            let zetas = match parse_zeta(&common.zeta).map_err(|e| anyhow!(e))? {
                ZetaChoice::One(z) => vec![z],
                ZetaChoice::All => BoundaryCondition::ALL.to_vec(),
            };
            for zeta in zetas {
                let q = match trajectory.as_str() {
                    "static" => {
                        let pos =
                            RadialPosition::from_proper_distance(ell, common.origin_distance)
                                .map_err(|e| anyhow!("{e}"))?;
                        let det = StaticDetector::new(common.gap, pos)
                            .map_err(|e| anyhow!("{e}"))?;
                        transition_probability_static(&det, ell, zeta, &tol)
                    }
                    "circular" => transition_probability_circular(common.gap, ell, zeta, &tol),
                    other => bail!("unknown trajectory `{other}`"),
                }
                .map_err(|e| anyhow!("{e}"))?;
                println!(
                    "P[{zeta}] = {:.12e}  (error estimate {:.1e})",
                    q.value, q.abs_error_estimate
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Harvest {
            common,
            trajectory,
            separation,
            delay,
            format,
        } => {
            let tol = Tolerance::new(common.tol).map_err(|e| anyhow!("{e}"))?;
            let ell = AdsLength::new(common.ell).map_err(|e| anyhow!("{e}"))?;
            let zetas = match parse_zeta(&common.zeta).map_err(|e| anyhow!(e))? {
                ZetaChoice::One(z) => vec![z],
                ZetaChoice::All => BoundaryCondition::ALL.to_vec(),
            };
            for zeta in zetas {
                let pos_a = RadialPosition::from_proper_distance(ell, common.origin_distance)
                    .map_err(|e| anyhow!("{e}"))?;
                let pos_b = RadialPosition::from_proper_distance(
                    ell,
                    common.origin_distance + separation,
                )
                .map_err(|e| anyhow!("{e}"))?;
                let config = match trajectory.as_str() {
                    "static" => PairConfig::Static(
                        StaticPair::new(ell, zeta, common.gap, pos_a, pos_b, delay)
                            .map_err(|e| anyhow!("{e}"))?,
                    ),
                    "circular" => PairConfig::Circular(
                        CircularPair::new(ell, zeta, common.gap, pos_a, pos_b, delay)
                            .map_err(|e| anyhow!("{e}"))?,
                    ),
                    other => bail!("unknown trajectory `{other}`"),
                };
                let h = evaluate_pair(&config, &tol).map_err(|e| anyhow!("{e}"))?;
                match format.as_str() {
                    "text" => {
                        println!("zeta        = {zeta}");
                        println!("P_A         = {:.12e} ± {:.1e}", h.p_a, h.err_p_a);
                        println!("P_B         = {:.12e} ± {:.1e}", h.p_b, h.err_p_b);
                        println!(
                            "X           = {:.12e} {:+.12e}i (|X| = {:.12e})",
                            h.x.re,
                            h.x.im,
                            h.x.norm()
                        );
                        println!(
                            "concurrence = {:.12e}{}",
                            h.concurrence,
                            if h.clamped_zero { "  (clamped to zero)" } else { "" }
                        );
                    }
                    "json" => {
                        println!(
                            "{}",
                            serde_json::json!({
                                "zeta": zeta.zeta(),
                                "p_a": h.p_a,
                                "p_b": h.p_b,
                                "re_x": h.x.re,
                                "im_x": h.x.im,
                                "abs_x": h.x.norm(),
                                "concurrence": h.concurrence,
                                "clamp_flag": h.clamped_zero,
                                "err_p_a": h.err_p_a,
                                "err_p_b": h.err_p_b,
                                "err_x": h.err_x,
                            })
                        );
                    }
                    other => bail!("unknown format `{other}`"),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            common,
            scenario,
            axis,
            axis2,
            separation,
            delay,
            out,
            format,
            resume,
            jobs,
            plot_script,
        } => {
            let mut axes = Vec::new();
            if let Some(a) = axis {
                axes.push(Axis::parse(&a).map_err(|e| anyhow!(e))?);
            }
            if let Some(a) = axis2 {
                if axes.is_empty() {
                    bail!("--axis2 needs --axis");
                }
                axes.push(Axis::parse(&a).map_err(|e| anyhow!(e))?);
            }
            let spec = SweepSpec {
                scenario: Scenario::from_str(&scenario).map_err(|e| anyhow!(e))?,
                axes,
                fixed: FixedParams {
                    ell: common.ell,
                    gap: common.gap,
                    separation,
                    delay,
                    origin_offset: common.origin_distance,
                },
                zeta: parse_zeta(&common.zeta).map_err(|e| anyhow!(e))?,
                rel_tol: common.tol,
            };
            let fmt = OutputFormat::from_str(&format).map_err(|e| anyhow!(e))?;
            let summary = run_sweep_to_file(&spec, &out, fmt, resume, jobs)
                .map_err(|e| anyhow!(e))?;
            eprintln!(
                "swept {} points ({} ok, {} resumed) in {:.2?} -> {}",
                summary.total,
                summary.ok,
                summary.skipped_resume,
                summary.wall_time,
                out.display()
            );
            if let Some(script_path) = plot_script {
                if fmt != OutputFormat::Csv {
                    bail!("--plot-script needs --format csv");
                }
                let kind = if spec.axes.len() == 2 {
                    PlotKind::Density
                } else {
                    PlotKind::Line
                };
                // the script references the CSV by relative path
                let csv_name = out
                    .file_name()
                    .and_then(|n| n.to_str())
                    .context("output path has no file name")?;
                // re-read the rows we just wrote to know whether any clamped
                let rows = adsharvest_cli::sweep::run_sweep(&spec).map_err(|e| anyhow!(e))?;
                let script = emit_plot_script(&spec, &rows, kind, csv_name)
                    .map_err(|e| anyhow!(e))?;
                std::fs::write(&script_path, script)
                    .with_context(|| format!("writing {}", script_path.display()))?;
                eprintln!("plot script -> {}", script_path.display());
            }
            Ok(if summary.all_ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::OracleCheck { quick, jobs } => oracle_check(quick, jobs),
    }
}

/// Assembled evaluators against direct integration on the standard grid;
/// prints one line per point and fails if any gap exceeds its gate
/// (1e-6 relative on P, 1e-5 on X).
fn oracle_check(quick: bool, jobs: Option<usize>) -> Result<ExitCode> {
    use rayon::prelude::*;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = pool.build().map_err(|e| anyhow!(e))?;

    let (ells, gaps): (&[f64], &[f64]) = if quick {
        (&[1.0], &[1.0])
    } else {
        (&[0.5, 1.0, 5.0], &[0.01, 1.0, 2.0])
    };
    let tol = Tolerance::default();
    let opts = BruteOptions::default();

    struct Case {
        label: String,
        gap: f64,
        ok: bool,
    }

    let mut cases: Vec<(f64, f64, BoundaryCondition, f64)> = Vec::new();
    for &l in ells {
        for &om in gaps {
            for z in BoundaryCondition::ALL {
                for d in [0.0, 1.0] {
                    cases.push((l, om, z, d));
                }
            }
        }
    }
    let p_results: Vec<Case> = pool.install(|| {
        cases
            .par_iter()
            .map(|&(l, om, zeta, d)| {
                let ell = AdsLength::new(l).expect("valid");
                let pos = RadialPosition::from_proper_distance(ell, d).expect("valid");
                let det = StaticDetector::new(om, pos).expect("valid");
                let asm = transition_probability_static(&det, ell, zeta, &tol);
                let dir = direct::transition_probability(
                    om,
                    &Trajectory::Static {
                        r_over_ell: pos.r_over_ell(),
                    },
                    &WightmanEvaluator::new(SpacetimeMode::AntiDeSitter { ell }, zeta, 1e-3)
                        .expect("valid"),
                    &opts,
                );
                match (asm, dir) {
                    (Ok(a), Ok(b)) => {
                        let gap = ((a.value - b.value) / a.value).abs();
                        Case {
                            label: format!(
                                "P  ell={l:<4} gap={om:<5} {zeta:<11} d={d}: rel {gap:.2e}"
                            ),
                            gap,
                            ok: gap <= 1e-6,
                        }
                    }
                    (a, b) => Case {
                        label: format!(
                            "P  ell={l} gap={om} {zeta} d={d}: {:?} / {:?}",
                            a.err(),
                            b.err()
                        ),
                        gap: f64::INFINITY,
                        ok: false,
                    },
                }
            })
            .collect()
    });

    let mut x_cases: Vec<(f64, f64, BoundaryCondition, f64, f64)> = Vec::new();
    let (ds, t0s): (&[f64], &[f64]) = if quick {
        (&[1.0], &[0.0])
    } else {
        (&[0.5, 1.0], &[0.0, 1.0])
    };
    for &l in ells {
        for &om in gaps {
            for z in BoundaryCondition::ALL {
                for &d in ds {
                    for &t0 in t0s {
                        x_cases.push((l, om, z, d, t0));
                    }
                }
            }
        }
    }
    let x_results: Vec<Case> = pool.install(|| {
        x_cases
            .par_iter()
            .map(|&(l, om, zeta, d, t0)| {
                let ell = AdsLength::new(l).expect("valid");
                let pos_a = RadialPosition::ORIGIN;
                let pos_b = RadialPosition::from_proper_distance(ell, d).expect("valid");
                let pair = StaticPair::new(ell, zeta, om, pos_a, pos_b, t0).expect("valid");
                let asm = adsharvest_core::matrix_element_x_static(&pair, &tol);
                let dir = direct::matrix_element_x(&PairConfig::Static(pair), &opts);
                match (asm, dir) {
                    (Ok(a), Ok(b)) => {
                        let gap = (a.value - b.value).norm() / a.value.norm();
                        Case {
                            label: format!(
                                "X  ell={l:<4} gap={om:<5} {zeta:<11} d={d} t0={t0}: rel {gap:.2e}"
                            ),
                            gap,
                            ok: gap <= 1e-5,
                        }
                    }
                    (a, b) => Case {
                        label: format!(
                            "X  ell={l} gap={om} {zeta} d={d} t0={t0}: {:?} / {:?}",
                            a.err(),
                            b.err()
                        ),
                        gap: f64::INFINITY,
                        ok: false,
                    },
                }
            })
            .collect()
    });

    let mut all_ok = true;
    for c in p_results.iter().chain(x_results.iter()) {
        println!("{} {}", if c.ok { "PASS" } else { "FAIL" }, c.label);
        all_ok &= c.ok;
    }
    let worst = p_results
        .iter()
        .chain(x_results.iter())
        .map(|c| c.gap)
        .fold(0.0f64, f64::max);
    println!(
        "oracle-check: {} points, worst relative gap {worst:.2e}",
        p_results.len() + x_results.len()
    );
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
