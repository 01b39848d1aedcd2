//! Gnuplot script emission for completed sweeps: line plots for one axis,
//! density maps for two, with zero-concurrence cells marked by black dots.

use crate::records::SweepRecord;
use crate::sweep::{AxisParam, Scenario, SweepSpec, ZetaChoice};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    Line,
    Density,
}

/// 1-based CSV column of an axis parameter.
fn csv_column(param: AxisParam) -> usize {
    match param {
        AxisParam::Ell => 3,
        AxisParam::Gap => 4,
        AxisParam::Separation => 5,
        AxisParam::Delay => 6,
        AxisParam::OriginOffset => 7,
    }
}

fn axis_label(param: AxisParam) -> &'static str {
    match param {
        AxisParam::Ell => "ell/sigma",
        AxisParam::Gap => "Omega sigma",
        AxisParam::Separation => "d/sigma",
        AxisParam::Delay => "t0/sigma",
        AxisParam::OriginOffset => "d(0,R_A)/sigma",
    }
}

/// The quantity a plot shows: concurrence where it exists, otherwise the
/// transition probability.
fn value_column(scenario: Scenario) -> (usize, &'static str) {
    match scenario {
        Scenario::StaticP | Scenario::Perturbative | Scenario::OracleCompare => (8, "P/lambda^2"),
        _ => (13, "concurrence/lambda^2"),
    }
}

/// Writes a self-contained gnuplot script that reads the sweep CSV by
/// relative path. Line scripts need exactly one axis, density scripts two;
/// density additionally needs a single boundary condition so the grid is
/// unambiguous.
pub fn emit_plot_script(
    spec: &SweepSpec,
    records: &[SweepRecord],
    kind: PlotKind,
    csv_path: &str,
) -> Result<String, String> {
    let any_clamped = records.iter().any(|r| r.clamp_flag == Some(true));
    let (val_col, val_label) = value_column(spec.scenario);
    match kind {
        PlotKind::Line => {
            if spec.axes.len() != 1 {
                return Err(format!(
                    "line plot needs exactly one axis, sweep has {}",
                    spec.axes.len()
                ));
            }
            let x = csv_column(spec.axes[0].param);
            let mut s = String::new();
            s.push_str("# gnuplot script generated by adsharvest sweep\n");
            s.push_str("set datafile separator ','\n");
            s.push_str(&format!("set xlabel '{}'\n", axis_label(spec.axes[0].param)));
            s.push_str(&format!("set ylabel '{val_label}'\n"));
            s.push_str("set key outside\n");
            let zetas: Vec<f64> = match spec.zeta {
                ZetaChoice::One(z) => vec![z.zeta()],
                ZetaChoice::All => vec![-1.0, 0.0, 1.0],
            };
            let mut parts = Vec::new();
            for z in &zetas {
                parts.push(format!(
                    "'{csv_path}' using (${x}):((${col_z}=={z}) ? ${val_col} : 1/0) \
                     with lines title 'zeta={z:+.0}'",
                    col_z = 2,
                ));
            }
            if any_clamped {
                parts.push(format!(
                    "'{csv_path}' using (strcol({clamp}) eq '1' ? ${x} : 1/0):({zero}) \
                     with points pt 7 ps 0.5 lc 'black' title 'no harvesting'",
                    clamp = 14,
                    zero = 0.0,
                ));
            }
            s.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
            Ok(s)
        }
        PlotKind::Density => {
            if spec.axes.len() != 2 {
                return Err(format!(
                    "density plot needs exactly two axes, sweep has {}",
                    spec.axes.len()
                ));
            }
            if matches!(spec.zeta, ZetaChoice::All) {
                return Err(
                    "density plots need a single boundary condition; rerun with --zeta".into(),
                );
            }
            let x = csv_column(spec.axes[0].param);
            let y = csv_column(spec.axes[1].param);
            let mut s = String::new();
            s.push_str("# gnuplot script generated by adsharvest sweep\n");
            s.push_str("set datafile separator ','\n");
            s.push_str(&format!("set xlabel '{}'\n", axis_label(spec.axes[0].param)));
            s.push_str(&format!("set ylabel '{}'\n", axis_label(spec.axes[1].param)));
            s.push_str(&format!("set cblabel '{val_label}'\n"));
            s.push_str("set view map\n");
            let mut parts = vec![format!(
                "'{csv_path}' using (${x}):(${y}):(${val_col}) with image title ''"
            )];
            if any_clamped {
                parts.push(format!(
                    "'{csv_path}' using (strcol({clamp}) eq '1' ? ${x} : 1/0):(${y}) \
                     with points pt 7 ps 0.3 lc 'black' title 'no harvesting'",
                    clamp = 14,
                ));
            }
            s.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
            Ok(s)
        }
    }
}
