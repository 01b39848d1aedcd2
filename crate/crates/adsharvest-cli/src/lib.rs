//! Sweep engine and file formats for the detector-response calculations in
//! `adsharvest-core`: deterministic 1-D/2-D parameter scans with CSV or
//! JSON-lines output, resumable runs, and gnuplot script emission.
//!
//! Output is byte-identical across runs of the same spec: grid points are
//! emitted in a fixed order regardless of worker scheduling, floats are
//! printed with 17 significant digits, and wall times stay out of the files.

pub mod plot;
pub mod records;
pub mod sweep;

pub use plot::{emit_plot_script, PlotKind};
pub use records::{render_csv_header, render_csv_row, OutputFormat, SweepRecord};
pub use sweep::{
    run_sweep, run_sweep_to_file, Axis, AxisParam, AxisScale, FixedParams, Scenario, SweepSpec,
    SweepSummary, ZetaChoice,
};

use adsharvest_core::BoundaryCondition;

pub fn parse_zeta(s: &str) -> Result<ZetaChoice, String> {
    match s {
        "dirichlet" => Ok(ZetaChoice::One(BoundaryCondition::Dirichlet)),
        "transparent" => Ok(ZetaChoice::One(BoundaryCondition::Transparent)),
        "neumann" => Ok(ZetaChoice::One(BoundaryCondition::Neumann)),
        "all" => Ok(ZetaChoice::All),
        other => Err(format!(
            "unknown boundary condition `{other}` (expected dirichlet|transparent|neumann|all)"
        )),
    }
}
