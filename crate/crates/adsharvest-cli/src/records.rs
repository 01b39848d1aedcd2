//! The per-grid-point record and its rendered forms.

use serde::Serialize;
use std::time::Duration;

/// Output encodings for sweep files. `Json` is JSON Lines: one record
/// object per line, so resumed runs can append.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv|json)")),
        }
    }
}

/// One evaluated grid point. Inapplicable fields (for example the matrix
/// element of a single-detector scan) stay `None` and render as empty
/// cells. Wall time is kept in memory only; files must be byte-identical
/// across runs.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRecord {
    pub scenario: String,
    pub zeta: f64,
    pub ell_over_sigma: Option<f64>,
    pub omega_sigma: f64,
    pub d_over_sigma: Option<f64>,
    pub t0_over_sigma: Option<f64>,
    pub d_origin_over_sigma: Option<f64>,
    pub p_a: Option<f64>,
    pub p_b: Option<f64>,
    pub re_x: Option<f64>,
    pub im_x: Option<f64>,
    pub abs_x: Option<f64>,
    pub concurrence: Option<f64>,
    pub clamp_flag: Option<bool>,
    pub err_p_a: Option<f64>,
    pub err_p_b: Option<f64>,
    pub err_x: Option<f64>,
    pub status: String,
    #[serde(skip)]
    pub wall_time: Duration,
}

pub const CSV_COLUMNS: [&str; 18] = [
    "scenario",
    "zeta",
    "ell_over_sigma",
    "omega_sigma",
    "d_over_sigma",
    "t0_over_sigma",
    "d_origin_over_sigma",
    "p_a",
    "p_b",
    "re_x",
    "im_x",
    "abs_x",
    "concurrence",
    "clamp_flag",
    "err_p_a",
    "err_p_b",
    "err_x",
    "status",
];

pub fn render_csv_header() -> String {
    CSV_COLUMNS.join(",")
}

/// 17 significant digits, enough to round-trip an f64 exactly.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

pub fn render_csv_row(r: &SweepRecord) -> String {
    let clamp = match r.clamp_flag {
        Some(true) => "1",
        Some(false) => "0",
        None => "",
    };
    format!(
        "{},{:.0},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.scenario,
        r.zeta,
        fmt_opt(r.ell_over_sigma),
        fmt(r.omega_sigma),
        fmt_opt(r.d_over_sigma),
        fmt_opt(r.t0_over_sigma),
        fmt_opt(r.d_origin_over_sigma),
        fmt_opt(r.p_a),
        fmt_opt(r.p_b),
        fmt_opt(r.re_x),
        fmt_opt(r.im_x),
        fmt_opt(r.abs_x),
        fmt_opt(r.concurrence),
        clamp,
        fmt_opt(r.err_p_a),
        fmt_opt(r.err_p_b),
        fmt_opt(r.err_x),
        r.status,
    )
}

pub fn render_row(r: &SweepRecord, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => render_csv_row(r),
        OutputFormat::Json => serde_json::to_string(r).expect("record serializes"),
    }
}
