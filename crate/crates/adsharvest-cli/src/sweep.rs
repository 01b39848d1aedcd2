//! Grid construction, per-point evaluation, parallel execution with ordered
//! output, and resumable file writing.

use crate::records::{render_csv_header, render_row, OutputFormat, SweepRecord};
use adsharvest_core::direct::{
    self, BruteOptions, SpacetimeMode, Trajectory, WightmanEvaluator,
};
use adsharvest_core::flat::{flat_matrix_element_x, flat_transition_probability, FlatPairConfig};
use adsharvest_core::perturbative::perturbative_transition_probability;
use adsharvest_core::{
    concurrence, evaluate_pair, matrix_element_x_static, transition_probability_static, AdsLength,
    BoundaryCondition, CircularPair, PairConfig, RadialPosition, StaticDetector, StaticPair,
    Tolerance,
};
use rayon::prelude::*;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{Duration, Instant};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    /// Transition probability of a single static detector.
    StaticP,
    /// Full harvest (P_A, P_B, X, concurrence) for a static pair.
    StaticHarvest,
    /// Full harvest for a circular-geodesic pair.
    CircularHarvest,
    /// Flat-space closed forms.
    Flat,
    /// Curvature expansion of the static transition probability.
    Perturbative,
    /// Assembled evaluators against the direct-integration reference.
    OracleCompare,
}

impl Scenario {
    pub fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "static-P" => Scenario::StaticP,
            "static-harvest" => Scenario::StaticHarvest,
            "circular-harvest" => Scenario::CircularHarvest,
            "flat" => Scenario::Flat,
            "perturbative" => Scenario::Perturbative,
            "oracle-compare" => Scenario::OracleCompare,
            other => {
                return Err(format!(
                    "unknown scenario `{other}` (expected static-P|static-harvest|circular-harvest|flat|perturbative|oracle-compare)"
                ))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::StaticP => "static-P",
            Scenario::StaticHarvest => "static-harvest",
            Scenario::CircularHarvest => "circular-harvest",
            Scenario::Flat => "flat",
            Scenario::Perturbative => "perturbative",
            Scenario::OracleCompare => "oracle-compare",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisParam {
    Ell,
    Gap,
    Separation,
    Delay,
    OriginOffset,
}

impl AxisParam {
    pub fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "ell" => AxisParam::Ell,
            "gap" => AxisParam::Gap,
            "separation" => AxisParam::Separation,
            "delay" => AxisParam::Delay,
            "origin_offset" | "origin-offset" => AxisParam::OriginOffset,
            other => {
                return Err(format!(
                    "unknown axis `{other}` (expected ell|gap|separation|delay|origin_offset)"
                ))
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisScale {
    Linear,
    Log,
}

#[derive(Clone, Copy, Debug)]
pub struct Axis {
    pub param: AxisParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: AxisScale,
}

impl Axis {
    /// `param:min:max:count[:linear|log]`
    pub fn parse(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 && parts.len() != 5 {
            return Err(format!(
                "axis `{s}` must be param:min:max:count[:linear|log]"
            ));
        }
        let param = AxisParam::from_str(parts[0])?;
        let min: f64 = parts[1].parse().map_err(|_| format!("bad axis min in `{s}`"))?;
        let max: f64 = parts[2].parse().map_err(|_| format!("bad axis max in `{s}`"))?;
        let count: usize = parts[3]
            .parse()
            .map_err(|_| format!("bad axis count in `{s}`"))?;
        let scale = match parts.get(4) {
            None | Some(&"linear") => AxisScale::Linear,
            Some(&"log") => AxisScale::Log,
            Some(other) => return Err(format!("bad axis scale `{other}`")),
        };
        Ok(Axis {
            param,
            min,
            max,
            count,
            scale,
        })
    }

    fn value_at(&self, i: usize) -> f64 {
        if self.count == 1 {
            return self.min;
        }
        let f = i as f64 / (self.count - 1) as f64;
        match self.scale {
            AxisScale::Linear => self.min + (self.max - self.min) * f,
            AxisScale::Log => self.min * (self.max / self.min).powf(f),
        }
    }
}

/// Parameters held fixed wherever no axis overrides them.
#[derive(Clone, Copy, Debug)]
pub struct FixedParams {
    pub ell: f64,
    pub gap: f64,
    pub separation: f64,
    pub delay: f64,
    pub origin_offset: f64,
}

impl Default for FixedParams {
    fn default() -> Self {
        FixedParams {
            ell: 1.0,
            gap: 0.1,
            separation: 1.0,
            delay: 0.0,
            origin_offset: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum ZetaChoice {
    One(BoundaryCondition),
    All,
}

impl ZetaChoice {
    fn list(&self) -> Vec<BoundaryCondition> {
        match self {
            ZetaChoice::One(z) => vec![*z],
            ZetaChoice::All => BoundaryCondition::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub scenario: Scenario,
    /// Up to two axes; none at all is a single-point "sweep".
    pub axes: Vec<Axis>,
    pub fixed: FixedParams,
    pub zeta: ZetaChoice,
    pub rel_tol: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.axes.len() > 2 {
            return Err("at most two sweep axes are supported".into());
        }
        for ax in &self.axes {
            if ax.count < 2 {
                return Err("each axis needs at least two points".into());
            }
            if !(ax.min.is_finite() && ax.max.is_finite()) {
                return Err("axis range must be finite".into());
            }
            let needs_positive = matches!(ax.param, AxisParam::Ell | AxisParam::Separation);
            if needs_positive && (ax.min <= 0.0 || ax.max <= 0.0) {
                return Err("ell and separation axes must stay positive".into());
            }
            if ax.scale == AxisScale::Log && (ax.min <= 0.0 || ax.max <= 0.0) {
                return Err("log axes need positive bounds".into());
            }
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            return Err("the two axes must vary different parameters".into());
        }
        if !(self.rel_tol.is_finite() && self.rel_tol > 0.0) {
            return Err("tolerance must be positive".into());
        }
        Ok(())
    }

    /// Grid size including the ζ multiplicity.
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product::<usize>() * self.zeta.list().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn point(&self, flat_index: usize) -> (FixedParams, BoundaryCondition) {
        let zetas = self.zeta.list();
        let nz = zetas.len();
        let zeta = zetas[flat_index % nz];
        let mut rest = flat_index / nz;
        let mut params = self.fixed;
        // innermost non-zeta dimension is the last axis
        for ax in self.axes.iter().rev() {
            let i = rest % ax.count;
            rest /= ax.count;
            let v = ax.value_at(i);
            match ax.param {
                AxisParam::Ell => params.ell = v,
                AxisParam::Gap => params.gap = v,
                AxisParam::Separation => params.separation = v,
                AxisParam::Delay => params.delay = v,
                AxisParam::OriginOffset => params.origin_offset = v,
            }
        }
        (params, zeta)
    }
}

fn blank_record(spec: &SweepSpec, p: &FixedParams, zeta: BoundaryCondition) -> SweepRecord {
    SweepRecord {
        scenario: spec.scenario.name().into(),
        zeta: zeta.zeta(),
        ell_over_sigma: Some(p.ell),
        omega_sigma: p.gap,
        d_over_sigma: Some(p.separation),
        t0_over_sigma: Some(p.delay),
        d_origin_over_sigma: Some(p.origin_offset),
        p_a: None,
        p_b: None,
        re_x: None,
        im_x: None,
        abs_x: None,
        concurrence: None,
        clamp_flag: None,
        err_p_a: None,
        err_p_b: None,
        err_x: None,
        status: "ok".into(),
        wall_time: Duration::ZERO,
    }
}

fn eval_point(spec: &SweepSpec, p: FixedParams, zeta: BoundaryCondition) -> SweepRecord {
    let start = Instant::now();
    let mut rec = blank_record(spec, &p, zeta);
    let tol = match Tolerance::new(spec.rel_tol) {
        Ok(t) => t,
        Err(e) => {
            rec.status = format!("error: {e}");
            return rec;
        }
    };
    let outcome: Result<(), adsharvest_core::Error> = (|| {
        match spec.scenario {
            Scenario::StaticP => {
                rec.d_over_sigma = None;
                rec.t0_over_sigma = None;
                let ell = AdsLength::new(p.ell)?;
                let pos = RadialPosition::from_proper_distance(ell, p.origin_offset)?;
                let det = StaticDetector::new(p.gap, pos)?;
                let q = transition_probability_static(&det, ell, zeta, &tol)?;
                rec.p_a = Some(q.value);
                rec.err_p_a = Some(q.abs_error_estimate);
            }
            Scenario::StaticHarvest | Scenario::CircularHarvest => {
                let ell = AdsLength::new(p.ell)?;
                let pos_a = RadialPosition::from_proper_distance(ell, p.origin_offset)?;
                let pos_b =
                    RadialPosition::from_proper_distance(ell, p.origin_offset + p.separation)?;
                let config = if spec.scenario == Scenario::StaticHarvest {
                    PairConfig::Static(StaticPair::new(ell, zeta, p.gap, pos_a, pos_b, p.delay)?)
                } else {
                    PairConfig::Circular(CircularPair::new(
                        ell, zeta, p.gap, pos_a, pos_b, p.delay,
                    )?)
                };
                let h = evaluate_pair(&config, &tol)?;
                rec.p_a = Some(h.p_a);
                rec.p_b = Some(h.p_b);
                rec.re_x = Some(h.x.re);
                rec.im_x = Some(h.x.im);
                rec.abs_x = Some(h.x.norm());
                rec.concurrence = Some(h.concurrence);
                rec.clamp_flag = Some(h.clamped_zero);
                rec.err_p_a = Some(h.err_p_a);
                rec.err_p_b = Some(h.err_p_b);
                rec.err_x = Some(h.err_x);
            }
            Scenario::Flat => {
                rec.ell_over_sigma = None;
                rec.t0_over_sigma = None;
                rec.d_origin_over_sigma = None;
                let cfg = FlatPairConfig::new(p.gap, p.separation)?;
                let pv = flat_transition_probability(p.gap);
                let x = flat_matrix_element_x(&cfg)?;
                let c = concurrence(pv, pv, x)?;
                rec.p_a = Some(pv);
                rec.p_b = Some(pv);
                rec.re_x = Some(x.re);
                rec.im_x = Some(x.im);
                rec.abs_x = Some(x.norm());
                rec.concurrence = Some(c);
                rec.clamp_flag = Some(c == 0.0);
                rec.err_p_a = Some(0.0);
                rec.err_p_b = Some(0.0);
                rec.err_x = Some(0.0);
            }
            Scenario::Perturbative => {
                rec.d_over_sigma = None;
                rec.t0_over_sigma = None;
                let ell = AdsLength::new(p.ell)?;
                let v =
                    perturbative_transition_probability(p.gap, ell, zeta, p.origin_offset, 4)?;
                rec.p_a = Some(v);
                rec.err_p_a = Some(0.0);
            }
            Scenario::OracleCompare => {
                let ell = AdsLength::new(p.ell)?;
                let pos_a = RadialPosition::from_proper_distance(ell, p.origin_offset)?;
                let pos_b =
                    RadialPosition::from_proper_distance(ell, p.origin_offset + p.separation)?;
                let det = StaticDetector::new(p.gap, pos_a)?;
                let assembled = transition_probability_static(&det, ell, zeta, &tol)?;
                let opts = BruteOptions::default();
                let reference = direct::transition_probability(
                    p.gap,
                    &Trajectory::Static {
                        r_over_ell: pos_a.r_over_ell(),
                    },
                    &WightmanEvaluator::new(SpacetimeMode::AntiDeSitter { ell }, zeta, 1e-3)?,
                    &opts,
                )?;
                let p_gap = (assembled.value - reference.value).abs();
                rec.p_a = Some(assembled.value);
                rec.p_b = Some(reference.value);
                rec.err_p_a = Some(p_gap);
                let pair = StaticPair::new(ell, zeta, p.gap, pos_a, pos_b, p.delay)?;
                let x_asm = matrix_element_x_static(&pair, &tol)?;
                let x_ref = direct::matrix_element_x(&PairConfig::Static(pair), &opts)?;
                let x_gap = (x_asm.value - x_ref.value).norm();
                rec.re_x = Some(x_asm.value.re);
                rec.im_x = Some(x_asm.value.im);
                rec.abs_x = Some(x_asm.value.norm());
                rec.err_x = Some(x_gap);
                let p_ok = p_gap <= 1e-6 * assembled.value.abs().max(1e-8);
                let x_ok = x_gap <= 1e-5 * x_asm.value.norm().max(1e-8);
                if !(p_ok && x_ok) {
                    rec.status = format!(
                        "mismatch: P gap {p_gap:.3e}, X gap {x_gap:.3e}"
                    );
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        rec.status = match e {
            adsharvest_core::Error::DegenerateConfiguration(_) => "degenerate".into(),
            other => format!("error: {other}"),
        };
    }
    rec.wall_time = start.elapsed();
    rec
}

/// Summary of a sweep run.
#[derive(Clone, Debug)]
pub struct SweepSummary {
    pub total: usize,
    pub ok: usize,
    pub skipped_resume: usize,
    pub wall_time: Duration,
}

impl SweepSummary {
    pub fn all_ok(&self) -> bool {
        self.ok + self.skipped_resume == self.total
    }
}

/// Evaluates the whole grid in deterministic order and returns the records.
///
/// Execution is data-parallel in chunks; output order never depends on
/// scheduling. Per-point failures land in the record's status column.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>, String> {
    spec.validate()?;
    let n = spec.len();
    let mut out = Vec::with_capacity(n);
    for chunk_start in (0..n).step_by(CHUNK) {
        let end = (chunk_start + CHUNK).min(n);
        let mut chunk: Vec<SweepRecord> = (chunk_start..end)
            .into_par_iter()
            .map(|i| {
                let (params, zeta) = spec.point(i);
                eval_point(spec, params, zeta)
            })
            .collect();
        out.append(&mut chunk);
    }
    Ok(out)
}

const CHUNK: usize = 64;

/// Runs the sweep into a file, flushing completed chunks as it goes.
///
/// With `resume`, previously completed rows (parsed from the existing file)
/// are kept and skipped; the final file is byte-identical to an
/// uninterrupted run. A trailing partial line is discarded.
pub fn run_sweep_to_file(
    spec: &SweepSpec,
    path: &Path,
    format: OutputFormat,
    resume: bool,
    jobs: Option<usize>,
) -> Result<SweepSummary, String> {
    spec.validate()?;
    let started = Instant::now();
    let n = spec.len();

    let done = if resume && path.exists() {
        recover_completed_rows(path, format, n)?
    } else {
        Vec::new()
    };
    let skip = done.len();

    let file = if skip > 0 {
        let mut f = fs::OpenOptions::new()
            .write(true)
            .truncate(true)
            .open(path)
            .map_err(|e| format!("cannot reopen {}: {e}", path.display()))?;
        if format == OutputFormat::Csv {
            writeln!(f, "{}", render_csv_header()).map_err(|e| e.to_string())?;
        }
        for line in &done {
            writeln!(f, "{line}").map_err(|e| e.to_string())?;
        }
        f
    } else {
        let mut f = fs::File::create(path)
            .map_err(|e| format!("cannot create {}: {e}", path.display()))?;
        if format == OutputFormat::Csv {
            writeln!(f, "{}", render_csv_header()).map_err(|e| e.to_string())?;
        }
        f
    };
    let mut writer = BufWriter::new(file);

    let pool = build_pool(jobs)?;
    let mut ok = 0usize;
    for line in &done {
        // status is the last CSV field / "status" JSON field; cheap check
        if line.ends_with(",ok") || line.contains("\"status\":\"ok\"") {
            ok += 1;
        }
    }
    let ok_from_resume = ok;
    let mut computed_ok = 0usize;
    for chunk_start in (skip..n).step_by(CHUNK) {
        let end = (chunk_start + CHUNK).min(n);
        let chunk: Vec<SweepRecord> = pool.install(|| {
            (chunk_start..end)
                .into_par_iter()
                .map(|i| {
                    let (params, zeta) = spec.point(i);
                    eval_point(spec, params, zeta)
                })
                .collect()
        });
        for rec in &chunk {
            if rec.status == "ok" {
                computed_ok += 1;
            }
            writeln!(writer, "{}", render_row(rec, format)).map_err(|e| e.to_string())?;
        }
        writer.flush().map_err(|e| e.to_string())?;
    }
    writer.flush().map_err(|e| e.to_string())?;
    Ok(SweepSummary {
        total: n,
        ok: ok_from_resume + computed_ok,
        skipped_resume: skip,
        wall_time: started.elapsed(),
    })
}

fn build_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, String> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err("--jobs must be at least 1".into());
        }
        b = b.num_threads(j);
    }
    b.build().map_err(|e| e.to_string())
}

/// Reads back the complete rows of an interrupted run.
fn recover_completed_rows(
    path: &Path,
    format: OutputFormat,
    grid_len: usize,
) -> Result<Vec<String>, String> {
    let content =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut lines = content.split('\n');
    if format == OutputFormat::Csv {
        match lines.next() {
            Some(h) if h == render_csv_header() => {}
            _ => return Err("resume file does not carry the expected header".into()),
        }
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let complete = match format {
            OutputFormat::Csv => line.split(',').count() == crate::records::CSV_COLUMNS.len(),
            OutputFormat::Json => serde_json::from_str::<serde_json::Value>(line).is_ok(),
        };
        if complete {
            rows.push(line.to_string());
        } else {
            break; // partial trailing line from the interruption
        }
    }
    if rows.len() > grid_len {
        return Err("resume file has more rows than the sweep grid".into());
    }
    Ok(rows)
}
