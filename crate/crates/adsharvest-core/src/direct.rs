//! Direct numerical evaluation of the defining correlator integrals: the
//! transition probability, the time-ordered matrix element `X`, and the
//! cross-correlator `C`, computed straight from the two-point function with
//! an explicit `iε` regulator and extrapolated to `ε → 0`.
//!
//! This route shares nothing with the segment/principal-value assemblies in
//! [`crate::static_detectors`] and [`crate::circular_detectors`]: switching
//! overlaps are integrated numerically, and the correlator is evaluated at
//! complex time `Δt - iε` on the branch fixed by analyticity in the lower
//! half-plane. Pointwise principal square roots would jump branches every
//! half-period; instead `cos T + α` is factorised as
//! `2 sin((Z-T)/2) sin((Z+T)/2)` with `Z = arccos(-α)` and each factor gets a
//! closed-form square root analytic in its half-plane, which reproduces the
//! alternating `+, +i, -, -i` branch pattern automatically.
//!
//! Deliberately slow and simple; used by tests and the `oracle-check`
//! command as the independent reference for the assembled evaluators.

use crate::flat::FlatPairConfig;
use crate::geometry::AdsLength;
use crate::harvest::PairConfig;
use crate::math::FloatExt;
use crate::quadrature::{tanh_sinh, QuadResult, Tolerance};
use crate::{BoundaryCondition, Complex64, Error, Result};

use alloc::vec::Vec;
use core::f64::consts::PI;

/// Which spacetime the evaluator works in.
#[derive(Clone, Copy, Debug)]
pub enum SpacetimeMode {
    AntiDeSitter { ell: AdsLength },
    Flat,
}

/// The `iε`-regulated two-point function of the field.
///
/// `epsilon` is dimensionless in units of `σ/ℓ` in AdS mode (it shifts the
/// dimensionless time `Δt/ℓ`) and in units of σ in flat mode.
#[derive(Clone, Copy, Debug)]
pub struct WightmanEvaluator {
    pub mode: SpacetimeMode,
    pub zeta: BoundaryCondition,
    pub epsilon: f64,
}

impl WightmanEvaluator {
    pub fn new(mode: SpacetimeMode, zeta: BoundaryCondition, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter("regulator epsilon must be > 0"));
        }
        Ok(WightmanEvaluator {
            mode,
            zeta,
            epsilon,
        })
    }
}

/// A point in the chart `(t, r, φ)`; `t` in units of σ, `radial` as `r/ℓ`
/// in AdS mode and as a σ-unit distance from the origin in flat mode.
#[derive(Clone, Copy, Debug)]
pub struct SpacetimePoint {
    pub t_over_sigma: f64,
    pub radial: f64,
    pub phi: f64,
}

/// Worldline families the oracle integrates along.
#[derive(Clone, Copy, Debug)]
pub enum Trajectory {
    /// Fixed radius; proper time runs slow by the redshift factor.
    Static { r_over_ell: f64 },
    /// Circular geodesic about the origin at angular velocity `1/ℓ`; proper
    /// time coincides with coordinate time.
    Circular { r_over_ell: f64 },
}

/// Ladder of regulators and quadrature controls for the `ε → 0` limit.
#[derive(Clone, Debug)]
pub struct BruteOptions {
    /// Decreasing regulator values, in units of `σ/ℓ` (AdS) or σ (flat).
    pub eps_ladder: Vec<f64>,
    /// Panel quadrature tolerance.
    pub tol: Tolerance,
}

impl Default for BruteOptions {
    fn default() -> Self {
        BruteOptions {
            // half-decade steps from 1e-2 down to 10^-4.5
            eps_ladder: alloc::vec![
                1e-2,
                3.1622776601683795e-3,
                1e-3,
                3.1622776601683795e-4,
                1e-4,
                3.1622776601683795e-5,
            ],
            tol: Tolerance {
                rel: 1e-9,
                abs: 1e-13,
                max_levels: 14,
            },
        }
    }
}

// ---------------------------------------------------------------------------
// branch-correct complex square roots

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `sqrt(sin w)`, analytic for `Im w < 0`, positive for real `w ∈ (0, π)`:
/// `sin w = (e^{iw}/2i)(1 - e^{-2iw})` and `|e^{-2iw}| < 1` keeps the second
/// factor in the right half-plane, where the principal root is analytic.
fn sqrt_sin_lower(w: Complex64) -> Complex64 {
    let principal = (Complex64::new(1.0, 0.0) - (-2.0 * I * w).exp()).sqrt();
    (I * w * 0.5).exp() * principal * Complex64::new(0.5, -0.5)
}

/// `sqrt(sin w)`, analytic for `Im w > 0`, positive for real `w ∈ (0, π)`.
fn sqrt_sin_upper(w: Complex64) -> Complex64 {
    let principal = (Complex64::new(1.0, 0.0) - (2.0 * I * w).exp()).sqrt();
    (-I * w * 0.5).exp() * principal * Complex64::new(0.5, 0.5)
}

/// `sqrt(cos T + α)` on the Wightman branch: analytic for `Im T < 0` and
/// positive on the first real interval where `cos T + α > 0`.
fn sqrt_cos_alpha(t: Complex64, alpha: f64) -> Complex64 {
    if alpha <= -1.0 {
        // cos T - 1 = -2 sin²(T/2)
        return I * core::f64::consts::SQRT_2 * (t * 0.5).sin();
    }
    if alpha >= 1.0 {
        // cos T + 1 = 2 cos²(T/2)
        return core::f64::consts::SQRT_2 * (t * 0.5).cos();
    }
    let z = Complex64::new((-alpha).acos(), 0.0);
    core::f64::consts::SQRT_2 * sqrt_sin_upper((z - t) * 0.5) * sqrt_sin_lower((z + t) * 0.5)
}

// ---------------------------------------------------------------------------
// the two-point function

/// The regulated two-point function `W(x, x')` between arbitrary points of
/// the chart, with the regulator applied as `Δt → Δt - iε`
/// (`Δt` the first argument's time minus the second's).
pub fn wightman(ev: &WightmanEvaluator, x: &SpacetimePoint, x_prime: &SpacetimePoint) -> Complex64 {
    let dt = x.t_over_sigma - x_prime.t_over_sigma;
    let dphi = x.phi - x_prime.phi;
    match ev.mode {
        SpacetimeMode::AntiDeSitter { ell } => {
            let l = ell.value();
            let (r1, r2) = (x.radial, x_prime.radial);
            let (g1, g2) = (r1.hypot(1.0), r2.hypot(1.0));
            let k = g1 * g2;
            let c = r1 * r2 * dphi.cos();
            let alpha_m = ((-c - 1.0) / k).clamp(-1.0, 1.0);
            let alpha_p = ((-c + 1.0) / k).clamp(-1.0, 1.0);
            let t = Complex64::new(dt / l, -ev.epsilon);
            let pref = 1.0 / (4.0 * PI * l * core::f64::consts::SQRT_2 * k.sqrt());
            let first = sqrt_cos_alpha(t, alpha_m).inv();
            if ev.zeta == BoundaryCondition::Transparent {
                first * pref
            } else {
                let image = sqrt_cos_alpha(t, alpha_p).inv();
                (first - image * ev.zeta.zeta()) * pref
            }
        }
        SpacetimeMode::Flat => {
            let dx2 = x.radial * x.radial + x_prime.radial * x_prime.radial
                - 2.0 * x.radial * x_prime.radial * dphi.cos();
            let dx = dx2.max(0.0).sqrt();
            let t = Complex64::new(dt, -ev.epsilon);
            // Δx² - T² factorised so each principal root stays off its cut
            let denom = (dx - t).sqrt() * (dx + t).sqrt();
            denom.inv() / (4.0 * PI)
        }
    }
}

// ---------------------------------------------------------------------------
// pair correlators along the supported worldline pairs

/// What kind of worldline pair a correlator describes; carries only plain
/// data so a fresh regulated correlator can be built per ladder member.
#[derive(Clone, Copy, Debug)]
enum CorrelatorKind {
    /// Static or co-orbiting pair in AdS (`r` in units of ℓ).
    Ads {
        ell: f64,
        zeta: f64,
        r_a: f64,
        r_b: f64,
        circular: bool,
    },
    /// Static pair in flat space at separation `d` (σ units); `d = 0` is the
    /// coincident worldline used by the flat transition probability.
    Flat { d: f64 },
}

/// Correlator between two worldline points as a function of the coordinate
/// time difference, `W(Δt)`, at fixed regulator.
#[derive(Clone, Copy, Debug)]
struct Correlator {
    kind: CorrelatorKind,
    /// `K` and `α^∓` of the AdS reduction `σ-like = K (cos T + α)`
    pref: f64,
    inv_time_scale: f64,
    alpha_minus: f64,
    alpha_plus: f64,
    zeta: f64,
    epsilon: f64,
}

impl Correlator {
    /// `eps_hat` in units of `σ/ℓ` (AdS) or σ (flat).
    fn new(kind: CorrelatorKind, eps_hat: f64) -> Self {
        match kind {
            CorrelatorKind::Ads {
                ell,
                zeta,
                r_a,
                r_b,
                circular,
            } => {
                let (ga, gb) = (r_a.hypot(1.0), r_b.hypot(1.0));
                let (k, am, ap) = if circular {
                    // co-rotation: Δφ = Δt/ℓ collapses the embedding interval
                    // onto (γγ' - rr') cos T - 1
                    let k = ga * gb - r_a * r_b;
                    (k, -1.0 / k, 1.0 / k)
                } else {
                    let k = ga * gb;
                    (k, (-r_a * r_b - 1.0) / k, (-r_a * r_b + 1.0) / k)
                };
                Correlator {
                    kind,
                    pref: 1.0 / (4.0 * PI * ell * core::f64::consts::SQRT_2 * k.sqrt()),
                    inv_time_scale: 1.0 / ell,
                    alpha_minus: am,
                    alpha_plus: ap,
                    zeta,
                    epsilon: eps_hat / ell,
                }
            }
            CorrelatorKind::Flat { .. } => Correlator {
                kind,
                pref: 1.0 / (4.0 * PI),
                inv_time_scale: 1.0,
                alpha_minus: 0.0,
                alpha_plus: 0.0,
                zeta: 0.0,
                epsilon: eps_hat,
            },
        }
    }

    fn eval(&self, dt: f64) -> Complex64 {
        match self.kind {
            CorrelatorKind::Ads { .. } => {
                let t = Complex64::new(dt * self.inv_time_scale, -self.epsilon);
                let first = sqrt_cos_alpha(t, self.alpha_minus).inv();
                let w = if self.zeta == 0.0 {
                    first
                } else {
                    first - sqrt_cos_alpha(t, self.alpha_plus).inv() * self.zeta
                };
                w * self.pref
            }
            CorrelatorKind::Flat { d } => {
                let t = Complex64::new(dt, -self.epsilon);
                ((d - t).sqrt() * (d + t).sqrt()).inv() * self.pref
            }
        }
    }

    /// Positive coordinate-time offsets at which the correlator is singular
    /// as ε → 0; integration panels are split there.
    fn singular_offsets(&self, s_max: f64) -> Vec<f64> {
        let mut pts = Vec::new();
        match self.kind {
            CorrelatorKind::Ads { .. } => {
                let scale = 1.0 / self.inv_time_scale;
                for &alpha in &[self.alpha_minus, self.alpha_plus] {
                    if alpha <= -1.0 {
                        let mut k = 1u32;
                        while 2.0 * PI * k as f64 * scale < s_max {
                            pts.push(2.0 * PI * k as f64 * scale);
                            k += 1;
                        }
                    } else if alpha >= 1.0 {
                        let mut k = 0u32;
                        while (2 * k + 1) as f64 * PI * scale < s_max {
                            pts.push((2 * k + 1) as f64 * PI * scale);
                            k += 1;
                        }
                    } else {
                        let z = (-alpha).acos();
                        let mut k = 0u32;
                        loop {
                            let lo = (2.0 * PI * k as f64 + z) * scale;
                            let hi = (2.0 * PI * (k + 1) as f64 - z) * scale;
                            let mut added = false;
                            if lo < s_max {
                                pts.push(lo);
                                added = true;
                            }
                            if hi < s_max {
                                pts.push(hi);
                                added = true;
                            }
                            if !added {
                                break;
                            }
                            k += 1;
                        }
                    }
                }
            }
            CorrelatorKind::Flat { d } => {
                if d > 0.0 && d < s_max {
                    pts.push(d);
                }
            }
        }
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        pts
    }
}

// ---------------------------------------------------------------------------
// integration and extrapolation helpers

/// Integrates `f` over `[s_lo, s_max]` split at the supplied offsets.
fn integrate_panels<F>(
    f: &F,
    cuts: &[f64],
    s_lo: f64,
    s_max: f64,
    tol: &Tolerance,
) -> Result<QuadResult<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    let mut bounds = Vec::with_capacity(cuts.len() + 2);
    bounds.push(s_lo);
    for &c in cuts {
        if c > s_lo + 1e-12 && c < s_max - 1e-12 {
            bounds.push(c);
        }
    }
    bounds.push(s_max);
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut evals = 0;
    for pair in bounds.windows(2) {
        let q = tanh_sinh(f, pair[0], pair[1], tol)?;
        value += q.value;
        err += q.abs_error_estimate;
        evals += q.evaluations;
    }
    Ok(QuadResult {
        value,
        abs_error_estimate: err,
        evaluations: evals,
    })
}

/// Least-squares fit of `v(ε) = Σ_{k<5} c_k (√(ε/ε₀))^k`, returning the
/// extrapolated `c₀`, the fit residual, and a drop-the-largest-ε refit
/// spread as the stability estimate.
///
/// Half-integer powers through ε² are required: the inverse-square-root
/// light-cone crossings contribute every half power, and truncating the
/// model at O(ε) leaves a bias far above the oracle's accuracy target.
fn extrapolate(eps: &[f64], vals: &[Complex64]) -> Result<(Complex64, f64)> {
    const NC: usize = 5;
    if eps.len() < NC + 1 {
        return Err(Error::InvalidParameter(
            "epsilon ladder needs at least six entries",
        ));
    }
    let fit = |eps: &[f64], vals: &[Complex64]| -> (Complex64, f64) {
        let e0 = eps[0];
        let mut m = [[0.0f64; NC + 2]; NC];
        for (i, &e) in eps.iter().enumerate() {
            let x = (e / e0).sqrt();
            let mut basis = [0.0; NC];
            let mut p = 1.0;
            for b in basis.iter_mut() {
                *b = p;
                p *= x;
            }
            for r in 0..NC {
                for c in 0..NC {
                    m[r][c] += basis[r] * basis[c];
                }
                m[r][NC] += basis[r] * vals[i].re;
                m[r][NC + 1] += basis[r] * vals[i].im;
            }
        }
        for col in 0..NC {
            let mut piv = col;
            for r in col + 1..NC {
                if m[r][col].abs() > m[piv][col].abs() {
                    piv = r;
                }
            }
            m.swap(col, piv);
            let d = m[col][col];
            for r in col + 1..NC {
                let fct = m[r][col] / d;
                for c in col..NC + 2 {
                    m[r][c] -= fct * m[col][c];
                }
            }
        }
        let mut sol = [[0.0f64; 2]; NC];
        for r in (0..NC).rev() {
            let mut re = m[r][NC];
            let mut im = m[r][NC + 1];
            for c in r + 1..NC {
                re -= m[r][c] * sol[c][0];
                im -= m[r][c] * sol[c][1];
            }
            sol[r][0] = re / m[r][r];
            sol[r][1] = im / m[r][r];
        }
        let mut residual = 0.0f64;
        for (i, &e) in eps.iter().enumerate() {
            let x = (e / e0).sqrt();
            let mut fit_v = Complex64::new(0.0, 0.0);
            let mut p = 1.0;
            for s in sol.iter() {
                fit_v += Complex64::new(s[0] * p, s[1] * p);
                p *= x;
            }
            residual = residual.max((fit_v - vals[i]).norm());
        }
        (Complex64::new(sol[0][0], sol[0][1]), residual)
    };

    let (v0, residual) = fit(eps, vals);
    let (v0_drop, _) = fit(&eps[1..], &vals[1..]);
    let spread = (v0 - v0_drop).norm();
    let scale: f64 = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if !v0.is_finite() || spread > 0.05 * scale + 1e-6 {
        return Err(Error::ExtrapolationUnstable { residual: spread });
    }
    Ok((v0, spread.max(residual)))
}

fn ladder_eval<F>(opts: &BruteOptions, eval_at: F) -> Result<(Complex64, f64, usize)>
where
    F: Fn(f64) -> Result<QuadResult<Complex64>>,
{
    let mut vals = Vec::with_capacity(opts.eps_ladder.len());
    let mut quad_err = 0.0f64;
    let mut evals = 0usize;
    for &eps in &opts.eps_ladder {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::InvalidParameter("epsilon ladder must be positive"));
        }
        let q = eval_at(eps)?;
        quad_err = quad_err.max(q.abs_error_estimate);
        evals += q.evaluations;
        vals.push(q.value);
    }
    let (v0, spread) = extrapolate(&opts.eps_ladder, &vals)?;
    Ok((v0, spread.max(quad_err), evals))
}

// ---------------------------------------------------------------------------
// transition probability

/// Transition probability per `λ̃²` by direct integration of the switching
/// autocorrelation against the regulated correlator, one ladder member at a
/// time, extrapolated to `ε → 0`.
///
/// The proper-time double integral is evaluated as an iterated integral with
/// the inner switching overlap `∫ χ(u)χ(u-s) du` done numerically.
pub fn transition_probability(
    gap_omega_sigma: f64,
    traj: &Trajectory,
    ev: &WightmanEvaluator,
    opts: &BruteOptions,
) -> Result<QuadResult<f64>> {
    let om = gap_omega_sigma;
    let (gamma, kind) = match (ev.mode, traj) {
        (SpacetimeMode::AntiDeSitter { ell }, Trajectory::Static { r_over_ell }) => (
            r_over_ell.hypot(1.0),
            CorrelatorKind::Ads {
                ell: ell.value(),
                zeta: ev.zeta.zeta(),
                r_a: *r_over_ell,
                r_b: *r_over_ell,
                circular: false,
            },
        ),
        (SpacetimeMode::AntiDeSitter { ell }, Trajectory::Circular { r_over_ell }) => (
            1.0,
            CorrelatorKind::Ads {
                ell: ell.value(),
                zeta: ev.zeta.zeta(),
                r_a: *r_over_ell,
                r_b: *r_over_ell,
                circular: true,
            },
        ),
        (SpacetimeMode::Flat, Trajectory::Static { .. }) => (1.0, CorrelatorKind::Flat { d: 0.0 }),
        (SpacetimeMode::Flat, Trajectory::Circular { .. }) => {
            return Err(Error::InvalidParameter(
                "circular trajectories are only defined in AdS mode",
            ));
        }
    };

    // P = 2 Re ∫₀^{S} ds U(s) e^{-iΩs} W(Δt = s/γ), s proper time
    let s_max = 14.0;
    let u_half = 7.5;
    let inner_tol = Tolerance {
        rel: 1e-10,
        abs: 1e-15,
        max_levels: 10,
    };

    let (v0, err, evals) = ladder_eval(opts, |eps| {
        let corr = Correlator::new(kind, eps);
        let cuts: Vec<f64> = corr
            .singular_offsets(s_max / gamma)
            .iter()
            .map(|dt| dt * gamma)
            .collect();
        let f = |s: f64| -> Complex64 {
            let overlap = tanh_sinh(
                |u: f64| (-0.5 * u * u).exp() * (-0.5 * (u - s) * (u - s)).exp(),
                0.5 * s - u_half,
                0.5 * s + u_half,
                &inner_tol,
            )
            .map(|q| q.value)
            .unwrap_or(0.0);
            let phase = Complex64::new((om * s).cos(), -(om * s).sin());
            corr.eval(s / gamma) * phase * overlap
        };
        // only the real part is physical and converges in ε; the imaginary
        // part of the one-sided integral grows like log(1/ε) and is dropped
        // before extrapolation
        integrate_panels(&f, &cuts, 0.0, s_max, &opts.tol).map(|q| QuadResult {
            value: Complex64::new(q.value.re, 0.0),
            ..q
        })
    })?;
    Ok(QuadResult {
        value: 2.0 * v0.re,
        abs_error_estimate: 2.0 * err,
        evaluations: evals,
    })
}

// ---------------------------------------------------------------------------
// matrix elements X and C

/// Switching geometry shared by the `X` and `C` integrals.
struct SwitchingGeometry {
    gamma_a: f64,
    gamma_b: f64,
    t0: f64,
    om: f64,
}

impl SwitchingGeometry {
    /// `Σ_orderings ∫ dw (later χ)(w) (earlier χ)(w-s) e^{-iΩ(γ_l w + γ_e (w-s))}`
    fn j_terms(&self, s: f64, tol: &Tolerance) -> Complex64 {
        let (ga, gb, t0, om) = (self.gamma_a, self.gamma_b, self.t0, self.om);
        let mut total = Complex64::new(0.0, 0.0);
        for term in 0..2 {
            // term 0: later = B at w, earlier = A at w - s; term 1: A ↔ B
            let (g_late, g_early, c_late, c_early) = if term == 0 {
                (gb, ga, 0.5 * t0, -0.5 * t0)
            } else {
                (ga, gb, -0.5 * t0, 0.5 * t0)
            };
            let (al, ae) = (0.5 * g_late * g_late, 0.5 * g_early * g_early);
            let centre = (al * c_late + ae * (s + c_early)) / (al + ae);
            let gap = s + c_early - c_late;
            if (al * ae / (al + ae)) * gap * gap > 46.0 {
                continue;
            }
            let radius = (46.0 / (al + ae)).sqrt();
            if let Ok(q) = tanh_sinh(
                |w: f64| {
                    let e = -al * (w - c_late) * (w - c_late)
                        - ae * (w - s - c_early) * (w - s - c_early);
                    let phase = -om * (g_late * w + g_early * (w - s));
                    let m = e.exp();
                    Complex64::new(m * phase.cos(), m * phase.sin())
                },
                centre - radius,
                centre + radius,
                tol,
            ) {
                total += q.value;
            }
        }
        total
    }

    fn s_cutoff(&self) -> f64 {
        let q = self.gamma_a * self.gamma_a * self.gamma_b * self.gamma_b
            / (self.gamma_a * self.gamma_a + self.gamma_b * self.gamma_b);
        self.t0.abs() + (92.0 / q).sqrt()
    }
}

fn switching_geometry(config: &PairConfig) -> (SwitchingGeometry, CorrelatorKind) {
    match config {
        PairConfig::Static(p) => {
            let ra = p.detector_a().position().r_over_ell();
            let rb = p.detector_b().position().r_over_ell();
            (
                SwitchingGeometry {
                    gamma_a: ra.hypot(1.0),
                    gamma_b: rb.hypot(1.0),
                    t0: p.t0_over_sigma(),
                    om: p.gap_omega_sigma(),
                },
                CorrelatorKind::Ads {
                    ell: p.ell().value(),
                    zeta: p.zeta().zeta(),
                    r_a: ra,
                    r_b: rb,
                    circular: false,
                },
            )
        }
        PairConfig::Circular(p) => (
            SwitchingGeometry {
                gamma_a: 1.0,
                gamma_b: 1.0,
                t0: p.t0_over_sigma(),
                om: p.gap_omega_sigma(),
            },
            CorrelatorKind::Ads {
                ell: p.ell().value(),
                zeta: p.zeta().zeta(),
                r_a: p.position_a().r_over_ell(),
                r_b: p.position_b().r_over_ell(),
                circular: true,
            },
        ),
    }
}

/// Matrix element `X` per `λ̃²` by direct integration: the time-ordered
/// double integral over both switchings, with the later point's field
/// operator first in the correlator, extrapolated to `ε → 0`.
pub fn matrix_element_x(config: &PairConfig, opts: &BruteOptions) -> Result<QuadResult<Complex64>> {
    let (geo, kind) = switching_geometry(config);
    matrix_element_x_inner(geo, kind, opts)
}

/// Flat-mode counterpart of [`matrix_element_x`] for a static pair at
/// separation `d`, checked against the closed form.
pub fn matrix_element_x_flat(
    cfg: &FlatPairConfig,
    opts: &BruteOptions,
) -> Result<QuadResult<Complex64>> {
    let geo = SwitchingGeometry {
        gamma_a: 1.0,
        gamma_b: 1.0,
        t0: 0.0,
        om: cfg.gap_omega_sigma,
    };
    matrix_element_x_inner(
        geo,
        CorrelatorKind::Flat {
            d: cfg.separation_d_over_sigma,
        },
        opts,
    )
}

fn matrix_element_x_inner(
    geo: SwitchingGeometry,
    kind: CorrelatorKind,
    opts: &BruteOptions,
) -> Result<QuadResult<Complex64>> {
    let s_max = geo.s_cutoff();
    let inner_tol = Tolerance {
        rel: 1e-9,
        abs: 1e-15,
        max_levels: 11,
    };
    let scale = geo.gamma_a * geo.gamma_b;
    let (v0, err, evals) = ladder_eval(opts, |eps| {
        let corr = Correlator::new(kind, eps);
        let cuts = corr.singular_offsets(s_max);
        // Δt = +s: the later argument's time minus the earlier's
        let f = |s: f64| -> Complex64 { corr.eval(s) * geo.j_terms(s, &inner_tol) };
        integrate_panels(&f, &cuts, 0.0, s_max, &opts.tol)
    })?;
    Ok(QuadResult {
        value: v0 * (-scale),
        abs_error_estimate: scale * err,
        evaluations: evals,
    })
}

/// Cross-correlator `C` per `λ̃²` (no time ordering), kept for the full
/// final-state bookkeeping; it does not enter the concurrence at this order.
pub fn matrix_element_c(config: &PairConfig, opts: &BruteOptions) -> Result<QuadResult<Complex64>> {
    let (geo, kind) = switching_geometry(config);
    matrix_element_c_inner(geo, kind, opts)
}

/// Flat-mode cross-correlator for a static pair.
pub fn matrix_element_c_flat(
    cfg: &FlatPairConfig,
    opts: &BruteOptions,
) -> Result<QuadResult<Complex64>> {
    let geo = SwitchingGeometry {
        gamma_a: 1.0,
        gamma_b: 1.0,
        t0: 0.0,
        om: cfg.gap_omega_sigma,
    };
    matrix_element_c_inner(
        geo,
        CorrelatorKind::Flat {
            d: cfg.separation_d_over_sigma,
        },
        opts,
    )
}

fn matrix_element_c_inner(
    geo: SwitchingGeometry,
    kind: CorrelatorKind,
    opts: &BruteOptions,
) -> Result<QuadResult<Complex64>> {
    let (ga, gb, t0, om) = (geo.gamma_a, geo.gamma_b, geo.t0, geo.om);
    let s_max = geo.s_cutoff();
    let inner_tol = Tolerance {
        rel: 1e-9,
        abs: 1e-15,
        max_levels: 11,
    };
    // C = γ_A γ_B ∫ ds W(Δt = s) ∫ dw χ̃_A(w+s) χ̃_B(w) e^{-iΩ(γ_A(w+s) - γ_B w)}
    let j = move |s: f64| -> Complex64 {
        let (aa, ab) = (0.5 * ga * ga, 0.5 * gb * gb);
        let (ca, cb) = (-0.5 * t0 - s, 0.5 * t0);
        let centre = (aa * ca + ab * cb) / (aa + ab);
        let gap = ca - cb;
        if (aa * ab / (aa + ab)) * gap * gap > 46.0 {
            return Complex64::new(0.0, 0.0);
        }
        let radius = (46.0 / (aa + ab)).sqrt();
        tanh_sinh(
            |w: f64| {
                let e = -aa * (w - ca) * (w - ca) - ab * (w - cb) * (w - cb);
                let phase = -om * (ga * (w + s) - gb * w);
                let m = e.exp();
                Complex64::new(m * phase.cos(), m * phase.sin())
            },
            centre - radius,
            centre + radius,
            &inner_tol,
        )
        .map(|q| q.value)
        .unwrap_or(Complex64::new(0.0, 0.0))
    };
    let (v0, err, evals) = ladder_eval(opts, |eps| {
        let corr = Correlator::new(kind, eps);
        let mut cuts: Vec<f64> = corr
            .singular_offsets(s_max)
            .iter()
            .flat_map(|&c| [c, -c])
            .collect();
        cuts.push(0.0);
        cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let f = |s: f64| -> Complex64 { corr.eval(s) * j(s) };
        integrate_panels(&f, &cuts, -s_max, s_max, &opts.tol)
    })?;
    Ok(QuadResult {
        value: v0 * (ga * gb),
        abs_error_estimate: ga * gb * err,
        evaluations: evals,
    })
}
