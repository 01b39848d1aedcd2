//! Numerical integration kernels: tanh-sinh (double-exponential) quadrature,
//! Gaussian-damped integration over `[0, ∞)`, and Cauchy principal values over
//! periodic pole lattices.
//!
//! Tanh-sinh maps `[a, b]` to the real line via `x = tanh((π/2) sinh t)`,
//! clustering nodes double-exponentially at the endpoints; integrable endpoint
//! singularities up to inverse square root need no special treatment. Levels
//! halve the step and reuse all previous evaluations.
//!
//! Principal values are taken window-by-window: each pole `y_n` gets a
//! symmetric window in which `u ↦ y_n ± u` pairs are combined so the `1/u`
//! parts cancel analytically before any node is evaluated, leaving a bounded
//! integrand. Windows are summed until the caller's Gaussian damping factor
//! truncates the lattice.

use crate::math::FloatExt;
use crate::{Error, Result};
use core::ops::{Add, Mul, Sub};
use num_complex::Complex64;

/// Convergence targets for an integration kernel.
#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    /// Relative tolerance on the integral value.
    pub rel: f64,
    /// Absolute floor below which refinement stops.
    pub abs: f64,
    /// Maximum number of tanh-sinh level halvings.
    pub max_levels: u32,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-10,
            abs: 1e-14,
            max_levels: 12,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64) -> Result<Self> {
        if rel.is_finite() && rel > 0.0 {
            Ok(Tolerance {
                rel,
                abs: (rel * 1e-4).max(1e-15),
                max_levels: 12,
            })
        } else {
            Err(Error::InvalidParameter("relative tolerance must be > 0"))
        }
    }

    fn target(&self, magnitude: f64) -> f64 {
        (self.rel * magnitude).max(self.abs)
    }
}

/// Value of an integral together with an error estimate and the number of
/// integrand evaluations spent.
#[derive(Clone, Copy, Debug)]
pub struct QuadResult<T> {
    pub value: T,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Scalar type a quadrature kernel can accumulate: `f64` or `Complex64`.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    const ZERO: Self;
    fn modulus(self) -> f64;
    fn is_finite(self) -> bool;
}

impl QuadValue for f64 {
    const ZERO: f64 = 0.0;
    #[inline]
    fn modulus(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl QuadValue for Complex64 {
    const ZERO: Complex64 = Complex64::new(0.0, 0.0);
    #[inline]
    fn modulus(self) -> f64 {
        // avoids num-complex's norm() so no extra trait bounds leak out
        self.re.hypot(self.im)
    }
    #[inline]
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

// Past this point in the tanh-sinh parameter the node is within ~1e-43 of the
// endpoint; with at worst inverse-square-root integrands the remaining tail
// is below 1e-18 of the panel scale.
const ARG_MAX: f64 = 50.0;

/// Tanh-sinh quadrature of `f` over `[a, b]`.
///
/// Tolerates integrable endpoint singularities no worse than
/// `(x-a)^{-1/2}`, `(b-x)^{-1/2}`; non-finite integrand values at the
/// endpoints are treated as zero (their weights are negligible).
pub fn tanh_sinh<T, F>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    tanh_sinh_sided(|x, _, _| f(x), a, b, tol)
}

/// Tanh-sinh quadrature where the integrand also receives its exact
/// distances to the two endpoints, `f(x, x - a, b - x)`.
///
/// Singular factors must be computed from the distance arguments: the node
/// abscissa `x` is rounded to the working precision, and a factor like
/// `1/sqrt(b - x)` recomputed from `x` loses half the mantissa near the
/// endpoint, capping the achievable accuracy at ~`sqrt(ulp)`.
pub(crate) fn tanh_sinh_sided<T, F>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: Fn(f64, f64, f64) -> T,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter("tanh_sinh endpoints must be finite"));
    }
    if a == b {
        return Ok(QuadResult {
            value: T::ZERO,
            abs_error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let half = 0.5 * (hi - lo);

    let len = hi - lo;
    let eval = |t: f64, evals: &mut usize| -> T {
        let arg = core::f64::consts::FRAC_PI_2 * t.sinh();
        let w = core::f64::consts::FRAC_PI_2 * t.cosh() / (arg.cosh() * arg.cosh());
        // distance from the nearer endpoint, computed without cancellation
        let delta = half * 2.0 / (1.0 + (2.0 * arg.abs()).exp());
        if delta == 0.0 || w == 0.0 {
            return T::ZERO;
        }
        *evals += 1;
        let v = if t >= 0.0 {
            f(hi - delta, len - delta, delta)
        } else {
            f(lo + delta, delta, len - delta)
        };
        if v.is_finite() {
            v * w
        } else {
            T::ZERO
        }
    };

    let mut evals = 0usize;
    let mut h = 1.0f64;
    // raw weighted sum over all nodes at the current spacing
    let mut sum = eval(0.0, &mut evals);
    let mut j = 1u64;
    loop {
        let t = j as f64 * h;
        if core::f64::consts::FRAC_PI_2 * t.sinh() > ARG_MAX {
            break;
        }
        sum = sum + eval(t, &mut evals) + eval(-t, &mut evals);
        j += 1;
    }
    let mut value = sum * (h * half);
    let mut best_value = value;
    let mut best_err = f64::INFINITY;

    for level in 1..=tol.max_levels {
        h *= 0.5;
        let mut j = 1u64;
        loop {
            let t = j as f64 * h; // odd multiples only
            if core::f64::consts::FRAC_PI_2 * t.sinh() > ARG_MAX {
                break;
            }
            sum = sum + eval(t, &mut evals) + eval(-t, &mut evals);
            j += 2;
        }
        let new_value = sum * (h * half);
        let err = (new_value - value).modulus();
        value = new_value;
        if err < best_err {
            best_err = err;
            best_value = value;
        }
        if level >= 2 && err <= tol.target(value.modulus()) {
            return Ok(QuadResult {
                value: value * sign,
                abs_error_estimate: err,
                evaluations: evals,
            });
        }
    }
    // the interval may still be fine for the caller's combined tolerance
    let _ = best_value;
    Err(Error::NonConvergence {
        term: "tanh_sinh",
        estimate: best_err,
        tolerance: tol.target(value.modulus()),
    })
}

/// Integrates `e^{-a y²} f(y)` over `[0, ∞)`.
///
/// `beta` is the fastest oscillation frequency present in `f` and only sizes
/// the integration panels. The upper cutoff is chosen from the Gaussian tail
/// bound `M e^{-a Y²}/(2 a Y)` with `M` the largest `|f|` encountered, and the
/// bound is folded into the reported error estimate.
pub fn gaussian_oscillatory<T, F>(
    a: f64,
    beta: f64,
    f: F,
    tol: &Tolerance,
) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidParameter(
            "gaussian_oscillatory requires damping a > 0",
        ));
    }
    let scale = 1.0 / a.sqrt();
    let panel = (2.0 * scale).min(core::f64::consts::TAU / (beta.abs() + 1.0 / scale));

    let peak = core::cell::Cell::new(0.0f64);
    let g = |y: f64| -> T {
        let v = f(y);
        let m = v.modulus();
        if m > peak.get() {
            peak.set(m);
        }
        v * (-a * y * y).exp()
    };

    let mut value = T::ZERO;
    let mut err = 0.0f64;
    let mut evals = 0usize;
    let mut k = 0u64;
    loop {
        let y0 = k as f64 * panel;
        let y1 = y0 + panel;
        let q = tanh_sinh(&g, y0, y1, tol)?;
        value = value + q.value;
        err += q.abs_error_estimate;
        evals += q.evaluations;
        k += 1;
        if y0 > 0.0 {
            let tail = peak.get().max(1e-300) * (-a * y1 * y1).exp() / (2.0 * a * y1);
            if tail < 0.5 * tol.target(value.modulus()) {
                err += tail;
                break;
            }
        }
        if k > 100_000 {
            return Err(Error::NonConvergence {
                term: "gaussian_oscillatory tail",
                estimate: (-a * y1 * y1).exp(),
                tolerance: tol.abs,
            });
        }
    }
    Ok(QuadResult {
        value,
        abs_error_estimate: err,
        evaluations: evals,
    })
}

/// Cauchy principal value of `∫₀^∞ f(y) / sin(π (y - offset)/period) dy`
/// where `f` carries Gaussian damping `e^{-a_damp y²}` (possibly among other
/// factors), so the pole lattice `y_n = offset + n·period` truncates.
///
/// Each pole is integrated over a symmetric window by pairing `y_n ± u`, which
/// cancels the simple pole analytically. If `offset == 0` the lattice point at
/// the domain boundary `y = 0` must be removable (`f(0) = 0`); this is not
/// checked and a violation surfaces as non-convergence.
pub fn pv_periodic_poles<T, F>(
    f: F,
    period: f64,
    offset: f64,
    a_damp: f64,
    tol: &Tolerance,
) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if !(period.is_finite() && period > 0.0) || !offset.is_finite() || offset < 0.0 || offset >= period
    {
        return Err(Error::PoleOnBoundary);
    }
    if !(a_damp.is_finite() && a_damp > 0.0) {
        return Err(Error::InvalidParameter(
            "pv_periodic_poles requires Gaussian damping a > 0",
        ));
    }

    let kernel = |y: f64| (core::f64::consts::PI * (y - offset) / period).sin();
    let n0: u64 = if offset > 0.0 { 0 } else { 1 };
    let first_pole = offset + n0 as f64 * period;
    // first window may be clipped so it does not cross y = 0
    let first_half = (0.5 * period).min(first_pole);

    let mut value = T::ZERO;
    let mut err = 0.0f64;
    let mut evals = 0usize;

    let mut push = |q: QuadResult<T>, value: &mut T, err: &mut f64| {
        *value = *value + q.value;
        *err += q.abs_error_estimate;
        evals += q.evaluations;
    };

    // segment before the first window
    let base_end = first_pole - first_half;
    if base_end > 0.0 {
        let q = tanh_sinh(|y| f(y) * (1.0 / kernel(y)), 0.0, base_end, tol)?;
        push(q, &mut value, &mut err);
    }

    let mut n = n0;
    loop {
        let pole = offset + n as f64 * period;
        let halfw = if n == n0 { first_half } else { 0.5 * period };
        // kernel(pole + u) = (-1)^n sin(pi u / period)
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let window = |u: f64| -> T {
            let k = (core::f64::consts::PI * u / period).sin();
            (f(pole + u) - f(pole - u)) * (sign / k)
        };
        let q = tanh_sinh(window, 0.0, halfw, tol)?;
        push(q, &mut value, &mut err);
        // gap between a clipped first window and the second window's start
        if n == n0 && halfw < 0.5 * period {
            let q = tanh_sinh(
                |y| f(y) * (1.0 / kernel(y)),
                pole + halfw,
                pole + period - 0.5 * period,
                tol,
            )?;
            push(q, &mut value, &mut err);
        }
        n += 1;
        let next_start = offset + n as f64 * period - 0.5 * period;
        let trunc = (-a_damp * next_start * next_start).exp();
        if trunc < 0.1 * tol.abs {
            err += trunc;
            break;
        }
        if n > n0 + 100_000 {
            return Err(Error::NonConvergence {
                term: "pv_periodic_poles lattice",
                estimate: trunc,
                tolerance: tol.abs,
            });
        }
    }
    Ok(QuadResult {
        value,
        abs_error_estimate: err,
        evaluations: evals,
    })
}

/// Principal value over one symmetric window,
/// `PV ∫_{pole-h}^{pole+h} f(y)/(y - pole) dy`.
pub fn pv_window<T, F>(f: F, pole: f64, half_width: f64, tol: &Tolerance) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(Error::InvalidParameter("pv_window requires half_width > 0"));
    }
    tanh_sinh(
        |u: f64| (f(pole + u) - f(pole - u)) * (1.0 / u),
        0.0,
        half_width,
        tol,
    )
}
