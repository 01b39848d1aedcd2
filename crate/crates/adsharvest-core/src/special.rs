//! Self-contained special functions: the error function and the modified
//! Bessel functions I₀, K₀.
//!
//! Implemented from scratch on top of `libm` primitives so results are
//! bit-stable: series in the small-argument regime, a Lentz continued
//! fraction for `erfc`, and a fixed-step double-exponential trapezoid of
//! `K₀(x) = ∫₀^∞ e^{-x cosh t} dt` for large `x`. Switch-over points sit
//! where both regimes agree to better than 1e-13 (asserted in the tests).

use crate::math::FloatExt;
use crate::{Error, Result};

const FRAC_2_SQRT_PI: f64 = 1.12837916709551257389615890312; // 2/sqrt(pi)
const EULER_GAMMA: f64 = 0.57721566490153286060651209008;

/// Error function, `erf(x) = (2/√π) ∫₀ˣ e^{-t²} dt`.
///
/// Absolute error below 1e-15 everywhere; exact odd symmetry by construction.
pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        return -erf(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x > 27.0 {
        // erfc underflows past ~27; avoids spinning the continued fraction
        return 1.0;
    }
    if x <= 2.0 {
        // Non-alternating rescaled Maclaurin series:
        // erf(x) = (2/sqrt(pi)) e^{-x^2} sum_{n>=0} 2^n x^{2n+1} / (2n+1)!!
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut n = 0u32;
        loop {
            n += 1;
            term *= 2.0 * x2 / (2 * n + 1) as f64;
            sum += term;
            if term < sum * 1e-17 || n > 200 {
                break;
            }
        }
        FRAC_2_SQRT_PI * (-x2).exp() * sum
    } else {
        1.0 - erfc_cf(x)
    }
}

/// Complementary error function for x >= 2 via the Legendre continued
/// fraction, evaluated with the modified Lentz algorithm:
/// `erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`.
fn erfc_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..400 {
        let a = 0.5 * k as f64;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    (-x * x).exp() / (core::f64::consts::PI.sqrt() * f)
}

/// Modified Bessel function of the first kind, `I₀(x)` for `x >= 0`.
///
/// The power series has all-positive terms, so it is stable for any argument
/// the caller can afford; relative error is a few ulp on `[0, 50]`.
pub fn bessel_i0(x: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::InvalidParameter("bessel_i0 requires x >= 0"));
    }
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= q / ((k * k) as f64);
        sum += term;
        if term < sum * 1e-17 || k > 1000 {
            break;
        }
    }
    Ok(sum)
}

/// Modified Bessel function of the second kind, `K₀(x)` for `x > 0`.
///
/// Small arguments use the log series around the origin; for `x >= 2` the
/// integral representation `∫₀^∞ e^{-x cosh t} dt` is summed with a fixed
/// double-exponential trapezoid step, which converges to machine precision.
pub fn bessel_k0(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::InvalidParameter(
            "bessel_k0 requires x > 0 (diverges logarithmically at 0)",
        ));
    }
    if x < 2.0 {
        // K0 = -(ln(x/2) + gamma) I0(x) + sum_{k>=1} (x^2/4)^k H_k / (k!)^2
        // For x < 2 the log factor is negative, so every term is positive.
        let q = x * x / 4.0;
        let mut term = 1.0;
        let mut harmonic = 0.0;
        let mut sum = 0.0;
        let mut k = 0u32;
        loop {
            k += 1;
            term *= q / ((k * k) as f64);
            harmonic += 1.0 / k as f64;
            let t = term * harmonic;
            sum += t;
            if t < (sum + 1.0) * 1e-18 || k > 400 {
                break;
            }
        }
        Ok(-((x / 2.0).ln() + EULER_GAMMA) * bessel_i0(x)? + sum)
    } else {
        // trapezoid over the even integrand e^{-x cosh t}; step 1/8 is far
        // inside the double-exponential convergence regime
        let h = 0.0625;
        let mut sum = 0.5 * (-x).exp();
        let mut j = 1u32;
        loop {
            let t = h * j as f64;
            let e = -x * t.cosh();
            if e < -745.0 {
                break;
            }
            sum += e.exp();
            j += 1;
        }
        Ok(h * sum)
    }
}
