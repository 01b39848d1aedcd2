//! Closed forms for static detectors in (2+1)-dimensional Minkowski space:
//! the `ℓ → ∞` limit every AdS quantity must approach.

use crate::math::FloatExt;
use crate::special::{bessel_i0, bessel_k0, erf};
use crate::{Complex64, Error, Result};

use core::f64::consts::PI;

/// A flat-space static pair: common gap `Ωσ` and separation `d/σ > 0`.
#[derive(Clone, Copy, Debug)]
pub struct FlatPairConfig {
    pub gap_omega_sigma: f64,
    pub separation_d_over_sigma: f64,
}

impl FlatPairConfig {
    pub fn new(gap_omega_sigma: f64, separation_d_over_sigma: f64) -> Result<Self> {
        if !gap_omega_sigma.is_finite() {
            return Err(Error::InvalidParameter("gap must be finite"));
        }
        if !(separation_d_over_sigma.is_finite() && separation_d_over_sigma > 0.0) {
            return Err(Error::InvalidParameter(
                "flat-space separation must be > 0 (X diverges at d = 0)",
            ));
        }
        Ok(FlatPairConfig {
            gap_omega_sigma,
            separation_d_over_sigma,
        })
    }
}

/// Flat-space transition probability per `λ̃²`:
/// `(√π/4)(1 - erf(Ωσ))`.
pub fn flat_transition_probability(gap_omega_sigma: f64) -> f64 {
    0.25 * PI.sqrt() * (1.0 - erf(gap_omega_sigma))
}

/// Flat-space matrix element per `λ̃²`:
/// `-(1/4√π) e^{-d²/8σ² - σ²Ω²} (π I₀(d²/8σ²) - i K₀(d²/8σ²))`.
///
/// The real part is negative and the imaginary part positive for every
/// valid configuration.
pub fn flat_matrix_element_x(cfg: &FlatPairConfig) -> Result<Complex64> {
    let z = cfg.separation_d_over_sigma * cfg.separation_d_over_sigma / 8.0;
    let om = cfg.gap_omega_sigma;
    let envelope = (-z - om * om).exp() / (4.0 * PI.sqrt());
    Ok(Complex64::new(
        -envelope * PI * bessel_i0(z)?,
        envelope * bessel_k0(z)?,
    ))
}

/// Flat-space concurrence of the pair per `λ̃²`.
pub fn flat_concurrence(cfg: &FlatPairConfig) -> Result<f64> {
    let p = flat_transition_probability(cfg.gap_omega_sigma);
    let x = flat_matrix_element_x(cfg)?;
    Ok((2.0 * (x.norm() - p)).max(0.0))
}
