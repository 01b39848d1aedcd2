//! Transition probability `P̃_D` and matrix element `X̃` for detectors on
//! circular geodesics about the origin, where proper time equals coordinate
//! time and there is no relative redshift.
//!
//! `P̃_D` is position-independent and identical to the static response at the
//! origin, so it dispatches to the same principal-value/comb families; the
//! tests assemble the circular expression independently from the quadrature
//! kernels and confirm agreement. `X̃` depends on the two radii only through
//! `α̃_X = sech(d(R_A,R_B)/ℓ)` and is even in the switching delay.

use crate::geometry::{self, AdsLength, RadialPosition};
use crate::math::FloatExt;
use crate::quadrature::{QuadResult, Tolerance};
use crate::static_detectors::{
    branch_segment_sum, cosh_numerator, p_identity_family, p_image_origin_family,
};
use crate::{BoundaryCondition, Complex64, Error, Result};

use core::f64::consts::PI;

/// Two detectors co-orbiting the origin with angular velocity `1/ℓ`, sharing
/// one gap and switching width; `t0_over_sigma` offsets the switchings.
#[derive(Clone, Copy, Debug)]
pub struct CircularPair {
    ell: AdsLength,
    zeta: BoundaryCondition,
    gap_omega_sigma: f64,
    position_a: RadialPosition,
    position_b: RadialPosition,
    t0_over_sigma: f64,
}

impl CircularPair {
    pub fn new(
        ell: AdsLength,
        zeta: BoundaryCondition,
        gap_omega_sigma: f64,
        position_a: RadialPosition,
        position_b: RadialPosition,
        t0_over_sigma: f64,
    ) -> Result<Self> {
        if !gap_omega_sigma.is_finite() {
            return Err(Error::InvalidParameter("detector gap must be finite"));
        }
        if !t0_over_sigma.is_finite() {
            return Err(Error::InvalidParameter("switching delay must be finite"));
        }
        Ok(CircularPair {
            ell,
            zeta,
            gap_omega_sigma,
            position_a,
            position_b,
            t0_over_sigma,
        })
    }

    #[inline]
    pub fn ell(&self) -> AdsLength {
        self.ell
    }
    #[inline]
    pub fn zeta(&self) -> BoundaryCondition {
        self.zeta
    }
    #[inline]
    pub fn gap_omega_sigma(&self) -> f64 {
        self.gap_omega_sigma
    }
    #[inline]
    pub fn t0_over_sigma(&self) -> f64 {
        self.t0_over_sigma
    }
    #[inline]
    pub fn position_a(&self) -> RadialPosition {
        self.position_a
    }
    #[inline]
    pub fn position_b(&self) -> RadialPosition {
        self.position_b
    }

    /// Proper separation of the orbits in units of σ.
    pub fn proper_separation(&self) -> f64 {
        geometry::proper_distance(self.ell, self.position_a, self.position_b)
    }
}

/// Derived scalars for the circular pair.
#[derive(Clone, Copy, Debug)]
pub struct CircularKernelParams {
    /// Gaussian damping `ã = ℓ²/4σ²`.
    pub a_tilde: f64,
    /// Real switching-overlap prefactor `K̃_X`.
    pub k_x: f64,
    /// Real cosh rate `Δ̃_T = ℓ t₀ / 2σ²`.
    pub delta_t: f64,
    /// Branch constant `α̃_X ∈ (0, 1]`, equal to `sech(d/ℓ)`.
    pub alpha_x: f64,
}

pub fn circular_kernel_params(pair: &CircularPair) -> CircularKernelParams {
    let l = pair.ell.value();
    let om = pair.gap_omega_sigma;
    let t0 = pair.t0_over_sigma;
    let ra = pair.position_a.r_over_ell();
    let rb = pair.position_b.r_over_ell();
    let ga = ra.hypot(1.0);
    let gb = rb.hypot(1.0);
    let alpha_x = 1.0 / (ga * gb - ra * rb);
    CircularKernelParams {
        a_tilde: l * l / 4.0,
        k_x: alpha_x.sqrt() * (-om * om - 0.25 * t0 * t0).exp(),
        delta_t: 0.5 * l * t0,
        alpha_x,
    }
}

/// Transition probability `P̃_D/λ̃²` of a detector on any circular geodesic.
///
/// Independent of the orbital radius; coincides with the static response at
/// the origin and shares its evaluator.
pub fn transition_probability_circular(
    gap_omega_sigma: f64,
    ell: AdsLength,
    zeta: BoundaryCondition,
    tol: &Tolerance,
) -> Result<QuadResult<f64>> {
    if !gap_omega_sigma.is_finite() {
        return Err(Error::InvalidParameter("detector gap must be finite"));
    }
    let l = ell.value();
    let a = l * l / 4.0;
    let beta = l * gap_omega_sigma;
    let identity = p_identity_family(a, beta, tol)?;
    if zeta == BoundaryCondition::Transparent {
        return Ok(identity);
    }
    let image = p_image_origin_family(a, beta, tol)?;
    Ok(QuadResult {
        value: identity.value - zeta.zeta() * image.value,
        abs_error_estimate: identity.abs_error_estimate + image.abs_error_estimate,
        evaluations: identity.evaluations + image.evaluations,
    })
}

/// Matrix element `X̃/λ̃²` of a circular pair.
///
/// Even in `t₀`; depends on the radii only through the proper separation.
/// Coincident orbits are rejected for the same reason as coincident static
/// detectors.
pub fn matrix_element_x_circular(
    pair: &CircularPair,
    tol: &Tolerance,
) -> Result<QuadResult<Complex64>> {
    let k = circular_kernel_params(pair);
    if k.alpha_x >= 1.0 - DEGENERATE_ALPHA_EPS {
        return Err(Error::DegenerateConfiguration(
            "matrix element X requires distinct orbital radii",
        ));
    }
    let num = cosh_numerator(k.a_tilde, Complex64::new(k.delta_t, 0.0));
    let growth = k.delta_t.abs();
    // identity branch carries -α̃, the image branch +α̃
    let ident = branch_segment_sum(&num, k.a_tilde, growth, -k.alpha_x, tol)?;
    let zeta = pair.zeta.zeta();
    let (image_value, image_err, image_evals) = if zeta == 0.0 {
        (Complex64::new(0.0, 0.0), 0.0, 0)
    } else {
        let s = branch_segment_sum(&num, k.a_tilde, growth, k.alpha_x, tol)?;
        (s.value, s.abs_error_estimate, s.evaluations)
    };
    let pref = -k.k_x * 0.5 / (2.0 * PI).sqrt();
    Ok(QuadResult {
        value: (ident.value - image_value * zeta) * pref,
        abs_error_estimate: pref.abs() * (ident.abs_error_estimate + image_err),
        evaluations: ident.evaluations + image_evals,
    })
}

const DEGENERATE_ALPHA_EPS: f64 = 1e-12;
