//! Curvature expansion of the static transition probability in powers of
//! `σ/ℓ`, valid deep in the near-flat regime. Odd orders are proportional to
//! the boundary parameter `ζ`; the detector's distance from the origin first
//! enters at order four.

use crate::flat::flat_transition_probability;
use crate::geometry::AdsLength;
use crate::math::FloatExt;
use crate::{BoundaryCondition, Error, Result};

/// Largest expansion order carried by the series.
pub const MAX_ORDER: u32 = 4;

/// By-policy validity floor: the asymptotic series is not evaluated below
/// `ℓ/σ = 10`.
pub const MIN_ELL_OVER_SIGMA: f64 = 10.0;

/// Partial sum of the `σ/ℓ` expansion of `P_D/λ̃²` through `(σ/ℓ)^order`.
///
/// `d_origin_over_sigma` is the detector's proper distance from the origin;
/// it only affects the order-4 term.
pub fn perturbative_transition_probability(
    gap_omega_sigma: f64,
    ell: AdsLength,
    zeta: BoundaryCondition,
    d_origin_over_sigma: f64,
    order: u32,
) -> Result<f64> {
    if order > MAX_ORDER {
        return Err(Error::InvalidParameter(
            "perturbative expansion carries terms through order 4 only",
        ));
    }
    if ell.value() < MIN_ELL_OVER_SIGMA {
        return Err(Error::InvalidParameter(
            "perturbative expansion requires ell/sigma >= 10",
        ));
    }
    if !(d_origin_over_sigma.is_finite() && d_origin_over_sigma >= 0.0) {
        return Err(Error::InvalidParameter("distance from origin must be >= 0"));
    }
    let om = gap_omega_sigma;
    let z = zeta.zeta();
    let eps = 1.0 / ell.value();
    let gauss = (-om * om).exp();
    let d2 = d_origin_over_sigma * d_origin_over_sigma;

    let mut p = flat_transition_probability(om);
    if order >= 1 {
        p -= z * gauss / 4.0 * eps;
    }
    if order >= 2 {
        p -= om * gauss / 24.0 * eps * eps;
    }
    if order >= 3 {
        p -= z * gauss * (1.0 - 2.0 * om * om) / 16.0 * eps.powi(3);
    }
    if order >= 4 {
        p += om * gauss / 2880.0 * (120.0 * d2 + 14.0 * om * om - 21.0) * eps.powi(4);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ell(x: f64) -> AdsLength {
        AdsLength::new(x).unwrap()
    }

    #[test]
    fn order_zero_is_flat() {
        for om in [-1.0, 0.0, 0.5, 2.0] {
            let p = perturbative_transition_probability(
                om,
                ell(20.0),
                BoundaryCondition::Dirichlet,
                0.0,
                0,
            )
            .unwrap();
            assert_eq!(p, flat_transition_probability(om));
        }
    }

    #[test]
    fn transparent_has_no_first_order_correction() {
        let p0 = perturbative_transition_probability(
            0.7,
            ell(15.0),
            BoundaryCondition::Transparent,
            0.0,
            0,
        )
        .unwrap();
        let p1 = perturbative_transition_probability(
            0.7,
            ell(15.0),
            BoundaryCondition::Transparent,
            0.0,
            1,
        )
        .unwrap();
        assert_eq!(p0, p1);
    }

    #[test]
    fn first_order_proportional_to_zeta() {
        // Dirichlet + Neumann at order 1 average back to the flat value
        let term = |zeta| {
            perturbative_transition_probability(0.3, ell(12.0), zeta, 0.0, 1).unwrap()
                - flat_transition_probability(0.3)
        };
        let d = term(BoundaryCondition::Dirichlet);
        let n = term(BoundaryCondition::Neumann);
        assert!((d + n).abs() < 1e-18);
        assert!(d < 0.0 && n > 0.0);
    }

    #[test]
    fn second_order_decreases_ground_state_response() {
        let p1 = perturbative_transition_probability(
            0.8,
            ell(10.0),
            BoundaryCondition::Transparent,
            0.0,
            1,
        )
        .unwrap();
        let p2 = perturbative_transition_probability(
            0.8,
            ell(10.0),
            BoundaryCondition::Transparent,
            0.0,
            2,
        )
        .unwrap();
        assert!(p2 < p1);
    }

    #[test]
    fn origin_distance_enters_only_at_order_four() {
        for order in 0..=3 {
            let near = perturbative_transition_probability(
                0.4,
                ell(25.0),
                BoundaryCondition::Neumann,
                0.0,
                order,
            )
            .unwrap();
            let far = perturbative_transition_probability(
                0.4,
                ell(25.0),
                BoundaryCondition::Neumann,
                3.0,
                order,
            )
            .unwrap();
            assert_eq!(near, far, "order {order} should not see d(0,R)");
        }
        let near = perturbative_transition_probability(
            0.4,
            ell(25.0),
            BoundaryCondition::Neumann,
            0.0,
            4,
        )
        .unwrap();
        let far = perturbative_transition_probability(
            0.4,
            ell(25.0),
            BoundaryCondition::Neumann,
            3.0,
            4,
        )
        .unwrap();
        assert!(near != far);
    }

    #[test]
    fn domain_enforcement() {
        assert!(perturbative_transition_probability(
            0.4,
            ell(5.0),
            BoundaryCondition::Dirichlet,
            0.0,
            2
        )
        .is_err());
        assert!(perturbative_transition_probability(
            0.4,
            ell(15.0),
            BoundaryCondition::Dirichlet,
            0.0,
            5
        )
        .is_err());
    }
}
