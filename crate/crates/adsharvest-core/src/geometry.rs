//! AdS₃ geometry: curvature radius, radial positions, proper distances, and
//! redshift factors for static worldlines.
//!
//! The metric in Schwarzschild-like coordinates is
//! `ds² = -(1 + r²/ℓ²) dt² + dr²/(1 + r²/ℓ²) + r² dφ²`.
//! Internally all radii are stored as `r/ℓ`, the switching width `σ` is the
//! unit of every other length, and the proper distance between two radii on a
//! common ray at equal coordinate time reduces to
//! `d(R₁, R₂) = ℓ (asinh(R₂/ℓ) - asinh(R₁/ℓ))`.

use crate::math::FloatExt;
use crate::{Error, Result};

/// AdS curvature radius in units of the switching width, `ℓ/σ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdsLength(f64);

impl AdsLength {
    pub fn new(ell_over_sigma: f64) -> Result<Self> {
        if ell_over_sigma.is_finite() && ell_over_sigma > 0.0 {
            Ok(AdsLength(ell_over_sigma))
        } else {
            Err(Error::InvalidParameter("AdS length must be finite and > 0"))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Radial coordinate of a detector, stored as the dimensionless `r/ℓ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialPosition(f64);

impl RadialPosition {
    pub const ORIGIN: RadialPosition = RadialPosition(0.0);

    pub fn from_r_over_ell(r_over_ell: f64) -> Result<Self> {
        if r_over_ell.is_finite() && r_over_ell >= 0.0 {
            Ok(RadialPosition(r_over_ell))
        } else {
            Err(Error::InvalidParameter(
                "radial position must be finite and >= 0",
            ))
        }
    }

    /// Position a proper distance `d/σ` from the origin: `r/ℓ = sinh(d/ℓ)`.
    pub fn from_proper_distance(ell: AdsLength, d_over_sigma: f64) -> Result<Self> {
        if !(d_over_sigma.is_finite() && d_over_sigma >= 0.0) {
            return Err(Error::InvalidParameter(
                "proper distance must be finite and >= 0",
            ));
        }
        Ok(RadialPosition((d_over_sigma / ell.value()).sinh()))
    }

    #[inline]
    pub fn r_over_ell(self) -> f64 {
        self.0
    }
}

/// Static-worldline redshift factor `γ = dτ/dt = sqrt((r/ℓ)² + 1) >= 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RedshiftFactor(f64);

impl RedshiftFactor {
    #[inline]
    pub fn gamma(self) -> f64 {
        self.0
    }
}

/// Proper distance (in units of σ) between two radii on a common ray at equal
/// coordinate time. Symmetric in its arguments.
pub fn proper_distance(ell: AdsLength, r1: RadialPosition, r2: RadialPosition) -> f64 {
    let (lo, hi) = if r1.0 <= r2.0 { (r1.0, r2.0) } else { (r2.0, r1.0) };
    ell.value() * (hi.asinh() - lo.asinh())
}

/// Inverse of [`proper_distance`] measured from the origin.
pub fn radius_from_proper_distance(ell: AdsLength, d_over_sigma: f64) -> Result<RadialPosition> {
    RadialPosition::from_proper_distance(ell, d_over_sigma)
}

/// Redshift factor of a static detector at radius `r`.
pub fn redshift(r: RadialPosition) -> RedshiftFactor {
    // hypot keeps gamma exact to one ulp even for large r/ell
    RedshiftFactor(r.0.hypot(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::FloatExt;
    use proptest::prelude::*;

    fn ell(x: f64) -> AdsLength {
        AdsLength::new(x).unwrap()
    }

    fn r(x: f64) -> RadialPosition {
        RadialPosition::from_r_over_ell(x).unwrap()
    }

    #[test]
    fn coincident_points_have_zero_distance() {
        assert_eq!(proper_distance(ell(1.0), r(0.0), r(0.0)), 0.0);
        assert_eq!(proper_distance(ell(3.0), r(1.25), r(1.25)), 0.0);
    }

    #[test]
    fn unit_distance_at_unit_ads_length() {
        // d(0, R) = asinh(R/l) * l; R/l = sinh(1) gives d = 1
        let d = proper_distance(ell(1.0), r(0.0), r(1.0f64.sinh()));
        assert!((d - 1.0).abs() < 1e-14, "d = {d}");
    }

    #[test]
    fn distance_matches_log_form() {
        // l/sigma = 2, R1 = 1 sigma, R2 = 3 sigma:
        // d = 2 ln[(3 + sqrt(13)) / (1 + sqrt(5))]
        let l = ell(2.0);
        let d = proper_distance(l, r(0.5), r(1.5));
        let expected = 2.0 * ((3.0 + 13.0f64.sqrt()) / (1.0 + 5.0f64.sqrt())).ln();
        assert!((d - expected).abs() < 1e-14, "d = {d}, expected {expected}");
    }

    #[test]
    fn radius_inversion_rejects_negative_distance() {
        assert!(radius_from_proper_distance(ell(1.0), -0.5).is_err());
    }

    #[test]
    fn redshift_values() {
        assert_eq!(redshift(r(0.0)).gamma(), 1.0);
        assert!((redshift(r(1.0)).gamma() - 2.0f64.sqrt()).abs() < 1e-15);
        // R/l = sinh(x) -> gamma = cosh(x)
        for x in [0.3, 1.0, 2.7] {
            let g = redshift(r(x.sinh())).gamma();
            assert!((g - x.cosh()).abs() < 1e-13 * x.cosh());
        }
    }

    #[test]
    fn ads_length_must_be_positive() {
        assert!(AdsLength::new(0.0).is_err());
        assert!(AdsLength::new(-1.0).is_err());
        assert!(AdsLength::new(f64::NAN).is_err());
        assert!(AdsLength::new(f64::INFINITY).is_err());
    }

    proptest! {
        #[test]
        fn distance_round_trips_through_radius(l in 0.1f64..50.0, d in 0.0f64..20.0) {
            let l = ell(l);
            let pos = radius_from_proper_distance(l, d).unwrap();
            let back = proper_distance(l, RadialPosition::ORIGIN, pos);
            prop_assert!((back - d).abs() <= 1e-12 * d.max(1.0));
        }

        #[test]
        fn distance_is_symmetric_and_telescopes(
            l in 0.1f64..20.0,
            a in 0.0f64..5.0,
            b in 0.0f64..5.0,
            c in 0.0f64..5.0,
        ) {
            let l = ell(l);
            let mut v = [a, b, c];
            v.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let (ra, rb, rc) = (r(v[0]), r(v[1]), r(v[2]));
            prop_assert_eq!(proper_distance(l, ra, rc), proper_distance(l, rc, ra));
            let lhs = proper_distance(l, ra, rc);
            let rhs = proper_distance(l, ra, rb) + proper_distance(l, rb, rc);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1.0));
        }

        #[test]
        fn redshift_identity(x in 0.0f64..1e6) {
            let g = redshift(r(x)).gamma();
            prop_assert!((g * g - x * x - 1.0).abs() <= 1e-12 * (x * x + 1.0));
        }
    }
}
