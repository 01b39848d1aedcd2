//! Transition probability `P_D` and pair matrix element `X` for detectors
//! held at fixed radii on a common ray, with Gaussian switching of width σ
//! and an optional switching delay `t₀` (positive `t₀` means detector A
//! couples first).
//!
//! Both quantities reduce to one-dimensional integrals of
//! `(damped numerator) / sqrt(cos y + α)` plus, for the `α = -1` identity
//! branch of `P_D`, a principal value over the poles of `sin(y/2)` and a
//! delta-comb series. The square root alternates through the branches
//! `+|·|, +i|·|, -|·|, -i|·|` on successive intervals between the lattice
//! zeros of `cos y + α`; each interval is integrated in local coordinates so
//! the inverse-square-root endpoints are placed exactly, and the `(-1)^n`
//! branch sign is applied per interval.
//!
//! Everything is expressed per `λ̃² = λ²σ` in σ units.

use crate::geometry::{self, AdsLength, RadialPosition, RedshiftFactor};
use crate::math::FloatExt;
use crate::quadrature::{pv_periodic_poles, QuadResult, Tolerance};
use crate::{BoundaryCondition, Complex64, Error, Result};

use core::f64::consts::PI;

/// One static detector: energy gap `Ωσ` (negative = initially excited) and
/// radial position; the redshift factor is derived from the position.
#[derive(Clone, Copy, Debug)]
pub struct StaticDetector {
    gap_omega_sigma: f64,
    position: RadialPosition,
    gamma: RedshiftFactor,
}

impl StaticDetector {
    pub fn new(gap_omega_sigma: f64, position: RadialPosition) -> Result<Self> {
        if !gap_omega_sigma.is_finite() {
            return Err(Error::InvalidParameter("detector gap must be finite"));
        }
        Ok(StaticDetector {
            gap_omega_sigma,
            position,
            gamma: geometry::redshift(position),
        })
    }

    #[inline]
    pub fn gap_omega_sigma(&self) -> f64 {
        self.gap_omega_sigma
    }

    #[inline]
    pub fn position(&self) -> RadialPosition {
        self.position
    }

    #[inline]
    pub fn gamma(&self) -> RedshiftFactor {
        self.gamma
    }
}

/// Two static detectors on a common ray sharing one gap and switching width.
///
/// `t0_over_sigma > 0` delays detector B: A's switching Gaussian peaks at
/// coordinate time `-t₀/2`, B's at `+t₀/2`.
#[derive(Clone, Copy, Debug)]
pub struct StaticPair {
    ell: AdsLength,
    zeta: BoundaryCondition,
    gap_omega_sigma: f64,
    position_a: RadialPosition,
    position_b: RadialPosition,
    t0_over_sigma: f64,
}

impl StaticPair {
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
        Ok(StaticPair {
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

    pub fn detector_a(&self) -> StaticDetector {
        StaticDetector::new(self.gap_omega_sigma, self.position_a).expect("validated")
    }

    pub fn detector_b(&self) -> StaticDetector {
        StaticDetector::new(self.gap_omega_sigma, self.position_b).expect("validated")
    }

    /// Proper separation of the detectors in units of σ.
    pub fn proper_separation(&self) -> f64 {
        geometry::proper_distance(self.ell, self.position_a, self.position_b)
    }
}

/// Kernel scalars for one detector's transition probability.
#[derive(Clone, Copy, Debug)]
pub struct DetectorKernel {
    /// Gaussian damping `a_D = γ²ℓ²/4σ²`.
    pub a: f64,
    /// Oscillation frequency `β_D = γℓΩ`.
    pub beta: f64,
    /// Image-term branch constant `α⁺_D = (1 - (R/ℓ)²)/γ²`.
    pub alpha_plus: f64,
}

/// Kernel scalars for the pair matrix element `X`.
#[derive(Clone, Copy, Debug)]
pub struct PairKernel {
    /// Switching-overlap prefactor, complex through the `Ω t₀` phase.
    pub k_x: Complex64,
    /// Gaussian damping `a_X`.
    pub a_x: f64,
    /// Real cosh rate `Δ_T` from the switching delay.
    pub delta_t: f64,
    /// Imaginary cosh rate `β_X` from the differential redshift.
    pub beta_x: f64,
    /// Branch constant of the identity term, in `[-1, 0)`.
    pub alpha_minus: f64,
    /// Branch constant of the image term, in `(-1, 1]`.
    pub alpha_plus: f64,
}

/// All derived scalars for a static pair.
#[derive(Clone, Copy, Debug)]
pub struct StaticKernelParams {
    pub detector_a: DetectorKernel,
    pub detector_b: DetectorKernel,
    pub pair: PairKernel,
}

/// Segment boundary `θ_n = max(0, arccos(α) + (2n-1)π)` of the branch
/// lattice for `1/sqrt(cos y + α)`.
pub fn theta_lattice(alpha: f64, n: u32) -> f64 {
    (acos_clamped(alpha) + (2.0 * n as f64 - 1.0) * PI).max(0.0)
}

fn detector_kernel(det: &StaticDetector, ell: AdsLength) -> DetectorKernel {
    let g = det.gamma().gamma();
    let l = ell.value();
    let r = det.position().r_over_ell();
    let g2 = r * r + 1.0;
    DetectorKernel {
        a: g2 * l * l / 4.0,
        beta: g * l * det.gap_omega_sigma(),
        alpha_plus: (1.0 - r * r) / g2,
    }
}

/// Derives every kernel scalar for the pair.
///
/// The identity-branch constant of a single detector,
/// `(-(R/ℓ)² - 1)/γ²`, is `-1` exactly; this is relied on throughout and
/// asserted in the tests.
pub fn static_kernel_params(pair: &StaticPair) -> StaticKernelParams {
    let det_a = pair.detector_a();
    let det_b = pair.detector_b();
    let ka = detector_kernel(&det_a, pair.ell);
    let kb = detector_kernel(&det_b, pair.ell);

    let l = pair.ell.value();
    let om = pair.gap_omega_sigma;
    let t0 = pair.t0_over_sigma;
    let ra = pair.position_a.r_over_ell();
    let rb = pair.position_b.r_over_ell();
    let ga = det_a.gamma().gamma();
    let gb = det_b.gamma().gamma();
    let gg = ga * ga + gb * gb;
    let q = ga * ga * gb * gb / gg;

    let k_mag = (ga * gb / gg).sqrt()
        * (-0.5 * om * om * (ga + gb) * (ga + gb) / gg - 0.5 * t0 * t0 * q).exp();
    let k_phase = 0.5 * om * t0 * (ga + gb) * (ga + gb) * (ga - gb) / gg;
    let k_x = Complex64::new(k_mag * k_phase.cos(), k_mag * k_phase.sin());

    StaticKernelParams {
        detector_a: ka,
        detector_b: kb,
        pair: PairKernel {
            k_x,
            a_x: q * l * l / 2.0,
            delta_t: -t0 * l * q,
            beta_x: ga * gb * (ga - gb) / gg * l * om,
            alpha_minus: (-ra * rb - 1.0) / (ga * gb),
            alpha_plus: (-ra * rb + 1.0) / (ga * gb),
        },
    }
}

/// Transition probability `P_D/λ̃²` of one static detector.
pub fn transition_probability_static(
    det: &StaticDetector,
    ell: AdsLength,
    zeta: BoundaryCondition,
    tol: &Tolerance,
) -> Result<QuadResult<f64>> {
    let k = detector_kernel(det, ell);
    let identity = p_identity_family(k.a, k.beta, tol)?;
    if zeta == BoundaryCondition::Transparent {
        return Ok(identity);
    }
    let image = if k.alpha_plus > 1.0 - ORIGIN_ALPHA_EPS {
        p_image_origin_family(k.a, k.beta, tol)?
    } else {
        let seg = branch_segment_sum(
            |y: f64| {
                let e = (-k.a * y * y).exp();
                Complex64::new(e * (k.beta * y).cos(), -e * (k.beta * y).sin())
            },
            k.a,
            0.0,
            k.alpha_plus,
            tol,
        )?;
        let c = 0.5 / (2.0 * PI).sqrt();
        QuadResult {
            value: c * seg.value.re,
            abs_error_estimate: c * seg.abs_error_estimate,
            evaluations: seg.evaluations,
        }
    };
    Ok(QuadResult {
        value: identity.value - zeta.zeta() * image.value,
        abs_error_estimate: identity.abs_error_estimate + image.abs_error_estimate,
        evaluations: identity.evaluations + image.evaluations,
    })
}

/// Matrix element `X/λ̃²` of a static pair.
///
/// Coincident detectors are rejected: the correlator's short-distance
/// singularity then sits on the integration boundary and `X` diverges
/// logarithmically (the flat-space analogue is `K₀(0)`), for any delay.
pub fn matrix_element_x_static(
    pair: &StaticPair,
    tol: &Tolerance,
) -> Result<QuadResult<Complex64>> {
    let params = static_kernel_params(pair);
    let k = params.pair;
    if k.alpha_minus <= -1.0 + DEGENERATE_ALPHA_EPS {
        return Err(Error::DegenerateConfiguration(
            "matrix element X requires distinct detector positions",
        ));
    }
    let num = cosh_numerator(k.a_x, Complex64::new(k.delta_t, k.beta_x));
    let growth = k.delta_t.abs();
    let ident = branch_segment_sum(&num, k.a_x, growth, k.alpha_minus, tol)?;
    let zeta = pair.zeta.zeta();
    let (image_value, image_err, image_evals) = if zeta == 0.0 {
        (Complex64::new(0.0, 0.0), 0.0, 0)
    } else {
        let s = branch_segment_sum(&num, k.a_x, growth, k.alpha_plus, tol)?;
        (s.value, s.abs_error_estimate, s.evaluations)
    };
    let pref = k.k_x * (-0.5 / PI.sqrt());
    Ok(QuadResult {
        value: pref * (ident.value - image_value * zeta),
        abs_error_estimate: pref.norm() * (ident.abs_error_estimate + image_err),
        evaluations: ident.evaluations + image_evals,
    })
}

/// `e^{-a y²} cosh(w y)` as a sum of two complex exponentials, which keeps
/// intermediate magnitudes bounded by the assembled value's scale.
pub(crate) fn cosh_numerator(a: f64, w: Complex64) -> impl Fn(f64) -> Complex64 {
    move |y: f64| {
        let d = -a * y * y;
        ((Complex64::new(d, 0.0) + w * y).exp() + (Complex64::new(d, 0.0) - w * y).exp()) * 0.5
    }
}

// detectors this close to the origin take the exact-origin branch; the
// neglected image-term splitting is O(Θ²) ~ 1e-12
const ORIGIN_ALPHA_EPS: f64 = 1e-12;
// below this distance from α = -1 the X integrand is treated as coincident
const DEGENERATE_ALPHA_EPS: f64 = 1e-12;

pub(crate) fn acos_clamped(x: f64) -> f64 {
    if x >= 1.0 {
        0.0
    } else if x <= -1.0 {
        PI
    } else {
        x.acos()
    }
}

/// Delta-comb `Σ_{n∈ℤ} (-1)ⁿ cos(2πnβ) e^{-4π²an²}`.
pub(crate) fn comb_cos(a: f64, beta: f64) -> f64 {
    let mut sum = 1.0;
    let mut n = 1u32;
    loop {
        let decay = (-4.0 * PI * PI * a * ((n * n) as f64)).exp();
        if decay < 1e-18 {
            break;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sum += 2.0 * sign * (2.0 * PI * n as f64 * beta).cos() * decay;
        n += 1;
    }
    sum
}

/// Delta-comb `Σ_{n∈ℤ} (-1)ⁿ sin((2n+1)πβ) e^{-aπ²(2n+1)²}`.
pub(crate) fn comb_sin(a: f64, beta: f64) -> f64 {
    let mut sum = 0.0;
    let mut n = 0u32;
    loop {
        let m = (2 * n + 1) as f64;
        let decay = (-a * PI * PI * m * m).exp();
        if decay < 1e-18 {
            break;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sum += 2.0 * sign * (m * PI * beta).sin() * decay;
        n += 1;
    }
    sum
}

/// Identity-branch family common to every detector:
/// `(1/4√π) [π Σ_comb - PV ∫ e^{-ay²} sin(βy)/sin(y/2)]`.
pub(crate) fn p_identity_family(a: f64, beta: f64, tol: &Tolerance) -> Result<QuadResult<f64>> {
    let pv = pv_periodic_poles(
        |y: f64| (-a * y * y).exp() * (beta * y).sin(),
        2.0 * PI,
        0.0,
        a,
        tol,
    )
    .map_err(|e| rename_nonconvergence(e, "P identity-branch principal value"))?;
    let c = 0.25 / PI.sqrt();
    Ok(QuadResult {
        value: c * (PI * comb_cos(a, beta) - pv.value),
        abs_error_estimate: c * pv.abs_error_estimate,
        evaluations: pv.evaluations,
    })
}

/// Image-branch family for a detector at the origin, where `α⁺ = 1` turns
/// the branch lattice into the poles of `cos(y/2)`:
/// `(1/4√π) [PV ∫ e^{-ay²} cos(βy)/cos(y/2) - π Σ_comb]`.
pub(crate) fn p_image_origin_family(
    a: f64,
    beta: f64,
    tol: &Tolerance,
) -> Result<QuadResult<f64>> {
    // 1/cos(y/2) = -1/sin((y-π)/2): same pole machinery on the offset lattice
    let pv = pv_periodic_poles(
        |y: f64| (-a * y * y).exp() * (beta * y).cos(),
        2.0 * PI,
        PI,
        a,
        tol,
    )
    .map_err(|e| rename_nonconvergence(e, "P image-branch principal value"))?;
    let c = 0.25 / PI.sqrt();
    Ok(QuadResult {
        value: c * (-pv.value - PI * comb_sin(a, beta)),
        abs_error_estimate: c * pv.abs_error_estimate,
        evaluations: pv.evaluations,
    })
}

fn rename_nonconvergence(e: Error, term: &'static str) -> Error {
    match e {
        Error::NonConvergence {
            estimate,
            tolerance,
            ..
        } => Error::NonConvergence {
            term,
            estimate,
            tolerance,
        },
        other => other,
    }
}

/// Alternating branch-segment sum
/// `Σ_n (-1)ⁿ ∫_{θ_n}^{θ_{n+1}} num(y) / sqrt(cos y + α) dy`
/// for `α ∈ (-1, 1)`, with the square root on the principal branch
/// (`sqrt` of a negative real is `+i sqrt(|·|)`).
///
/// `num` must include the Gaussian damping `e^{-a y²}`; `a` and `growth`
/// (the exponential growth rate of `num`, e.g. `|Δ_T|`) are used only to
/// truncate the lattice sum. Each interval between consecutive lattice zeros
/// of `cos y + α` is integrated in local coordinates with the factorization
/// `|cos y + α| = 2 sin(u/2) sin(v/2)` (`u`, `v` the distances to the
/// bracketing zeros), so the endpoint singularities sit exactly on the
/// integration boundary.
pub(crate) fn branch_segment_sum<N>(
    num: N,
    a: f64,
    growth: f64,
    alpha: f64,
    tol: &Tolerance,
) -> Result<QuadResult<Complex64>>
where
    N: Fn(f64) -> Complex64,
{
    branch_segment_sum_with_first_zero(num, a, growth, acos_clamped(-alpha), tol)
}

/// As [`branch_segment_sum`] with the first lattice zero of `cos y + α`
/// supplied explicitly (it equals `arccos(-α)`); exists so tests can
/// re-derive the lattice from the adjacent branch.
pub(crate) fn branch_segment_sum_with_first_zero<N>(
    num: N,
    a: f64,
    growth: f64,
    z: f64,
    tol: &Tolerance,
) -> Result<QuadResult<Complex64>>
where
    N: Fn(f64) -> Complex64,
{
    if !(z > 0.0 && z < PI) {
        return Err(Error::InvalidParameter(
            "branch segment sum requires α strictly inside (-1, 1)",
        ));
    }

    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0f64;
    let mut evals = 0usize;

    // one bracketed interval in local coordinates: y = y_left + x with
    // distances to the bracketing zeros u = off + x and v = (span - off) - x,
    // taken from the quadrature's exact endpoint offsets so the singular
    // factors do not lose precision to the rounding of x
    let mut piece = |y_left: f64, off: f64, span: f64, imag: bool, sign: f64| -> Result<()> {
        let len = span - off;
        if len <= 0.0 {
            return Ok(());
        }
        let q = crate::quadrature::tanh_sinh_sided(
            |x: f64, d_lo: f64, d_hi: f64| {
                let u = off + d_lo;
                let v = d_hi;
                let arg = 2.0 * (0.5 * u).sin() * (0.5 * v).sin();
                let n = num(y_left + x);
                let s = sign / arg.sqrt();
                if imag {
                    // 1/(i sqrt) = -i/sqrt
                    Complex64::new(n.im * s, -n.re * s)
                } else {
                    n * s
                }
            },
            0.0,
            len,
            tol,
        )
        .map_err(|e| rename_nonconvergence(e, "branch segment"))?;
        total += q.value;
        err += q.abs_error_estimate;
        evals += q.evaluations;
        Ok(())
    };

    let budget = (10.0f64 / tol.abs).ln();
    let mut n: u32 = 0;
    loop {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        if n == 0 {
            // clipped first interval [0, Z], bracketed by lattice zeros ±Z
            piece(0.0, z, 2.0 * z, false, sign)?;
        } else {
            // [2πn - Z, 2πn + Z]
            piece(2.0 * PI * n as f64 - z, 0.0, 2.0 * z, false, sign)?;
        }
        // [2πn + Z, 2π(n+1) - Z]
        piece(2.0 * PI * n as f64 + z, 0.0, 2.0 * PI - 2.0 * z, true, sign)?;

        let theta_next = 2.0 * PI * ((n + 1) as f64) - z;
        let envelope = -a * theta_next * theta_next + growth * theta_next;
        if envelope < -budget && theta_next > growth / a.max(1e-300) {
            err += envelope.exp();
            break;
        }
        n += 1;
        if n > 10_000 {
            return Err(Error::NonConvergence {
                term: "branch segment lattice",
                estimate: envelope.exp(),
                tolerance: tol.abs,
            });
        }
    }
    Ok(QuadResult {
        value: total,
        abs_error_estimate: err,
        evaluations: evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flat;
    use crate::math::FloatExt;

    fn ell(x: f64) -> AdsLength {
        AdsLength::new(x).unwrap()
    }

    fn at_origin(gap: f64) -> StaticDetector {
        StaticDetector::new(gap, RadialPosition::ORIGIN).unwrap()
    }

    fn at_distance(gap: f64, l: AdsLength, d: f64) -> StaticDetector {
        StaticDetector::new(gap, RadialPosition::from_proper_distance(l, d).unwrap()).unwrap()
    }

    fn pair(l: f64, zeta: BoundaryCondition, gap: f64, d_a: f64, d_b: f64, t0: f64) -> StaticPair {
        let l = ell(l);
        StaticPair::new(
            l,
            zeta,
            gap,
            RadialPosition::from_proper_distance(l, d_a).unwrap(),
            RadialPosition::from_proper_distance(l, d_b).unwrap(),
            t0,
        )
        .unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn kernel_params_at_common_origin() {
        let p = pair(2.0, BoundaryCondition::Dirichlet, 0.7, 0.0, 0.0, 0.0);
        let k = static_kernel_params(&p);
        assert_eq!(k.detector_a.a, 1.0); // γ²ℓ²/4 = 4/4
        assert_eq!(k.pair.beta_x, 0.0);
        assert_eq!(k.pair.delta_t, 0.0);
        assert_eq!(k.pair.alpha_plus, 1.0);
        assert_eq!(k.pair.alpha_minus, -1.0);
        assert_eq!(k.pair.a_x, 1.0); // q ℓ²/2 = (1/2)(4)/2 at γ = 1
    }

    #[test]
    fn identity_branch_constant_is_exactly_minus_one() {
        for r in [0.0, 0.3, 1.7, 42.0] {
            let g2 = r * r + 1.0;
            assert_eq!((-r * r - 1.0) / g2, -1.0);
        }
    }

    #[test]
    fn beta_x_antisymmetric_under_swap() {
        let p = pair(1.0, BoundaryCondition::Transparent, 1.3, 0.2, 1.4, 0.0);
        let q = pair(1.0, BoundaryCondition::Transparent, 1.3, 1.4, 0.2, 0.0);
        assert_eq!(
            static_kernel_params(&p).pair.beta_x,
            -static_kernel_params(&q).pair.beta_x
        );
    }

    #[test]
    fn gamma_from_proper_distance() {
        let l = ell(1.0);
        let d = at_distance(0.0, l, 1.0);
        assert!((d.gamma().gamma() - 1.0f64.cosh()).abs() < 1e-13);
    }

    // Golden values computed independently with 30-digit arithmetic from the
    // principal-value + delta-comb + branch-segment assembly.
    #[test]
    fn transition_probability_golden_values() {
        let cases: [(f64, f64, BoundaryCondition, f64, f64); 8] = [
            (1.0, 1.0, BoundaryCondition::Transparent, 0.0, 0.053667232710393),
            (1.0, 1.0, BoundaryCondition::Dirichlet, 0.0, 0.0019304557414558),
            (1.0, 1.0, BoundaryCondition::Neumann, 0.0, 0.10540400967933),
            (0.5, 0.01, BoundaryCondition::Dirichlet, 0.0, 0.0002324227097377),
            (5.0, 2.0, BoundaryCondition::Neumann, 0.0, 0.0028656182995911),
            (1.0, 1.0, BoundaryCondition::Dirichlet, 1.0, 0.006072943105828),
            (0.5, 2.0, BoundaryCondition::Dirichlet, 1.0, 1.6676660602245e-5),
            (5.0, 0.01, BoundaryCondition::Neumann, 1.0, 0.48860583184684),
        ];
        for (l, om, zeta, d, want) in cases {
            let det = at_distance(om, ell(l), d);
            let got = transition_probability_static(&det, ell(l), zeta, &tol()).unwrap();
            assert!(
                ((got.value - want) / want).abs() < 1e-10,
                "P(l={l}, om={om}, {zeta}, d={d}) = {:.15e}, want {want:.15e}",
                got.value
            );
        }
    }

    #[test]
    fn matrix_element_golden_values() {
        let cases: [(f64, f64, BoundaryCondition, f64, f64, f64, f64); 5] = [
            (1.0, 1.0, BoundaryCondition::Dirichlet, 1.0, 0.0, -0.0443595616391, 0.0876577437198),
            (1.0, 1.0, BoundaryCondition::Neumann, 1.0, 0.0, -0.252477323852, 0.118590670093),
            (1.0, 1.0, BoundaryCondition::Transparent, 1.0, 0.0, -0.148418442746, 0.103124206906),
            (1.0, 2.0, BoundaryCondition::Dirichlet, 2.5, 2.0, -0.0036002165147, 0.00411703716332),
            (1.0, 2.0, BoundaryCondition::Dirichlet, 2.5, -2.0, -1.50013379758e-5, -4.4747077357e-5),
        ];
        for (l, om, zeta, d_b, t0, re, im) in cases {
            let p = pair(l, zeta, om, 0.0, d_b, t0);
            let got = matrix_element_x_static(&p, &tol()).unwrap().value;
            let want = Complex64::new(re, im);
            assert!(
                (got - want).norm() / want.norm() < 1e-9,
                "X(l={l}, om={om}, {zeta}, d={d_b}, t0={t0}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn zeta_linearity_of_p_and_x() {
        for (l, om, d_b, t0) in [(0.7, 0.4, 0.9, 0.0), (2.5, 3.6, 4.0, 0.5)] {
            let l_ = ell(l);
            let det = at_distance(om, l_, d_b);
            let p = |zeta| {
                transition_probability_static(&det, l_, zeta, &tol())
                    .unwrap()
                    .value
            };
            let pd = p(BoundaryCondition::Dirichlet);
            let pt = p(BoundaryCondition::Transparent);
            let pn = p(BoundaryCondition::Neumann);
            assert!(
                (pt - 0.5 * (pd + pn)).abs() < 1e-10 * pt.abs().max(1e-3),
                "P zeta-linearity at l={l}, om={om}"
            );
            let x = |zeta| {
                matrix_element_x_static(&pair(l, zeta, om, 0.0, d_b, t0), &tol())
                    .unwrap()
                    .value
            };
            let xd = x(BoundaryCondition::Dirichlet);
            let xt = x(BoundaryCondition::Transparent);
            let xn = x(BoundaryCondition::Neumann);
            assert!(
                (xt - (xd + xn) * 0.5).norm() < 1e-10 * xt.norm().max(1e-6),
                "X zeta-linearity at l={l}, om={om}"
            );
        }
    }

    #[test]
    fn delay_gap_inversion_symmetry_is_exact() {
        // X(t₀, Ω) = X(-t₀, -Ω): holds bit-for-bit in this assembly
        for (l, om, d_b, t0) in [(1.0, 2.0, 2.5, 2.0), (0.6, 1.1, 0.8, -0.7), (3.0, 0.3, 1.5, 1.2)]
        {
            let x1 = matrix_element_x_static(
                &pair(l, BoundaryCondition::Dirichlet, om, 0.0, d_b, t0),
                &tol(),
            )
            .unwrap()
            .value;
            let x2 = matrix_element_x_static(
                &pair(l, BoundaryCondition::Dirichlet, -om, 0.0, d_b, -t0),
                &tol(),
            )
            .unwrap()
            .value;
            assert!(
                (x1 - x2).norm() <= 1e-14 * x1.norm(),
                "symmetry broken at l={l}: {x1} vs {x2}"
            );
        }
    }

    #[test]
    fn coincident_detectors_rejected() {
        let p = pair(1.0, BoundaryCondition::Dirichlet, 1.0, 0.7, 0.7, 0.0);
        assert!(matches!(
            matrix_element_x_static(&p, &tol()),
            Err(Error::DegenerateConfiguration(_))
        ));
        // a delay does not regulate the light-cone boundary divergence
        let p = pair(1.0, BoundaryCondition::Dirichlet, 1.0, 0.7, 0.7, 2.0);
        assert!(matrix_element_x_static(&p, &tol()).is_err());
    }

    #[test]
    fn flat_limit_of_p_at_origin() {
        let det = at_origin(0.01);
        let got = transition_probability_static(
            &det,
            ell(100.0),
            BoundaryCondition::Transparent,
            &tol(),
        )
        .unwrap()
        .value;
        let want = flat::flat_transition_probability(0.01);
        assert!(((got - want) / want).abs() < 1e-3, "got {got}, flat {want}");
    }

    #[test]
    fn flat_limit_errors_shrink_monotonically() {
        let want = flat::flat_transition_probability(0.01);
        let mut prev = f64::INFINITY;
        for l in [10.0, 20.0, 40.0, 80.0] {
            let det = at_origin(0.01);
            let got =
                transition_probability_static(&det, ell(l), BoundaryCondition::Dirichlet, &tol())
                    .unwrap()
                    .value;
            let err = (got - want).abs();
            assert!(err < prev, "flat-limit error grew at l={l}");
            prev = err;
        }
    }

    #[test]
    fn p_positive_on_grid() {
        for l in [0.5, 1.0, 5.0] {
            for om in [0.0, 1.0, 2.0] {
                for zeta in BoundaryCondition::ALL {
                    for d in [0.0, 1.0] {
                        let det = at_distance(om, ell(l), d);
                        let p = transition_probability_static(&det, ell(l), zeta, &tol())
                            .unwrap()
                            .value;
                        assert!(p > 0.0, "P <= 0 at l={l}, om={om}, {zeta}, d={d}: {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn segment_boundaries_rederived_on_adjacent_branch() {
        // rebuilding the lattice from π - arccos(α) instead of arccos(-α)
        // shifts every boundary by floating-point noise; the assembled sum
        // must not care
        let p = pair(1.3, BoundaryCondition::Neumann, 1.7, 0.0, 1.1, 0.4);
        let k = static_kernel_params(&p).pair;
        let num = cosh_numerator(k.a_x, Complex64::new(k.delta_t, k.beta_x));
        let direct =
            branch_segment_sum(&num, k.a_x, k.delta_t.abs(), k.alpha_minus, &tol()).unwrap();
        let z_alt = PI - k.alpha_minus.acos();
        let alt = branch_segment_sum_with_first_zero(&num, k.a_x, k.delta_t.abs(), z_alt, &tol())
            .unwrap();
        assert!(
            (direct.value - alt.value).norm()
                <= 10.0 * (direct.abs_error_estimate + alt.abs_error_estimate) + 1e-12,
            "branch bookkeeping differs: {} vs {}",
            direct.value,
            alt.value
        );
    }

    #[test]
    fn theta_lattice_clips_at_zero() {
        assert_eq!(theta_lattice(0.3, 0), 0.0);
        let th1 = theta_lattice(0.3, 1);
        assert!((th1 - (0.3f64.acos() + PI)).abs() < 1e-15);
        assert!(theta_lattice(0.3, 2) > th1);
    }
}
