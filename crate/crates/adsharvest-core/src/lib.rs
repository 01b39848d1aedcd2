//! Unruh-DeWitt detector response and entanglement harvesting in (2+1)-dimensional
//! anti-de Sitter space.
//!
//! The crate computes, for a massless conformally coupled scalar field satisfying
//! Dirichlet, transparent, or Neumann boundary conditions at spatial infinity:
//!
//! - the transition probability `P_D` of a single detector with Gaussian switching,
//!   held static at any radius or carried on a circular geodesic about the origin,
//! - the non-local matrix element `X` coupling a detector pair, and
//! - the concurrence harvested by the pair, `C = 2 max(0, |X| - sqrt(P_A P_B))`.
//!
//! All quantities are reported per `λ̃² = λ²σ`, with every input expressed as a
//! dimensionless ratio against the switching width `σ` (`ℓ/σ`, `Ωσ`, `d/σ`, `t₀/σ`).
//!
//! Three independent evaluation routes are provided and cross-checked in the test
//! suite: closed-form segment/principal-value assemblies ([`static_detectors`],
//! [`circular_detectors`]), flat-space closed forms and a curvature expansion
//! ([`flat`], [`perturbative`]), and direct iε-regulated integration of the defining
//! correlator integrals with ε→0 extrapolation ([`direct`]).
//!
//! The crate is `no_std` (with `alloc`); all floating-point math goes through
//! `libm` so results are bit-stable across platforms.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod circular_detectors;
pub mod direct;
pub mod flat;
pub mod geometry;
pub mod harvest;
mod math;
pub mod perturbative;
pub mod quadrature;
pub mod special;
pub mod static_detectors;

use core::fmt;

pub use num_complex::Complex64;

pub use circular_detectors::{
    circular_kernel_params, matrix_element_x_circular, transition_probability_circular,
    CircularKernelParams, CircularPair,
};
pub use geometry::{AdsLength, RadialPosition, RedshiftFactor};
pub use harvest::{concurrence, evaluate_pair, HarvestResult, PairConfig};
pub use quadrature::{QuadResult, Tolerance};
pub use static_detectors::{
    matrix_element_x_static, static_kernel_params, transition_probability_static,
    StaticDetector, StaticKernelParams, StaticPair,
};

/// Boundary condition satisfied by the field at spatial infinity.
///
/// Enters the two-point function as the affine parameter `ζ`: Dirichlet `ζ = +1`,
/// transparent `ζ = 0`, Neumann `ζ = -1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    Dirichlet,
    Transparent,
    Neumann,
}

impl BoundaryCondition {
    /// All three conditions, in the order `[Neumann, Transparent, Dirichlet]`.
    pub const ALL: [BoundaryCondition; 3] = [
        BoundaryCondition::Neumann,
        BoundaryCondition::Transparent,
        BoundaryCondition::Dirichlet,
    ];

    /// The coefficient `ζ` of the image term in the two-point function.
    #[inline]
    pub fn zeta(self) -> f64 {
        match self {
            BoundaryCondition::Dirichlet => 1.0,
            BoundaryCondition::Transparent => 0.0,
            BoundaryCondition::Neumann => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Transparent => "transparent",
            BoundaryCondition::Neumann => "neumann",
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Errors produced by evaluators and quadrature kernels.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A quadrature kernel exhausted its refinement budget; `estimate` is the
    /// best error estimate reached against the requested `tolerance`, and
    /// `term` names the sub-expression that failed to converge.
    NonConvergence {
        term: &'static str,
        estimate: f64,
        tolerance: f64,
    },
    /// Principal-value window construction failed (bad period/offset).
    PoleOnBoundary,
    /// A configuration on which the requested quantity diverges, e.g. the
    /// matrix element `X` for coincident detectors.
    DegenerateConfiguration(&'static str),
    /// An input violated a precondition.
    InvalidParameter(&'static str),
    /// The ε→0 extrapolation of a direct integral did not stabilise.
    ExtrapolationUnstable { residual: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonConvergence {
                term,
                estimate,
                tolerance,
            } => write!(
                f,
                "quadrature did not converge in `{term}`: error estimate {estimate:.3e} > tolerance {tolerance:.3e}"
            ),
            Error::PoleOnBoundary => write!(f, "principal-value window construction failed"),
            Error::DegenerateConfiguration(what) => write!(f, "degenerate configuration: {what}"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::ExtrapolationUnstable { residual } => write!(
                f,
                "ε→0 extrapolation unstable: fit residual {residual:.3e}"
            ),
        }
    }
}

#[cfg(test)]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
