//! Finite-dimensional symplectic spaces (R^{2n}, σ), scalar products that
//! dominate them, and the calculus built on the polarizator: polar factors,
//! the interpolating μ_s family, purification, and state classification.

mod form;
mod polar;
mod product;
mod random;

pub use form::{validate_symplectic, SymplecticForm};
pub use polar::Polarizator;
pub use product::{
    check_domination, saturation_defect, saturation_defect_at, DominatingProduct, DominationCheck,
    StateClass, StateTag,
};
pub use random::{random_instance, random_symplectic};

use thiserror::Error;

/// Default tolerances for the whole calculus. All of them are relative
/// except where noted; every report echoes the values in force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Nondegeneracy floor for σ: smallest singular value must exceed this
    /// times the largest.
    pub degeneracy: f64,
    /// One-sided slack on the ‖R‖ ≤ 1 domination test.
    pub domination: f64,
    /// Threshold for purity (‖R² + 1‖) and primarity (smallest |R|
    /// eigenvalue).
    pub classification: f64,
    /// Residual allowed in metric identities (μ-antisymmetry, commutation,
    /// frame consistency).
    pub metric: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            degeneracy: 1e-10,
            domination: 1e-9,
            classification: 1e-8,
            metric: 1e-10,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("symplectic form must act on an even dimension, got {0}")]
    OddDimension(usize),
    #[error("matrix is not antisymmetric (max |J + Jᵀ| entry = {0:.3e})")]
    NotAntisymmetric(f64),
    #[error("form is degenerate: smallest singular value {smallest:.3e} below threshold {threshold:.3e}")]
    Degenerate { smallest: f64, threshold: f64 },
    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("scalar product does not dominate the form (‖R‖ = {norm:.12})")]
    NotDominating { norm: f64 },
    #[error("eigendecomposition did not converge")]
    NumericalFailure,
    #[error("exponent must be nonnegative, got {0}")]
    NegativeExponent(f64),
    #[error("|R| has an eigenvalue {smallest:.3e} at or below the primarity threshold; fractional powers refused")]
    SingularResult { smallest: f64 },
    #[error("operation requires a primary product (smallest |R| eigenvalue = {smallest:.3e})")]
    NonPrimaryInput { smallest: f64 },
}
