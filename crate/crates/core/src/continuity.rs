//! Symplectically adjoint pairs and the relative-continuity estimates: the
//! interpolation bound ‖V‖_{μ_s} ≤ w^{s/2} v^{1-s/2} for adjoint pairs, and
//! the underlying three-line bound ‖XᵗQYᵗ‖ ≤ ‖XQY‖ᵗ ‖Q‖^{1-t}.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::linalg;
use crate::symplectic::{self, DominatingProduct, SymplecticForm};

/// Default s-grid covering the full range [0, 2] of the norm family.
pub const DEFAULT_S_GRID: [f64; 9] = [0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0];

/// Relative tolerance granted on every verified bound.
pub const VERIFICATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum Error {
    #[error("maps are not symplectically adjoint (relative residual {0:.3e})")]
    InvalidPair(f64),
    #[error("operator has spectrum at zero and no fractional powers")]
    SingularOperator,
    #[error(transparent)]
    Core(#[from] symplectic::Error),
}

/// A pair (V, W) with σ(Vx, y) = σ(x, Wy) for all x, y.
#[derive(Debug, Clone)]
pub struct AdjointPair {
    pub v: DMatrix<f64>,
    pub w: DMatrix<f64>,
}

impl AdjointPair {
    /// Validate adjointness: VᵀJ = JW to 1e-12 relative.
    pub fn new(v: DMatrix<f64>, w: DMatrix<f64>, form: &SymplecticForm) -> Result<Self, Error> {
        let residual = adjointness_residual(&v, &w, form);
        if residual > 1e-12 {
            return Err(Error::InvalidPair(residual));
        }
        Ok(AdjointPair { v, w })
    }

    /// Complete V to a pair with W = J⁻¹VᵀJ.
    pub fn from_map(v: DMatrix<f64>, form: &SymplecticForm) -> Result<Self, Error> {
        let w = form.adjoint_of(&v)?;
        Ok(AdjointPair { v, w })
    }
}

pub fn adjointness_residual(v: &DMatrix<f64>, w: &DMatrix<f64>, form: &SymplecticForm) -> f64 {
    let j = form.matrix();
    let lhs = v.transpose() * j;
    let rhs = j * w;
    let scale = linalg::frobenius(&lhs)
        .max(linalg::frobenius(&rhs))
        .max(1e-300);
    linalg::frobenius(&(lhs - rhs)) / scale
}

/// Operator norm of V as a map (R^{2n}, μ_s) → (R^{2n}, μ_s): the largest
/// singular value of L_sᵀ V L_s⁻ᵀ where G_s = L_s L_sᵀ.
pub fn mu_s_norm(v: &DMatrix<f64>, product: &DominatingProduct, s: f64) -> Result<f64, Error> {
    let gram_s = product.scaled_gram(s)?;
    linalg::gram_operator_norm(v, &gram_s).ok_or(Error::SingularOperator)
}

/// One grid point of a continuity verification.
#[derive(Debug, Clone, Copy)]
pub struct ContinuityRecord {
    pub s: f64,
    pub v_norm: f64,
    pub v_bound: f64,
    pub w_norm: f64,
    pub w_bound: f64,
}

impl ContinuityRecord {
    pub fn violation(&self) -> f64 {
        (self.v_norm - self.v_bound).max(self.w_norm - self.w_bound)
    }
}

/// Measured μ_s-norms of an adjoint pair against the interpolation bounds
/// derived from the base norms v = ‖V‖_μ and w = ‖W‖_μ.
#[derive(Debug, Clone)]
pub struct ContinuityReport {
    pub v: f64,
    pub w: f64,
    pub records: Vec<ContinuityRecord>,
    pub max_violation: f64,
}

/// Verify the interpolation bounds for one pair over an s-grid: for every s
/// in [0, 2], ‖V‖_{μ_s} ≤ w^{s/2} v^{1-s/2} and symmetrically for W.
pub fn verify_adjoint_continuity(
    pair: &AdjointPair,
    product: &DominatingProduct,
    s_grid: &[f64],
) -> Result<ContinuityReport, Error> {
    let residual = adjointness_residual(&pair.v, &pair.w, product.form());
    if residual > 1e-12 {
        return Err(Error::InvalidPair(residual));
    }
    let pol = product.polarizator()?;
    let tolerances = *product.tolerances();
    let v = linalg::gram_operator_norm(&pair.v, product.gram()).ok_or(Error::SingularOperator)?;
    let w = linalg::gram_operator_norm(&pair.w, product.gram()).ok_or(Error::SingularOperator)?;
    let mut records = Vec::with_capacity(s_grid.len());
    let mut max_violation = f64::NEG_INFINITY;
    for &s in s_grid {
        let gram_s = pol.scaled_gram(product.gram(), s, &tolerances)?;
        let v_norm = linalg::gram_operator_norm(&pair.v, &gram_s).ok_or(Error::SingularOperator)?;
        let w_norm = linalg::gram_operator_norm(&pair.w, &gram_s).ok_or(Error::SingularOperator)?;
        let record = ContinuityRecord {
            s,
            v_norm,
            v_bound: w.powf(s / 2.0) * v.powf(1.0 - s / 2.0),
            w_norm,
            w_bound: v.powf(s / 2.0) * w.powf(1.0 - s / 2.0),
        };
        max_violation = max_violation.max(record.violation());
        records.push(record);
    }
    Ok(ContinuityReport {
        v,
        w,
        records,
        max_violation,
    })
}

/// One grid point of an interpolation check.
#[derive(Debug, Clone, Copy)]
pub struct InterpolationRecord {
    pub tau: f64,
    pub measured: f64,
    pub bound: f64,
}

#[derive(Debug, Clone)]
pub struct InterpolationReport {
    pub t_norm: f64,
    pub q_norm: f64,
    pub records: Vec<InterpolationRecord>,
    pub max_violation: f64,
}

/// Three-line interpolation check: for X, Y symmetric nonnegative injective
/// and any Q, the norm of XᵗQYᵗ is bounded by ‖XQY‖ᵗ ‖Q‖^{1-t}.
///
/// X acts on the range side (m×m), Y on the domain side (k×k), Q is m×k.
pub fn check_interpolation(
    x: &DMatrix<f64>,
    y: &DMatrix<f64>,
    q: &DMatrix<f64>,
    tau_grid: &[f64],
) -> Result<InterpolationReport, Error> {
    let (x_values, x_vectors) = spectrum_of_nonnegative(x)?;
    let (y_values, y_vectors) = spectrum_of_nonnegative(y)?;
    let t_norm = linalg::operator_norm(&(x * q * y));
    let q_norm = linalg::operator_norm(q);
    let mut records = Vec::with_capacity(tau_grid.len());
    let mut max_violation = f64::NEG_INFINITY;
    for &tau in tau_grid {
        let x_tau = linalg::apply_spectrum(&x_values, &x_vectors, |v| v.powf(tau));
        let y_tau = linalg::apply_spectrum(&y_values, &y_vectors, |v| v.powf(tau));
        let measured = linalg::operator_norm(&(x_tau * q * y_tau));
        let bound = t_norm.powf(tau) * q_norm.powf(1.0 - tau);
        max_violation = max_violation.max(measured - bound);
        records.push(InterpolationRecord {
            tau,
            measured,
            bound,
        });
    }
    Ok(InterpolationReport {
        t_norm,
        q_norm,
        records,
        max_violation,
    })
}

fn spectrum_of_nonnegative(m: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>), Error> {
    let (values, vectors) = linalg::symmetric_eigen_sorted(m);
    let largest = values[values.len() - 1];
    if values[0] <= 1e-10 * largest.max(1.0) {
        return Err(Error::SingularOperator);
    }
    Ok((values, vectors))
}
