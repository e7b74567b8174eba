use nalgebra::{DMatrix, DVector};

use super::{Error, Tolerances};
use crate::linalg;

/// A nondegenerate antisymmetric bilinear form on R^{2n}, stored as its
/// matrix J: σ(x, y) = xᵀ J y.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    j: DMatrix<f64>,
}

impl SymplecticForm {
    /// Validate and wrap a candidate form matrix.
    ///
    /// Antisymmetry is required exactly as stored (no tolerance);
    /// nondegeneracy is decided against `tolerances.degeneracy` relative to
    /// the largest singular value.
    pub fn new(j: DMatrix<f64>, tolerances: &Tolerances) -> Result<Self, Error> {
        let n = j.nrows();
        if n != j.ncols() || n == 0 || !n.is_multiple_of(2) {
            return Err(Error::OddDimension(n.max(j.ncols())));
        }
        let mut worst = 0.0_f64;
        for i in 0..n {
            for k in 0..n {
                worst = worst.max((j[(i, k)] + j[(k, i)]).abs());
            }
        }
        if worst != 0.0 {
            return Err(Error::NotAntisymmetric(worst));
        }
        let sv = linalg::singular_values(&j);
        let threshold = tolerances.degeneracy * sv[0];
        let smallest = sv[sv.len() - 1];
        if smallest <= threshold {
            return Err(Error::Degenerate {
                smallest,
                threshold,
            });
        }
        Ok(SymplecticForm { j })
    }

    pub fn with_default_tolerances(j: DMatrix<f64>) -> Result<Self, Error> {
        Self::new(j, &Tolerances::default())
    }

    /// The canonical form [[0, I], [-I, 0]] on R^{2n}.
    pub fn canonical(n: usize) -> Self {
        let id = DMatrix::identity(n, n);
        let j = linalg::block2x2(&DMatrix::zeros(n, n), &id, &(-&id), &DMatrix::zeros(n, n));
        SymplecticForm { j }
    }

    pub fn dim(&self) -> usize {
        self.j.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.j
    }

    /// σ(x, y)
    pub fn apply(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(&(&self.j * y))
    }

    /// The symplectic adjoint W of V: σ(Vx, y) = σ(x, Wy), i.e. W = J⁻¹VᵀJ.
    pub fn adjoint_of(&self, v: &DMatrix<f64>) -> Result<DMatrix<f64>, Error> {
        if v.nrows() != self.dim() || v.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.nrows(),
            });
        }
        let rhs = v.transpose() * &self.j;
        self.j
            .clone()
            .lu()
            .solve(&rhs)
            .ok_or(Error::NumericalFailure)
    }

    /// Residual ‖TᵀJT - J‖_F / ‖J‖_F, zero iff T is a symplectomorphism.
    pub fn symplectomorphism_residual(&self, t: &DMatrix<f64>) -> f64 {
        let pushed = t.transpose() * &self.j * t;
        linalg::frobenius(&(&pushed - &self.j)) / linalg::frobenius(&self.j)
    }
}

/// Convenience wrapper matching the operation name used by the reports.
pub fn validate_symplectic(j: DMatrix<f64>) -> Result<SymplecticForm, Error> {
    SymplecticForm::with_default_tolerances(j)
}
