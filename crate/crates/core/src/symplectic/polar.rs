use nalgebra::{Complex, DMatrix, DVector};

use super::{Error, StateClass, Tolerances};
use crate::linalg;

/// The polarizator R of a dominating scalar product: the unique operator
/// with σ(x, y) = 2 μ(x, R y), together with its μ-polar factors.
///
/// All factors are computed in the μ-orthonormal frame: with G = L Lᵀ the
/// transformed operator R̂ = Lᵀ R L⁻ᵀ is Euclidean-skew. Its eigenstructure
/// (2×2 rotation blocks, realized through the Hermitian matrix iR̂) gives
/// |R̂|, the isometry factor and every fractional power |R̂|ˢ in one shared
/// spectral frame, so the commutation identities among them hold to
/// rounding. The factors are mapped back through L; μ-adjointness relations
/// are exact by construction up to the frame transport.
#[derive(Debug, Clone)]
pub struct Polarizator {
    r: DMatrix<f64>,
    u: DMatrix<f64>,
    abs_r: DMatrix<f64>,
    /// Eigenvalues of |R| in the μ-metric, descending.
    spectrum: Vec<f64>,
    /// Cholesky factor L of the Gram matrix.
    chol: DMatrix<f64>,
    /// Skew representative R̂ = Lᵀ R L⁻ᵀ.
    r_hat: DMatrix<f64>,
    /// Signed spectrum of iR̂ and its unitary frame.
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex<f64>>,
}

/// Cholesky factor of the Gram matrix together with the skew representative
/// R̂ = ½ L⁻¹ J L⁻ᵀ of the polarizator in the μ-orthonormal frame, exactly
/// antisymmetric as stored.
pub(crate) fn skew_representative_of(
    gram: &DMatrix<f64>,
    j: &DMatrix<f64>,
) -> Result<(DMatrix<f64>, DMatrix<f64>), Error> {
    let l = linalg::cholesky_factor(gram).ok_or(Error::NotPositiveDefinite)?;
    let half_j = j * 0.5;
    let linv_j = l
        .solve_lower_triangular(&half_j)
        .ok_or(Error::NumericalFailure)?;
    let r_hat_t = l
        .solve_lower_triangular(&linv_j.transpose())
        .ok_or(Error::NumericalFailure)?;
    let r_hat = linalg::antisymmetrize(&r_hat_t.transpose());
    Ok((l, r_hat))
}

/// Spectrum of |R| in the μ-metric (singular values of R̂, descending)
/// without computing any polar factors.
pub(crate) fn spectrum_of(gram: &DMatrix<f64>, j: &DMatrix<f64>) -> Result<Vec<f64>, Error> {
    let (_, r_hat) = skew_representative_of(gram, j)?;
    Ok(linalg::singular_values(&r_hat).iter().copied().collect())
}

impl Polarizator {
    /// Build from a Gram matrix and form matrix that are already validated:
    /// `gram` symmetric positive definite, `j` antisymmetric, same size.
    pub(crate) fn compute(gram: &DMatrix<f64>, j: &DMatrix<f64>) -> Result<Polarizator, Error> {
        let (l, r_hat) = skew_representative_of(gram, j)?;
        let (eigenvalues, eigenvectors) = linalg::skew_spectral(&r_hat);
        if eigenvalues.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalFailure);
        }
        let mut spectrum: Vec<f64> = eigenvalues.iter().map(|v| v.abs()).collect();
        spectrum.sort_by(|a, b| b.total_cmp(a));

        // kernel directions get a vanishing isometry factor (partial isometry)
        let zero_cut = f64::EPSILON * spectrum.first().copied().unwrap_or(0.0);
        let abs_hat = linalg::skew_spectral_function(&eigenvalues, &eigenvectors, |v| {
            Complex::new(v.abs(), 0.0)
        });
        let u_hat = linalg::skew_spectral_function(&eigenvalues, &eigenvectors, |v| {
            if v.abs() <= zero_cut {
                Complex::new(0.0, 0.0)
            } else {
                Complex::new(0.0, -v.signum())
            }
        });

        let r = linalg::unwhiten(&l, &r_hat);
        let abs_r = linalg::unwhiten(&l, &linalg::symmetrize(&abs_hat));
        let u = linalg::unwhiten(&l, &u_hat);

        Ok(Polarizator {
            r,
            u,
            abs_r,
            spectrum,
            chol: l,
            r_hat,
            eigenvalues,
            eigenvectors,
        })
    }

    /// R in the original coordinates.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.r
    }

    /// The μ-isometry factor U of R = U |R|.
    pub fn isometry(&self) -> &DMatrix<f64> {
        &self.u
    }

    /// The μ-symmetric nonnegative factor |R|.
    pub fn absolute(&self) -> &DMatrix<f64> {
        &self.abs_r
    }

    /// Eigenvalues of |R| in the μ-metric, sorted descending.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// ‖R‖ in the μ-operator norm.
    pub fn mu_norm(&self) -> f64 {
        self.spectrum.first().copied().unwrap_or(0.0)
    }

    /// Smallest eigenvalue of |R|; zero signals a non-primary product.
    pub fn min_spectrum(&self) -> f64 {
        self.spectrum.last().copied().unwrap_or(0.0)
    }

    /// Cholesky factor L of the Gram matrix (G = L Lᵀ).
    pub fn cholesky_factor(&self) -> &DMatrix<f64> {
        &self.chol
    }

    /// The skew representative R̂ = Lᵀ R L⁻ᵀ.
    pub fn skew_representative(&self) -> &DMatrix<f64> {
        &self.r_hat
    }

    /// |R|^s in the original coordinates.
    pub fn absolute_power(&self, s: f64, tolerances: &Tolerances) -> Result<DMatrix<f64>, Error> {
        let powered = self.powered_hat(s, tolerances)?;
        Ok(linalg::unwhiten(&self.chol, &powered))
    }

    /// Gram matrix of μ_s(x, y) = μ(x, |R|^s y): G_s = L Z Σˢ Zᵀ Lᵀ.
    ///
    /// `s = 0` returns the original Gram matrix exactly. A spectrum value at
    /// or below the primarity threshold makes fractional powers meaningless
    /// and is reported as [`Error::SingularResult`], never clamped.
    pub fn scaled_gram(
        &self,
        gram: &DMatrix<f64>,
        s: f64,
        tolerances: &Tolerances,
    ) -> Result<DMatrix<f64>, Error> {
        if s == 0.0 {
            return Ok(gram.clone());
        }
        let powered = self.powered_hat(s, tolerances)?;
        let lz = &self.chol * &powered;
        Ok(linalg::symmetrize(&(lz * self.chol.transpose())))
    }

    fn powered_hat(&self, s: f64, tolerances: &Tolerances) -> Result<DMatrix<f64>, Error> {
        if s < 0.0 {
            return Err(Error::NegativeExponent(s));
        }
        let smallest = self.min_spectrum();
        if s != 0.0 && smallest <= tolerances.classification {
            return Err(Error::SingularResult { smallest });
        }
        Ok(linalg::symmetrize(&linalg::skew_spectral_function(
            &self.eigenvalues,
            &self.eigenvectors,
            |v| Complex::new(v.abs().powf(s), 0.0),
        )))
    }

    /// Classify the product behind this polarizator.
    ///
    /// Purity (R a μ-unitary anti-involution) is tested first; the witness
    /// numbers are always reported so borderline cases stay auditable.
    pub fn classify(&self, tolerances: &Tolerances) -> StateClass {
        super::product::classify_spectrum(&self.spectrum, tolerances)
    }

    /// Residual of the defining relation G R + Rᵀ G = 0, relative to ‖G R‖.
    pub fn antisymmetry_residual(&self, gram: &DMatrix<f64>) -> f64 {
        let gr = gram * &self.r;
        linalg::frobenius(&(&gr + gr.transpose())) / linalg::frobenius(&gr).max(f64::MIN_POSITIVE)
    }

    /// Residual of [f(|R|), U] = 0 for f drawn from a small family of
    /// continuous functions, relative to ‖U‖‖f(|R|)‖. Measured in the
    /// μ-orthonormal frame, where both factors live as plain matrices.
    pub fn commutation_residual(&self) -> f64 {
        let functions: [fn(f64) -> f64; 3] = [|x| x, |x| x.sqrt(), |x| 1.0 / (1.0 + x)];
        let zero_cut = f64::EPSILON * self.mu_norm();
        let u_hat = linalg::skew_spectral_function(&self.eigenvalues, &self.eigenvectors, |v| {
            if v.abs() <= zero_cut {
                Complex::new(0.0, 0.0)
            } else {
                Complex::new(0.0, -v.signum())
            }
        });
        let mut worst = 0.0_f64;
        for f in functions {
            let f_abs =
                linalg::skew_spectral_function(&self.eigenvalues, &self.eigenvectors, |v| {
                    Complex::new(f(v.abs()), 0.0)
                });
            let comm = &f_abs * &u_hat - &u_hat * &f_abs;
            let scale = linalg::frobenius(&f_abs) * linalg::frobenius(&u_hat);
            if scale > 0.0 {
                worst = worst.max(linalg::frobenius(&comm) / scale);
            }
        }
        worst
    }
}
