use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Error, Polarizator, SymplecticForm, Tolerances};
use crate::linalg;

/// How a product relates to the pure/primary hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateTag {
    /// R is a μ-unitary anti-involution (a complex structure).
    Pure,
    /// R is injective but R² ≠ -1.
    PrimaryNotPure,
    /// |R| has spectrum at zero.
    NonPrimary,
}

impl StateTag {
    pub fn as_str(self) -> &'static str {
        match self {
            StateTag::Pure => "pure",
            StateTag::PrimaryNotPure => "primary-not-pure",
            StateTag::NonPrimary => "non-primary",
        }
    }
}

/// Classification verdict plus the raw witness numbers it was decided on.
#[derive(Debug, Clone, Copy)]
pub struct StateClass {
    pub tag: StateTag,
    /// Smallest eigenvalue of |R| in the μ-metric.
    pub min_abs_eigenvalue: f64,
    /// ‖R² + 1‖ in the μ-operator norm.
    pub anti_involution_defect: f64,
}

/// Outcome of the domination test ‖R‖ ≤ 1.
#[derive(Debug, Clone, Copy)]
pub struct DominationCheck {
    pub dominates: bool,
    /// 1 - ‖R‖; negative when domination fails.
    pub margin: f64,
}

/// A scalar product μ on R^{2n} that dominates a symplectic form, stored as
/// its Gram matrix G: μ(x, y) = xᵀ G y.
#[derive(Debug, Clone)]
pub struct DominatingProduct {
    gram: DMatrix<f64>,
    form: SymplecticForm,
    tolerances: Tolerances,
}

impl DominatingProduct {
    /// Validate G against the form: symmetric positive definite and
    /// dominating (‖R‖ ≤ 1 + domination tolerance).
    pub fn new(gram: DMatrix<f64>, form: SymplecticForm) -> Result<Self, Error> {
        Self::with_tolerances(gram, form, Tolerances::default())
    }

    pub fn with_tolerances(
        gram: DMatrix<f64>,
        form: SymplecticForm,
        tolerances: Tolerances,
    ) -> Result<Self, Error> {
        let check = check_domination(&gram, &form, &tolerances)?;
        if !check.dominates {
            return Err(Error::NotDominating {
                norm: 1.0 - check.margin,
            });
        }
        Ok(DominatingProduct {
            gram: linalg::symmetrize(&gram),
            form,
            tolerances,
        })
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn form(&self) -> &SymplecticForm {
        &self.form
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tolerances
    }

    /// μ(x, y)
    pub fn apply(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        linalg::gram_dot(&self.gram, x, y)
    }

    /// μ(x, x)
    pub fn norm_squared(&self, x: &DVector<f64>) -> f64 {
        self.apply(x, x)
    }

    /// Compute the polarizator with its polar factors and spectrum.
    pub fn polarizator(&self) -> Result<Polarizator, Error> {
        Polarizator::compute(&self.gram, self.form.matrix())
    }

    /// Gram matrix of μ_s(x, y) = μ(x, |R|^s y).
    pub fn scaled_gram(&self, s: f64) -> Result<DMatrix<f64>, Error> {
        let pol = self.polarizator()?;
        pol.scaled_gram(&self.gram, s, &self.tolerances)
    }

    /// μ_s packaged as a product on the same form.
    ///
    /// Domination of μ_s is only guaranteed for 0 ≤ s ≤ 1; outside that
    /// range construction may legitimately fail with `NotDominating`.
    pub fn scaled_product(&self, s: f64) -> Result<DominatingProduct, Error> {
        let gram = self.scaled_gram(s)?;
        DominatingProduct::with_tolerances(gram, self.form.clone(), self.tolerances)
    }

    /// The purification μ̃ = μ_1, the unique pure product attached to a
    /// primary μ. Idempotent up to tolerance.
    pub fn purify(&self) -> Result<DominatingProduct, Error> {
        let pol = self.polarizator()?;
        let smallest = pol.min_spectrum();
        if smallest <= self.tolerances.classification {
            return Err(Error::NonPrimaryInput { smallest });
        }
        let gram = pol.scaled_gram(&self.gram, 1.0, &self.tolerances)?;
        DominatingProduct::with_tolerances(gram, self.form.clone(), self.tolerances)
    }

    /// Classify as pure / primary-not-pure / non-primary. Needs only the
    /// |R|-spectrum, not the polar factors.
    pub fn classify(&self) -> Result<StateClass, Error> {
        let spectrum = super::polar::spectrum_of(&self.gram, self.form.matrix())?;
        Ok(classify_spectrum(&spectrum, &self.tolerances))
    }
}

/// Classification from the |R|-spectrum alone; purity is tested first and
/// the raw witness numbers are always reported.
pub(crate) fn classify_spectrum(spectrum: &[f64], tolerances: &Tolerances) -> StateClass {
    // R̂ is exactly skew, so ‖R² + 1‖ = max |1 - σᵢ²| over its singular
    // values.
    let anti_involution_defect = spectrum
        .iter()
        .map(|s| (1.0 - s * s).abs())
        .fold(0.0_f64, f64::max);
    let min_abs_eigenvalue = spectrum.last().copied().unwrap_or(0.0);
    let tag = if anti_involution_defect <= tolerances.classification {
        StateTag::Pure
    } else if min_abs_eigenvalue > tolerances.classification {
        StateTag::PrimaryNotPure
    } else {
        StateTag::NonPrimary
    };
    StateClass {
        tag,
        min_abs_eigenvalue,
        anti_involution_defect,
    }
}

/// Decide |σ(x, y)|² ≤ 4 μ(x, x) μ(y, y) through the equivalent operator
/// bound ‖R‖ ≤ 1, which is exact in finite dimension. Only the spectrum of
/// the skew representative is computed, not the polar factors.
pub fn check_domination(
    gram: &DMatrix<f64>,
    form: &SymplecticForm,
    tolerances: &Tolerances,
) -> Result<DominationCheck, Error> {
    if gram.nrows() != form.dim() || gram.ncols() != form.dim() {
        return Err(Error::DimensionMismatch {
            expected: form.dim(),
            got: gram.nrows(),
        });
    }
    let asym = linalg::frobenius(&(gram - gram.transpose()));
    if asym > tolerances.metric * linalg::frobenius(gram).max(1.0) {
        return Err(Error::NotPositiveDefinite);
    }
    let spectrum = super::polar::spectrum_of(gram, form.matrix())?;
    let norm = spectrum.first().copied().unwrap_or(0.0);
    Ok(DominationCheck {
        dominates: norm <= 1.0 + tolerances.domination,
        margin: 1.0 - norm,
    })
}

/// Worst saturation defect μ(φ, φ) - sup_ψ |σ(φ, ψ)|² / (4 μ(ψ, ψ)) over
/// `sample_count` seeded random directions φ.
///
/// The inner sup is computed exactly: in the μ-orthonormal frame it equals
/// ‖R̂ᵀ φ̂‖², so the defect is the quadratic form of 1 - R̂ R̂ᵀ. It vanishes
/// identically iff the product is pure, and is nonnegative by domination.
pub fn saturation_defect(product: &DominatingProduct, sample_count: usize) -> Result<f64, Error> {
    let pol = product.polarizator()?;
    let r_hat = pol.skew_representative();
    let dim = product.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a7);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..sample_count.max(1) {
        let phi_hat = DVector::from_fn(dim, |_, _| rng.random::<f64>() * 2.0 - 1.0);
        let defect = phi_hat.norm_squared() - (r_hat.transpose() * &phi_hat).norm_squared();
        worst = worst.max(defect);
    }
    Ok(worst)
}

/// Saturation defect for one explicit direction φ (in original coordinates).
pub fn saturation_defect_at(product: &DominatingProduct, phi: &DVector<f64>) -> Result<f64, Error> {
    let pol = product.polarizator()?;
    let phi_hat = pol.cholesky_factor().transpose() * phi;
    let r_hat = pol.skew_representative();
    Ok(phi_hat.norm_squared() - (r_hat.transpose() * &phi_hat).norm_squared())
}
