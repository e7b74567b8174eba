//! Gaussian (quasifree) state dictionary over a dominating scalar product:
//! Weyl expectation values, recovery of the covariance from mixed
//! derivatives, the one-particle Hilbert-space structure of a pure product,
//! symplectic complements, and finite-dimensional local-structure probes.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::kg::LatticeModel;
use crate::linalg;
use crate::symplectic::{self, DominatingProduct, StateTag};

#[derive(Debug, Error)]
pub enum Error {
    #[error("one-particle structure requires a pure product, got {0}")]
    NotPure(&'static str),
    #[error("finite-difference step {0} outside [1e-5, 1e-2]")]
    StepOutOfRange(f64),
    #[error("region is empty")]
    EmptyRegion,
    #[error("region covers every site; the causal complement is empty")]
    FullRegion,
    #[error("region site {site} out of range for {sites} sites")]
    RegionOutOfRange { site: usize, sites: usize },
    #[error(transparent)]
    Core(#[from] symplectic::Error),
}

/// A quasifree state, determined by its one-particle covariance μ.
#[derive(Debug, Clone)]
pub struct QuasifreeState {
    product: DominatingProduct,
}

impl QuasifreeState {
    pub fn new(product: DominatingProduct) -> Self {
        QuasifreeState { product }
    }

    pub fn product(&self) -> &DominatingProduct {
        &self.product
    }

    /// ω(W(φ)) = exp(-μ(φ, φ)/2) ∈ (0, 1].
    pub fn weyl_value(&self, phi: &DVector<f64>) -> f64 {
        (-0.5 * self.product.norm_squared(phi)).exp()
    }

    /// ω(W(tφ) W(τψ)) = exp(-i t τ σ(φ, ψ)/2) · exp(-μ(tφ+τψ, tφ+τψ)/2),
    /// the exponentiated CCR composed with the Gaussian value.
    pub fn weyl_product_value(
        &self,
        phi: &DVector<f64>,
        psi: &DVector<f64>,
        t: f64,
        tau: f64,
    ) -> Complex64 {
        let sigma = self.product.form().apply(phi, psi);
        let combined = phi * t + psi * tau;
        let gauss = (-0.5 * self.product.norm_squared(&combined)).exp();
        Complex64::from_polar(gauss, -0.5 * t * tau * sigma)
    }

    /// Central second mixed finite difference of (t, τ) ↦ ω(W(tφ)W(τψ)) at
    /// the origin. Its real part is -μ(φ, ψ) and its imaginary part is
    /// -σ(φ, ψ)/2, up to O(step²).
    pub fn weyl_mixed_derivative(
        &self,
        phi: &DVector<f64>,
        psi: &DVector<f64>,
        step: f64,
    ) -> Result<Complex64, Error> {
        if !(1e-5..=1e-2).contains(&step) {
            return Err(Error::StepOutOfRange(step));
        }
        let f = |t: f64, tau: f64| self.weyl_product_value(phi, psi, t, tau);
        let mixed = (f(step, step) - f(step, -step) - f(-step, step) + f(-step, -step))
            / Complex64::new(4.0 * step * step, 0.0);
        Ok(mixed)
    }

    /// Recover μ(φ, ψ) from Weyl values alone.
    ///
    /// The mixed-derivative expansion of the exponentiated CCR yields
    /// μ as -1 × the real part (and σ/2 as -1 × the imaginary part); the
    /// round-trip against the Gaussian generator is the ground truth here.
    pub fn recover_mu(
        &self,
        phi: &DVector<f64>,
        psi: &DVector<f64>,
        step: f64,
    ) -> Result<f64, Error> {
        Ok(-self.weyl_mixed_derivative(phi, psi, step)?.re)
    }

    /// Recover σ(φ, ψ) from the same derivative.
    pub fn recover_sigma(
        &self,
        phi: &DVector<f64>,
        psi: &DVector<f64>,
        step: f64,
    ) -> Result<f64, Error> {
        Ok(-2.0 * self.weyl_mixed_derivative(phi, psi, step)?.im)
    }

    /// One-particle Hilbert-space structure of a pure state.
    pub fn one_particle(&self) -> Result<OneParticleStructure, Error> {
        let pol = self.product.polarizator()?;
        let class = pol.classify(self.product.tolerances());
        if class.tag != StateTag::Pure {
            return Err(Error::NotPure(class.tag.as_str()));
        }
        // Jc = -R makes ⟨x, y⟩ = μ(x, y) + (i/2) σ(x, y) sesquilinear with
        // i·x = Jc x (antilinear in the first slot).
        Ok(OneParticleStructure {
            complex_structure: -pol.matrix(),
            product: self.product.clone(),
        })
    }
}

/// The complex structure and inner product realizing the one-particle
/// Hilbert space of a pure quasifree state on R^{2n}: the k-map is the
/// identity, complex multiplication is i·x := Jc x, and
/// ⟨x, y⟩ = μ(x, y) + (i/2) σ(x, y).
#[derive(Debug, Clone)]
pub struct OneParticleStructure {
    complex_structure: DMatrix<f64>,
    product: DominatingProduct,
}

impl OneParticleStructure {
    pub fn complex_structure(&self) -> &DMatrix<f64> {
        &self.complex_structure
    }

    pub fn product(&self) -> &DominatingProduct {
        &self.product
    }

    pub fn dim(&self) -> usize {
        self.product.dim()
    }

    /// ⟨x, y⟩ = μ(x, y) + (i/2) σ(x, y)
    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> Complex64 {
        Complex64::new(
            self.product.apply(x, y),
            0.5 * self.product.form().apply(x, y),
        )
    }

    /// i·x in the realified picture.
    pub fn multiply_i(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.complex_structure * x
    }

    /// Residuals of the defining identities: Jc² = -1, μ-orthogonality,
    /// symplecticity, and sesquilinearity of the inner product on a basis.
    pub fn structure_residual(&self) -> f64 {
        let n = self.dim();
        let jc = &self.complex_structure;
        let id = DMatrix::identity(n, n);
        let inv = linalg::relative_frobenius_diff(&(jc * jc), &(-&id));
        let gram = self.product.gram();
        let ortho = linalg::relative_frobenius_diff(&(jc.transpose() * gram * jc), gram);
        let j = self.product.form().matrix();
        let sympl = linalg::relative_frobenius_diff(&(jc.transpose() * j * jc), j);
        let mut sesqui = 0.0_f64;
        for col in 0..n {
            let x = DVector::from_fn(n, |i, _| if i == col { 1.0 } else { 0.0 });
            for col2 in 0..n {
                let y = DVector::from_fn(n, |i, _| if i == col2 { 1.0 } else { 0.0 });
                let lhs = self.inner(&x, &self.multiply_i(&y));
                let want = Complex64::i() * self.inner(&x, &y);
                sesqui = sesqui.max((lhs - want).norm());
                let lhs2 = self.inner(&self.multiply_i(&x), &y);
                let want2 = -Complex64::i() * self.inner(&x, &y);
                sesqui = sesqui.max((lhs2 - want2).norm());
            }
        }
        inv.max(ortho).max(sympl).max(sesqui)
    }

    /// The symplectic complement F^v of span(basis): all χ with
    /// Im⟨χ, φ⟩ = σ(χ, φ)/2 = 0 against the span, returned as a
    /// μ-orthonormal basis.
    pub fn symplectic_complement(&self, basis: &DMatrix<f64>) -> DMatrix<f64> {
        let j = self.product.form().matrix();
        if basis.ncols() == 0 {
            let id = DMatrix::identity(self.dim(), self.dim());
            return linalg::gram_orthonormalize(&id, self.product.gram(), 1e-10);
        }
        // σ(χ, φᵢ) = 0 ∀i ⟺ (Bᵀ Jᵀ) χ = 0
        let constraint = basis.transpose() * j.transpose();
        let kernel = linalg::nullspace(&constraint, 1e-10);
        linalg::gram_orthonormalize(&kernel, self.product.gram(), 1e-10)
    }
}

/// Numbers from one local-structure probe of a region. Serializes with the
/// region as a sorted site list.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LocalProbeReport {
    pub region: Vec<usize>,
    /// (dim of the region data space, dim of its symplectic complement)
    pub dims: (usize, usize),
    /// dim(F ∩ F^v); zero is the one-particle factor criterion.
    pub intersection_rank: usize,
    /// Smallest principal angle (radians) between the region data space
    /// and the complementary-region data space in the state's metric;
    /// strictly below π/2 at finite resolution because A^{±1/2} is nonlocal.
    pub min_principal_angle: f64,
    /// sin of the largest principal angle between F^v and the data space
    /// of the complementary region (both μ-orthonormalized): the distance
    /// to exact one-particle duality.
    pub duality_gap: f64,
}

/// Numerical rank deficiency of the symplectic form restricted to the data
/// space of `region`: the dimension of F ∩ F^v computed inside F, i.e. the
/// nullity of Bᵀ J B for the region basis B. Zero is the factor criterion.
pub fn restricted_form_nullity(model: &LatticeModel, region: &[usize]) -> Result<usize, Error> {
    let sites = model.sites();
    if region.is_empty() {
        return Err(Error::EmptyRegion);
    }
    if region.len() >= sites {
        return Err(Error::FullRegion);
    }
    let basis = model.region_basis(region).map_err(region_error)?;
    let form = model.cauchy_form();
    let restricted = basis.transpose() * form.matrix() * &basis;
    let singular = linalg::singular_values(&restricted);
    let cut = 1e-10 * singular[0].max(f64::MIN_POSITIVE);
    Ok(singular.iter().filter(|&&s| s <= cut).count())
}

/// Probe the local subspace structure of a pure state on the Cauchy-data
/// space of `model`: factor criterion (trivial intersection of the region
/// data space with its symplectic complement) and the duality comparison
/// between that complement and the opposite region's data space.
pub fn local_probe(
    model: &LatticeModel,
    state: &QuasifreeState,
    region: &[usize],
) -> Result<LocalProbeReport, Error> {
    let structure = state.one_particle()?;
    local_probe_with_structure(model, &structure, region)
}

/// [`local_probe`] with a precomputed one-particle structure, for callers
/// probing many regions of the same state.
pub fn local_probe_with_structure(
    model: &LatticeModel,
    structure: &OneParticleStructure,
    region: &[usize],
) -> Result<LocalProbeReport, Error> {
    let sites = model.sites();
    if region.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let mut sorted: Vec<usize> = region.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if let Some(&site) = sorted.iter().find(|&&s| s >= sites) {
        return Err(Error::RegionOutOfRange { site, sites });
    }
    if sorted.len() == sites {
        return Err(Error::FullRegion);
    }
    let gram = structure.product().gram();

    let complement_sites: Vec<usize> = (0..sites).filter(|s| !sorted.contains(s)).collect();
    let raw_f = model.region_basis(&sorted).map_err(region_error)?;
    let raw_opposite = model
        .region_basis(&complement_sites)
        .map_err(region_error)?;

    let f = linalg::gram_orthonormalize(&raw_f, gram, 1e-10);
    let opposite = linalg::gram_orthonormalize(&raw_opposite, gram, 1e-10);
    let f_complement = structure.symplectic_complement(&raw_f);

    let cos_ff = linalg::principal_angle_cosines(&f, &f_complement, gram);
    let intersection_rank = cos_ff.iter().filter(|&&c| c >= 1.0 - 1e-8).count();

    let cos_fo = linalg::principal_angle_cosines(&f, &opposite, gram);
    let min_principal_angle = cos_fo
        .first()
        .map_or(std::f64::consts::FRAC_PI_2, |c| c.acos());

    let cos_dual = linalg::principal_angle_cosines(&f_complement, &opposite, gram);
    let duality_gap = cos_dual
        .last()
        .map_or(1.0, |c| (1.0 - c * c).max(0.0).sqrt());

    Ok(LocalProbeReport {
        region: sorted,
        dims: (f.ncols(), f_complement.ncols()),
        intersection_rank,
        min_principal_angle,
        duality_gap,
    })
}

fn region_error(e: crate::kg::Error) -> Error {
    match e {
        crate::kg::Error::EmptyRegion => Error::EmptyRegion,
        crate::kg::Error::RegionOutOfRange { site, sites } => {
            Error::RegionOutOfRange { site, sites }
        }
        _ => Error::Core(symplectic::Error::NumericalFailure),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::{LatticeModel, Potential};
    use crate::symplectic::{random_instance, DominatingProduct, SymplecticForm};
    use approx::assert_relative_eq;
    use nalgebra::{DMatrix, DVector};

    fn half_identity_state() -> QuasifreeState {
        let g = DMatrix::identity(2, 2) * 0.5;
        QuasifreeState::new(DominatingProduct::new(g, SymplecticForm::canonical(1)).unwrap())
    }

    #[test]
    fn weyl_value_at_zero_is_one() {
        let state = half_identity_state();
        assert_eq!(state.weyl_value(&DVector::zeros(2)), 1.0);
    }

    #[test]
    fn weyl_value_of_basis_vector() {
        let state = half_identity_state();
        let e1 = DVector::from_row_slice(&[1.0, 0.0]);
        assert_relative_eq!(state.weyl_value(&e1), (-0.25f64).exp(), epsilon = 1e-14);
    }

    #[test]
    fn weyl_value_decreases_along_rays() {
        let state = half_identity_state();
        let e1 = DVector::from_row_slice(&[1.0, 0.5]);
        let mut last = 1.0;
        for k in 1..6 {
            let value = state.weyl_value(&(&e1 * (k as f64 * 0.5)));
            assert!(value < last);
            last = value;
        }
    }

    #[test]
    fn weyl_product_degenerates_to_weyl_value() {
        let state = half_identity_state();
        let phi = DVector::from_row_slice(&[1.0, 0.0]);
        let psi = DVector::from_row_slice(&[0.3, -0.7]);
        let value = state.weyl_product_value(&phi, &psi, 0.0, 1.3);
        assert_relative_eq!(value.re, state.weyl_value(&(&psi * 1.3)), epsilon = 1e-14);
        assert_relative_eq!(value.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn weyl_product_with_itself_has_no_phase() {
        let state = half_identity_state();
        let phi = DVector::from_row_slice(&[0.4, 1.1]);
        let value = state.weyl_product_value(&phi, &phi, 0.7, -0.2);
        assert!(value.im.abs() < 1e-15);
        assert!(value.norm() <= 1.0);
    }

    #[test]
    fn recover_mu_of_half_identity() {
        let state = half_identity_state();
        let e1 = DVector::from_row_slice(&[1.0, 0.0]);
        let mu = state.recover_mu(&e1, &e1, 1e-3).unwrap();
        assert_relative_eq!(mu, 0.5, epsilon = 1e-6);
    }

    #[test]
    fn recover_sigma_from_imaginary_part() {
        let state = half_identity_state();
        let e1 = DVector::from_row_slice(&[1.0, 0.0]);
        let e2 = DVector::from_row_slice(&[0.0, 1.0]);
        let sigma = state.recover_sigma(&e1, &e2, 1e-3).unwrap();
        assert_relative_eq!(sigma, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn recover_mu_roundtrip_on_random_states() {
        for seed in 0..16 {
            let product = random_instance(seed, 3, 3.0, 0.4);
            let gram = product.gram().clone();
            let state = QuasifreeState::new(product);
            let phi = DVector::from_fn(6, |i, _| {
                ((seed as usize + i * 31) % 13) as f64 / 13.0 - 0.4
            });
            let psi = DVector::from_fn(6, |i, _| {
                ((seed as usize + i * 17) % 11) as f64 / 11.0 - 0.5
            });
            let want = phi.dot(&(&gram * &psi));
            let got = state.recover_mu(&phi, &psi, 1e-3).unwrap();
            assert!((got - want).abs() < 1e-6, "seed {seed}: {got} vs {want}");
        }
    }

    #[test]
    fn recover_mu_rejects_bad_steps() {
        let state = half_identity_state();
        let e1 = DVector::from_row_slice(&[1.0, 0.0]);
        assert!(matches!(
            state.recover_mu(&e1, &e1, 0.5),
            Err(Error::StepOutOfRange(_))
        ));
    }

    #[test]
    fn one_particle_structure_of_half_identity() {
        let state = half_identity_state();
        let structure = state.one_particle().unwrap();
        let e1 = DVector::from_row_slice(&[1.0, 0.0]);
        let e2 = DVector::from_row_slice(&[0.0, 1.0]);
        let inner11 = structure.inner(&e1, &e1);
        assert_relative_eq!(inner11.re, 0.5, epsilon = 1e-12);
        assert_relative_eq!(inner11.im, 0.0, epsilon = 1e-12);
        let inner12 = structure.inner(&e1, &e2);
        assert_relative_eq!(inner12.re, 0.0, epsilon = 1e-12);
        assert_relative_eq!(inner12.im, 0.5, epsilon = 1e-12);
        assert!(structure.structure_residual() < 1e-10);
    }

    #[test]
    fn one_particle_requires_purity() {
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]);
        let state =
            QuasifreeState::new(DominatingProduct::new(g, SymplecticForm::canonical(1)).unwrap());
        assert!(matches!(state.one_particle(), Err(Error::NotPure(_))));
    }

    #[test]
    fn one_particle_positivity() {
        let state = QuasifreeState::new(random_instance(5, 3, 4.0, 0.0));
        let structure = state.one_particle().unwrap();
        for i in 0..6 {
            let x = DVector::from_fn(6, |j, _| if j == i { 1.0 } else { 0.0 });
            let val = structure.inner(&x, &x);
            assert!(val.re > 0.0);
            assert!(val.im.abs() < 1e-14);
        }
    }

    #[test]
    fn complement_of_everything_is_trivial() {
        let state = QuasifreeState::new(random_instance(2, 2, 2.0, 0.0));
        let structure = state.one_particle().unwrap();
        let full = DMatrix::identity(4, 4);
        assert_eq!(structure.symplectic_complement(&full).ncols(), 0);
    }

    #[test]
    fn complement_of_nothing_is_everything() {
        let state = QuasifreeState::new(random_instance(2, 2, 2.0, 0.0));
        let structure = state.one_particle().unwrap();
        let empty = DMatrix::zeros(4, 0);
        assert_eq!(structure.symplectic_complement(&empty).ncols(), 4);
    }

    #[test]
    fn isotropic_line_is_its_own_complement() {
        let state = half_identity_state();
        let structure = state.one_particle().unwrap();
        let e1 = DMatrix::from_row_slice(2, 1, &[1.0, 0.0]);
        let complement = structure.symplectic_complement(&e1);
        assert_eq!(complement.ncols(), 1);
        assert_relative_eq!(complement[(1, 0)].abs(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn complement_is_an_involution() {
        let state = QuasifreeState::new(random_instance(9, 3, 3.0, 0.0));
        let structure = state.one_particle().unwrap();
        let basis = DMatrix::from_fn(6, 2, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        let once = structure.symplectic_complement(&basis);
        let twice = structure.symplectic_complement(&once);
        assert_eq!(once.ncols(), 4);
        assert_eq!(twice.ncols(), 2);
        let gram = state.product().gram();
        let normalized = linalg::gram_orthonormalize(&basis, gram, 1e-10);
        let cos = linalg::principal_angle_cosines(&normalized, &twice, gram);
        for c in cos {
            assert_relative_eq!(c, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn local_probe_on_half_circle() {
        let model = LatticeModel::new(16, 1.0, Potential::constant(1.0)).unwrap();
        let state = QuasifreeState::new(model.ultrastatic_vacuum_gram().unwrap());
        let region: Vec<usize> = (0..8).collect();
        let report = local_probe(&model, &state, &region).unwrap();
        assert_eq!(report.intersection_rank, 0);
        assert_eq!(report.dims, (16, 16));
        assert!(report.min_principal_angle > 0.0);
        assert!(report.min_principal_angle < std::f64::consts::FRAC_PI_2);
        // exact one-particle duality at finite dimension
        assert!(report.duality_gap < 1e-7);
    }

    #[test]
    fn local_probe_guards() {
        let model = LatticeModel::new(8, 1.0, Potential::constant(1.0)).unwrap();
        let state = QuasifreeState::new(model.ultrastatic_vacuum_gram().unwrap());
        assert!(matches!(
            local_probe(&model, &state, &[]),
            Err(Error::EmptyRegion)
        ));
        let all: Vec<usize> = (0..8).collect();
        assert!(matches!(
            local_probe(&model, &state, &all),
            Err(Error::FullRegion)
        ));
    }

    #[test]
    fn restricted_form_is_nondegenerate_on_arcs() {
        let model = LatticeModel::new(12, 1.0, Potential::constant(1.0)).unwrap();
        for len in 1..12 {
            let region: Vec<usize> = (0..len).collect();
            assert_eq!(restricted_form_nullity(&model, &region).unwrap(), 0);
        }
        assert!(matches!(
            restricted_form_nullity(&model, &[]),
            Err(Error::EmptyRegion)
        ));
        let all: Vec<usize> = (0..12).collect();
        assert!(matches!(
            restricted_form_nullity(&model, &all),
            Err(Error::FullRegion)
        ));
    }
}
