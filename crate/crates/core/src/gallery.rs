//! Two discretized counterexamples showing that the relative-continuity
//! bounds genuinely need their hypotheses.
//!
//! Both live on a Dirichlet lattice over [-L, L] carrying the complex
//! structure of L²(R, C) viewed as a real space: data vectors are stacked
//! (real part, imaginary part), the symplectic form is 2 Im⟨·,·⟩, and
//! A = -d²/dx² + 1.
//!
//! - The *phase multiplier* scenario: T = multiplication by e^{-ix²}
//!   preserves σ and the purified product exactly, but stretches the
//!   first-order product μ = Re⟨A·,·⟩ by a factor growing like the square
//!   of the bump translation distance.
//! - The *frequency flip* scenario: T(φ₀ + iφ₁) = A^{-1/2}φ₁ - i A^{1/2}φ₀
//!   is a μ-isometric symplectomorphism whose μ'-norm ratios on the modes
//!   of A are unbounded under lattice refinement, although μ' is pure and
//!   dominated by μ.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::linalg;
use crate::symplectic::{self, DominatingProduct, SymplecticForm, Tolerances};

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid too coarse: {reason}")]
    GridTooCoarse { reason: String },
    #[error("translated bump leaves the domain (needs |center| + 4·width ≤ {0})")]
    BumpLeavesDomain(f64),
    #[error(transparent)]
    Core(#[from] symplectic::Error),
}

/// Interior grid of a Dirichlet interval [-L, L]: x_j = -L + (j+1)h with
/// h = 2L/(N+1), and the operator A = -d²/dx² + 1.
#[derive(Debug, Clone)]
pub struct DirichletLattice {
    positions: Vec<f64>,
    spacing: f64,
    half_length: f64,
    a: DMatrix<f64>,
}

impl DirichletLattice {
    pub fn new(sites: usize, half_length: f64) -> Self {
        let spacing = 2.0 * half_length / (sites as f64 + 1.0);
        let positions: Vec<f64> = (0..sites)
            .map(|j| -half_length + (j as f64 + 1.0) * spacing)
            .collect();
        let inv_h2 = 1.0 / (spacing * spacing);
        let mut a = DMatrix::zeros(sites, sites);
        for j in 0..sites {
            a[(j, j)] = 2.0 * inv_h2 + 1.0;
            if j + 1 < sites {
                a[(j, j + 1)] = -inv_h2;
                a[(j + 1, j)] = -inv_h2;
            }
        }
        DirichletLattice {
            positions,
            spacing,
            half_length,
            a,
        }
    }

    pub fn sites(&self) -> usize {
        self.positions.len()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn a_matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// ⟨u, v⟩ on the lattice (h-weighted).
    pub fn dot(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        self.spacing * u.dot(v)
    }

    /// The symplectic form 2 Im⟨φ, ψ⟩ on stacked (re, im) data:
    /// J = 2h [[0, I], [-I, 0]].
    pub fn form(&self) -> SymplecticForm {
        let n = self.sites();
        let id = DMatrix::identity(n, n) * (2.0 * self.spacing);
        let j = linalg::block2x2(&DMatrix::zeros(n, n), &id, &(-&id), &DMatrix::zeros(n, n));
        SymplecticForm::new(j, &Tolerances::default()).expect("scaled canonical form")
    }
}

/// Compactly supported polynomial bump (1 - (x/w)²)⁴ on |x| ≤ w.
pub fn bump_profile(width: f64, x: f64) -> f64 {
    let t = x / width;
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - t * t).powi(4)
    }
}

fn stack(re: &DVector<f64>, im: &DVector<f64>) -> DVector<f64> {
    let n = re.len();
    let mut out = DVector::zeros(2 * n);
    out.rows_mut(0, n).copy_from(re);
    out.rows_mut(n, n).copy_from(im);
    out
}

fn parts(x: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
    let n = x.len() / 2;
    (DVector::from(x.rows(0, n)), DVector::from(x.rows(n, n)))
}

/// The phase-multiplier scenario: μ = Re⟨A·,·⟩ against its purification
/// μ̃ = Re⟨·,·⟩, with T = multiplication by e^{-ix²}.
#[derive(Debug, Clone)]
pub struct MultiplierScenario {
    lattice: DirichletLattice,
    cos_phase: DVector<f64>,
    sin_phase: DVector<f64>,
}

/// Build the phase-multiplier scenario. The local frequency of e^{-ix²} is
/// 2x, so resolving it needs max |2 x h| ≤ π/4 out to the edge of the
/// domain; coarser grids alias the phase and are rejected.
pub fn build_phase_multiplier(sites: usize, half_length: f64) -> Result<MultiplierScenario, Error> {
    if sites < 64 || half_length < 8.0 {
        return Err(Error::GridTooCoarse {
            reason: format!(
                "need at least 64 sites on [-8, 8], got {sites} on [-{half_length}, {half_length}]"
            ),
        });
    }
    let lattice = DirichletLattice::new(sites, half_length);
    let resolution = 2.0 * half_length * lattice.spacing();
    let limit = std::f64::consts::FRAC_PI_4;
    if resolution > limit {
        return Err(Error::GridTooCoarse {
            reason: format!(
                "phase resolution max|2xh| = {resolution:.4} exceeds {limit:.4}; increase the site count"
            ),
        });
    }
    let cos_phase =
        DVector::from_iterator(sites, lattice.positions().iter().map(|x| (x * x).cos()));
    let sin_phase =
        DVector::from_iterator(sites, lattice.positions().iter().map(|x| (x * x).sin()));
    Ok(MultiplierScenario {
        lattice,
        cos_phase,
        sin_phase,
    })
}

impl MultiplierScenario {
    pub fn lattice(&self) -> &DirichletLattice {
        &self.lattice
    }

    /// μ(x, x) = Re⟨Ax, x⟩ on stacked data, evaluated without forming the
    /// 2N×2N Gram matrix.
    pub fn mu_norm_squared(&self, x: &DVector<f64>) -> f64 {
        let (re, im) = parts(x);
        self.lattice.dot(&re, &(self.lattice.a_matrix() * &re))
            + self.lattice.dot(&im, &(self.lattice.a_matrix() * &im))
    }

    /// μ̃(x, x) = Re⟨x, x⟩.
    pub fn mutilde_norm_squared(&self, x: &DVector<f64>) -> f64 {
        let (re, im) = parts(x);
        self.lattice.dot(&re, &re) + self.lattice.dot(&im, &im)
    }

    /// σ(x, y) = 2 Im⟨x, y⟩.
    pub fn sigma(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        let (xr, xi) = parts(x);
        let (yr, yi) = parts(y);
        2.0 * (self.lattice.dot(&xr, &yi) - self.lattice.dot(&xi, &yr))
    }

    /// Apply the unitary phase multiplication.
    pub fn apply_t(&self, x: &DVector<f64>) -> DVector<f64> {
        let (re, im) = parts(x);
        let re_out = re.component_mul(&self.cos_phase) + im.component_mul(&self.sin_phase);
        let im_out = im.component_mul(&self.cos_phase) - re.component_mul(&self.sin_phase);
        stack(&re_out, &im_out)
    }

    /// T as a 2N×2N matrix.
    pub fn t_matrix(&self) -> DMatrix<f64> {
        let c = DMatrix::from_diagonal(&self.cos_phase);
        let s = DMatrix::from_diagonal(&self.sin_phase);
        linalg::block2x2(&c, &s, &(-&s), &c)
    }

    /// Gram matrix of μ as a dominating product (blockdiag(hA, hA)).
    pub fn gram_mu(&self) -> Result<DominatingProduct, Error> {
        let scaled = self.lattice.a_matrix() * self.lattice.spacing();
        let gram = linalg::block_diag2(&scaled, &scaled);
        Ok(DominatingProduct::new(gram, self.lattice.form())?)
    }

    /// Gram matrix of the purified product μ̃ (blockdiag(h, h)).
    pub fn gram_mutilde(&self) -> Result<DominatingProduct, Error> {
        let id =
            DMatrix::identity(self.lattice.sites(), self.lattice.sites()) * self.lattice.spacing();
        let gram = linalg::block_diag2(&id, &id);
        Ok(DominatingProduct::new(gram, self.lattice.form())?)
    }

    /// The real bump translated to distance `center` (snapped to the grid),
    /// as stacked data with vanishing imaginary part.
    pub fn translated_bump(&self, width: f64, center: f64) -> Result<DVector<f64>, Error> {
        let h = self.lattice.spacing();
        let snapped = (center / h).round() * h;
        if snapped.abs() + 4.0 * width > self.lattice.half_length() {
            return Err(Error::BumpLeavesDomain(self.lattice.half_length()));
        }
        let values = DVector::from_iterator(
            self.lattice.sites(),
            self.lattice
                .positions()
                .iter()
                .map(|&x| bump_profile(width, x - snapped)),
        );
        Ok(stack(&values, &DVector::zeros(self.lattice.sites())))
    }
}

/// One translate of the growth curve: distance, norm ratio, and the two
/// norms that stay invariant alongside.
#[derive(Debug, Clone, Copy)]
pub struct GrowthPoint {
    pub translate: f64,
    /// μ(Tφₙ)/μ(φₙ)
    pub ratio: f64,
    /// μ(φₙ, φₙ), constant in n away from the boundary
    pub mu_norm: f64,
    /// μ̃(Tφₙ)/μ̃(φₙ), equal to 1 up to rounding
    pub mutilde_ratio: f64,
}

/// Norm-growth curve of the phase multiplier on translated bumps, plus the
/// log-log slope fitted over the strictly positive translates.
#[derive(Debug, Clone)]
pub struct GrowthCurve {
    pub points: Vec<GrowthPoint>,
    pub slope: f64,
}

pub fn growth_curve(
    scenario: &MultiplierScenario,
    bump_width: f64,
    translates: &[usize],
) -> Result<GrowthCurve, Error> {
    let mut points = Vec::with_capacity(translates.len());
    for &n in translates {
        let phi = scenario.translated_bump(bump_width, n as f64)?;
        let moved = scenario.apply_t(&phi);
        let mu_phi = scenario.mu_norm_squared(&phi);
        let point = GrowthPoint {
            translate: n as f64,
            ratio: scenario.mu_norm_squared(&moved) / mu_phi,
            mu_norm: mu_phi,
            mutilde_ratio: scenario.mutilde_norm_squared(&moved)
                / scenario.mutilde_norm_squared(&phi),
        };
        points.push(point);
    }
    let fit: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.translate > 0.0)
        .map(|p| (p.translate.ln(), p.ratio.ln()))
        .collect();
    Ok(GrowthCurve {
        points,
        slope: least_squares_slope(&fit),
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return f64::NAN;
    }
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let var: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    cov / var
}

/// The frequency-flip scenario: μ = ⟨φ₀, Aψ₀⟩ + ⟨φ₁, ψ₁⟩ against the pure
/// μ' = Re⟨·,·⟩, with T(φ₀ + iφ₁) = A^{-1/2}φ₁ - i A^{1/2}φ₀.
#[derive(Debug, Clone)]
pub struct FrequencyFlipScenario {
    lattice: DirichletLattice,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
    sqrt_a: DMatrix<f64>,
    inv_sqrt_a: DMatrix<f64>,
}

pub fn build_frequency_flip(
    sites: usize,
    half_length: f64,
) -> Result<FrequencyFlipScenario, Error> {
    if sites < 64 {
        return Err(Error::GridTooCoarse {
            reason: format!("need at least 64 sites, got {sites}"),
        });
    }
    let lattice = DirichletLattice::new(sites, half_length);
    let (eigenvalues, eigenvectors) = linalg::symmetric_eigen_sorted(lattice.a_matrix());
    let sqrt_a = linalg::apply_spectrum(&eigenvalues, &eigenvectors, f64::sqrt);
    let inv_sqrt_a = linalg::apply_spectrum(&eigenvalues, &eigenvectors, |v| 1.0 / v.sqrt());
    Ok(FrequencyFlipScenario {
        lattice,
        eigenvalues,
        eigenvectors,
        sqrt_a,
        inv_sqrt_a,
    })
}

impl FrequencyFlipScenario {
    pub fn lattice(&self) -> &DirichletLattice {
        &self.lattice
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, k: usize) -> DVector<f64> {
        DVector::from(self.eigenvectors.column(k))
    }

    /// μ(x, x) = ⟨x₀, Ax₀⟩ + ⟨x₁, x₁⟩.
    pub fn mu_norm_squared(&self, x: &DVector<f64>) -> f64 {
        let (re, im) = parts(x);
        self.lattice.dot(&re, &(self.lattice.a_matrix() * &re)) + self.lattice.dot(&im, &im)
    }

    /// μ'(x, x) = Re⟨x, x⟩.
    pub fn muprime_norm_squared(&self, x: &DVector<f64>) -> f64 {
        let (re, im) = parts(x);
        self.lattice.dot(&re, &re) + self.lattice.dot(&im, &im)
    }

    pub fn apply_t(&self, x: &DVector<f64>) -> DVector<f64> {
        let (re, im) = parts(x);
        stack(&(&self.inv_sqrt_a * im), &(-(&self.sqrt_a * re)))
    }

    pub fn t_matrix(&self) -> DMatrix<f64> {
        linalg::block2x2(
            &DMatrix::zeros(self.lattice.sites(), self.lattice.sites()),
            &self.inv_sqrt_a,
            &(-&self.sqrt_a),
            &DMatrix::zeros(self.lattice.sites(), self.lattice.sites()),
        )
    }

    pub fn gram_mu(&self) -> Result<DominatingProduct, Error> {
        let n = self.lattice.sites();
        let gram = linalg::block_diag2(
            &(self.lattice.a_matrix() * self.lattice.spacing()),
            &(DMatrix::identity(n, n) * self.lattice.spacing()),
        );
        Ok(DominatingProduct::new(gram, self.lattice.form())?)
    }

    pub fn gram_muprime(&self) -> Result<DominatingProduct, Error> {
        let n = self.lattice.sites();
        let id = DMatrix::identity(n, n) * self.lattice.spacing();
        let gram = linalg::block_diag2(&id, &id);
        Ok(DominatingProduct::new(gram, self.lattice.form())?)
    }

    /// μ'-norm ratio of T on the k-th mode of A: the worst of the two
    /// canonical data directions (real or imaginary eigenvector), which
    /// equals λ_k exactly. Unbounded as the lattice refines.
    pub fn witness_ratio(&self, k: usize) -> f64 {
        let e_k = self.eigenvector(k);
        let zero = DVector::zeros(self.lattice.sites());
        let real_input = stack(&e_k, &zero);
        let imag_input = stack(&zero, &e_k);
        let ratio_real = self.muprime_norm_squared(&self.apply_t(&real_input))
            / self.muprime_norm_squared(&real_input);
        let ratio_imag = self.muprime_norm_squared(&self.apply_t(&imag_input))
            / self.muprime_norm_squared(&imag_input);
        ratio_real.max(ratio_imag)
    }

    /// (k, ratio, λ_k) for each requested mode.
    pub fn unboundedness_witness(&self, modes: &[usize]) -> Vec<(usize, f64, f64)> {
        modes
            .iter()
            .map(|&k| (k, self.witness_ratio(k), self.eigenvalues[k]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::StateTag;
    use approx::assert_relative_eq;

    fn small_multiplier() -> MultiplierScenario {
        // 2Lh = 256/385 ≈ 0.665 < π/4 ≈ 0.785
        build_phase_multiplier(384, 8.0).unwrap()
    }

    #[test]
    fn coarse_grids_are_rejected() {
        assert!(matches!(
            build_phase_multiplier(64, 8.0),
            Err(Error::GridTooCoarse { .. })
        ));
        assert!(matches!(
            build_phase_multiplier(32, 4.0),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn phase_multiplication_is_an_isometry_of_sigma_and_mutilde() {
        let scenario = small_multiplier();
        let n = scenario.lattice().sites();
        let phi = DVector::from_fn(2 * n, |i, _| ((i * 13 % 31) as f64 - 15.0) / 31.0);
        let psi = DVector::from_fn(2 * n, |i, _| ((i * 7 % 23) as f64 - 11.0) / 23.0);
        let t_phi = scenario.apply_t(&phi);
        let t_psi = scenario.apply_t(&psi);
        assert_relative_eq!(
            scenario.mutilde_norm_squared(&t_phi),
            scenario.mutilde_norm_squared(&phi),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            scenario.sigma(&t_phi, &t_psi),
            scenario.sigma(&phi, &psi),
            max_relative = 1e-12
        );
    }

    #[test]
    fn t_is_a_symplectomorphism_matrix() {
        let scenario = small_multiplier();
        let form = scenario.lattice().form();
        assert!(form.symplectomorphism_residual(&scenario.t_matrix()) < 1e-10);
    }

    #[test]
    fn mu_classifies_primary_and_purifies_to_mutilde() {
        let scenario = small_multiplier();
        let mu = scenario.gram_mu().unwrap();
        assert_eq!(mu.classify().unwrap().tag, StateTag::PrimaryNotPure);
        let purified = mu.purify().unwrap();
        let mutilde = scenario.gram_mutilde().unwrap();
        assert!(
            linalg::relative_frobenius_diff(purified.gram(), mutilde.gram()) < 1e-9,
            "purification does not match the flat product"
        );
        assert_eq!(mutilde.classify().unwrap().tag, StateTag::Pure);
    }

    #[test]
    fn growth_ratio_slope_is_quadratic() {
        let scenario = build_phase_multiplier(1536, 16.0).unwrap();
        // the quadratic term dominates from translate 4 onwards
        let fit_range: Vec<usize> = (4..=12).collect();
        let curve = growth_curve(&scenario, 1.0, &fit_range).unwrap();
        assert!((curve.slope - 2.0).abs() <= 0.2, "slope {}", curve.slope);

        let full_range: Vec<usize> = (0..=12).collect();
        let full = growth_curve(&scenario, 1.0, &full_range).unwrap();
        // base case finite, μ-norms translation invariant, μ̃ untouched
        assert!(full.points[0].ratio.is_finite() && full.points[0].ratio < 10.0);
        let base = full.points[0].mu_norm;
        for point in &full.points {
            assert_relative_eq!(point.mu_norm, base, max_relative = 1e-10);
            assert_relative_eq!(point.mutilde_ratio, 1.0, epsilon = 1e-12);
        }
        // ratios blow past any fixed bound while μ̃ stays put
        assert!(full.points.last().unwrap().ratio > 50.0 * full.points[0].ratio);
    }

    #[test]
    fn bump_outside_the_domain_is_rejected() {
        let scenario = small_multiplier();
        assert!(matches!(
            scenario.translated_bump(1.0, 7.5),
            Err(Error::BumpLeavesDomain(_))
        ));
    }

    #[test]
    fn frequency_flip_squares_to_minus_one() {
        let scenario = build_frequency_flip(96, 8.0).unwrap();
        let t = scenario.t_matrix();
        let n = scenario.lattice().sites();
        let squared = &t * &t;
        assert!(
            linalg::relative_frobenius_diff(&squared, &(-DMatrix::identity(2 * n, 2 * n))) < 1e-10
        );
        let form = scenario.lattice().form();
        assert!(form.symplectomorphism_residual(&t) < 1e-10);
    }

    #[test]
    fn frequency_flip_preserves_mu() {
        let scenario = build_frequency_flip(96, 8.0).unwrap();
        let n = scenario.lattice().sites();
        for trial in 0..100 {
            let phi = DVector::from_fn(2 * n, |i, _| {
                (((i + 1) * (trial + 3) * 2654435761) % 1000) as f64 / 500.0 - 1.0
            });
            let moved = scenario.apply_t(&phi);
            assert_relative_eq!(
                scenario.mu_norm_squared(&moved),
                scenario.mu_norm_squared(&phi),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn muprime_is_pure_and_dominated() {
        let scenario = build_frequency_flip(96, 8.0).unwrap();
        let muprime = scenario.gram_muprime().unwrap();
        assert_eq!(muprime.classify().unwrap().tag, StateTag::Pure);
        let mu = scenario.gram_mu().unwrap();
        assert_eq!(mu.classify().unwrap().tag, StateTag::PrimaryNotPure);
    }

    #[test]
    fn witness_ratios_equal_the_spectrum() {
        let scenario = build_frequency_flip(96, 8.0).unwrap();
        let modes: Vec<usize> = (0..96).step_by(7).collect();
        for (k, ratio, lambda) in scenario.unboundedness_witness(&modes) {
            assert!(
                (ratio / lambda - 1.0).abs() < 1e-8,
                "mode {k}: ratio {ratio} vs λ {lambda}"
            );
        }
        // ground mode of -d²/dx² + 1 sits just above 1
        let ground = scenario.witness_ratio(0);
        assert!((1.0..1.2).contains(&ground));
    }

    #[test]
    fn doubling_the_sites_roughly_quadruples_the_top_ratio() {
        let coarse = build_frequency_flip(128, 8.0).unwrap();
        let fine = build_frequency_flip(256, 8.0).unwrap();
        let top_coarse = coarse.witness_ratio(127);
        let top_fine = fine.witness_ratio(255);
        assert!(
            top_fine >= 3.0 * top_coarse,
            "refinement did not scale: {top_coarse} -> {top_fine}"
        );
    }
}
