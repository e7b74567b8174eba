//! Klein-Gordon field on a 1-D periodic lattice: discrete Laplacian and the
//! operator A = -Δ + r, Sobolev Gram matrices ⟨u, Aᵐ v⟩, the Cauchy-data
//! symplectic form, the classical energy product, exact spectral evolution
//! (piecewise-constant potentials in time), the ultrastatic vacuum, and the
//! cutoff-evolution continuity experiment on the H_τ ⊕ H_{τ-1} scale.
//!
//! The circle is the compact Cauchy surface; the quadrature mass matrix is
//! M = h·1, so M-weighted adjoints coincide with Euclidean ones and the
//! periodic spectrum is available in closed form for oracles.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::linalg;
use crate::symplectic::{self, DominatingProduct, SymplecticForm, Tolerances};

#[derive(Debug, Error)]
pub enum Error {
    #[error("potential must be strictly positive per site (min = {0})")]
    NonPositivePotential(f64),
    #[error("lattice needs at least 8 sites, got {0}")]
    TooFewSites(usize),
    #[error("lattice capped at 2048 sites to keep dense spectral calculus desk-scale, got {0}")]
    TooManySites(usize),
    #[error("spacing must be positive, got {0}")]
    BadSpacing(f64),
    #[error("potential piece has {got} entries for {expected} sites")]
    PotentialLength { expected: usize, got: usize },
    #[error("potential is undefined at time {0}")]
    PotentialUndefined(f64),
    #[error("time interval is reversed: {t0} > {t1}")]
    ReversedInterval { t0: f64, t1: f64 },
    #[error("region is empty")]
    EmptyRegion,
    #[error("region site {site} out of range for {sites} sites")]
    RegionOutOfRange { site: usize, sites: usize },
    #[error("energy product does not dominate: min eigenvalue of A = {min_eigenvalue} < 1")]
    DominationFails { min_eigenvalue: f64 },
    #[error(transparent)]
    Core(#[from] symplectic::Error),
}

/// Piecewise-constant-in-time, per-site potential. A single piece starting
/// at -∞ models the static case.
#[derive(Debug, Clone)]
pub struct Potential {
    pieces: Vec<(f64, Vec<f64>)>,
}

impl Potential {
    pub fn constant(value: f64) -> Self {
        Potential {
            pieces: vec![(f64::NEG_INFINITY, vec![value])],
        }
    }

    pub fn per_site(values: Vec<f64>) -> Self {
        Potential {
            pieces: vec![(f64::NEG_INFINITY, values)],
        }
    }

    /// Pieces (t_break, values); piece i is in force on [tᵢ, tᵢ₊₁), the
    /// last one onwards. `values` of length 1 is splatted across sites.
    pub fn piecewise(pieces: Vec<(f64, Vec<f64>)>) -> Self {
        Potential { pieces }
    }

    pub fn is_static(&self) -> bool {
        self.pieces.len() == 1
    }

    fn resolved(&self, sites: usize) -> Result<Vec<(f64, Vec<f64>)>, Error> {
        let mut out = Vec::with_capacity(self.pieces.len());
        let mut last_start = f64::NEG_INFINITY;
        for (k, (start, values)) in self.pieces.iter().enumerate() {
            if k > 0 && *start <= last_start {
                return Err(Error::PotentialUndefined(*start));
            }
            last_start = *start;
            let values = if values.len() == 1 {
                vec![values[0]; sites]
            } else if values.len() == sites {
                values.clone()
            } else {
                return Err(Error::PotentialLength {
                    expected: sites,
                    got: values.len(),
                });
            };
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            if min.is_nan() || min <= 0.0 {
                return Err(Error::NonPositivePotential(min));
            }
            out.push((*start, values));
        }
        if out.is_empty() {
            return Err(Error::PotentialUndefined(f64::NEG_INFINITY));
        }
        Ok(out)
    }
}

/// One constant-potential piece with its operator A = -Δ + r and spectral
/// decomposition (eigenvalues ascending).
#[derive(Debug, Clone)]
struct Piece {
    start: f64,
    a: DMatrix<f64>,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

/// Cauchy data u ⊕ u₁ on the lattice: field values and normal derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyData {
    pub u0: DVector<f64>,
    pub u1: DVector<f64>,
}

impl CauchyData {
    pub fn zero(sites: usize) -> Self {
        CauchyData {
            u0: DVector::zeros(sites),
            u1: DVector::zeros(sites),
        }
    }

    pub fn stacked(&self) -> DVector<f64> {
        let n = self.u0.len();
        let mut out = DVector::zeros(2 * n);
        out.rows_mut(0, n).copy_from(&self.u0);
        out.rows_mut(n, n).copy_from(&self.u1);
        out
    }

    pub fn from_stacked(x: &DVector<f64>) -> Self {
        let n = x.len() / 2;
        CauchyData {
            u0: DVector::from(x.rows(0, n)),
            u1: DVector::from(x.rows(n, n)),
        }
    }
}

/// Sobolev Gram matrix of order m: ⟨u, Aᵐ v⟩_M = uᵀ (h Aᵐ) v.
#[derive(Debug, Clone)]
pub struct SobolevGram {
    pub order: f64,
    pub gram: DMatrix<f64>,
}

/// 1-D periodic lattice with its operator data.
#[derive(Debug, Clone)]
pub struct LatticeModel {
    sites: usize,
    spacing: f64,
    pieces: Vec<Piece>,
    tolerances: Tolerances,
}

/// Assemble the periodic second-difference matrix -Δ (row sums zero).
pub fn negative_laplacian(sites: usize, spacing: f64) -> DMatrix<f64> {
    let inv_h2 = 1.0 / (spacing * spacing);
    let mut m = DMatrix::zeros(sites, sites);
    for j in 0..sites {
        m[(j, j)] = 2.0 * inv_h2;
        m[(j, (j + 1) % sites)] -= inv_h2;
        m[(j, (j + sites - 1) % sites)] -= inv_h2;
    }
    m
}

pub fn build_lattice(
    sites: usize,
    spacing: f64,
    potential: Potential,
) -> Result<LatticeModel, Error> {
    LatticeModel::new(sites, spacing, potential)
}

impl LatticeModel {
    pub fn new(sites: usize, spacing: f64, potential: Potential) -> Result<Self, Error> {
        if sites < 8 {
            return Err(Error::TooFewSites(sites));
        }
        if sites > 2048 {
            return Err(Error::TooManySites(sites));
        }
        if spacing.is_nan() || spacing <= 0.0 {
            return Err(Error::BadSpacing(spacing));
        }
        let minus_delta = negative_laplacian(sites, spacing);
        let pieces = potential
            .resolved(sites)?
            .into_iter()
            .map(|(start, values)| {
                let mut a = minus_delta.clone();
                for (j, r) in values.iter().enumerate() {
                    a[(j, j)] += r;
                }
                let (eigenvalues, eigenvectors) = linalg::symmetric_eigen_sorted(&a);
                Piece {
                    start,
                    a,
                    eigenvalues,
                    eigenvectors,
                }
            })
            .collect();
        Ok(LatticeModel {
            sites,
            spacing,
            pieces,
            tolerances: Tolerances::default(),
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Dimension of the Cauchy-data space R^{2N}.
    pub fn dim(&self) -> usize {
        2 * self.sites
    }

    /// Quadrature mass matrix M = h·1.
    pub fn mass_matrix(&self) -> DMatrix<f64> {
        DMatrix::identity(self.sites, self.sites) * self.spacing
    }

    fn piece_at(&self, t: f64) -> Result<&Piece, Error> {
        self.pieces
            .iter()
            .rev()
            .find(|p| p.start <= t)
            .ok_or(Error::PotentialUndefined(t))
    }

    fn reference_piece(&self) -> &Piece {
        &self.pieces[0]
    }

    /// A = -Δ + r of the reference (first) piece.
    pub fn a_matrix(&self) -> &DMatrix<f64> {
        &self.reference_piece().a
    }

    /// Spectrum of A (reference piece), ascending.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.reference_piece().eigenvalues
    }

    /// Eigenvector for the k-th eigenvalue (ascending order).
    pub fn eigenvector(&self, k: usize) -> DVector<f64> {
        DVector::from(self.reference_piece().eigenvectors.column(k))
    }

    /// Aᵐ via spectral calculus on the reference piece.
    pub fn a_power(&self, m: f64) -> DMatrix<f64> {
        let piece = self.reference_piece();
        linalg::apply_spectrum(&piece.eigenvalues, &piece.eigenvectors, |v| v.powf(m))
    }

    /// Gram matrix of the m-th Sobolev product ⟨u, Aᵐ v⟩_M = h · Aᵐ.
    pub fn sobolev_gram(&self, m: f64) -> SobolevGram {
        SobolevGram {
            order: m,
            gram: self.a_power(m) * self.spacing,
        }
    }

    /// Sobolev Gram on Cauchy data: H_τ ⊕ H_{τ-1}.
    pub fn sobolev_pair_gram(&self, tau: f64) -> DMatrix<f64> {
        linalg::block_diag2(
            &self.sobolev_gram(tau).gram,
            &self.sobolev_gram(tau - 1.0).gram,
        )
    }

    /// The Cauchy-data symplectic form δ(u⊕u₁, v⊕v₁) = ⟨u₀,v₁⟩_M - ⟨v₀,u₁⟩_M,
    /// i.e. J = [[0, M], [-M, 0]].
    pub fn cauchy_form(&self) -> SymplecticForm {
        let m = self.mass_matrix();
        let j = linalg::block2x2(
            &DMatrix::zeros(self.sites, self.sites),
            &m,
            &(-&m),
            &DMatrix::zeros(self.sites, self.sites),
        );
        SymplecticForm::new(j, &self.tolerances).expect("Cauchy form is canonical up to scale")
    }

    /// Classical energy product G_E = blockdiag(M·A, M).
    ///
    /// Domination of the Cauchy form needs the spectrum of A above 1; the
    /// marginal case r ≡ 1 has its lowest eigenvalue exactly at 1, so the
    /// guard is one-sided.
    pub fn energy_gram(&self) -> Result<DominatingProduct, Error> {
        let piece = self.reference_piece();
        let min_eigenvalue = piece.eigenvalues[0];
        if min_eigenvalue < 1.0 - self.tolerances.domination {
            return Err(Error::DominationFails { min_eigenvalue });
        }
        let gram = linalg::block_diag2(&(&piece.a * self.spacing), &self.mass_matrix());
        Ok(DominatingProduct::with_tolerances(
            gram,
            self.cauchy_form(),
            self.tolerances,
        )?)
    }

    /// Ultrastatic vacuum product G° = ½ blockdiag(M·A^{1/2}, M·A^{-1/2}),
    /// the frequency-split ground-state covariance. Pure by construction;
    /// equals the purification of the energy product.
    pub fn ultrastatic_vacuum_gram(&self) -> Result<DominatingProduct, Error> {
        let half_h = 0.5 * self.spacing;
        let gram = linalg::block_diag2(
            &(self.a_power(0.5) * half_h),
            &(self.a_power(-0.5) * half_h),
        );
        Ok(DominatingProduct::with_tolerances(
            gram,
            self.cauchy_form(),
            self.tolerances,
        )?)
    }

    /// Exact spectral propagation of Cauchy data from t0 to t1 through the
    /// constant-potential pieces covering [t0, t1].
    pub fn evolve(&self, t0: f64, t1: f64, data: &CauchyData) -> Result<CauchyData, Error> {
        if t1 < t0 {
            return Err(Error::ReversedInterval { t0, t1 });
        }
        let mut state = data.clone();
        for (piece, duration) in self.segments(t0, t1)? {
            state = propagate_piece(piece, duration, &state);
        }
        Ok(state)
    }

    /// The evolution as an explicit 2N×2N matrix (product of the per-piece
    /// spectral propagators). Symplectic for the Cauchy form.
    pub fn evolution_matrix(&self, t0: f64, t1: f64) -> Result<DMatrix<f64>, Error> {
        if t1 < t0 {
            return Err(Error::ReversedInterval { t0, t1 });
        }
        let mut total = DMatrix::identity(self.dim(), self.dim());
        for (piece, duration) in self.segments(t0, t1)? {
            total = piece_matrix(piece, duration) * total;
        }
        Ok(total)
    }

    fn segments(&self, t0: f64, t1: f64) -> Result<Vec<(&Piece, f64)>, Error> {
        let mut out = Vec::new();
        let mut t = t0;
        // guard: t0 must be covered
        self.piece_at(t0)?;
        while t < t1 {
            let piece = self.piece_at(t)?;
            let next_break = self
                .pieces
                .iter()
                .map(|p| p.start)
                .filter(|&s| s > t)
                .fold(f64::INFINITY, f64::min);
            let end = next_break.min(t1);
            out.push((piece, end - t));
            t = end;
        }
        Ok(out)
    }

    /// Extremal energy ratios c₁ = min, c₂ = max of μ^E(Tx)/μ^E(x) over
    /// data supported in `region`, as generalized eigenvalues on the
    /// compressed subspace.
    pub fn energy_estimate_constants(
        &self,
        t0: f64,
        t1: f64,
        region: &[usize],
    ) -> Result<(f64, f64), Error> {
        let basis = self.region_basis(region)?;
        let transport = self.evolution_matrix(t0, t1)?;
        let energy = self.energy_gram()?;
        let moved = &transport * &basis;
        let s1 = moved.transpose() * energy.gram() * &moved;
        let s0 = basis.transpose() * energy.gram() * &basis;
        let l0 = linalg::cholesky_factor(&s0).ok_or(symplectic::Error::NotPositiveDefinite)?;
        let k = linalg::whiten_form(&l0, &linalg::symmetrize(&s1));
        let (values, _) = linalg::symmetric_eigen_sorted(&k);
        Ok((values[0], values[values.len() - 1]))
    }

    /// Euclidean 0/1 basis of Cauchy data supported on `region`.
    pub fn region_basis(&self, region: &[usize]) -> Result<DMatrix<f64>, Error> {
        if region.is_empty() {
            return Err(Error::EmptyRegion);
        }
        let mut basis = DMatrix::zeros(self.dim(), 2 * region.len());
        for (col, &site) in region.iter().enumerate() {
            if site >= self.sites {
                return Err(Error::RegionOutOfRange {
                    site,
                    sites: self.sites,
                });
            }
            basis[(site, col)] = 1.0;
            basis[(self.sites + site, region.len() + col)] = 1.0;
        }
        Ok(basis)
    }

    /// Raised-cosine cutoff: 1 on the region, decaying to 0 over
    /// `ramp_fraction` of the lattice on each side (periodic distance).
    pub fn raised_cosine_cutoff(&self, region: &[usize], ramp_fraction: f64) -> Vec<f64> {
        let ramp = ((self.sites as f64) * ramp_fraction).ceil().max(1.0) as usize;
        (0..self.sites)
            .map(|j| {
                let d = region
                    .iter()
                    .map(|&r| periodic_distance(j, r, self.sites))
                    .min()
                    .unwrap_or(0);
                if d == 0 {
                    1.0
                } else if d >= ramp {
                    0.0
                } else {
                    let x = d as f64 / ramp as f64;
                    0.5 * (1.0 + (std::f64::consts::PI * x).cos())
                }
            })
            .collect()
    }

    /// Operator norm of multiplication by χ on H_m, via the largest
    /// singular value of A^{m/2} diag(χ) A^{-m/2}.
    pub fn multiplier_bound(&self, chi: &[f64], m: f64) -> f64 {
        let c = DMatrix::from_diagonal(&DVector::from_row_slice(chi));
        let conjugated = self.a_power(m / 2.0) * c * self.a_power(-m / 2.0);
        linalg::operator_norm(&conjugated)
    }

    /// Multiplication by χ acting diagonally on both Cauchy-data components.
    pub fn cutoff_matrix(&self, chi: &[f64]) -> DMatrix<f64> {
        let c = DMatrix::from_diagonal(&DVector::from_row_slice(chi));
        linalg::block_diag2(&c, &c)
    }

    /// Site-local energy density (summing to the energy product when the
    /// reference potential is in force).
    pub fn energy_density(&self, data: &CauchyData) -> Vec<f64> {
        let piece = self.reference_piece();
        let h = self.spacing;
        (0..self.sites)
            .map(|j| {
                let jp = (j + 1) % self.sites;
                let grad = (data.u0[jp] - data.u0[j]) / h;
                let r_j = piece.a[(j, j)] - 2.0 / (h * h);
                h * (grad * grad + r_j * data.u0[j] * data.u0[j] + data.u1[j] * data.u1[j])
            })
            .collect()
    }
}

fn periodic_distance(a: usize, b: usize, n: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(n - d)
}

fn propagate_piece(piece: &Piece, duration: f64, data: &CauchyData) -> CauchyData {
    let e = &piece.eigenvectors;
    let c0 = e.transpose() * &data.u0;
    let c1 = e.transpose() * &data.u1;
    let n = c0.len();
    let mut d0 = DVector::zeros(n);
    let mut d1 = DVector::zeros(n);
    for k in 0..n {
        let omega = piece.eigenvalues[k].sqrt();
        let (sin, cos) = (duration * omega).sin_cos();
        d0[k] = cos * c0[k] + sin / omega * c1[k];
        d1[k] = -omega * sin * c0[k] + cos * c1[k];
    }
    CauchyData {
        u0: e * d0,
        u1: e * d1,
    }
}

fn piece_matrix(piece: &Piece, duration: f64) -> DMatrix<f64> {
    let values = &piece.eigenvalues;
    let vectors = &piece.eigenvectors;
    let cos = linalg::apply_spectrum(values, vectors, |v| (duration * v.sqrt()).cos());
    let sinc = linalg::apply_spectrum(values, vectors, |v| {
        let omega = v.sqrt();
        (duration * omega).sin() / omega
    });
    let omega_sin = linalg::apply_spectrum(values, vectors, |v| {
        let omega = v.sqrt();
        -omega * (duration * omega).sin()
    });
    linalg::block2x2(&cos, &sinc, &omega_sin, &cos)
}

/// One τ-entry of the cutoff-evolution continuity experiment.
#[derive(Debug, Clone, Copy)]
pub struct SobolevContinuityRecord {
    pub tau: f64,
    /// s = 2(1-τ): the scale parameter linking H_τ ⊕ H_{τ-1} to the
    /// energy-product family.
    pub s: f64,
    pub v_norm: f64,
    pub v_bound: f64,
    pub w_norm: f64,
    pub w_bound: f64,
    /// τ = ½ carries the one-particle (Hadamard) topology.
    pub hadamard_point: bool,
    /// Relative gap between the scaled energy Gram and the Sobolev-pair
    /// Gram computed by spectral calculus (two independent code paths).
    pub identity_rel_err: f64,
}

impl SobolevContinuityRecord {
    pub fn violation(&self) -> f64 {
        (self.v_norm - self.v_bound).max(self.w_norm - self.w_bound)
    }
}

#[derive(Debug, Clone)]
pub struct SobolevContinuityReport {
    pub v: f64,
    pub w: f64,
    pub records: Vec<SobolevContinuityRecord>,
    pub max_violation: f64,
    pub max_identity_rel_err: f64,
}

/// Measure the cutoff evolution χTχ (and its symplectic adjoint χT⁻¹χ) in
/// the H_τ ⊕ H_{τ-1} norms and compare against the interpolation bound
/// w^{s/2} v^{1-s/2} built from the energy-product norms.
///
/// Also cross-checks, per grid point, the identity between the scaled
/// energy Gram (μ^E)_s computed through the polarizator and the direct
/// spectral form 2^{-s} blockdiag(M A^{1-s/2}, M A^{-s/2}).
pub fn sobolev_continuity_report(
    model: &LatticeModel,
    t0: f64,
    t1: f64,
    tau_grid: &[f64],
    region: &[usize],
    chi: Option<&[f64]>,
) -> Result<SobolevContinuityReport, Error> {
    if region.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let default_chi;
    let chi = match chi {
        Some(c) => c,
        None => {
            default_chi = model.raised_cosine_cutoff(region, 0.1);
            &default_chi
        }
    };
    let energy = model.energy_gram()?;
    let transport = model.evolution_matrix(t0, t1)?;
    let cutoff = model.cutoff_matrix(chi);
    let v_map = &cutoff * &transport * &cutoff;
    let w_map = energy.form().adjoint_of(&v_map)?;

    let v = linalg::gram_operator_norm(&v_map, energy.gram())
        .ok_or(symplectic::Error::NotPositiveDefinite)?;
    let w = linalg::gram_operator_norm(&w_map, energy.gram())
        .ok_or(symplectic::Error::NotPositiveDefinite)?;

    let pol = energy.polarizator()?;
    let half_h = 0.5 * model.spacing();

    let mut records = Vec::with_capacity(tau_grid.len());
    let mut max_violation = f64::NEG_INFINITY;
    let mut max_identity_rel_err = 0.0_f64;
    for &tau in tau_grid {
        let s = 2.0 * (1.0 - tau);
        let pair_gram = model.sobolev_pair_gram(tau);
        let v_norm = linalg::gram_operator_norm(&v_map, &pair_gram)
            .ok_or(symplectic::Error::NotPositiveDefinite)?;
        let w_norm = linalg::gram_operator_norm(&w_map, &pair_gram)
            .ok_or(symplectic::Error::NotPositiveDefinite)?;

        let scaled = pol.scaled_gram(energy.gram(), s, energy.tolerances())?;
        let prefactor = 2.0_f64.powf(-s) * 2.0 * half_h;
        let direct = linalg::block_diag2(
            &(model.a_power(1.0 - s / 2.0) * prefactor),
            &(model.a_power(-s / 2.0) * prefactor),
        );
        let identity_rel_err = linalg::relative_frobenius_diff(&scaled, &direct);
        max_identity_rel_err = max_identity_rel_err.max(identity_rel_err);

        let record = SobolevContinuityRecord {
            tau,
            s,
            v_norm,
            v_bound: w.powf(s / 2.0) * v.powf(1.0 - s / 2.0),
            w_norm,
            w_bound: v.powf(s / 2.0) * w.powf(1.0 - s / 2.0),
            hadamard_point: (tau - 0.5).abs() < 1e-12,
            identity_rel_err,
        };
        max_violation = max_violation.max(record.violation());
        records.push(record);
    }
    Ok(SobolevContinuityReport {
        v,
        w,
        records,
        max_violation,
        max_identity_rel_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn unit_model(sites: usize) -> LatticeModel {
        LatticeModel::new(sites, 1.0, Potential::constant(1.0)).unwrap()
    }

    #[test]
    fn constant_mode_is_fixed_by_a() {
        let model = unit_model(8);
        let ones = DVector::from_element(8, 1.0);
        let image = model.a_matrix() * &ones;
        assert_relative_eq!(image, ones, epsilon = 1e-12);
    }

    #[test]
    fn periodic_spectrum_matches_the_closed_form() {
        let (n, h) = (8, 1.0);
        let model = unit_model(n);
        let mut expected: Vec<f64> = (0..n)
            .map(|k| 1.0 + (4.0 / (h * h)) * (PI * k as f64 / n as f64).sin().powi(2))
            .collect();
        expected.sort_by(f64::total_cmp);
        for (computed, want) in model.eigenvalues().iter().zip(expected) {
            assert_relative_eq!(*computed, want, epsilon = 1e-10);
        }
    }

    #[test]
    fn zero_potential_is_rejected() {
        assert!(matches!(
            LatticeModel::new(8, 1.0, Potential::constant(0.0)),
            Err(Error::NonPositivePotential(_))
        ));
    }

    #[test]
    fn sobolev_gram_order_zero_is_the_mass_matrix() {
        let model = unit_model(12);
        let gram = model.sobolev_gram(0.0).gram;
        assert_relative_eq!(gram, model.mass_matrix(), epsilon = 1e-12);
    }

    #[test]
    fn sobolev_grams_invert_pairwise() {
        let model = unit_model(12);
        let h = model.spacing();
        let product = model.sobolev_gram(2.0).gram * model.sobolev_gram(-2.0).gram;
        let expected = DMatrix::identity(12, 12) * (h * h);
        assert!(linalg::relative_frobenius_diff(&product, &expected) < 1e-11);
    }

    #[test]
    fn sobolev_norm_of_eigenvector() {
        let model = unit_model(16);
        let k = 5;
        let e_k = model.eigenvector(k);
        let lambda = model.eigenvalues()[k];
        let gram = model.sobolev_gram(2.0).gram;
        let norm_sq = e_k.dot(&(&gram * &e_k));
        assert_relative_eq!(norm_sq, model.spacing() * lambda * lambda, epsilon = 1e-10);
    }

    #[test]
    fn cauchy_form_pairs_dual_components() {
        let model = unit_model(8);
        let form = model.cauchy_form();
        let e0 = CauchyData {
            u0: DVector::from_fn(8, |i, _| if i == 2 { 1.0 } else { 0.0 }),
            u1: DVector::zeros(8),
        };
        let e1 = CauchyData {
            u0: DVector::zeros(8),
            u1: DVector::from_fn(8, |i, _| if i == 2 { 1.0 } else { 0.0 }),
        };
        assert_relative_eq!(
            form.apply(&e0.stacked(), &e1.stacked()),
            model.spacing(),
            epsilon = 1e-14
        );
        assert_eq!(form.apply(&e0.stacked(), &e0.stacked()), 0.0);
        let other = CauchyData {
            u0: DVector::from_element(8, 0.3),
            u1: DVector::zeros(8),
        };
        assert_eq!(form.apply(&e0.stacked(), &other.stacked()), 0.0);
    }

    #[test]
    fn energy_gram_dominates_with_unit_potential() {
        let model = unit_model(16);
        let energy = model.energy_gram().unwrap();
        let pol = energy.polarizator().unwrap();
        // |R| = ½ A^{-1/2} ⊕ ½ A^{-1/2}; its norm is ½ at λ₀ = 1
        assert_relative_eq!(pol.mu_norm(), 0.5, epsilon = 1e-10);
        let expected_r = linalg::block2x2(
            &DMatrix::zeros(16, 16),
            &(model.a_power(-1.0) * 0.5),
            &(DMatrix::identity(16, 16) * -0.5),
            &DMatrix::zeros(16, 16),
        );
        assert!(linalg::relative_frobenius_diff(pol.matrix(), &expected_r) < 1e-10);
        let expected_abs =
            linalg::block_diag2(&(model.a_power(-0.5) * 0.5), &(model.a_power(-0.5) * 0.5));
        assert!(linalg::relative_frobenius_diff(pol.absolute(), &expected_abs) < 1e-10);
    }

    #[test]
    fn sub_unit_potential_fails_domination() {
        let model = LatticeModel::new(8, 1.0, Potential::constant(0.5)).unwrap();
        assert!(matches!(
            model.energy_gram(),
            Err(Error::DominationFails { .. })
        ));
    }

    #[test]
    fn energy_of_eigenmode() {
        let model = unit_model(16);
        let k = 3;
        let data = CauchyData {
            u0: model.eigenvector(k),
            u1: DVector::zeros(16),
        };
        let energy = model.energy_gram().unwrap();
        let value = energy.norm_squared(&data.stacked());
        assert_relative_eq!(
            value,
            model.spacing() * model.eigenvalues()[k],
            epsilon = 1e-10
        );
    }

    #[test]
    fn vacuum_is_pure_and_purifies_the_energy_product() {
        let model = unit_model(16);
        let vacuum = model.ultrastatic_vacuum_gram().unwrap();
        assert_eq!(
            vacuum.classify().unwrap().tag,
            crate::symplectic::StateTag::Pure
        );
        let purified = model.energy_gram().unwrap().purify().unwrap();
        assert!(linalg::relative_frobenius_diff(purified.gram(), vacuum.gram()) < 1e-9);
    }

    #[test]
    fn vacuum_value_on_mode_pairs() {
        let model = unit_model(16);
        let vacuum = model.ultrastatic_vacuum_gram().unwrap();
        let (a, b) = (0.8, -1.3);
        let k = 4;
        let lambda = model.eigenvalues()[k];
        let data = CauchyData {
            u0: model.eigenvector(k) * a,
            u1: model.eigenvector(k) * b,
        };
        let expected = 0.5 * model.spacing() * (lambda.sqrt() * a * a + b * b / lambda.sqrt());
        assert_relative_eq!(
            vacuum.norm_squared(&data.stacked()),
            expected,
            epsilon = 1e-10
        );
    }

    #[test]
    fn evolution_at_zero_duration_is_identity() {
        let model = unit_model(8);
        let t = model.evolution_matrix(0.0, 0.0).unwrap();
        assert_relative_eq!(t, DMatrix::identity(16, 16), epsilon = 1e-14);
    }

    #[test]
    fn eigenmode_oscillates_at_its_frequency() {
        let model = unit_model(16);
        let k = 6;
        let lambda = model.eigenvalues()[k];
        let data = CauchyData {
            u0: model.eigenvector(k),
            u1: DVector::zeros(16),
        };
        let t = 0.73;
        let evolved = model.evolve(0.0, t, &data).unwrap();
        let expected = model.eigenvector(k) * (t * lambda.sqrt()).cos();
        assert!((evolved.u0 - expected).norm() < 1e-10);
    }

    #[test]
    fn zero_data_stays_zero() {
        let model = unit_model(8);
        let evolved = model.evolve(0.0, 2.0, &CauchyData::zero(8)).unwrap();
        assert_eq!(evolved.u0.norm(), 0.0);
        assert_eq!(evolved.u1.norm(), 0.0);
    }

    #[test]
    fn evolution_is_symplectic_and_energy_preserving() {
        let model = unit_model(16);
        let form = model.cauchy_form();
        let t = model.evolution_matrix(0.0, 1.7).unwrap();
        assert!(form.symplectomorphism_residual(&t) < 1e-10);
        let energy = model.energy_gram().unwrap();
        let data = DVector::from_fn(32, |i, _| ((i * 37 % 11) as f64 - 5.0) / 7.0);
        let moved = &t * &data;
        assert_relative_eq!(
            energy.norm_squared(&moved),
            energy.norm_squared(&data),
            max_relative = 1e-10
        );
    }

    #[test]
    fn mode_restriction_is_a_rescaled_rotation() {
        let model = unit_model(12);
        let k = 4;
        let lambda = model.eigenvalues()[k];
        let omega = lambda.sqrt();
        let t = 0.9;
        let matrix = model.evolution_matrix(0.0, t).unwrap();
        let e_k = model.eigenvector(k);
        // coordinates (√ω u₀ᵏ, u₁ᵏ/√ω) rotate by angle ωt
        let data = CauchyData {
            u0: e_k.clone() * (1.0 / omega.sqrt()),
            u1: DVector::zeros(12),
        };
        let moved = CauchyData::from_stacked(&(&matrix * data.stacked()));
        let c0 = e_k.dot(&moved.u0) * omega.sqrt();
        let c1 = e_k.dot(&moved.u1) / omega.sqrt();
        assert_relative_eq!(c0, (omega * t).cos(), epsilon = 1e-10);
        assert_relative_eq!(c1, -(omega * t).sin(), epsilon = 1e-10);
    }

    #[test]
    fn piecewise_evolution_is_a_symplectic_composition() {
        let model = LatticeModel::new(
            12,
            1.0,
            Potential::piecewise(vec![(0.0, vec![1.0]), (0.8, vec![4.0]), (1.3, vec![2.0])]),
        )
        .unwrap();
        let form = model.cauchy_form();
        let full = model.evolution_matrix(0.0, 2.0).unwrap();
        assert!(form.symplectomorphism_residual(&full) < 1e-10);
        let first = model.evolution_matrix(0.0, 1.1).unwrap();
        let second = model.evolution_matrix(1.1, 2.0).unwrap();
        assert!(linalg::relative_frobenius_diff(&(second * first), &full) < 1e-10);
    }

    #[test]
    fn evolution_before_the_first_piece_is_undefined() {
        let model =
            LatticeModel::new(8, 1.0, Potential::piecewise(vec![(0.0, vec![1.0])])).unwrap();
        assert!(matches!(
            model.evolve(-1.0, 1.0, &CauchyData::zero(8)),
            Err(Error::PotentialUndefined(_))
        ));
    }

    #[test]
    fn energy_constants_are_unit_for_constant_potential() {
        let model = unit_model(16);
        let region: Vec<usize> = (3..9).collect();
        let (c1, c2) = model.energy_estimate_constants(0.0, 1.3, &region).unwrap();
        assert_relative_eq!(c1, 1.0, epsilon = 1e-10);
        assert_relative_eq!(c2, 1.0, epsilon = 1e-10);
        let (c1, c2) = model.energy_estimate_constants(0.5, 0.5, &region).unwrap();
        assert_relative_eq!(c1, 1.0, epsilon = 1e-12);
        assert_relative_eq!(c2, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn energy_constants_respect_the_potential_sandwich() {
        // step from 1 to 4: per-mode frequencies change by at most a factor
        // 4, so the energy ratio stays within [¼, 4]
        let model = LatticeModel::new(
            16,
            1.0,
            Potential::piecewise(vec![(0.0, vec![1.0]), (0.4, vec![4.0])]),
        )
        .unwrap();
        let region: Vec<usize> = (0..5).collect();
        let (c1, c2) = model.energy_estimate_constants(0.0, 1.0, &region).unwrap();
        assert!(c2 <= 4.0 + 1e-9, "c2 = {c2}");
        assert!(c1 >= 0.25 - 1e-9, "c1 = {c1}");
        assert!(c1 <= c2);
    }

    #[test]
    fn empty_region_is_rejected() {
        let model = unit_model(8);
        assert!(matches!(
            model.energy_estimate_constants(0.0, 1.0, &[]),
            Err(Error::EmptyRegion)
        ));
    }

    #[test]
    fn multiplier_bound_of_unit_cutoff_is_one() {
        let model = unit_model(12);
        let chi = vec![1.0; 12];
        for m in [-1.0, 0.0, 0.5, 2.0] {
            assert_relative_eq!(model.multiplier_bound(&chi, m), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn multiplier_bound_at_order_zero_is_the_sup() {
        let model = unit_model(12);
        let chi = model.raised_cosine_cutoff(&[4, 5], 0.2);
        assert_relative_eq!(
            model.multiplier_bound(&chi, 0.0),
            chi.iter().cloned().fold(0.0, f64::max),
            epsilon = 1e-12
        );
    }

    #[test]
    fn multiplier_bounds_interpolate() {
        // c_m ≤ c_{2k}^{m/2k} c_0^{1-m/2k} via the three-line estimate
        let model = unit_model(16);
        let chi = model.raised_cosine_cutoff(&[6, 7, 8], 0.15);
        let k = 2.0;
        let c0 = model.multiplier_bound(&chi, 0.0);
        let c2k = model.multiplier_bound(&chi, 2.0 * k);
        for m in [0.5, 1.0, 2.0, 3.0] {
            let cm = model.multiplier_bound(&chi, m);
            let bound = c2k.powf(m / (2.0 * k)) * c0.powf(1.0 - m / (2.0 * k));
            assert!(
                cm <= bound + 1e-9,
                "c_{m} = {cm} exceeds interpolated bound {bound}"
            );
        }
    }

    #[test]
    fn energy_density_sums_to_the_energy_product() {
        let model = unit_model(16);
        let data = CauchyData {
            u0: DVector::from_fn(16, |i, _| ((i % 5) as f64 - 2.0) / 3.0),
            u1: DVector::from_fn(16, |i, _| ((i % 7) as f64 - 3.0) / 4.0),
        };
        let energy = model.energy_gram().unwrap();
        let total: f64 = model.energy_density(&data).iter().sum();
        assert_relative_eq!(total, energy.norm_squared(&data.stacked()), epsilon = 1e-10);
    }

    #[test]
    fn cutoff_continuity_with_constant_potential_stays_bounded_by_one() {
        let model = unit_model(24);
        let region: Vec<usize> = (6..14).collect();
        let chi = vec![1.0; 24];
        let report = sobolev_continuity_report(
            &model,
            0.0,
            1.1,
            &[0.0, 0.25, 0.5, 0.75, 1.0],
            &region,
            Some(&chi),
        )
        .unwrap();
        assert!((report.v - 1.0).abs() < 1e-9);
        for record in &report.records {
            assert!(record.v_norm <= 1.0 + 1e-9);
            assert!(record.w_norm <= 1.0 + 1e-9);
        }
        assert!(report.max_identity_rel_err < 1e-9);
    }

    #[test]
    fn cutoff_continuity_bound_holds_for_piecewise_potential() {
        let model = LatticeModel::new(
            24,
            1.0,
            Potential::piecewise(vec![(0.0, vec![1.0]), (0.5, vec![9.0])]),
        )
        .unwrap();
        let region: Vec<usize> = (8..14).collect();
        let report = sobolev_continuity_report(
            &model,
            0.0,
            1.2,
            &[0.0, 0.25, 0.5, 0.75, 1.0],
            &region,
            None,
        )
        .unwrap();
        assert!(
            report.max_violation <= 1e-8,
            "violation {}",
            report.max_violation
        );
        assert!(report.max_identity_rel_err < 1e-9);
        assert!(report.records.iter().any(|r| r.hadamard_point));
    }
}
