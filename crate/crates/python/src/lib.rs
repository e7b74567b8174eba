//! Python bindings for the main symplecta types and operations.
//!
//! Matrices cross the boundary as row-major nested lists of floats;
//! vectors as flat lists. Build with `cargo build -p symplecta-py` and
//! import the produced cdylib as `symplecta_py`.

use nalgebra::{DMatrix, DVector};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use symplecta::continuity;
use symplecta::kg;
use symplecta::quasifree;
use symplecta::report;
use symplecta::symplectic;

fn to_matrix(rows: Vec<Vec<f64>>) -> PyResult<DMatrix<f64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if nrows == 0 || ncols == 0 {
        return Err(PyValueError::new_err("matrix must be nonempty"));
    }
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(PyValueError::new_err("matrix rows have unequal lengths"));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn from_matrix(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn to_vector(v: Vec<f64>) -> DVector<f64> {
    DVector::from_vec(v)
}

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A nondegenerate antisymmetric bilinear form on R^{2n}.
#[pyclass(frozen)]
struct SymplecticForm {
    inner: symplectic::SymplecticForm,
}

#[pymethods]
impl SymplecticForm {
    #[new]
    fn new(matrix: Vec<Vec<f64>>) -> PyResult<Self> {
        let j = to_matrix(matrix)?;
        Ok(SymplecticForm {
            inner: symplectic::validate_symplectic(j).map_err(err)?,
        })
    }

    #[staticmethod]
    fn canonical(modes: usize) -> Self {
        SymplecticForm {
            inner: symplectic::SymplecticForm::canonical(modes),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn matrix(&self) -> Vec<Vec<f64>> {
        from_matrix(self.inner.matrix())
    }

    fn apply(&self, x: Vec<f64>, y: Vec<f64>) -> f64 {
        self.inner.apply(&to_vector(x), &to_vector(y))
    }

    /// The symplectic adjoint W of V (σ(Vx, y) = σ(x, Wy)).
    fn adjoint_of(&self, v: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
        let w = self.inner.adjoint_of(&to_matrix(v)?).map_err(err)?;
        Ok(from_matrix(&w))
    }

    fn symplectomorphism_residual(&self, t: Vec<Vec<f64>>) -> PyResult<f64> {
        Ok(self.inner.symplectomorphism_residual(&to_matrix(t)?))
    }
}

/// A scalar product dominating a symplectic form, with the calculus built
/// on its polarizator.
#[pyclass(frozen)]
struct DominatingProduct {
    inner: symplectic::DominatingProduct,
}

#[pymethods]
impl DominatingProduct {
    #[new]
    fn new(gram: Vec<Vec<f64>>, form: &SymplecticForm) -> PyResult<Self> {
        Ok(DominatingProduct {
            inner: symplectic::DominatingProduct::new(to_matrix(gram)?, form.inner.clone())
                .map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn gram(&self) -> Vec<Vec<f64>> {
        from_matrix(self.inner.gram())
    }

    fn apply(&self, x: Vec<f64>, y: Vec<f64>) -> f64 {
        self.inner.apply(&to_vector(x), &to_vector(y))
    }

    /// (tag, smallest |R|-eigenvalue, anti-involution defect)
    fn classify(&self) -> PyResult<(String, f64, f64)> {
        let class = self.inner.classify().map_err(err)?;
        Ok((
            class.tag.as_str().to_string(),
            class.min_abs_eigenvalue,
            class.anti_involution_defect,
        ))
    }

    /// Polarizator matrix R with σ(x, y) = 2 μ(x, R y).
    fn polarizator(&self) -> PyResult<Vec<Vec<f64>>> {
        Ok(from_matrix(self.inner.polarizator().map_err(err)?.matrix()))
    }

    /// Spectrum of |R| in the μ-metric, descending.
    fn spectrum(&self) -> PyResult<Vec<f64>> {
        Ok(self.inner.polarizator().map_err(err)?.spectrum().to_vec())
    }

    /// Gram matrix of μ_s = μ(·, |R|ˢ ·).
    fn scaled_gram(&self, s: f64) -> PyResult<Vec<Vec<f64>>> {
        Ok(from_matrix(&self.inner.scaled_gram(s).map_err(err)?))
    }

    fn purify(&self) -> PyResult<DominatingProduct> {
        Ok(DominatingProduct {
            inner: self.inner.purify().map_err(err)?,
        })
    }
}

/// (dominates, margin) for the bound |σ(x,y)|² ≤ 4 μ(x,x) μ(y,y).
#[pyfunction]
fn check_domination(gram: Vec<Vec<f64>>, form: &SymplecticForm) -> PyResult<(bool, f64)> {
    let check = symplectic::check_domination(
        &to_matrix(gram)?,
        &form.inner,
        &symplectic::Tolerances::default(),
    )
    .map_err(err)?;
    Ok((check.dominates, check.margin))
}

/// Deterministic random dominating product on the canonical form.
#[pyfunction]
#[pyo3(signature = (seed, modes, squeeze=4.0, mix=0.3))]
fn random_instance(seed: u64, modes: usize, squeeze: f64, mix: f64) -> DominatingProduct {
    DominatingProduct {
        inner: symplectic::random_instance(seed, modes, squeeze, mix),
    }
}

/// Worst saturation defect over seeded sample directions; zero exactly on
/// pure products.
#[pyfunction]
#[pyo3(signature = (product, sample_count=64))]
fn saturation_defect(product: &DominatingProduct, sample_count: usize) -> PyResult<f64> {
    symplectic::saturation_defect(&product.inner, sample_count).map_err(err)
}

/// Operator norm of V in the μ_s metric.
#[pyfunction]
fn mu_s_norm(v: Vec<Vec<f64>>, product: &DominatingProduct, s: f64) -> PyResult<f64> {
    continuity::mu_s_norm(&to_matrix(v)?, &product.inner, s).map_err(err)
}

/// Verify the interpolated norm bounds for the pair (V, adjoint of V).
/// Returns (v, w, max_violation, rows) with one (s, v_norm, v_bound,
/// w_norm, w_bound) row per grid point.
#[pyfunction]
fn verify_adjoint_continuity(
    v: Vec<Vec<f64>>,
    product: &DominatingProduct,
    s_grid: Vec<f64>,
) -> PyResult<(f64, f64, f64, Vec<(f64, f64, f64, f64, f64)>)> {
    let pair =
        continuity::AdjointPair::from_map(to_matrix(v)?, product.inner.form()).map_err(err)?;
    let report =
        continuity::verify_adjoint_continuity(&pair, &product.inner, &s_grid).map_err(err)?;
    let rows = report
        .records
        .iter()
        .map(|r| (r.s, r.v_norm, r.v_bound, r.w_norm, r.w_bound))
        .collect();
    Ok((report.v, report.w, report.max_violation, rows))
}

/// Three-line bound ‖XᵗQYᵗ‖ ≤ ‖XQY‖ᵗ ‖Q‖^{1-t}. Returns (t_norm, q_norm,
/// max_violation).
#[pyfunction]
fn check_interpolation(
    x: Vec<Vec<f64>>,
    y: Vec<Vec<f64>>,
    q: Vec<Vec<f64>>,
    tau_grid: Vec<f64>,
) -> PyResult<(f64, f64, f64)> {
    let report =
        continuity::check_interpolation(&to_matrix(x)?, &to_matrix(y)?, &to_matrix(q)?, &tau_grid)
            .map_err(err)?;
    Ok((report.t_norm, report.q_norm, report.max_violation))
}

/// 1-D periodic-lattice Klein-Gordon model.
#[pyclass(frozen)]
struct LatticeModel {
    inner: kg::LatticeModel,
}

#[pymethods]
impl LatticeModel {
    /// Constant-potential lattice (r per site).
    #[new]
    #[pyo3(signature = (sites, spacing=1.0, potential=1.0))]
    fn new(sites: usize, spacing: f64, potential: f64) -> PyResult<Self> {
        Ok(LatticeModel {
            inner: kg::LatticeModel::new(sites, spacing, kg::Potential::constant(potential))
                .map_err(err)?,
        })
    }

    /// Piecewise-constant-in-time potential: [(t_start, level), ...].
    #[staticmethod]
    #[pyo3(signature = (sites, spacing, pieces))]
    fn piecewise(sites: usize, spacing: f64, pieces: Vec<(f64, f64)>) -> PyResult<Self> {
        let pieces = pieces.into_iter().map(|(t, r)| (t, vec![r])).collect();
        Ok(LatticeModel {
            inner: kg::LatticeModel::new(sites, spacing, kg::Potential::piecewise(pieces))
                .map_err(err)?,
        })
    }

    #[getter]
    fn sites(&self) -> usize {
        self.inner.sites()
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues().iter().copied().collect()
    }

    fn sobolev_gram(&self, order: f64) -> Vec<Vec<f64>> {
        from_matrix(&self.inner.sobolev_gram(order).gram)
    }

    fn cauchy_form(&self) -> SymplecticForm {
        SymplecticForm {
            inner: self.inner.cauchy_form(),
        }
    }

    fn energy_gram(&self) -> PyResult<DominatingProduct> {
        Ok(DominatingProduct {
            inner: self.inner.energy_gram().map_err(err)?,
        })
    }

    fn ultrastatic_vacuum_gram(&self) -> PyResult<DominatingProduct> {
        Ok(DominatingProduct {
            inner: self.inner.ultrastatic_vacuum_gram().map_err(err)?,
        })
    }

    /// Propagate Cauchy data (u0, u1) from t0 to t1.
    fn evolve(
        &self,
        t0: f64,
        t1: f64,
        u0: Vec<f64>,
        u1: Vec<f64>,
    ) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let data = kg::CauchyData {
            u0: to_vector(u0),
            u1: to_vector(u1),
        };
        let out = self.inner.evolve(t0, t1, &data).map_err(err)?;
        Ok((
            out.u0.iter().copied().collect(),
            out.u1.iter().copied().collect(),
        ))
    }

    fn evolution_matrix(&self, t0: f64, t1: f64) -> PyResult<Vec<Vec<f64>>> {
        Ok(from_matrix(
            &self.inner.evolution_matrix(t0, t1).map_err(err)?,
        ))
    }

    /// (c1, c2) energy-ratio extremes over data supported in `region`.
    fn energy_estimate_constants(
        &self,
        t0: f64,
        t1: f64,
        region: Vec<usize>,
    ) -> PyResult<(f64, f64)> {
        self.inner
            .energy_estimate_constants(t0, t1, &region)
            .map_err(err)
    }

    fn multiplier_bound(&self, chi: Vec<f64>, order: f64) -> f64 {
        self.inner.multiplier_bound(&chi, order)
    }
}

/// Quasifree (Gaussian) state over a dominating product.
#[pyclass(frozen)]
struct QuasifreeState {
    inner: quasifree::QuasifreeState,
}

#[pymethods]
impl QuasifreeState {
    #[new]
    fn new(product: &DominatingProduct) -> Self {
        QuasifreeState {
            inner: quasifree::QuasifreeState::new(product.inner.clone()),
        }
    }

    fn weyl_value(&self, phi: Vec<f64>) -> f64 {
        self.inner.weyl_value(&to_vector(phi))
    }

    /// ω(W(tφ) W(τψ)) as (re, im).
    fn weyl_product_value(&self, phi: Vec<f64>, psi: Vec<f64>, t: f64, tau: f64) -> (f64, f64) {
        let value = self
            .inner
            .weyl_product_value(&to_vector(phi), &to_vector(psi), t, tau);
        (value.re, value.im)
    }

    #[pyo3(signature = (phi, psi, step=1e-3))]
    fn recover_mu(&self, phi: Vec<f64>, psi: Vec<f64>, step: f64) -> PyResult<f64> {
        self.inner
            .recover_mu(&to_vector(phi), &to_vector(psi), step)
            .map_err(err)
    }

    #[pyo3(signature = (phi, psi, step=1e-3))]
    fn recover_sigma(&self, phi: Vec<f64>, psi: Vec<f64>, step: f64) -> PyResult<f64> {
        self.inner
            .recover_sigma(&to_vector(phi), &to_vector(psi), step)
            .map_err(err)
    }

    /// Complex structure of the one-particle realization (pure states).
    fn complex_structure(&self) -> PyResult<Vec<Vec<f64>>> {
        let structure = self.inner.one_particle().map_err(err)?;
        Ok(from_matrix(structure.complex_structure()))
    }
}

/// Run a report suite from a JSON config string; returns (summary block,
/// JSON report).
#[pyfunction]
#[pyo3(signature = (config_json="{}"))]
fn run_suite(config_json: &str) -> PyResult<(String, String)> {
    let config = report::load_config_str(config_json).map_err(err)?;
    let output = report::run_suite(&config).map_err(err)?;
    let bytes = report::emit_report(&output.report, report::OutputFormat::Json).map_err(err)?;
    Ok((
        output.report.summary_block(),
        String::from_utf8(bytes).map_err(err)?,
    ))
}

#[pymodule]
fn symplecta_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<SymplecticForm>()?;
    m.add_class::<DominatingProduct>()?;
    m.add_class::<LatticeModel>()?;
    m.add_class::<QuasifreeState>()?;
    m.add_function(wrap_pyfunction!(check_domination, m)?)?;
    m.add_function(wrap_pyfunction!(random_instance, m)?)?;
    m.add_function(wrap_pyfunction!(saturation_defect, m)?)?;
    m.add_function(wrap_pyfunction!(mu_s_norm, m)?)?;
    m.add_function(wrap_pyfunction!(verify_adjoint_continuity, m)?)?;
    m.add_function(wrap_pyfunction!(check_interpolation, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
