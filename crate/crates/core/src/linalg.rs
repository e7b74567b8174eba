//! Dense linear-algebra helpers shared by every module: sorted symmetric
//! eigendecompositions, metric (Gram-weighted) orthonormalization, operator
//! norms, principal angles and nullspaces.
//!
//! Everything here works on `nalgebra` dynamic matrices with `f64` entries.
//! Exactness at desk scale is preferred over speed throughout: norms come
//! from full SVDs, never from power iteration.

use nalgebra::{Complex, DMatrix, DVector};

/// Symmetric eigendecomposition with eigenvalues sorted ascending.
///
/// Returns `(values, vectors)` with `vectors.column(i)` the eigenvector for
/// `values[i]`. The input is symmetrized first so callers can pass matrices
/// that are symmetric only up to rounding.
pub fn symmetric_eigen_sorted(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let sym = symmetrize(m);
    let eig = sym.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// (m + mᵀ)/2
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// (m - mᵀ)/2
pub fn antisymmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m - m.transpose()) * 0.5
}

/// Spectral calculus f(M) for symmetric M, applied through the sorted
/// eigendecomposition.
pub fn symmetric_function(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let (values, vectors) = symmetric_eigen_sorted(m);
    apply_spectrum(&values, &vectors, f)
}

/// Rebuild V f(Λ) Vᵀ from cached spectral data.
pub fn apply_spectrum(
    values: &DVector<f64>,
    vectors: &DMatrix<f64>,
    f: impl Fn(f64) -> f64,
) -> DMatrix<f64> {
    let scaled = DMatrix::from_fn(vectors.nrows(), vectors.ncols(), |i, j| {
        vectors[(i, j)] * f(values[j])
    });
    &scaled * vectors.transpose()
}

/// Operator 2-norm (largest singular value).
pub fn operator_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values()[0]
}

/// Singular values, descending.
pub fn singular_values(m: &DMatrix<f64>) -> DVector<f64> {
    m.clone().singular_values()
}

pub fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.norm()
}

/// ‖a - b‖_F / max(‖a‖_F, ‖b‖_F), with 0/0 = 0.
pub fn relative_frobenius_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let scale = frobenius(a).max(frobenius(b));
    if scale == 0.0 {
        0.0
    } else {
        frobenius(&(a - b)) / scale
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
pub fn cholesky_factor(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    symmetrize(m).cholesky().map(|c| c.l())
}

/// X ↦ Lᵀ X L⁻ᵀ, the change of frame that turns a G-self-adjointness
/// statement (G = L Lᵀ) into a Euclidean one.
pub fn whiten(l: &DMatrix<f64>, x: &DMatrix<f64>) -> DMatrix<f64> {
    let lt_x = l.transpose() * x;
    // solve Y Lᵀ = Lᵀ X  ⟺  L Yᵀ = (Lᵀ X)ᵀ
    let yt = l
        .solve_lower_triangular(&lt_x.transpose())
        .expect("triangular solve: factor is nonsingular");
    yt.transpose()
}

/// Inverse of [`whiten`]: X̂ ↦ L⁻ᵀ X̂ Lᵀ.
pub fn unwhiten(l: &DMatrix<f64>, x_hat: &DMatrix<f64>) -> DMatrix<f64> {
    let x_hat_lt = x_hat * l.transpose();
    l.transpose()
        .solve_upper_triangular(&x_hat_lt)
        .expect("triangular solve: factor is nonsingular")
}

/// Congruence reduction of a quadratic form: S ↦ L⁻¹ S L⁻ᵀ. With
/// S₀ = L Lᵀ this turns the generalized symmetric problem (S, S₀) into an
/// ordinary one.
pub fn whiten_form(l: &DMatrix<f64>, s: &DMatrix<f64>) -> DMatrix<f64> {
    let linv_s = l
        .solve_lower_triangular(s)
        .expect("triangular solve: factor is nonsingular");
    let out_t = l
        .solve_lower_triangular(&linv_s.transpose())
        .expect("triangular solve: factor is nonsingular");
    symmetrize(&out_t.transpose())
}

/// Operator norm of `v` as a map (R^d, gram) → (R^d, gram).
///
/// With gram = L Lᵀ this is the largest singular value of Lᵀ V L⁻ᵀ.
pub fn gram_operator_norm(v: &DMatrix<f64>, gram: &DMatrix<f64>) -> Option<f64> {
    let l = cholesky_factor(gram)?;
    Some(operator_norm(&whiten(&l, v)))
}

/// Eigendecomposition of a real skew matrix K through the Hermitian matrix
/// iK: returns the real eigenvalues λ of iK (in ± pairs) and the unitary
/// eigenvector frame. Spectral functions of |K| and of the polar isometry
/// are all diagonal in this one frame, so identities among them hold to
/// rounding regardless of spectral gaps.
pub fn skew_spectral(k: &DMatrix<f64>) -> (DVector<f64>, DMatrix<Complex<f64>>) {
    let n = k.nrows();
    let h = DMatrix::from_fn(n, n, |i, j| Complex::new(0.0, k[(i, j)]));
    let eig = h.symmetric_eigen();
    (eig.eigenvalues, eig.eigenvectors)
}

/// Real part of V diag(g(λ)) V* for a [`skew_spectral`] frame. The result
/// is real whenever g(-λ) = conj(g(λ)).
pub fn skew_spectral_function(
    eigenvalues: &DVector<f64>,
    eigenvectors: &DMatrix<Complex<f64>>,
    g: impl Fn(f64) -> Complex<f64>,
) -> DMatrix<f64> {
    let scaled = DMatrix::from_fn(eigenvectors.nrows(), eigenvectors.ncols(), |i, j| {
        eigenvectors[(i, j)] * g(eigenvalues[j])
    });
    (scaled * eigenvectors.adjoint()).map(|c| c.re)
}

/// Gram-weighted inner product xᵀ G y.
pub fn gram_dot(gram: &DMatrix<f64>, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    x.dot(&(gram * y))
}

/// Orthonormalize the columns of `basis` in the gram-metric (modified
/// Gram-Schmidt, two passes). Columns that collapse below `drop_tol` times
/// the largest original column norm are dropped.
pub fn gram_orthonormalize(
    basis: &DMatrix<f64>,
    gram: &DMatrix<f64>,
    drop_tol: f64,
) -> DMatrix<f64> {
    let n = basis.nrows();
    let mut kept: Vec<DVector<f64>> = Vec::with_capacity(basis.ncols());
    let mut max_norm: f64 = 0.0;
    for j in 0..basis.ncols() {
        let col = DVector::from(basis.column(j));
        max_norm = max_norm.max(gram_dot(gram, &col, &col).sqrt());
    }
    for j in 0..basis.ncols() {
        let mut v = DVector::from(basis.column(j));
        for _ in 0..2 {
            for q in &kept {
                let coeff = gram_dot(gram, q, &v);
                v -= q * coeff;
            }
        }
        let norm = gram_dot(gram, &v, &v).sqrt();
        if norm > drop_tol * max_norm.max(1.0) {
            kept.push(v / norm);
        }
    }
    let mut out = DMatrix::zeros(n, kept.len());
    for (j, q) in kept.iter().enumerate() {
        out.set_column(j, q);
    }
    out
}

/// Cosines of the principal angles between the column spans of `q1` and
/// `q2`, both assumed gram-orthonormal. Values are clamped to [0, 1] and
/// sorted descending.
pub fn principal_angle_cosines(
    q1: &DMatrix<f64>,
    q2: &DMatrix<f64>,
    gram: &DMatrix<f64>,
) -> Vec<f64> {
    if q1.ncols() == 0 || q2.ncols() == 0 {
        return Vec::new();
    }
    let overlap = q1.transpose() * gram * q2;
    singular_values(&overlap)
        .iter()
        .map(|s| s.clamp(0.0, 1.0))
        .collect()
}

/// Euclidean-orthonormal basis of the kernel of `m`, found through the
/// eigendecomposition of mᵀm. Eigenvalues below `rel_tol` times the largest
/// count as zero.
pub fn nullspace(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let gram = m.transpose() * m;
    let (values, vectors) = symmetric_eigen_sorted(&gram);
    let d = values.len();
    let max = values[d - 1].max(0.0);
    let cut = rel_tol * max;
    let kernel_dim = values.iter().filter(|&&v| v <= cut).count();
    let mut out = DMatrix::zeros(m.ncols(), kernel_dim);
    for j in 0..kernel_dim {
        out.set_column(j, &vectors.column(j));
    }
    out
}

/// 2x2-block assembly [[a, b], [c, d]]; all blocks must be square of equal
/// size.
pub fn block2x2(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    c: &DMatrix<f64>,
    d: &DMatrix<f64>,
) -> DMatrix<f64> {
    let n = a.nrows();
    assert!(
        [a, b, c, d]
            .iter()
            .all(|m| m.nrows() == n && m.ncols() == n),
        "block2x2 expects four equal square blocks"
    );
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((0, n), (n, n)).copy_from(b);
    out.view_mut((n, 0), (n, n)).copy_from(c);
    out.view_mut((n, n), (n, n)).copy_from(d);
    out
}

/// blockdiag(a, b) for square a, b of equal size.
pub fn block_diag2(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let z = DMatrix::zeros(n, n);
    block2x2(a, &z, &z, b)
}
