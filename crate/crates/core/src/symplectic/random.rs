use nalgebra::{Complex, DMatrix};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{DominatingProduct, SymplecticForm};
use crate::linalg;

/// Deterministic test-instance generator on the canonical form of R^{2n}:
/// G = ½ SᵀS + mix · P,
/// with S a random symplectic matrix whose condition number is controlled
/// by `squeeze` (S = O₁ diag(D, D⁻¹) O₂ with orthogonal-symplectic O_i and
/// log-uniform D in [squeeze^{-1/2}, squeeze^{1/2}]) and P a random
/// positive semidefinite matrix of unit operator norm. The ½ SᵀS part is a
/// transported canonical pure product, and enlarging a dominating product
/// keeps it dominating, so construction never fails.
pub fn random_instance(seed: u64, n: usize, squeeze: f64, mix: f64) -> DominatingProduct {
    assert!(mix >= 0.0, "mix must be nonnegative");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = random_symplectic_from(&mut rng, n, squeeze);
    let mut gram = (s.transpose() * &s) * 0.5;

    if mix > 0.0 {
        let b = gaussian_matrix(&mut rng, 2 * n, 2 * n);
        let p = b.transpose() * &b;
        let norm = linalg::operator_norm(&p);
        if norm > 0.0 {
            gram += p * (mix / norm);
        }
    }

    DominatingProduct::new(gram, SymplecticForm::canonical(n))
        .expect("enlarging a pure product keeps it dominating")
}

/// Deterministic random symplectic matrix for the canonical form on R^{2n},
/// with condition number bounded by `squeeze`.
pub fn random_symplectic(seed: u64, n: usize, squeeze: f64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_symplectic_from(&mut rng, n, squeeze)
}

fn random_symplectic_from(rng: &mut ChaCha8Rng, n: usize, squeeze: f64) -> DMatrix<f64> {
    assert!(n >= 1, "need at least one mode");
    assert!(squeeze >= 1.0, "squeeze is a condition-number bound, >= 1");
    let o1 = random_orthogonal_symplectic(rng, n);
    let o2 = random_orthogonal_symplectic(rng, n);
    let half_log = 0.5 * squeeze.ln();
    let mut d = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        let t: f64 = rng.random::<f64>() * 2.0 - 1.0;
        let scale = (t * half_log).exp();
        d[(i, i)] = scale;
        d[(n + i, n + i)] = 1.0 / scale;
    }
    &o1 * d * &o2
}

/// Orthogonal symplectic matrix [[X, -Y], [Y, X]] with X + iY unitary,
/// drawn from the QR factor of a complex Gaussian matrix.
fn random_orthogonal_symplectic(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let z = DMatrix::from_fn(n, n, |_, _| {
        Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let q = z.qr().q();
    let x = q.map(|c| c.re);
    let y = q.map(|c| c.im);
    linalg::block2x2(&x, &(-&y), &y, &x)
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

#[cfg(test)]
mod tests {
    use super::super::StateTag;
    use super::*;

    #[test]
    fn zero_mix_is_pure() {
        for seed in 0..8 {
            let product = random_instance(seed, 3, 4.0, 0.0);
            assert_eq!(product.classify().unwrap().tag, StateTag::Pure);
        }
    }

    #[test]
    fn generic_mix_is_primary_not_pure() {
        for seed in 0..16 {
            let product = random_instance(seed, 3, 4.0, 0.3);
            assert_eq!(product.classify().unwrap().tag, StateTag::PrimaryNotPure);
        }
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let a = random_instance(42, 4, 6.0, 0.5);
        let b = random_instance(42, 4, 6.0, 0.5);
        assert_eq!(a.gram(), b.gram());
    }

    #[test]
    fn transported_factor_is_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let o = random_orthogonal_symplectic(&mut rng, 3);
        let form = SymplecticForm::canonical(3);
        assert!(form.symplectomorphism_residual(&o) < 1e-12);
        // orthogonality too
        let gram = o.transpose() * &o;
        assert!((gram - DMatrix::identity(6, 6)).norm() < 1e-12);
    }
}
