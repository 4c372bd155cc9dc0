//! Seeded matrix generators. All randomness flows through [`ChaCha8Rng`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::linalg::qr_householder;
use crate::matrix::DenseMatrix;

pub type Rng64 = ChaCha8Rng;

/// Name recorded in manifests and problem descriptors.
pub const GENERATOR_NAME: &str = "chacha8";

pub fn seeded_rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

/// Entries drawn from `Unif(lo, hi)`.
pub fn uniform_matrix(rows: usize, cols: usize, lo: f64, hi: f64, rng: &mut impl Rng) -> DenseMatrix {
    let dist = Uniform::new(lo, hi).expect("lo < hi");
    DenseMatrix::from_fn(rows, cols, |_, _| dist.sample(rng))
}

/// `rows × cols` (`rows ≥ cols`) with orthonormal columns, from the QR of a
/// Gaussian matrix.
pub fn random_orthonormal(rows: usize, cols: usize, rng: &mut impl Rng) -> DenseMatrix {
    assert!(rows >= cols, "random_orthonormal needs rows >= cols");
    qr_householder(&gaussian_matrix(rows, cols, rng)).expect("tall input").0
}

/// `k` values spaced geometrically from 1 down to `1/kappa`.
pub fn log_spaced_spectrum(k: usize, kappa: f64) -> Vec<f64> {
    if k == 1 {
        return vec![1.0];
    }
    (0..k).map(|i| kappa.powf(-(i as f64) / (k - 1) as f64)).collect()
}

/// `U diag(sigma) Vᵀ` with random orthonormal `U`, `V`; `sigma.len()` must be
/// `min(rows, cols)`.
pub fn matrix_with_spectrum(rows: usize, cols: usize, sigma: &[f64], rng: &mut impl Rng) -> DenseMatrix {
    let k = rows.min(cols);
    assert_eq!(sigma.len(), k, "spectrum length must be min(rows, cols)");
    let u = random_orthonormal(rows, k, rng);
    let v = random_orthonormal(cols, k, rng);
    let mut us = u;
    for i in 0..rows {
        for (j, s) in sigma.iter().enumerate() {
            us[(i, j)] *= s;
        }
    }
    us.matmul_t(&v)
}

/// Random matrix with condition number `kappa` and unit spectral norm.
pub fn matrix_with_condition(rows: usize, cols: usize, kappa: f64, rng: &mut impl Rng) -> DenseMatrix {
    matrix_with_spectrum(rows, cols, &log_spaced_spectrum(rows.min(cols), kappa), rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::svd;

    #[test]
    fn seeds_reproduce() {
        let a = gaussian_matrix(3, 2, &mut seeded_rng(7));
        let b = gaussian_matrix(3, 2, &mut seeded_rng(7));
        assert_eq!(a, b);
        assert_ne!(a, gaussian_matrix(3, 2, &mut seeded_rng(8)));
    }

    #[test]
    fn constructed_spectrum_is_recovered() {
        let a = matrix_with_condition(12, 7, 1e4, &mut seeded_rng(1));
        let s = svd(&a).unwrap().sigma;
        let want = log_spaced_spectrum(7, 1e4);
        for (x, y) in s.iter().zip(&want) {
            assert!((x - y).abs() <= 1e-12 * y.max(1e-4), "{x} vs {y}");
        }
    }
}
