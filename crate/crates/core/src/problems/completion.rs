//! `f(X, Y) = ‖𝒜 ⊙ (XYᵀ − M★)‖_F² / ‖𝒜‖_F²` with a binary mask `𝒜`.

use rand_distr::{Distribution, Uniform};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::random::{gaussian_matrix, seeded_rng, uniform_matrix};

/// Entries with a `Unif(0, 1)` draw below this are observed.
pub const OBSERVE_PROB: f64 = 0.3;

#[derive(Clone, Debug)]
pub struct CompletionProblem {
    pub mask: DenseMatrix,
    pub target: DenseMatrix,
    /// Ground-truth factors, `M★ = U★V★ᵀ`.
    pub u_star: DenseMatrix,
    pub v_star: DenseMatrix,
    observed: f64,
}

impl CompletionProblem {
    /// Returns the instance and `(X₀, Y₀) ~ Unif(−1, 1)`.
    pub fn make(m: usize, n: usize, rank: usize, seed: u64) -> Result<(Self, DenseMatrix, DenseMatrix)> {
        if [m, n, rank].contains(&0) {
            return Err(Error::InvalidArgument("completion dims must be positive".into()));
        }
        let mut rng = seeded_rng(seed);
        let u = gaussian_matrix(m, rank, &mut rng);
        let v = gaussian_matrix(n, rank, &mut rng);
        let unif = Uniform::new(0.0, 1.0).expect("valid range");
        let mask = DenseMatrix::from_fn(m, n, |_, _| if unif.sample(&mut rng) < OBSERVE_PROB { 1.0 } else { 0.0 });
        let x0 = uniform_matrix(m, rank, -1.0, 1.0, &mut rng);
        let y0 = uniform_matrix(n, rank, -1.0, 1.0, &mut rng);
        Ok((Self::from_data(mask, u, v)?, x0, y0))
    }

    pub fn from_data(mask: DenseMatrix, u_star: DenseMatrix, v_star: DenseMatrix) -> Result<Self> {
        if mask.shape() != (u_star.rows(), v_star.rows()) || u_star.cols() != v_star.cols() {
            return Err(Error::DimensionMismatch("mask must be m×n with factors m×r, n×r".into()));
        }
        if mask.as_slice().iter().any(|&v| v != 0.0 && v != 1.0) {
            return Err(Error::InvalidArgument("mask entries must be 0 or 1".into()));
        }
        let observed = mask.as_slice().iter().sum::<f64>();
        if observed == 0.0 {
            return Err(Error::InvalidArgument("mask observes no entries".into()));
        }
        let target = u_star.matmul_t(&v_star);
        Ok(Self { mask, target, u_star, v_star, observed })
    }

    /// `‖𝒜‖_F²`.
    pub fn observed(&self) -> f64 {
        self.observed
    }

    /// `𝒜 ⊙ (XYᵀ − M★)`.
    pub fn residual(&self, x: &DenseMatrix, y: &DenseMatrix) -> DenseMatrix {
        let mut r = x.matmul_t(y);
        r -= &self.target;
        r.hadamard(&self.mask)
    }

    pub fn loss(&self, x: &DenseMatrix, y: &DenseMatrix) -> f64 {
        self.residual(x, y).frobenius_norm().powi(2) / self.observed
    }

    /// `(∇_X, ∇_Y) = (2RY, 2RᵀX) / ‖𝒜‖_F²`.
    pub fn grads(&self, x: &DenseMatrix, y: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
        let r = self.residual(x, y);
        let s = 2.0 / self.observed;
        (r.matmul(y).scaled(s), r.t_matmul(x).scaled(s))
    }

    pub fn grad_x(&self, x: &DenseMatrix, y: &DenseMatrix) -> DenseMatrix {
        self.residual(x, y).matmul(y).scaled(2.0 / self.observed)
    }

    pub fn grad_y(&self, x: &DenseMatrix, y: &DenseMatrix) -> DenseMatrix {
        self.residual(x, y).t_matmul(x).scaled(2.0 / self.observed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_truth_is_optimal() {
        let (p, _, _) = CompletionProblem::make(12, 8, 2, 0).unwrap();
        let (u, v) = (p.u_star.clone(), p.v_star.clone());
        assert!(p.loss(&u, &v) < 1e-28);
        let (gx, gy) = p.grads(&u, &v);
        assert!(gx.max_abs() < 1e-13 && gy.max_abs() < 1e-13);
    }

    #[test]
    fn full_mask_is_mean_square() {
        let u = DenseMatrix::from_fn(4, 2, |i, j| (i + j) as f64);
        let v = DenseMatrix::from_fn(3, 2, |i, j| i as f64 - j as f64);
        let p = CompletionProblem::from_data(DenseMatrix::from_fn(4, 3, |_, _| 1.0), u, v).unwrap();
        let x = DenseMatrix::from_fn(4, 2, |i, _| i as f64 * 0.5);
        let y = DenseMatrix::from_fn(3, 2, |_, j| j as f64);
        let want = (&x.matmul_t(&y) - &p.target).frobenius_norm().powi(2) / 12.0;
        assert!((p.loss(&x, &y) - want).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_masks() {
        let u = DenseMatrix::identity(2);
        assert!(CompletionProblem::from_data(DenseMatrix::zeros(2, 2), u.clone(), u.clone()).is_err());
        assert!(CompletionProblem::from_data(DenseMatrix::identity(2).scaled(0.5), u.clone(), u).is_err());
    }
}
