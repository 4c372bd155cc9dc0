//! Entrywise matrix logistic loss `Σ_{i,j} log(1 + exp(−C_ij (AXB)_ij))`.
//!
//! Labels are `{0, 1}` as generated; zero labels contribute a constant
//! `log 2` and no gradient. `signed_labels` remaps them to `{−1, +1}`.

use rand::Rng;
use rand_distr::{Distribution, Uniform};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::random::{gaussian_matrix, seeded_rng, uniform_matrix};

/// Gaussian draws above this become label 1.
pub const LABEL_THRESHOLD: f64 = 0.5;

#[derive(Clone, Debug)]
pub struct LogisticProblem {
    /// `N × m` features.
    pub a: DenseMatrix,
    /// `n × q`.
    pub b: DenseMatrix,
    /// `N × q` labels.
    pub c: DenseMatrix,
    pub batch_size: usize,
}

fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

impl LogisticProblem {
    /// Returns the instance and `X₀ ~ Unif(−1, 1)`.
    pub fn make(
        m: usize,
        n: usize,
        samples: usize,
        q: usize,
        batch_size: usize,
        seed: u64,
        signed_labels: bool,
    ) -> Result<(Self, DenseMatrix)> {
        if [m, n, samples, q, batch_size].contains(&0) {
            return Err(Error::InvalidArgument("logistic dims and batch size must be positive".into()));
        }
        if batch_size > samples {
            return Err(Error::InvalidArgument(format!("batch size {batch_size} exceeds N = {samples}")));
        }
        let mut rng = seeded_rng(seed);
        let a = gaussian_matrix(samples, m, &mut rng);
        let b = gaussian_matrix(n, q, &mut rng);
        let neg = if signed_labels { -1.0 } else { 0.0 };
        let c = gaussian_matrix(samples, q, &mut rng).map(|g| if g > LABEL_THRESHOLD { 1.0 } else { neg });
        let x0 = uniform_matrix(m, n, -1.0, 1.0, &mut rng);
        Ok((Self { a, b, c, batch_size }, x0))
    }

    pub fn from_data(a: DenseMatrix, b: DenseMatrix, c: DenseMatrix, batch_size: usize) -> Result<Self> {
        if c.shape() != (a.rows(), b.cols()) {
            return Err(Error::DimensionMismatch(format!(
                "labels must be {}x{}, got {:?}",
                a.rows(),
                b.cols(),
                c.shape()
            )));
        }
        if batch_size == 0 || batch_size > a.rows() {
            return Err(Error::InvalidArgument(format!("batch size must be in 1..={}", a.rows())));
        }
        Ok(Self { a, b, c, batch_size })
    }

    pub fn samples(&self) -> usize {
        self.a.rows()
    }

    /// `batch_size` row indices drawn uniformly with replacement.
    pub fn sample_batch(&self, rng: &mut impl Rng) -> Vec<usize> {
        let dist = Uniform::new(0, self.samples()).expect("N >= 1");
        (0..self.batch_size).map(|_| dist.sample(rng)).collect()
    }

    fn margins(&self, x: &DenseMatrix, rows: Option<&[usize]>) -> (DenseMatrix, DenseMatrix) {
        match rows {
            Some(idx) => {
                let a = self.a.select_rows(idx);
                (a.matmul(x).matmul(&self.b), self.c.select_rows(idx))
            }
            None => (self.a.matmul(x).matmul(&self.b), self.c.clone()),
        }
    }

    /// Loss over the given rows, or all rows for `None`.
    pub fn loss(&self, x: &DenseMatrix, rows: Option<&[usize]>) -> f64 {
        let (z, c) = self.margins(x, rows);
        z.as_slice().iter().zip(c.as_slice()).map(|(&z, &c)| softplus(-c * z)).sum()
    }

    /// `−A_Bᵀ (C ⊙ σ(−C ⊙ Z)) Bᵀ` over the given rows.
    pub fn grad(&self, x: &DenseMatrix, rows: Option<&[usize]>) -> DenseMatrix {
        let (z, c) = self.margins(x, rows);
        let w = z.zip_map(&c, |z, c| -c * sigmoid(-c * z));
        let a = match rows {
            Some(idx) => self.a.select_rows(idx),
            None => self.a.clone(),
        };
        a.t_matmul(&w).matmul_t(&self.b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_parameters_give_log_two_per_entry() {
        let (p, x0) = LogisticProblem::make(5, 3, 20, 4, 8, 1, false).unwrap();
        let x = DenseMatrix::zeros(x0.rows(), x0.cols());
        let batch = p.sample_batch(&mut seeded_rng(0));
        let want = (8 * 4) as f64 * 2f64.ln();
        assert!((p.loss(&x, Some(&batch)) - want).abs() < 1e-12);
    }

    #[test]
    fn zero_labels_give_zero_gradient() {
        let (mut p, x0) = LogisticProblem::make(5, 3, 20, 4, 8, 2, false).unwrap();
        p.c = DenseMatrix::zeros(20, 4);
        assert!(p.grad(&x0, None).is_zero());
        let want = 80.0 * 2f64.ln();
        assert!((p.loss(&x0, None) - want).abs() < 1e-12);
    }

    #[test]
    fn labels_are_binary() {
        let (p, _) = LogisticProblem::make(4, 2, 50, 6, 10, 3, false).unwrap();
        assert!(p.c.as_slice().iter().all(|&v| v == 0.0 || v == 1.0));
        let (p, _) = LogisticProblem::make(4, 2, 50, 6, 10, 3, true).unwrap();
        assert!(p.c.as_slice().iter().all(|&v| v == -1.0 || v == 1.0));
    }

    #[test]
    fn stable_at_extreme_margins() {
        assert_eq!(softplus(-800.0), 0.0);
        assert_eq!(softplus(800.0), 800.0);
        assert_eq!(sigmoid(-800.0), 0.0);
        assert_eq!(sigmoid(800.0), 1.0);
    }

    #[test]
    fn batch_too_large() {
        assert!(LogisticProblem::make(4, 2, 10, 3, 11, 0, false).is_err());
    }
}
