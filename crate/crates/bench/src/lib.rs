//! Shared inputs for the benchmarks.

use polargrad::random::{gaussian_matrix, matrix_with_condition, seeded_rng};
use polargrad::DenseMatrix;

/// Shapes at desk scale and at the published scale of the quadratic problem.
pub const SHAPES: [(usize, usize); 3] = [(40, 25), (100, 20), (500, 100)];

pub fn conditioned(m: usize, n: usize, kappa: f64) -> DenseMatrix {
    matrix_with_condition(m, n, kappa, &mut seeded_rng(1))
}

pub fn gaussian(m: usize, n: usize, seed: u64) -> DenseMatrix {
    gaussian_matrix(m, n, &mut seeded_rng(seed))
}
