//! `f(X) = ½‖AXB − C‖_F²` with `A: p×m`, `X: m×n`, `B: n×q`, `C: p×q`.

use crate::error::{Error, Result};
use crate::linalg::{cond2_from_sigma, inverse, svd, DEFAULT_RANK_TOL};
use crate::matrix::DenseMatrix;
use crate::random::{gaussian_matrix, seeded_rng, uniform_matrix};

/// Seeds tried past the requested one when a Gram matrix is singular.
const MAX_RESEEDS: u64 = 16;

#[derive(Clone, Debug)]
pub struct QuadRegProblem {
    pub a: DenseMatrix,
    pub b: DenseMatrix,
    pub c: DenseMatrix,
    ata_inv: DenseMatrix,
    bbt_inv: DenseMatrix,
    x_star: DenseMatrix,
    f_star: f64,
    sigma_a: (f64, f64),
    sigma_b: (f64, f64),
    /// Seed actually used (differs from the requested one only after a reseed).
    pub seed: u64,
}

/// Condition numbers reported per step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadKappas {
    /// `κ₂(A)² κ₂(B)²`.
    pub kappa_h: f64,
    pub kappa_grad: Option<f64>,
    /// `None` when the residual vanishes.
    pub kappa_residual: Option<f64>,
}

impl QuadRegProblem {
    /// Gaussian `A`, `B`, `C`. Returns the instance and `X₀ ~ Unif(−1, 1)`.
    pub fn make(m: usize, n: usize, p: usize, q: usize, seed: u64) -> Result<(Self, DenseMatrix)> {
        if [m, n, p, q].contains(&0) {
            return Err(Error::InvalidArgument("quadratic dims must be positive".into()));
        }
        let mut last = Error::Singular;
        for s in seed..seed + MAX_RESEEDS {
            let mut rng = seeded_rng(s);
            let a = gaussian_matrix(p, m, &mut rng);
            let b = gaussian_matrix(n, q, &mut rng);
            let c = gaussian_matrix(p, q, &mut rng);
            let x0 = uniform_matrix(m, n, -1.0, 1.0, &mut rng);
            match Self::from_data(a, b, c) {
                Ok(mut prob) => {
                    if s != seed {
                        eprintln!("quadratic instance: singular Gram at seed {seed}, using seed {s}");
                    }
                    prob.seed = s;
                    return Ok((prob, x0));
                }
                Err(e) => last = e,
            }
        }
        Err(last)
    }

    pub fn from_data(a: DenseMatrix, b: DenseMatrix, c: DenseMatrix) -> Result<Self> {
        if c.rows() != a.rows() || c.cols() != b.cols() {
            return Err(Error::DimensionMismatch(format!(
                "C must be {}x{}, got {:?}",
                a.rows(),
                b.cols(),
                c.shape()
            )));
        }
        let ata_inv = inverse(&a.t_matmul(&a))?;
        let bbt_inv = inverse(&b.matmul_t(&b))?;
        let x_star = ata_inv.matmul(&a.t_matmul(&c).matmul_t(&b)).matmul(&bbt_inv);
        let sa = svd(&a)?.sigma;
        let sb = svd(&b)?.sigma;
        if sa.last() == Some(&0.0) || sb.last() == Some(&0.0) {
            return Err(Error::Singular);
        }
        let mut prob = Self {
            a,
            b,
            c,
            ata_inv,
            bbt_inv,
            x_star,
            f_star: 0.0,
            sigma_a: (sa[0], *sa.last().unwrap()),
            sigma_b: (sb[0], *sb.last().unwrap()),
            seed: 0,
        };
        prob.f_star = prob.loss(&prob.x_star.clone());
        Ok(prob)
    }

    /// `(m, n, p, q)`.
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        (self.a.cols(), self.b.rows(), self.a.rows(), self.b.cols())
    }

    /// `E = AXB − C`.
    pub fn residual(&self, x: &DenseMatrix) -> DenseMatrix {
        let mut e = self.a.matmul(x).matmul(&self.b);
        e -= &self.c;
        e
    }

    pub fn loss(&self, x: &DenseMatrix) -> f64 {
        0.5 * self.residual(x).frobenius_norm().powi(2)
    }

    /// `Aᵀ (AXB − C) Bᵀ`.
    pub fn grad(&self, x: &DenseMatrix) -> DenseMatrix {
        self.a.t_matmul(&self.residual(x)).matmul_t(&self.b)
    }

    pub fn x_star(&self) -> &DenseMatrix {
        &self.x_star
    }

    pub fn f_star(&self) -> f64 {
        self.f_star
    }

    /// `f(X) − f★`, evaluated as `½‖A(X − X★)B‖_F²` so it stays accurate (and
    /// non-negative) far below `f★`'s rounding level.
    pub fn gap(&self, x: &DenseMatrix) -> f64 {
        let d = x - &self.x_star;
        0.5 * self.a.matmul(&d).matmul(&self.b).frobenius_norm().powi(2)
    }

    /// Smoothness constant `σ_max(A)² σ_max(B)²`.
    pub fn lipschitz(&self) -> f64 {
        (self.sigma_a.0 * self.sigma_b.0).powi(2)
    }

    /// Strong-convexity constant `σ_min(A)² σ_min(B)²`.
    pub fn strong_convexity(&self) -> f64 {
        (self.sigma_a.1 * self.sigma_b.1).powi(2)
    }

    pub fn kappa_a(&self) -> f64 {
        self.sigma_a.0 / self.sigma_a.1
    }

    pub fn kappa_b(&self) -> f64 {
        self.sigma_b.0 / self.sigma_b.1
    }

    pub fn kappa_h(&self) -> f64 {
        (self.kappa_a() * self.kappa_b()).powi(2)
    }

    pub fn kappas(&self, x: &DenseMatrix) -> Result<QuadKappas> {
        let kappa_grad = cond_or_none(&self.grad(x))?;
        let kappa_residual = cond_or_none(&self.residual(x))?;
        Ok(QuadKappas { kappa_h: self.kappa_h(), kappa_grad, kappa_residual })
    }

    /// `(AᵀA)⁻¹ G (BBᵀ)⁻¹`.
    pub fn newton_direction(&self, g: &DenseMatrix) -> DenseMatrix {
        self.ata_inv.matmul(g).matmul(&self.bbt_inv)
    }
}

pub(crate) fn cond_or_none(a: &DenseMatrix) -> Result<Option<f64>> {
    if a.is_zero() {
        return Ok(None);
    }
    Ok(Some(cond2_from_sigma(&svd(a)?.sigma, DEFAULT_RANK_TOL)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_instance() {
        let one = DenseMatrix::identity(1);
        let p = QuadRegProblem::from_data(one.clone(), one.clone(), DenseMatrix::zeros(1, 1)).unwrap();
        assert_eq!(p.x_star()[(0, 0)], 0.0);
        assert_eq!(p.f_star(), 0.0);
    }

    #[test]
    fn identity_operators_interpolate() {
        let c = DenseMatrix::from_rows(&[[1.0, -2.0, 0.5], [3.0, 0.0, -1.0]]).unwrap();
        let p = QuadRegProblem::from_data(DenseMatrix::identity(2), DenseMatrix::identity(3), c.clone()).unwrap();
        assert!(p.x_star().max_abs_diff(&c) < 1e-15);
        assert!(p.f_star() < 1e-30);
        let x = DenseMatrix::from_fn(2, 3, |i, j| (i + j) as f64);
        assert_eq!(p.grad(&x), &x - &c);
        assert_eq!(p.kappa_h(), 1.0);
    }

    #[test]
    fn kappa_h_from_diagonal_a() {
        let a = DenseMatrix::from_rows(&[[2.0, 0.0], [0.0, 1.0], [0.0, 0.0]]).unwrap();
        let p = QuadRegProblem::from_data(a, DenseMatrix::identity(2), DenseMatrix::zeros(3, 2)).unwrap();
        assert!((p.kappa_h() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn gap_matches_loss_difference() {
        let (p, x0) = QuadRegProblem::make(6, 3, 12, 5, 3).unwrap();
        let direct = p.loss(&x0) - p.f_star();
        assert!((p.gap(&x0) - direct).abs() <= 1e-10 * direct);
        assert!(p.gap(p.x_star()) < 1e-20);
    }

    #[test]
    fn optimal_gradient_vanishes() {
        let (p, _) = QuadRegProblem::make(8, 4, 16, 6, 0).unwrap();
        let scale = p.a.t_matmul(&p.c).matmul_t(&p.b).frobenius_norm();
        assert!(p.grad(p.x_star()).frobenius_norm() <= 1e-10 * scale);
    }
}
