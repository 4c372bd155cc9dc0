//! One-sided (Hestenes) Jacobi SVD.
//!
//! Columns are rotated pairwise until every pair is orthogonal relative to the
//! product of their norms. Singular values come out as column norms, so small
//! singular values keep their own relative accuracy instead of inheriting an
//! absolute `ε‖A‖` error, which is what the polar oracles rely on.

use crate::error::{Error, Result};
use crate::matrix::{dot, DenseMatrix};

/// Sweep cap; well-scaled inputs finish in fewer than 15.
pub const MAX_SWEEPS: usize = 80;

#[derive(Clone, Debug)]
pub struct SvdResult {
    /// `m × k` with orthonormal columns.
    pub u: DenseMatrix,
    /// Non-increasing, non-negative, length `k = min(m, n)`.
    pub sigma: Vec<f64>,
    /// `n × k` with orthonormal columns.
    pub v: DenseMatrix,
}

impl SvdResult {
    /// `U · diag(σ) · Vᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let mut us = self.u.clone();
        for i in 0..us.rows() {
            for (j, s) in self.sigma.iter().enumerate() {
                us[(i, j)] *= s;
            }
        }
        us.matmul_t(&self.v)
    }

    /// Number of singular values above `rank_tol · σ_max`.
    pub fn rank(&self, rank_tol: f64) -> usize {
        numerical_rank(&self.sigma, rank_tol)
    }
}

pub(crate) fn numerical_rank(sigma: &[f64], rank_tol: f64) -> usize {
    let smax = sigma.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    sigma.iter().filter(|&&s| s > rank_tol * smax).count()
}

/// Inputs with entries outside `[2^-400, 2^400]` are rescaled by a power of
/// two first, so the squared column norms cannot overflow or underflow.
pub fn svd(a: &DenseMatrix) -> Result<SvdResult> {
    let big = a.max_abs();
    if big.is_finite() && big > 0.0 && !(SAFE_MIN..=SAFE_MAX).contains(&big) {
        let k = big.log2().round() as i32;
        let mut r = svd_oriented(&a.scaled(2f64.powi(-k)))?;
        r.sigma.iter_mut().for_each(|s| *s *= 2f64.powi(k));
        return Ok(r);
    }
    svd_oriented(a)
}

const SAFE_MIN: f64 = 3.872591914849318e-121; // 2^-400
const SAFE_MAX: f64 = 2.5822498780869086e120; // 2^400

fn svd_oriented(a: &DenseMatrix) -> Result<SvdResult> {
    if a.rows() < a.cols() {
        let t = svd_tall(&a.transpose())?;
        return Ok(SvdResult { u: t.v, sigma: t.sigma, v: t.u });
    }
    svd_tall(a)
}

fn svd_tall(a: &DenseMatrix) -> Result<SvdResult> {
    let (m, n) = a.shape();
    let mut w: Vec<Vec<f64>> = (0..n).map(|j| a.col(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();
    let tol = f64::EPSILON * (m as f64).max(1.0);

    let mut converged = n == 1;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma == 0.0 || alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                if gamma.abs() <= tol * (alpha.sqrt() * beta.sqrt()) {
                    continue;
                }
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                if t == 0.0 {
                    continue;
                }
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotated = true;
                let (lo, hi) = w.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], c, s);
                let (lo, hi) = v.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], c, s);
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::SvdNoConvergence { sweeps: MAX_SWEEPS });
    }

    let norms: Vec<f64> = w.iter().map(|c| dot(c, c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut missing = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        if s > 0.0 && s.is_finite() {
            u_cols.push(w[j].iter().map(|x| x / s).collect());
        } else {
            u_cols.push(vec![0.0; m]);
            missing.push(k);
        }
    }
    complete_orthonormal(&mut u_cols, &missing, m);

    let u = DenseMatrix::from_fn(m, n, |i, k| u_cols[k][i]);
    let vm = DenseMatrix::from_fn(n, n, |i, k| v[order[k]][i]);
    Ok(SvdResult { u, sigma, v: vm })
}

#[inline]
fn rotate(x: &mut [f64], y: &mut [f64], c: f64, s: f64) {
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let (p, q) = (*a, *b);
        *a = c * p - s * q;
        *b = s * p + c * q;
    }
}

/// Fills the columns listed in `missing` with unit vectors orthogonal to all
/// other columns (Gram–Schmidt against coordinate axes, applied twice).
fn complete_orthonormal(cols: &mut [Vec<f64>], missing: &[usize], m: usize) {
    let mut axis = 0;
    for &k in missing {
        while axis < m {
            let mut cand = vec![0.0; m];
            cand[axis] = 1.0;
            axis += 1;
            for _ in 0..2 {
                for (j, c) in cols.iter().enumerate() {
                    if j == k || (missing.contains(&j) && c.iter().all(|&x| x == 0.0)) {
                        continue;
                    }
                    let proj = dot(&cand, c);
                    for (x, y) in cand.iter_mut().zip(c) {
                        *x -= proj * y;
                    }
                }
            }
            let norm = dot(&cand, &cand).sqrt();
            if norm > 0.5 {
                cols[k] = cand.iter().map(|x| x / norm).collect();
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_magnitudes_are_rescaled() {
        for scale in [1e300, 1e-300] {
            let a = DenseMatrix::from_rows(&[[3.0 * scale, 0.0], [0.0, 4.0 * scale], [0.0, 0.0]]).unwrap();
            let s = svd(&a).unwrap();
            assert!((s.sigma[0] / (4.0 * scale) - 1.0).abs() < 1e-15);
            assert!((s.sigma[1] / (3.0 * scale) - 1.0).abs() < 1e-15);
        }
    }

    fn orthonormality_error(q: &DenseMatrix) -> f64 {
        let g = q.t_matmul(q);
        g.max_abs_diff(&DenseMatrix::identity(g.rows()))
    }

    #[test]
    fn diagonal_input() {
        let r = svd(&DenseMatrix::from_diag(&[2.0, 4.0])).unwrap();
        assert_eq!(r.sigma, vec![4.0, 2.0]);
        assert!(orthonormality_error(&r.u) < 1e-15);
        assert!(r.reconstruct().max_abs_diff(&DenseMatrix::from_diag(&[2.0, 4.0])) < 1e-15);
    }

    #[test]
    fn permutation_matrix() {
        let a = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let r = svd(&a).unwrap();
        assert!((r.sigma[0] - 1.0).abs() < 1e-15 && (r.sigma[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rank_deficient_gets_orthonormal_completion() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0, 0.0], [2.0, 4.0, 0.0], [0.0, 0.0, 0.0], [1.0, 2.0, 0.0]])
            .unwrap();
        let r = svd(&a).unwrap();
        assert_eq!(r.rank(1e-12), 1);
        assert!(orthonormality_error(&r.u) < 1e-12, "{:?}", r.u);
        assert!(orthonormality_error(&r.v) < 1e-12);
        assert!(r.reconstruct().max_abs_diff(&a) < 1e-14);
    }

    #[test]
    fn zero_matrix() {
        let r = svd(&DenseMatrix::zeros(3, 2)).unwrap();
        assert_eq!(r.sigma, vec![0.0, 0.0]);
        assert!(orthonormality_error(&r.u) < 1e-15);
    }

    #[test]
    fn wide_input_is_transposed() {
        let a = DenseMatrix::from_fn(3, 5, |i, j| ((i + 1) * (j + 2)) as f64 + (i as f64 - j as f64).cos());
        let r = svd(&a).unwrap();
        assert_eq!(r.u.shape(), (3, 3));
        assert_eq!(r.v.shape(), (5, 3));
        assert!(r.reconstruct().max_abs_diff(&a) < 1e-13);
    }
}
