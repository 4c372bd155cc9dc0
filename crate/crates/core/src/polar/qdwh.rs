//! QR-based dynamically weighted Halley iteration.

use super::{hermitian_factor, on_tall, PolarAlgorithm, PolarDiagnostics, PolarFactors};
use crate::error::{Error, Result};
use crate::linalg::{qr_householder, SigmaBounds};
use crate::matrix::DenseMatrix;

pub const QDWH_DEFAULT_TOL: f64 = 1e-12;
pub const QDWH_DEFAULT_MAX_STEPS: usize = 8;

/// Smallest `ℓ` fed to the weight formulas; below this `ℓ⁴` underflows.
const ELL_FLOOR: f64 = 1e-30;

/// Dynamic Halley weights `(a, b, c)` for the current lower bound `ℓ`.
pub fn qdwh_coefficients(ell: f64) -> (f64, f64, f64) {
    let l = ell.clamp(ELL_FLOOR, 1.0);
    let l2 = l * l;
    let gamma = (4.0 * (1.0 - l2) / (l2 * l2)).cbrt();
    let sq = (1.0 + gamma).sqrt();
    let a = sq + 0.5 * (8.0 - 4.0 * gamma + 8.0 * (2.0 - l2) / (l2 * sq)).sqrt();
    let b = (a - 1.0) * (a - 1.0) / 4.0;
    let c = a + b - 1.0;
    (a, b, c)
}

/// Next lower bound `ℓ(a + bℓ²)/(1 + cℓ²)`, capped at 1.
pub(crate) fn qdwh_next_ell(ell: f64, (a, b, c): (f64, f64, f64)) -> f64 {
    let l2 = ell * ell;
    (ell * (a + b * l2) / (1.0 + c * l2)).min(1.0)
}

/// Stops when `‖X_{k+1} − X_k‖_F ≤ tol·‖X_{k+1}‖_F` or `|1 − ℓ_k| ≤ tol`.
/// Running out of `max_steps` returns the current iterate with
/// `converged = false`.
pub fn qdwh(a: &DenseMatrix, bounds: SigmaBounds, tol: f64, max_steps: usize) -> Result<PolarFactors> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let mut p = on_tall(a, |t| run(t, bounds, tol, max_steps))?;
    p.h = hermitian_factor(a, &p.u);
    Ok(p)
}

fn run(a: &DenseMatrix, bounds: SigmaBounds, tol: f64, max_steps: usize) -> Result<PolarFactors> {
    let n = a.cols();
    let mut x = a.scaled(1.0 / bounds.alpha);
    let mut ell = bounds.ell().clamp(ELL_FLOOR, 1.0);
    let eye = DenseMatrix::identity(n);
    let mut iterations = 0;
    let mut converged = false;
    let mut last_change = None;

    while iterations < max_steps {
        let coef @ (ak, bk, ck) = qdwh_coefficients(ell);
        let sc = ck.sqrt();
        let (q, _) = qr_householder(&DenseMatrix::vstack(&x.scaled(sc), &eye))?;
        let q1 = q.row_block(0, x.rows());
        let q2 = q.row_block(x.rows(), x.rows() + n);
        let mut next = q1.matmul_t(&q2);
        next.scale((ak - bk / ck) / sc);
        next.axpy(bk / ck, &x);
        if !next.is_finite() {
            return Err(Error::Polar(format!("QDWH produced non-finite iterate at step {}", iterations + 1)));
        }
        let change = next.distance(&x) / next.frobenius_norm();
        x = next;
        ell = qdwh_next_ell(ell, coef);
        iterations += 1;
        last_change = Some(change);
        if change <= tol || (1.0 - ell).abs() <= tol {
            converged = true;
            break;
        }
    }
    Ok(PolarFactors {
        u: x,
        h: DenseMatrix::zeros(n, n),
        iterations,
        converged,
        algorithm: PolarAlgorithm::Qdwh,
        diagnostics: PolarDiagnostics { last_change, ell: Some(ell), ..Default::default() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{sigma_bounds, BoundsMode};

    #[test]
    fn halley_weights_at_one() {
        let (a, b, c) = qdwh_coefficients(1.0);
        assert_eq!((a, b, c), (3.0, 1.0, 3.0));
    }

    #[test]
    fn scalar_recursion_iteration_counts() {
        // Counts from the ℓ recursion alone, independent of any matrix.
        for (kappa, expect) in [(1e3, 4), (1e5, 4), (1e16, 5)] {
            let mut ell: f64 = 1.0 / kappa;
            let mut k = 0;
            while (1.0 - ell).abs() > QDWH_DEFAULT_TOL {
                ell = qdwh_next_ell(ell, qdwh_coefficients(ell));
                k += 1;
            }
            assert_eq!(k, expect, "kappa {kappa:e}");
        }
    }

    #[test]
    fn orthogonal_input_converges_immediately() {
        let (c, s) = (0.28, 0.96);
        let q = DenseMatrix::from_rows(&[[c, -s], [s, c], [0.0, 0.0]]).unwrap();
        let p = qdwh(&q, sigma_bounds(&q, BoundsMode::Exact).unwrap(), QDWH_DEFAULT_TOL, 8).unwrap();
        assert!(p.converged && p.iterations <= 2);
        assert!(p.u.max_abs_diff(&q) < 1e-12);
    }

    #[test]
    fn truncated_budget_is_reported() {
        let d = DenseMatrix::from_diag(&[1.0, 1e-8]);
        let p = qdwh(&d, sigma_bounds(&d, BoundsMode::Exact).unwrap(), QDWH_DEFAULT_TOL, 2).unwrap();
        assert_eq!(p.iterations, 2);
        assert!(!p.converged);
    }
}
