//! Zolotarev-based polar decomposition.
//!
//! Each step applies the scaled Zolotarev rational `Ẑ` of type (2r+1, 2r)
//! through its partial fractions. The first step uses `r` stacked QR
//! factorizations; later steps, where `XᵀX` is well conditioned, use Cholesky.

use super::elliptic::ZolotarevCoefficients;
use super::{hermitian_factor, on_tall, PolarAlgorithm, PolarDiagnostics, PolarFactors};
use crate::error::{Error, Result};
use crate::linalg::cholesky::cholesky_lower;
use crate::linalg::{qr_householder, right_solve_spd, SigmaBounds};
use crate::matrix::DenseMatrix;

pub const ZOLO_DEFAULT_TOL: f64 = 1e-13;
pub const ZOLO_DEFAULT_MAX_STEPS: usize = 6;
pub const ZOLO_MAX_ORDER: usize = 8;

const ELL_FLOOR: f64 = 1e-30;
/// Below this lower bound the Cholesky form is not trusted.
const CHOLESKY_MIN_ELL: f64 = 1e-3;
const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZoloOrder {
    /// Smallest order finishing in two steps for the estimated condition number.
    Auto,
    Fixed(usize),
}

/// Smallest `r` that needs at most two steps at condition number `kappa`.
pub fn zolo_order_for_kappa(kappa: f64) -> usize {
    const CUTS: [(f64, usize); 6] = [(1.1, 1), (2.0, 2), (1e2, 3), (1e3, 4), (1e5, 5), (1e7, 6)];
    CUTS.iter().find(|(k, _)| kappa <= *k).map_or(ZOLO_MAX_ORDER, |&(_, r)| r)
}

/// Stops when `1 − ℓ ≤ tol` or the relative change of a step is at most
/// `u^{1/(2r+1)}` (the next step would be below roundoff).
pub fn zolo_pd(
    a: &DenseMatrix,
    bounds: SigmaBounds,
    order: ZoloOrder,
    tol: f64,
    max_steps: usize,
) -> Result<PolarFactors> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    if let ZoloOrder::Fixed(r) = order {
        if !(1..=ZOLO_MAX_ORDER).contains(&r) {
            return Err(Error::InvalidArgument(format!("ZOLO-PD order must be in 1..=8, got {r}")));
        }
    }
    let mut p = on_tall(a, |t| run(t, bounds, order, tol, max_steps))?;
    p.h = hermitian_factor(a, &p.u);
    Ok(p)
}

fn run(a: &DenseMatrix, bounds: SigmaBounds, order: ZoloOrder, tol: f64, max_steps: usize) -> Result<PolarFactors> {
    let n = a.cols();
    let mut x = a.scaled(1.0 / bounds.alpha);
    let mut ell = bounds.ell().clamp(ELL_FLOOR, 1.0);
    let r = match order {
        ZoloOrder::Fixed(r) => r,
        ZoloOrder::Auto => zolo_order_for_kappa(1.0 / ell),
    };
    let shortcut = 1.0 / ell < 2.0;
    let switch = UNIT_ROUNDOFF.powf(1.0 / (2 * r + 1) as f64);
    let mut diag = PolarDiagnostics { zolo_order: Some(r), ..Default::default() };
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_steps {
        let z = ZolotarevCoefficients::new(ell, r);
        let use_qr = (iterations == 0 && !shortcut) || ell < CHOLESKY_MIN_ELL;
        let mut next = if use_qr {
            qr_step(&x, &z)?
        } else {
            match cholesky_step(&x, &z) {
                Some(v) => v,
                None => {
                    diag.qr_fallbacks += 1;
                    qr_step(&x, &z)?
                }
            }
        };
        next.scale(z.mhat);
        if !next.is_finite() {
            return Err(Error::Polar(format!("ZOLO-PD produced non-finite iterate at step {}", iterations + 1)));
        }
        let change = next.distance(&x) / next.frobenius_norm();
        x = next;
        ell = z.apply(ell).min(1.0);
        iterations += 1;
        diag.last_change = Some(change);
        if 1.0 - ell <= tol || change <= switch {
            converged = true;
            break;
        }
    }
    diag.ell = Some(ell);
    Ok(PolarFactors {
        u: x,
        h: DenseMatrix::zeros(n, n),
        iterations,
        converged,
        algorithm: PolarAlgorithm::ZoloPd,
        diagnostics: diag,
    })
}

/// `X + Σ_j a_j/√c_{2j−1} · Q_{j1}Q_{j2}ᵀ` with `[X; √c_{2j−1} I] = Q_j R_j`.
fn qr_step(x: &DenseMatrix, z: &ZolotarevCoefficients) -> Result<DenseMatrix> {
    let (m, n) = x.shape();
    let mut out = x.clone();
    for (j, aj) in z.a.iter().enumerate() {
        let sc = z.c_odd(j).sqrt();
        let (q, _) = qr_householder(&DenseMatrix::vstack(x, &DenseMatrix::identity(n).scaled(sc)))?;
        let term = q.row_block(0, m).matmul_t(&q.row_block(m, m + n));
        out.axpy(aj / sc, &term);
    }
    Ok(out)
}

/// `X + Σ_j a_j X (XᵀX + c_{2j−1} I)⁻¹`, or `None` if a factorization fails.
fn cholesky_step(x: &DenseMatrix, z: &ZolotarevCoefficients) -> Option<DenseMatrix> {
    let gram = x.t_matmul(x);
    let mut out = x.clone();
    for (j, aj) in z.a.iter().enumerate() {
        let mut s = gram.clone();
        s.add_diag(z.c_odd(j));
        let l = cholesky_lower(&s).ok()?;
        out.axpy(*aj, &right_solve_spd(x, &l));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{sigma_bounds, BoundsMode};

    #[test]
    fn order_table() {
        let cases = [(1.05, 1), (1.5, 2), (2.0, 2), (50.0, 3), (1e3, 4), (1e4, 5), (1e7, 6), (1e8, 8), (1e16, 8)];
        for (k, r) in cases {
            assert_eq!(zolo_order_for_kappa(k), r, "kappa {k}");
        }
    }

    #[test]
    fn scalar_recursion_two_steps_at_order_eight() {
        for kappa in [10.0, 1e3, 1e7, 1e12, 1e16] {
            let mut ell: f64 = 1.0 / kappa;
            for _ in 0..2 {
                ell = ZolotarevCoefficients::new(ell, 8).apply(ell).min(1.0);
            }
            assert!(1.0 - ell <= ZOLO_DEFAULT_TOL, "kappa {kappa:e}: 1-ell = {:e}", 1.0 - ell);
        }
    }

    #[test]
    fn orthogonal_takes_shortcut() {
        let (c, s) = (0.6, 0.8);
        let q = DenseMatrix::from_rows(&[[c, -s], [s, c]]).unwrap();
        let p = zolo_pd(&q, sigma_bounds(&q, BoundsMode::Exact).unwrap(), ZoloOrder::Auto, ZOLO_DEFAULT_TOL, 6).unwrap();
        assert_eq!(p.iterations, 1);
        assert!(p.converged);
        assert!(p.u.max_abs_diff(&q) < 1e-14);
    }

    #[test]
    fn order_out_of_range() {
        let q = DenseMatrix::identity(2);
        let b = sigma_bounds(&q, BoundsMode::Exact).unwrap();
        assert!(zolo_pd(&q, b, ZoloOrder::Fixed(9), 1e-13, 6).is_err());
        assert!(zolo_pd(&q, b, ZoloOrder::Fixed(0), 1e-13, 6).is_err());
    }
}
