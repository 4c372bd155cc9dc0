use super::{PolarAlgorithm, PolarDiagnostics, PolarFactors};
use crate::error::Result;
use crate::linalg::svd;
use crate::matrix::DenseMatrix;

/// Exact factors from the SVD: `U = Σ_{σᵢ > tol·σ₁} uᵢvᵢᵀ`, `H = VΣVᵀ`
/// (`UΣUᵀ` for wide input). Null directions are dropped from `U`, so
/// `‖U‖_F² = rank(A)`.
pub fn polar_reference(a: &DenseMatrix, rank_tol: f64) -> Result<PolarFactors> {
    let s = svd(a)?;
    let (m, n) = a.shape();
    let k = s.sigma.len();
    let rank = s.rank(rank_tol);

    let mut u = DenseMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            let mut acc = 0.0;
            for l in 0..rank {
                acc += s.u[(i, l)] * s.v[(j, l)];
            }
            u[(i, j)] = acc;
        }
    }
    // H lives on the smaller side: V for tall input, U for wide.
    let side = if m >= n { &s.v } else { &s.u };
    let mut h = DenseMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..=i {
            let mut acc = 0.0;
            for l in 0..k {
                acc += side[(i, l)] * s.sigma[l] * side[(j, l)];
            }
            h[(i, j)] = acc;
            h[(j, i)] = acc;
        }
    }
    Ok(PolarFactors {
        u,
        h,
        iterations: 0,
        converged: true,
        algorithm: PolarAlgorithm::SvdReference,
        diagnostics: PolarDiagnostics::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_identity() {
        let p = polar_reference(&DenseMatrix::identity(3).scaled(2.0), 1e-12).unwrap();
        assert!(p.u.max_abs_diff(&DenseMatrix::identity(3)) < 1e-15);
        assert!((p.h.trace() - 6.0).abs() < 1e-14);
    }

    #[test]
    fn rank_deficient_convention() {
        let p = polar_reference(&DenseMatrix::from_diag(&[3.0, 0.0]), 1e-12).unwrap();
        assert!(p.u.max_abs_diff(&DenseMatrix::from_diag(&[1.0, 0.0])) < 1e-15);
        assert!((p.u.frobenius_norm().powi(2) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn wide_input_reconstructs_as_h_u() {
        let a = DenseMatrix::from_fn(3, 5, |i, j| (i as f64 + 1.0) * ((j * 7 + i * 3) % 5) as f64 - 2.0);
        let p = polar_reference(&a, 1e-12).unwrap();
        assert_eq!(p.h.shape(), (3, 3));
        assert!(p.h.matmul(&p.u).max_abs_diff(&a) < 1e-12);
    }
}
