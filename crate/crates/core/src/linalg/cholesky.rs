use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Lower Cholesky factor `L` with `L Lᵀ = s`.
///
/// `s` must be square and symmetric to within `1e-12` relative to its largest
/// entry.
pub fn cholesky(s: &DenseMatrix) -> Result<DenseMatrix> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "cholesky needs a square matrix, got {:?}",
            s.shape()
        )));
    }
    let scale = s.max_abs();
    let n = s.rows();
    for i in 0..n {
        for j in 0..i {
            if (s[(i, j)] - s[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::InvalidArgument(format!(
                    "cholesky input is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    cholesky_lower(s)
}

/// Cholesky reading only the lower triangle of `s`.
pub(crate) fn cholesky_lower(s: &DenseMatrix) -> Result<DenseMatrix> {
    let n = s.rows();
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = s[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { pivot: j, value: d });
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        for i in j + 1..n {
            let mut acc = s[(i, j)];
            for k in 0..j {
                acc -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = acc / djj;
        }
    }
    Ok(l)
}

/// Solves `L Y = B` for lower-triangular `L`.
pub fn solve_lower(l: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let n = l.rows();
    assert_eq!(b.rows(), n, "solve_lower shape mismatch");
    let mut y = b.clone();
    let nc = b.cols();
    for i in 0..n {
        for k in 0..i {
            let lik = l[(i, k)];
            if lik != 0.0 {
                for j in 0..nc {
                    y[(i, j)] -= lik * y[(k, j)];
                }
            }
        }
        let d = l[(i, i)];
        for j in 0..nc {
            y[(i, j)] /= d;
        }
    }
    y
}

/// Solves `Lᵀ Y = B` for lower-triangular `L`.
pub fn solve_lower_transpose(l: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let n = l.rows();
    assert_eq!(b.rows(), n, "solve_lower_transpose shape mismatch");
    let mut y = b.clone();
    let nc = b.cols();
    for i in (0..n).rev() {
        for k in i + 1..n {
            let lki = l[(k, i)];
            if lki != 0.0 {
                for j in 0..nc {
                    y[(i, j)] -= lki * y[(k, j)];
                }
            }
        }
        let d = l[(i, i)];
        for j in 0..nc {
            y[(i, j)] /= d;
        }
    }
    y
}

/// `X · S⁻¹` given the Cholesky factor `L` of `S`.
pub fn right_solve_spd(x: &DenseMatrix, l: &DenseMatrix) -> DenseMatrix {
    let y = solve_lower(l, &x.transpose());
    solve_lower_transpose(l, &y).transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_two_by_two() {
        assert_eq!(cholesky(&DenseMatrix::identity(3)).unwrap(), DenseMatrix::identity(3));
        let s = DenseMatrix::from_rows(&[[4.0, 2.0], [2.0, 5.0]]).unwrap();
        let l = cholesky(&s).unwrap();
        assert_eq!(l, DenseMatrix::from_rows(&[[2.0, 0.0], [1.0, 2.0]]).unwrap());
    }

    #[test]
    fn indefinite_fails_with_pivot() {
        let s = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap();
        match cholesky(&s) {
            Err(Error::NotPositiveDefinite { pivot, .. }) => assert_eq!(pivot, 1),
            other => panic!("expected NotPositiveDefinite, got {other:?}"),
        }
    }

    #[test]
    fn asymmetric_rejected() {
        let s = DenseMatrix::from_rows(&[[1.0, 0.5], [0.0, 1.0]]).unwrap();
        assert!(matches!(cholesky(&s), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn right_solve_inverts() {
        let s = DenseMatrix::from_rows(&[[4.0, 2.0, 0.5], [2.0, 5.0, 1.0], [0.5, 1.0, 3.0]]).unwrap();
        let l = cholesky(&s).unwrap();
        let x = DenseMatrix::from_fn(2, 3, |i, j| (i + 2 * j) as f64 - 1.0);
        let y = right_solve_spd(&x, &l);
        assert!(y.matmul(&s).max_abs_diff(&x) < 1e-14);
    }
}
