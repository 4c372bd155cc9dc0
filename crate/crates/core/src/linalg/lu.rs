use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Inverse via LU with partial pivoting. Fails with [`Error::Singular`] on an
/// exactly zero pivot or a non-finite result.
pub fn inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "inverse needs a square matrix, got {:?}",
            a.shape()
        )));
    }
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, lu[(i, k)].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmax == 0.0 {
            return Err(Error::Singular);
        }
        if p != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = t;
            }
            perm.swap(k, p);
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            lu[(i, k)] = f;
            if f != 0.0 {
                for j in k + 1..n {
                    let t = lu[(k, j)];
                    lu[(i, j)] -= f * t;
                }
            }
        }
    }

    let mut inv = DenseMatrix::zeros(n, n);
    for col in 0..n {
        // Solve L U x = P e_col.
        let mut x: Vec<f64> = perm.iter().map(|&p| if p == col { 1.0 } else { 0.0 }).collect();
        for i in 0..n {
            let mut acc = x[i];
            for k in 0..i {
                acc -= lu[(i, k)] * x[k];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for k in i + 1..n {
                acc -= lu[(i, k)] * x[k];
            }
            x[i] = acc / lu[(i, i)];
        }
        for i in 0..n {
            inv[(i, col)] = x[i];
        }
    }
    if !inv.is_finite() {
        return Err(Error::Singular);
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_inverse_is_exact_reciprocal() {
        let inv = inverse(&DenseMatrix::from_diag(&[4.0, 0.25, 3.0])).unwrap();
        assert_eq!(inv.diag(), vec![0.25, 4.0, 1.0 / 3.0]);
    }

    #[test]
    fn needs_pivoting() {
        let a = DenseMatrix::from_rows(&[[0.0, 1.0], [2.0, 3.0]]).unwrap();
        let inv = inverse(&a).unwrap();
        assert!(a.matmul(&inv).max_abs_diff(&DenseMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn singular_detected() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert!(matches!(inverse(&a), Err(Error::Singular)));
    }
}
