use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Thin Householder QR of a tall (`rows ≥ cols`) matrix.
///
/// Returns `Q` (`m × n`, orthonormal columns) and `R` (`n × n`, upper
/// triangular) with a non-negative diagonal.
pub fn qr_householder(a: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    let (m, n) = a.shape();
    if m < n {
        return Err(Error::InvalidArgument(format!(
            "thin QR needs rows >= cols, got {m}x{n}"
        )));
    }
    // Column-major working copy; Householder vectors live below the diagonal.
    let mut w: Vec<Vec<f64>> = (0..n).map(|j| a.col(j)).collect();
    let mut vs: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut r = DenseMatrix::zeros(n, n);

    for k in 0..n {
        let x = &w[k][k..];
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut v = x.to_vec();
        if norm == 0.0 {
            vs.push(vec![0.0; m - k]);
            continue;
        }
        let alpha = if x[0] >= 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|t| t * t).sum();
        if vnorm2 == 0.0 {
            vs.push(vec![0.0; m - k]);
            continue;
        }
        for col in w.iter_mut().skip(k) {
            let seg = &mut col[k..];
            let proj = 2.0 * v.iter().zip(seg.iter()).map(|(a, b)| a * b).sum::<f64>() / vnorm2;
            for (s, vi) in seg.iter_mut().zip(&v) {
                *s -= proj * vi;
            }
        }
        let scale = (2.0 / vnorm2).sqrt();
        vs.push(v.iter().map(|t| t * scale).collect());
    }
    for j in 0..n {
        for i in 0..=j {
            r[(i, j)] = w[j][i];
        }
    }

    // Q = H_0 ⋯ H_{n-1} applied to the first n columns of I_m.
    let mut q: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; m];
            e[j] = 1.0;
            e
        })
        .collect();
    for k in (0..n).rev() {
        let v = &vs[k];
        for col in q.iter_mut() {
            let seg = &mut col[k..];
            let proj: f64 = v.iter().zip(seg.iter()).map(|(a, b)| a * b).sum();
            if proj != 0.0 {
                for (s, vi) in seg.iter_mut().zip(v) {
                    *s -= proj * vi;
                }
            }
        }
    }

    for k in 0..n {
        if r[(k, k)] < 0.0 {
            for j in k..n {
                r[(k, j)] = -r[(k, j)];
            }
            for x in q[k].iter_mut() {
                *x = -*x;
            }
        }
    }
    let q = DenseMatrix::from_fn(m, n, |i, j| q[j][i]);
    Ok((q, r))
}
