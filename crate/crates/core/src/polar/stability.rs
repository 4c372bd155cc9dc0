use super::PolarFactors;
use crate::matrix::DenseMatrix;

/// Backward-stability residuals of computed polar factors. No thresholds
/// are applied here.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityReport {
    /// `‖A − UH‖_F / ‖A‖_F` (`‖A − HU‖_F / ‖A‖_F` for wide `A`).
    pub reconstruction_residual: f64,
    /// `‖UᵀU − I‖_F / √n` on the smaller side.
    pub orthogonality_residual: f64,
    /// `‖H − Hᵀ‖_F / ‖H‖_F`, zero for `H = 0`.
    pub h_asymmetry: f64,
}

pub fn stability_check(a: &DenseMatrix, factors: &PolarFactors) -> StabilityReport {
    let (u, h) = (&factors.u, &factors.h);
    let tall = a.rows() >= a.cols();
    let recon = if tall { u.matmul(h) } else { h.matmul(u) };
    let an = a.frobenius_norm();
    let reconstruction_residual = if an == 0.0 { recon.frobenius_norm() } else { recon.distance(a) / an };

    let mut gram = if tall { u.t_matmul(u) } else { u.matmul_t(u) };
    let k = gram.rows();
    gram.add_diag(-1.0);
    let orthogonality_residual = gram.frobenius_norm() / (k as f64).sqrt();

    let hn = h.frobenius_norm();
    let h_asymmetry = if hn == 0.0 { 0.0 } else { h.distance(&h.transpose()) / hn };
    StabilityReport { reconstruction_residual, orthogonality_residual, h_asymmetry }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::polar_reference;

    #[test]
    fn exact_factors_have_tiny_residuals() {
        let a = DenseMatrix::from_fn(6, 4, |i, j| ((i * 5 + j * 3) % 7) as f64 - 3.0 + if i == j { 4.0 } else { 0.0 });
        let r = stability_check(&a, &polar_reference(&a, 1e-12).unwrap());
        assert!(r.reconstruction_residual <= 1e-13);
        assert!(r.orthogonality_residual <= 1e-13);
        assert!(r.h_asymmetry <= 1e-13);
    }
}
