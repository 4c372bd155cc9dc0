use crate::error::{Error, Result};
use crate::linalg::qr::qr_householder;
use crate::linalg::svd::{numerical_rank, svd};
use crate::matrix::DenseMatrix;

/// Relative threshold below which a singular value counts as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

pub fn frobenius_norm(a: &DenseMatrix) -> f64 {
    a.frobenius_norm()
}

/// Sum of singular values.
pub fn nuclear_norm(a: &DenseMatrix) -> Result<f64> {
    Ok(svd(a)?.sigma.iter().sum())
}

/// Largest singular value.
pub fn spectral_norm(a: &DenseMatrix) -> Result<f64> {
    Ok(svd(a)?.sigma[0])
}

/// Numerical rank with threshold `rank_tol · σ_max`.
pub fn rank(a: &DenseMatrix, rank_tol: f64) -> Result<usize> {
    Ok(numerical_rank(&svd(a)?.sigma, rank_tol))
}

/// `σ_max / σ_r`, where `σ_r` is the smallest singular value above
/// `rank_tol · σ_max`. The zero matrix has no condition number.
pub fn cond2(a: &DenseMatrix, rank_tol: f64) -> Result<f64> {
    cond2_from_sigma(&svd(a)?.sigma, rank_tol)
}

pub fn cond2_from_sigma(sigma: &[f64], rank_tol: f64) -> Result<f64> {
    if rank_tol < 0.0 || rank_tol.is_nan() {
        return Err(Error::InvalidArgument(format!("rank_tol must be >= 0, got {rank_tol}")));
    }
    let smax = sigma.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let smin = sigma
        .iter()
        .copied()
        .filter(|&s| s > rank_tol * smax)
        .fold(f64::INFINITY, f64::min);
    Ok(smax / smin)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundsMode {
    /// True extreme singular values from an SVD.
    Exact,
    /// `‖A‖_F` above, `1/‖R⁻¹‖_F` from a QR factor below.
    Heuristic,
}

/// Bracket `beta ≤ σ_min ≤ σ_max ≤ alpha` used to scale QDWH / ZOLO-PD.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SigmaBounds {
    pub alpha: f64,
    pub beta: f64,
    pub mode: BoundsMode,
}

impl SigmaBounds {
    pub fn new(alpha: f64, beta: f64, mode: BoundsMode) -> Result<Self> {
        if !(beta > 0.0 && beta <= alpha && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "sigma bounds need 0 < beta <= alpha, got alpha={alpha:e}, beta={beta:e}"
            )));
        }
        Ok(Self { alpha, beta, mode })
    }

    /// `beta / alpha`, the lower end of the scaled spectrum.
    pub fn ell(&self) -> f64 {
        self.beta / self.alpha
    }

    pub fn kappa(&self) -> f64 {
        self.alpha / self.beta
    }
}

/// Estimates the extreme singular values of `a`.
///
/// In `Exact` mode a numerically singular input (σ_min = 0) falls back to the
/// smallest singular value above `DEFAULT_RANK_TOL · σ_max`. In `Heuristic`
/// mode a rank-deficient triangular factor yields `beta = ε · alpha`.
pub fn sigma_bounds(a: &DenseMatrix, mode: BoundsMode) -> Result<SigmaBounds> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    match mode {
        BoundsMode::Exact => {
            let sigma = svd(a)?.sigma;
            let alpha = sigma[0];
            let last = *sigma.last().unwrap();
            let beta = if last > 0.0 {
                last
            } else {
                sigma
                    .iter()
                    .copied()
                    .filter(|&s| s > DEFAULT_RANK_TOL * alpha)
                    .fold(alpha, f64::min)
            };
            SigmaBounds::new(alpha, beta, mode)
        }
        BoundsMode::Heuristic => {
            let alpha = a.frobenius_norm();
            let tall = if a.rows() >= a.cols() { a.clone() } else { a.transpose() };
            let (_, r) = qr_householder(&tall)?;
            let beta = match inverse_upper_frobenius(&r) {
                Some(f) if f.is_finite() && f > 0.0 => (1.0 / f).min(alpha),
                _ => alpha * f64::EPSILON,
            };
            SigmaBounds::new(alpha, beta.max(alpha * f64::EPSILON), mode)
        }
    }
}

/// `‖R⁻¹‖_F` for upper-triangular `R`, `None` when a diagonal entry is zero.
fn inverse_upper_frobenius(r: &DenseMatrix) -> Option<f64> {
    let n = r.rows();
    if (0..n).any(|i| r[(i, i)] == 0.0) {
        return None;
    }
    let mut sum = 0.0;
    for col in 0..n {
        // Back substitution for column `col` of R⁻¹ (zero below row col).
        let mut x = vec![0.0; n];
        for i in (0..=col).rev() {
            let mut acc = if i == col { 1.0 } else { 0.0 };
            for k in i + 1..=col {
                acc -= r[(i, k)] * x[k];
            }
            x[i] = acc / r[(i, i)];
        }
        sum += x.iter().map(|v| v * v).sum::<f64>();
    }
    Some(sum.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let d = DenseMatrix::from_diag(&[3.0, 4.0]);
        assert!((nuclear_norm(&d).unwrap() - 7.0).abs() < 1e-14);
        assert!((spectral_norm(&d).unwrap() - 4.0).abs() < 1e-15);
        assert!((cond2(&DenseMatrix::from_diag(&[4.0, 2.0]), DEFAULT_RANK_TOL).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(spectral_norm(&DenseMatrix::identity(5)).unwrap(), 1.0);
    }

    #[test]
    fn cond2_thresholds_tiny_singular_values() {
        let d = DenseMatrix::from_diag(&[1.0, 1e-9, 0.0]);
        let k = cond2(&d, 1e-8).unwrap_or(f64::NAN);
        // 1e-9 is below 1e-8 · σ_max, so only σ = 1 survives.
        assert_eq!(k, 1.0);
        let k = cond2(&d, 1e-10).unwrap();
        assert!((k - 1e9).abs() / 1e9 < 1e-12);
    }

    #[test]
    fn cond2_of_zero_is_error() {
        assert!(matches!(cond2(&DenseMatrix::zeros(2, 2), 1e-12), Err(Error::ZeroMatrix)));
        assert!(cond2(&DenseMatrix::identity(2), -1.0).is_err());
    }

    #[test]
    fn bounds_direction() {
        let b = sigma_bounds(&DenseMatrix::identity(3), BoundsMode::Exact).unwrap();
        assert_eq!((b.alpha, b.beta), (1.0, 1.0));
        let b = sigma_bounds(&DenseMatrix::from_diag(&[4.0, 2.0]), BoundsMode::Heuristic).unwrap();
        assert!((b.alpha - 20f64.sqrt()).abs() < 1e-15);
        assert!(b.beta <= 2.0 && b.beta > 0.0);
    }

    #[test]
    fn heuristic_on_singular_input_stays_positive() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0], [0.0, 0.0]]).unwrap();
        let b = sigma_bounds(&a, BoundsMode::Heuristic).unwrap();
        assert!(b.beta > 0.0 && b.beta <= b.alpha);
    }
}
