use super::{hermitian_factor, PolarAlgorithm, PolarDiagnostics, PolarFactors};
use crate::error::{Error, Result};
use crate::linalg::inverse;
use crate::matrix::DenseMatrix;

/// Stop once the relative change of one step drops below this; the next
/// iterate would already be accurate to roughly its square.
pub const SCALED_NEWTON_TOL: f64 = 1e-9;

/// Scaling is switched off once the relative change falls below this.
const SCALING_CUTOFF: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalingMode {
    None,
    /// `μ = (‖X⁻¹‖_F / ‖X‖_F)^{1/2}`.
    Frobenius,
}

/// Newton iteration `X ← ½(μX + μ⁻¹X⁻ᵀ)` for square nonsingular `a`.
pub fn scaled_newton(a: &DenseMatrix, max_steps: usize, scaling: ScalingMode) -> Result<PolarFactors> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "scaled Newton needs a square matrix, got {:?}",
            a.shape()
        )));
    }
    let mut x = a.clone();
    let mut scale = scaling == ScalingMode::Frobenius;
    let mut iterations = 0;
    let mut converged = false;
    let mut last_change = None;
    while iterations < max_steps {
        let inv = inverse(&x)?;
        let mu = if scale { (inv.frobenius_norm() / x.frobenius_norm()).sqrt() } else { 1.0 };
        let mut next = x.scaled(0.5 * mu);
        next.axpy(0.5 / mu, &inv.transpose());
        let change = next.distance(&x) / next.frobenius_norm();
        x = next;
        iterations += 1;
        last_change = Some(change);
        if change < SCALING_CUTOFF {
            scale = false;
        }
        if change <= SCALED_NEWTON_TOL {
            converged = true;
            break;
        }
    }
    let h = hermitian_factor(a, &x);
    Ok(PolarFactors {
        u: x,
        h,
        iterations,
        converged,
        algorithm: PolarAlgorithm::ScaledNewton,
        diagnostics: PolarDiagnostics { last_change, ..Default::default() },
    })
}
