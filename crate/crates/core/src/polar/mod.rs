//! Polar decomposition `A = U H` (`m ≥ n`) or `A = H U` (`m < n`).
//!
//! Every iterative method works on the tall orientation and transposes wide
//! inputs in and out; `H` is the same matrix in both cases.

pub mod elliptic;
mod newton_schulz;
mod qdwh;
mod reference;
mod scaled_newton;
mod stability;
mod zolo;

pub use elliptic::{agm, complete_elliptic_k, jacobi_elliptic, zolotarev_c, ZolotarevCoefficients};
pub use newton_schulz::{newton_schulz, NsCoefficients, NS_DELTA, NS_ORTHO_TOL};
pub use qdwh::{qdwh, qdwh_coefficients, QDWH_DEFAULT_MAX_STEPS, QDWH_DEFAULT_TOL};
pub use reference::polar_reference;
pub use scaled_newton::{scaled_newton, ScalingMode, SCALED_NEWTON_TOL};
pub use stability::{stability_check, StabilityReport};
pub use zolo::{zolo_order_for_kappa, zolo_pd, ZoloOrder, ZOLO_DEFAULT_MAX_STEPS, ZOLO_DEFAULT_TOL};

use crate::error::Result;
use crate::linalg::{sigma_bounds, BoundsMode, DEFAULT_RANK_TOL};
use crate::matrix::DenseMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolarAlgorithm {
    SvdReference,
    NewtonSchulz,
    ScaledNewton,
    Qdwh,
    ZoloPd,
}

impl PolarAlgorithm {
    pub fn name(self) -> &'static str {
        match self {
            Self::SvdReference => "svd",
            Self::NewtonSchulz => "ns",
            Self::ScaledNewton => "newton",
            Self::Qdwh => "qdwh",
            Self::ZoloPd => "zolo",
        }
    }
}

/// Per-run numbers beyond the factors themselves.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolarDiagnostics {
    /// Relative change `‖X_{k+1} − X_k‖_F / ‖X_{k+1}‖_F` of the last step.
    pub last_change: Option<f64>,
    /// Final lower bound `ℓ` on the scaled spectrum (QDWH, ZOLO-PD).
    pub ell: Option<f64>,
    /// Zolotarev order used.
    pub zolo_order: Option<usize>,
    /// Steps where a Cholesky solve failed and the QR form was used instead.
    pub qr_fallbacks: usize,
}

#[derive(Clone, Debug)]
pub struct PolarFactors {
    pub u: DenseMatrix,
    pub h: DenseMatrix,
    pub iterations: usize,
    pub converged: bool,
    pub algorithm: PolarAlgorithm,
    pub diagnostics: PolarDiagnostics,
}

impl PolarFactors {
    /// Zero factors for a zero input (`msgn(0) = 0`).
    fn zero(m: usize, n: usize, algorithm: PolarAlgorithm, converged: bool) -> Self {
        let k = m.min(n);
        Self {
            u: DenseMatrix::zeros(m, n),
            h: DenseMatrix::zeros(k, k),
            iterations: 0,
            converged,
            algorithm,
            diagnostics: PolarDiagnostics::default(),
        }
    }
}

/// `H = sym(Uᵀ A)` for `m ≥ n`, `sym(A Uᵀ)` for `m < n`.
pub fn hermitian_factor(a: &DenseMatrix, u: &DenseMatrix) -> DenseMatrix {
    assert_eq!(a.shape(), u.shape(), "hermitian_factor shape mismatch");
    if a.rows() >= a.cols() {
        u.t_matmul(a).symmetric_part()
    } else {
        a.matmul_t(u).symmetric_part()
    }
}

/// Runs `f` on the tall orientation of `a` and maps the orthogonal factor back.
pub(crate) fn on_tall(
    a: &DenseMatrix,
    f: impl FnOnce(&DenseMatrix) -> Result<PolarFactors>,
) -> Result<PolarFactors> {
    if a.rows() >= a.cols() {
        f(a)
    } else {
        let mut p = f(&a.transpose())?;
        p.u = p.u.transpose();
        Ok(p)
    }
}

/// A configured polar backend, as selected by optimizer configs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PolarMethod {
    Reference { rank_tol: f64 },
    NewtonSchulz { steps: usize, coeffs: NsCoefficients },
    ScaledNewton { max_steps: usize, scaling: ScalingMode },
    Qdwh { bounds: BoundsMode, tol: f64, max_steps: usize },
    ZoloPd { bounds: BoundsMode, order: ZoloOrder, tol: f64, max_steps: usize },
}

impl Default for PolarMethod {
    fn default() -> Self {
        Self::qdwh()
    }
}

impl PolarMethod {
    pub fn reference() -> Self {
        Self::Reference { rank_tol: DEFAULT_RANK_TOL }
    }

    pub fn qdwh() -> Self {
        Self::Qdwh { bounds: BoundsMode::Exact, tol: QDWH_DEFAULT_TOL, max_steps: QDWH_DEFAULT_MAX_STEPS }
    }

    /// QDWH truncated to `steps` iterations.
    pub fn qdwh_steps(steps: usize) -> Self {
        Self::Qdwh { bounds: BoundsMode::Exact, tol: QDWH_DEFAULT_TOL, max_steps: steps }
    }

    pub fn zolo() -> Self {
        Self::ZoloPd {
            bounds: BoundsMode::Exact,
            order: ZoloOrder::Auto,
            tol: ZOLO_DEFAULT_TOL,
            max_steps: ZOLO_DEFAULT_MAX_STEPS,
        }
    }

    pub fn newton_schulz(steps: usize) -> Self {
        Self::NewtonSchulz { steps, coeffs: NsCoefficients::MUON }
    }

    pub fn algorithm(&self) -> PolarAlgorithm {
        match self {
            Self::Reference { .. } => PolarAlgorithm::SvdReference,
            Self::NewtonSchulz { .. } => PolarAlgorithm::NewtonSchulz,
            Self::ScaledNewton { .. } => PolarAlgorithm::ScaledNewton,
            Self::Qdwh { .. } => PolarAlgorithm::Qdwh,
            Self::ZoloPd { .. } => PolarAlgorithm::ZoloPd,
        }
    }

    /// Polar factors of `a`; the zero matrix maps to zero factors.
    pub fn compute(&self, a: &DenseMatrix) -> Result<PolarFactors> {
        if a.is_zero() {
            let converged = !matches!(self, Self::NewtonSchulz { .. });
            return Ok(PolarFactors::zero(a.rows(), a.cols(), self.algorithm(), converged));
        }
        match *self {
            Self::Reference { rank_tol } => polar_reference(a, rank_tol),
            Self::NewtonSchulz { steps, coeffs } => Ok(newton_schulz(a, steps, coeffs)),
            Self::ScaledNewton { max_steps, scaling } => scaled_newton(a, max_steps, scaling),
            Self::Qdwh { bounds, tol, max_steps } => qdwh(a, sigma_bounds(a, bounds)?, tol, max_steps),
            Self::ZoloPd { bounds, order, tol, max_steps } => {
                zolo_pd(a, sigma_bounds(a, bounds)?, order, tol, max_steps)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_factor_small_cases() {
        let q = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0], [0.0, 0.0]]).unwrap();
        assert_eq!(hermitian_factor(&q, &q), DenseMatrix::identity(2));
        let a = DenseMatrix::identity(3).scaled(2.0);
        assert_eq!(hermitian_factor(&a, &DenseMatrix::identity(3)), a);
    }

    #[test]
    fn zero_input_through_dispatch() {
        let z = DenseMatrix::zeros(3, 2);
        for m in [PolarMethod::reference(), PolarMethod::qdwh(), PolarMethod::zolo(), PolarMethod::newton_schulz(5)] {
            let p = m.compute(&z).unwrap();
            assert!(p.u.is_zero() && p.h.is_zero());
            assert_eq!(p.converged, !matches!(m, PolarMethod::NewtonSchulz { .. }));
        }
    }
}
