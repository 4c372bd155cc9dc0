use super::{hermitian_factor, on_tall, PolarAlgorithm, PolarDiagnostics, PolarFactors};
use crate::matrix::DenseMatrix;

/// Margin below `√3` for the classic cubic start.
pub const NS_DELTA: f64 = 0.01;

/// Orthogonality residual under which a run is reported converged.
pub const NS_ORTHO_TOL: f64 = 1e-8;

/// Quintic update `X ← aX + bX(XᵀX) + cX(XᵀX)²` started from
/// `start_norm · A/‖A‖_F`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NsCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub start_norm: f64,
}

impl NsCoefficients {
    /// Cubic `½X(3I − XᵀX)`, convergent for `‖X₀‖₂ < √3`.
    pub const CLASSIC: Self = Self { a: 1.5, b: -0.5, c: 0.0, start_norm: 1.732_050_807_568_877_2 - NS_DELTA };

    /// Tuned quintic used by Muon. It does not converge to 1; singular values
    /// settle in a band around it. Needs `‖X₀‖₂ ≤ 1`.
    pub const MUON: Self = Self { a: 3.4445, b: -4.7750, c: 2.0315, start_norm: 1.0 };

    /// `a + b + c`, the value of the scalar map at 1. Exactly 1 for
    /// `CLASSIC`, 0.701 for `MUON`.
    pub fn fixed_point_value(&self) -> f64 {
        self.a + self.b + self.c
    }
}

pub fn newton_schulz(a: &DenseMatrix, steps: usize, coeffs: NsCoefficients) -> PolarFactors {
    let norm = a.frobenius_norm();
    if norm == 0.0 {
        return PolarFactors::zero(a.rows(), a.cols(), PolarAlgorithm::NewtonSchulz, false);
    }
    let run = |t: &DenseMatrix| {
        let n = t.cols();
        let mut x = t.scaled(coeffs.start_norm / norm);
        let mut last_change = None;
        for _ in 0..steps {
            let g = x.t_matmul(&x);
            let mut poly = g.scaled(coeffs.b);
            if coeffs.c != 0.0 {
                poly.axpy(coeffs.c, &g.matmul(&g));
            }
            let mut next = x.matmul(&poly);
            next.axpy(coeffs.a, &x);
            last_change = Some(next.distance(&x) / next.frobenius_norm());
            x = next;
        }
        let mut ortho = x.t_matmul(&x);
        ortho.add_diag(-1.0);
        let residual = ortho.frobenius_norm() / (n as f64).sqrt();
        Ok(PolarFactors {
            u: x,
            h: DenseMatrix::zeros(n, n),
            iterations: steps,
            converged: residual <= NS_ORTHO_TOL,
            algorithm: PolarAlgorithm::NewtonSchulz,
            diagnostics: PolarDiagnostics { last_change, ..Default::default() },
        })
    };
    let mut p = on_tall(a, run).expect("newton_schulz is infallible");
    p.h = hermitian_factor(a, &p.u);
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotation(theta: f64) -> DenseMatrix {
        DenseMatrix::from_rows(&[[theta.cos(), -theta.sin()], [theta.sin(), theta.cos()]]).unwrap()
    }

    #[test]
    fn classic_converges_on_orthogonal_input() {
        let q = rotation(0.7);
        let p = newton_schulz(&q, 10, NsCoefficients::CLASSIC);
        assert!(p.converged);
        assert!(p.u.max_abs_diff(&q) < 1e-12);
    }

    #[test]
    fn classic_scalar_map_matches_oracle() {
        // On diag(σ) the iteration acts entrywise by σ ← 1.5σ − 0.5σ³.
        let d = DenseMatrix::from_diag(&[3.0, 1.0, 0.5]);
        let p = newton_schulz(&d, 3, NsCoefficients::CLASSIC);
        let norm = (9.0f64 + 1.0 + 0.25).sqrt();
        for (i, s0) in [3.0, 1.0, 0.5].iter().enumerate() {
            let mut s = s0 * NsCoefficients::CLASSIC.start_norm / norm;
            for _ in 0..3 {
                s = 1.5 * s - 0.5 * s * s * s;
            }
            assert!((p.u[(i, i)] - s).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_input() {
        let p = newton_schulz(&DenseMatrix::zeros(2, 3), 5, NsCoefficients::MUON);
        assert!(!p.converged && p.u.is_zero());
    }

    #[test]
    fn coefficient_sums() {
        assert_eq!(NsCoefficients::CLASSIC.fixed_point_value(), 1.0);
        // The tuned map sends 1 to 0.701, so 1 is not a fixed point.
        assert!((NsCoefficients::MUON.fixed_point_value() - 0.701).abs() < 1e-12);
    }
}
