//! Benchmark objectives.

mod completion;
mod logistic;
mod quad;

pub use completion::{CompletionProblem, OBSERVE_PROB};
pub use logistic::{LogisticProblem, LABEL_THRESHOLD};
pub use quad::{QuadKappas, QuadRegProblem};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::random::GENERATOR_NAME;

/// Everything needed to regenerate an instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    /// `A: p×m`, `X: m×n`, `B: n×q`.
    Quad { m: usize, n: usize, p: usize, q: usize, seed: u64 },
    /// `A: samples×m`, `X: m×n`, `B: n×q`.
    Logistic {
        m: usize,
        n: usize,
        samples: usize,
        q: usize,
        batch: usize,
        seed: u64,
        #[serde(default)]
        signed_labels: bool,
    },
    /// `X: m×rank`, `Y: n×rank`.
    Completion { m: usize, n: usize, rank: usize, seed: u64 },
}

impl ProblemSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Quad { .. } => "quad",
            Self::Logistic { .. } => "logistic",
            Self::Completion { .. } => "completion",
        }
    }

    pub fn seed(&self) -> u64 {
        match *self {
            Self::Quad { seed, .. } | Self::Logistic { seed, .. } | Self::Completion { seed, .. } => seed,
        }
    }

    pub fn with_seed(mut self, s: u64) -> Self {
        match &mut self {
            Self::Quad { seed, .. } | Self::Logistic { seed, .. } | Self::Completion { seed, .. } => *seed = s,
        }
        self
    }

    /// Self-describing text form, including the generator name.
    pub fn to_text(&self) -> String {
        let body = toml::to_string(self).expect("problem spec serializes");
        format!("# generator = {GENERATOR_NAME}\n{body}")
    }

    pub fn from_text(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("problem spec: {e}")))
    }

    pub fn build(&self) -> Result<Instance> {
        match *self {
            Self::Quad { m, n, p, q, seed } => {
                let (prob, x0) = QuadRegProblem::make(m, n, p, q, seed)?;
                Ok(Instance { problem: Problem::Quad(prob), init: vec![x0] })
            }
            Self::Logistic { m, n, samples, q, batch, seed, signed_labels } => {
                let (prob, x0) = LogisticProblem::make(m, n, samples, q, batch, seed, signed_labels)?;
                Ok(Instance { problem: Problem::Logistic(prob), init: vec![x0] })
            }
            Self::Completion { m, n, rank, seed } => {
                let (prob, x0, y0) = CompletionProblem::make(m, n, rank, seed)?;
                Ok(Instance { problem: Problem::Completion(prob), init: vec![x0, y0] })
            }
        }
    }
}

/// A built problem plus its initial parameters.
#[derive(Clone, Debug)]
pub struct Instance {
    pub problem: Problem,
    pub init: Vec<DenseMatrix>,
}

#[derive(Clone, Debug)]
pub enum Problem {
    Quad(QuadRegProblem),
    Logistic(LogisticProblem),
    /// Parameters are `[X, Y]`.
    Completion(CompletionProblem),
}

impl Problem {
    /// Full-data loss.
    pub fn loss(&self, params: &[DenseMatrix]) -> f64 {
        match self {
            Self::Quad(p) => p.loss(&params[0]),
            Self::Logistic(p) => p.loss(&params[0], None),
            Self::Completion(p) => p.loss(&params[0], &params[1]),
        }
    }

    /// Gradients with respect to each parameter; `rows` selects a minibatch
    /// for the logistic problem and is ignored otherwise.
    pub fn grads(&self, params: &[DenseMatrix], rows: Option<&[usize]>) -> Vec<DenseMatrix> {
        match self {
            Self::Quad(p) => vec![p.grad(&params[0])],
            Self::Logistic(p) => vec![p.grad(&params[0], rows)],
            Self::Completion(p) => {
                let (gx, gy) = p.grads(&params[0], &params[1]);
                vec![gx, gy]
            }
        }
    }

    pub fn f_star(&self) -> Option<f64> {
        match self {
            Self::Quad(p) => Some(p.f_star()),
            Self::Logistic(_) => None,
            Self::Completion(_) => Some(0.0),
        }
    }

    pub fn gap(&self, params: &[DenseMatrix]) -> Option<f64> {
        match self {
            Self::Quad(p) => Some(p.gap(&params[0])),
            Self::Logistic(_) => None,
            Self::Completion(p) => Some(p.loss(&params[0], &params[1])),
        }
    }

    pub fn is_stochastic(&self) -> bool {
        matches!(self, Self::Logistic(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_text_round_trip() {
        let specs = [
            ProblemSpec::Quad { m: 3, n: 2, p: 6, q: 4, seed: 9 },
            ProblemSpec::Logistic { m: 3, n: 2, samples: 10, q: 4, batch: 5, seed: 1, signed_labels: true },
            ProblemSpec::Completion { m: 7, n: 5, rank: 2, seed: 0 },
        ];
        for s in specs {
            let text = s.to_text();
            assert!(text.contains("generator = chacha8"));
            assert_eq!(ProblemSpec::from_text(&text).unwrap(), s);
        }
    }

    #[test]
    fn rebuild_is_deterministic() {
        let s = ProblemSpec::Completion { m: 9, n: 6, rank: 2, seed: 4 };
        let (a, b) = (s.build().unwrap(), s.build().unwrap());
        assert_eq!(a.init, b.init);
        assert_eq!(a.problem.loss(&a.init), b.problem.loss(&b.init));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ProblemSpec::from_text("kind = \"quad\"\nm = 1\nn = 1\np = 1\nq = 1\nseed = 0\nextra = 2\n").is_err());
    }
}
