//! Run configuration and its flat key-value text form.
//!
//! The text form is a flat TOML document (no tables). Recognised keys:
//!
//! ```text
//! name          = "quad/PolarGrad(QDWH)"
//! problem       = "quad" | "logistic" | "completion"
//! m, n, p, q    = dims (quad); m, n, samples, q, batch (logistic); m, n, rank (completion)
//! signed_labels = false                       # logistic only
//! seed          = 0
//! optimizer     = "polargrad" | "muon" | "adam" | "sign" | "newton" | "altgd"
//! momentum_mode = "none" | "momentum_first" | "polar_first" | "heavy_ball"
//! momentum      = 0.95                        # β
//! weight_decay  = 0.0
//! beta1, beta2, eps                           # adam
//! muon_scaling  = "unit" | "aspect_ratio" | "max_dim"
//! nuclear_scaling = false                     # muon
//! polar         = "svd" | "ns" | "newton" | "qdwh" | "zolo"
//! polar_steps   = 2                           # inner iteration cap
//! polar_bounds  = "exact" | "heuristic"
//! zolo_order    = 8                           # omitted = chosen from κ
//! schedule      = "constant" | "step_decay" | "linear_to_zero" | "warmup_cosine" | "inverse_lr"
//! lr            = 4e-8
//! decay_factor, decay_every                   # step_decay
//! decay_ratio                                 # linear_to_zero
//! warmup_steps                                # warmup_cosine
//! rank_rule     = "exact" | "max"             # inverse_lr: γ_k = 1/(L r_k)
//! total_steps   = 1000
//! log_every     = 1
//! cond_every    = 10
//! check_descent = false
//! output        = "runs/quad"                 # optional
//! ```
//!
//! Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::BoundsMode;
use crate::optim::{MomentumMode, MuonScaling, Schedule};
use crate::polar::{
    NsCoefficients, PolarMethod, ScalingMode, ZoloOrder, QDWH_DEFAULT_MAX_STEPS, QDWH_DEFAULT_TOL,
    ZOLO_DEFAULT_MAX_STEPS, ZOLO_DEFAULT_TOL,
};
use crate::problems::ProblemSpec;

const SCALED_NEWTON_DEFAULT_STEPS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolarBackend {
    Svd,
    NewtonSchulz,
    ScaledNewton,
    Qdwh,
    ZoloPd,
}

impl PolarBackend {
    pub fn key(self) -> &'static str {
        match self {
            Self::Svd => "svd",
            Self::NewtonSchulz => "ns",
            Self::ScaledNewton => "newton",
            Self::Qdwh => "qdwh",
            Self::ZoloPd => "zolo",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Svd => "SVD",
            Self::NewtonSchulz => "NS",
            Self::ScaledNewton => "Newton",
            Self::Qdwh => "QDWH",
            Self::ZoloPd => "ZOLO",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "svd" => Self::Svd,
            "ns" => Self::NewtonSchulz,
            "newton" => Self::ScaledNewton,
            "qdwh" => Self::Qdwh,
            "zolo" => Self::ZoloPd,
            _ => return Err(Error::Config(format!("unknown polar backend {s:?}"))),
        })
    }
}

/// Polar backend plus its inner iteration cap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarSpec {
    pub backend: PolarBackend,
    /// `None` uses the backend default (5 for Newton–Schulz).
    pub steps: Option<usize>,
    pub bounds: BoundsMode,
    /// `None` picks the order from the estimated condition number.
    pub zolo_order: Option<usize>,
}

impl PolarSpec {
    pub fn new(backend: PolarBackend, steps: Option<usize>) -> Self {
        Self { backend, steps, bounds: BoundsMode::Exact, zolo_order: None }
    }

    pub fn method(&self) -> PolarMethod {
        match self.backend {
            PolarBackend::Svd => PolarMethod::reference(),
            PolarBackend::NewtonSchulz => {
                PolarMethod::NewtonSchulz { steps: self.steps.unwrap_or(5), coeffs: NsCoefficients::MUON }
            }
            PolarBackend::ScaledNewton => PolarMethod::ScaledNewton {
                max_steps: self.steps.unwrap_or(SCALED_NEWTON_DEFAULT_STEPS),
                scaling: ScalingMode::Frobenius,
            },
            PolarBackend::Qdwh => PolarMethod::Qdwh {
                bounds: self.bounds,
                tol: QDWH_DEFAULT_TOL,
                max_steps: self.steps.unwrap_or(QDWH_DEFAULT_MAX_STEPS),
            },
            PolarBackend::ZoloPd => PolarMethod::ZoloPd {
                bounds: self.bounds,
                order: self.zolo_order.map_or(ZoloOrder::Auto, ZoloOrder::Fixed),
                tol: ZOLO_DEFAULT_TOL,
                max_steps: self.steps.unwrap_or(ZOLO_DEFAULT_MAX_STEPS),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OptimizerSpec {
    PolarGrad { mode: MomentumMode, momentum: f64, weight_decay: f64, polar: PolarSpec },
    Muon { momentum: f64, weight_decay: f64, polar: PolarSpec, scaling: MuonScaling, nuclear_scaling: bool },
    Adam { beta1: f64, beta2: f64, eps: f64, weight_decay: f64 },
    /// Matrix sign descent.
    SignDescent { polar: PolarSpec },
    /// Exact Newton on the quadratic problem.
    Newton,
    /// Alternating gradient descent on the completion problem.
    AltGd,
}

impl OptimizerSpec {
    pub fn key(&self) -> &'static str {
        match self {
            Self::PolarGrad { .. } => "polargrad",
            Self::Muon { .. } => "muon",
            Self::Adam { .. } => "adam",
            Self::SignDescent { .. } => "sign",
            Self::Newton => "newton",
            Self::AltGd => "altgd",
        }
    }

    /// Display name, e.g. `PolarGradM(momentum-first)` or `Muon(NS)`.
    pub fn label(&self) -> String {
        match self {
            Self::PolarGrad { mode, polar, .. } => match mode {
                MomentumMode::None => format!("PolarGrad({})", polar.backend.label()),
                MomentumMode::MomentumFirst => format!("PolarGradM({}, momentum-first)", polar.backend.label()),
                MomentumMode::PolarFirst => format!("PolarGradM({}, polar-first)", polar.backend.label()),
                MomentumMode::HeavyBall => format!("PolarHB({})", polar.backend.label()),
            },
            Self::Muon { polar, nuclear_scaling, .. } => {
                let tag = if *nuclear_scaling { "+nuclear" } else { "" };
                format!("Muon({}){tag}", polar.backend.label())
            }
            Self::Adam { .. } => "Adam".into(),
            Self::SignDescent { polar } => format!("SignDescent({})", polar.backend.label()),
            Self::Newton => "Newton".into(),
            Self::AltGd => "AltGD".into(),
        }
    }
}

/// How many singular values count in `γ_k = 1/(L r_k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankRule {
    /// Numerical rank of the current gradient.
    Exact,
    /// `min(m, n)`.
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LrSpec {
    Schedule(Schedule),
    /// `γ_k = 1/(L r_k)`; quadratic problem only.
    InverseLipschitzRank(RankRule),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub name: String,
    pub problem: ProblemSpec,
    pub optimizer: OptimizerSpec,
    pub lr: LrSpec,
    pub total_steps: usize,
    pub log_every: usize,
    /// Condition numbers and nuclear norms cost an SVD and are logged sparser.
    pub cond_every: usize,
    /// Assert the per-step sufficient-decrease bound (inverse-lr PolarGrad on
    /// the quadratic); violations are counted in the run summary.
    pub check_descent: bool,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(name: impl Into<String>, problem: ProblemSpec, optimizer: OptimizerSpec, schedule: Schedule) -> Self {
        Self {
            name: name.into(),
            problem,
            optimizer,
            lr: LrSpec::Schedule(schedule),
            total_steps: 100,
            log_every: 1,
            cond_every: 10,
            check_descent: false,
            output: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.problem.seed()
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.problem = self.problem.with_seed(seed);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.total_steps == 0 {
            return Err(Error::Config("total_steps must be >= 1".into()));
        }
        if self.log_every == 0 || self.cond_every == 0 {
            return Err(Error::Config("log_every and cond_every must be >= 1".into()));
        }
        validate_problem(&self.problem)?;
        if let LrSpec::Schedule(s) = &self.lr {
            s.validate()?;
        }
        let kind = self.problem.kind();
        match self.optimizer {
            OptimizerSpec::Newton if kind != "quad" => {
                return Err(Error::Config("newton needs the quad problem".into()));
            }
            OptimizerSpec::AltGd if kind != "completion" => {
                return Err(Error::Config("altgd needs the completion problem".into()));
            }
            OptimizerSpec::PolarGrad { momentum, weight_decay, .. }
            | OptimizerSpec::Muon { momentum, weight_decay, .. } => {
                if !(0.0..1.0).contains(&momentum) {
                    return Err(Error::Config(format!("momentum must lie in [0, 1), got {momentum}")));
                }
                if !(weight_decay >= 0.0) {
                    return Err(Error::Config(format!("weight_decay must be >= 0, got {weight_decay}")));
                }
            }
            OptimizerSpec::Adam { beta1, beta2, eps, weight_decay } => {
                if !((0.0..1.0).contains(&beta1) && (0.0..1.0).contains(&beta2) && eps > 0.0 && weight_decay >= 0.0) {
                    return Err(Error::Config("adam needs betas in [0, 1), eps > 0, weight_decay >= 0".into()));
                }
            }
            _ => {}
        }
        if let LrSpec::InverseLipschitzRank(_) = self.lr {
            let plain = matches!(self.optimizer, OptimizerSpec::PolarGrad { mode: MomentumMode::None, .. });
            if kind != "quad" || !plain {
                return Err(Error::Config("inverse_lr needs plain polargrad on the quad problem".into()));
            }
        }
        if self.check_descent && !matches!(self.lr, LrSpec::InverseLipschitzRank(_)) {
            return Err(Error::Config("check_descent needs schedule = \"inverse_lr\"".into()));
        }
        Ok(())
    }

    /// Flat key-value text; `from_text(to_text(c)) == c`.
    pub fn to_text(&self) -> String {
        toml::to_string(&FlatConfig::from(self)).expect("flat config serializes")
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let flat: FlatConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let cfg = flat.into_config()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// SHA-256 of the text form with the output path removed.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = None;
        let digest = Sha256::digest(c.to_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Short identity of the problem instance; runs are comparable only when it matches.
    pub fn problem_id(&self) -> String {
        problem_id(&self.problem)
    }
}

pub fn problem_id(p: &ProblemSpec) -> String {
    match *p {
        ProblemSpec::Quad { m, n, p, q, seed } => format!("quad m={m} n={n} p={p} q={q} seed={seed}"),
        ProblemSpec::Logistic { m, n, samples, q, batch, seed, signed_labels } => {
            format!("logistic m={m} n={n} samples={samples} q={q} batch={batch} seed={seed} signed={signed_labels}")
        }
        ProblemSpec::Completion { m, n, rank, seed } => format!("completion m={m} n={n} rank={rank} seed={seed}"),
    }
}

fn validate_problem(p: &ProblemSpec) -> Result<()> {
    let ok = match *p {
        ProblemSpec::Quad { m, n, p, q, .. } => m > 0 && n > 0 && p > 0 && q > 0,
        ProblemSpec::Logistic { m, n, samples, q, batch, .. } => {
            m > 0 && n > 0 && q > 0 && batch > 0 && batch <= samples
        }
        ProblemSpec::Completion { m, n, rank, .. } => m > 0 && n > 0 && rank > 0,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!("invalid problem dims: {}", problem_id(p))))
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlatConfig {
    name: String,
    problem: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    batch: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    signed_labels: Option<bool>,
    #[serde(default)]
    seed: u64,
    optimizer: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    momentum_mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    momentum: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight_decay: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    muon_scaling: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nuclear_scaling: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    polar: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    polar_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    polar_bounds: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    zolo_order: Option<usize>,
    schedule: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    lr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decay_factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decay_every: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decay_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    warmup_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank_rule: Option<String>,
    total_steps: usize,
    #[serde(default = "one")]
    log_every: usize,
    #[serde(default = "ten")]
    cond_every: usize,
    #[serde(default)]
    check_descent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<PathBuf>,
}

fn one() -> usize {
    1
}

fn ten() -> usize {
    10
}

fn need<T>(v: Option<T>, key: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("missing key `{key}`")))
}

fn mode_key(m: MomentumMode) -> &'static str {
    match m {
        MomentumMode::None => "none",
        MomentumMode::MomentumFirst => "momentum_first",
        MomentumMode::PolarFirst => "polar_first",
        MomentumMode::HeavyBall => "heavy_ball",
    }
}

fn scaling_key(s: MuonScaling) -> &'static str {
    match s {
        MuonScaling::Unit => "unit",
        MuonScaling::AspectRatio => "aspect_ratio",
        MuonScaling::MaxDim => "max_dim",
    }
}

impl From<&RunConfig> for FlatConfig {
    fn from(c: &RunConfig) -> Self {
        let mut f = FlatConfig {
            name: c.name.clone(),
            problem: c.problem.kind().into(),
            seed: c.problem.seed(),
            optimizer: c.optimizer.key().into(),
            total_steps: c.total_steps,
            log_every: c.log_every,
            cond_every: c.cond_every,
            check_descent: c.check_descent,
            output: c.output.clone(),
            ..Default::default()
        };
        match c.problem {
            ProblemSpec::Quad { m, n, p, q, .. } => {
                (f.m, f.n, f.p, f.q) = (Some(m), Some(n), Some(p), Some(q));
            }
            ProblemSpec::Logistic { m, n, samples, q, batch, signed_labels, .. } => {
                (f.m, f.n, f.samples, f.q, f.batch) = (Some(m), Some(n), Some(samples), Some(q), Some(batch));
                f.signed_labels = Some(signed_labels);
            }
            ProblemSpec::Completion { m, n, rank, .. } => {
                (f.m, f.n, f.rank) = (Some(m), Some(n), Some(rank));
            }
        }
        let set_polar = |f: &mut FlatConfig, p: &PolarSpec| {
            f.polar = Some(p.backend.key().into());
            f.polar_steps = p.steps;
            f.polar_bounds = Some(match p.bounds {
                BoundsMode::Exact => "exact".into(),
                BoundsMode::Heuristic => "heuristic".into(),
            });
            f.zolo_order = p.zolo_order;
        };
        match &c.optimizer {
            OptimizerSpec::PolarGrad { mode, momentum, weight_decay, polar } => {
                f.momentum_mode = Some(mode_key(*mode).into());
                f.momentum = Some(*momentum);
                f.weight_decay = Some(*weight_decay);
                set_polar(&mut f, polar);
            }
            OptimizerSpec::Muon { momentum, weight_decay, polar, scaling, nuclear_scaling } => {
                f.momentum = Some(*momentum);
                f.weight_decay = Some(*weight_decay);
                f.muon_scaling = Some(scaling_key(*scaling).into());
                f.nuclear_scaling = Some(*nuclear_scaling);
                set_polar(&mut f, polar);
            }
            OptimizerSpec::Adam { beta1, beta2, eps, weight_decay } => {
                (f.beta1, f.beta2, f.eps, f.weight_decay) = (Some(*beta1), Some(*beta2), Some(*eps), Some(*weight_decay));
            }
            OptimizerSpec::SignDescent { polar } => set_polar(&mut f, polar),
            OptimizerSpec::Newton | OptimizerSpec::AltGd => {}
        }
        match c.lr {
            LrSpec::Schedule(s) => {
                f.lr = Some(s.base_lr());
                f.schedule = match s {
                    Schedule::Constant { .. } => "constant".into(),
                    Schedule::StepDecay { factor, every, .. } => {
                        (f.decay_factor, f.decay_every) = (Some(factor), Some(every));
                        "step_decay".into()
                    }
                    Schedule::LinearToZero { decay_ratio, .. } => {
                        f.decay_ratio = Some(decay_ratio);
                        "linear_to_zero".into()
                    }
                    Schedule::WarmupCosine { warmup_steps, .. } => {
                        f.warmup_steps = Some(warmup_steps);
                        "warmup_cosine".into()
                    }
                };
            }
            LrSpec::InverseLipschitzRank(rule) => {
                f.schedule = "inverse_lr".into();
                f.rank_rule = Some(match rule {
                    RankRule::Exact => "exact".into(),
                    RankRule::Max => "max".into(),
                });
            }
        }
        f
    }
}

impl FlatConfig {
    fn into_config(self) -> Result<RunConfig> {
        let seed = self.seed;
        let problem = match self.problem.as_str() {
            "quad" => ProblemSpec::Quad {
                m: need(self.m, "m")?,
                n: need(self.n, "n")?,
                p: need(self.p, "p")?,
                q: need(self.q, "q")?,
                seed,
            },
            "logistic" => ProblemSpec::Logistic {
                m: need(self.m, "m")?,
                n: need(self.n, "n")?,
                samples: need(self.samples, "samples")?,
                q: need(self.q, "q")?,
                batch: need(self.batch, "batch")?,
                seed,
                signed_labels: self.signed_labels.unwrap_or(false),
            },
            "completion" => ProblemSpec::Completion {
                m: need(self.m, "m")?,
                n: need(self.n, "n")?,
                rank: need(self.rank, "rank")?,
                seed,
            },
            other => return Err(Error::Config(format!("unknown problem {other:?}"))),
        };

        let polar = || -> Result<PolarSpec> {
            let backend = PolarBackend::parse(self.polar.as_deref().unwrap_or("qdwh"))?;
            let bounds = match self.polar_bounds.as_deref().unwrap_or("exact") {
                "exact" => BoundsMode::Exact,
                "heuristic" => BoundsMode::Heuristic,
                other => return Err(Error::Config(format!("unknown polar_bounds {other:?}"))),
            };
            Ok(PolarSpec { backend, steps: self.polar_steps, bounds, zolo_order: self.zolo_order })
        };
        let weight_decay = self.weight_decay.unwrap_or(0.0);
        let optimizer = match self.optimizer.as_str() {
            "polargrad" => {
                let mode = match self.momentum_mode.as_deref().unwrap_or("none") {
                    "none" => MomentumMode::None,
                    "momentum_first" => MomentumMode::MomentumFirst,
                    "polar_first" => MomentumMode::PolarFirst,
                    "heavy_ball" => MomentumMode::HeavyBall,
                    other => return Err(Error::Config(format!("unknown momentum_mode {other:?}"))),
                };
                OptimizerSpec::PolarGrad { mode, momentum: self.momentum.unwrap_or(0.0), weight_decay, polar: polar()? }
            }
            "muon" => {
                let scaling = match self.muon_scaling.as_deref().unwrap_or("unit") {
                    "unit" => MuonScaling::Unit,
                    "aspect_ratio" => MuonScaling::AspectRatio,
                    "max_dim" => MuonScaling::MaxDim,
                    other => return Err(Error::Config(format!("unknown muon_scaling {other:?}"))),
                };
                OptimizerSpec::Muon {
                    momentum: need(self.momentum, "momentum")?,
                    weight_decay,
                    polar: polar()?,
                    scaling,
                    nuclear_scaling: self.nuclear_scaling.unwrap_or(false),
                }
            }
            "adam" => OptimizerSpec::Adam {
                beta1: self.beta1.unwrap_or(0.9),
                beta2: self.beta2.unwrap_or(0.999),
                eps: self.eps.unwrap_or(1e-8),
                weight_decay,
            },
            "sign" => OptimizerSpec::SignDescent { polar: polar()? },
            "newton" => OptimizerSpec::Newton,
            "altgd" => OptimizerSpec::AltGd,
            other => return Err(Error::Config(format!("unknown optimizer {other:?}"))),
        };

        let lr = match self.schedule.as_str() {
            "inverse_lr" => LrSpec::InverseLipschitzRank(match self.rank_rule.as_deref().unwrap_or("exact") {
                "exact" => RankRule::Exact,
                "max" => RankRule::Max,
                other => return Err(Error::Config(format!("unknown rank_rule {other:?}"))),
            }),
            kind => {
                let lr = need(self.lr, "lr")?;
                LrSpec::Schedule(match kind {
                    "constant" => Schedule::Constant { lr },
                    "step_decay" => Schedule::StepDecay {
                        lr,
                        factor: need(self.decay_factor, "decay_factor")?,
                        every: need(self.decay_every, "decay_every")?,
                    },
                    "linear_to_zero" => Schedule::LinearToZero {
                        lr,
                        total_steps: self.total_steps,
                        decay_ratio: need(self.decay_ratio, "decay_ratio")?,
                    },
                    "warmup_cosine" => Schedule::WarmupCosine {
                        lr,
                        warmup_steps: need(self.warmup_steps, "warmup_steps")?,
                        total_steps: self.total_steps,
                    },
                    other => return Err(Error::Config(format!("unknown schedule {other:?}"))),
                })
            }
        };

        Ok(RunConfig {
            name: self.name,
            problem,
            optimizer,
            lr,
            total_steps: self.total_steps,
            log_every: self.log_every,
            cond_every: self.cond_every,
            check_descent: self.check_descent,
            output: self.output,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunConfig {
        let polar = PolarSpec::new(PolarBackend::Qdwh, Some(2));
        let opt = OptimizerSpec::PolarGrad { mode: MomentumMode::PolarFirst, momentum: 0.95, weight_decay: 0.0, polar };
        let prob = ProblemSpec::Quad { m: 10, n: 4, p: 20, q: 6, seed: 2 };
        RunConfig::new("t", prob, opt, Schedule::StepDecay { lr: 4e-8, factor: 0.99, every: 25 })
    }

    #[test]
    fn text_round_trip() {
        let c = sample();
        let text = c.to_text();
        assert!(!text.contains('['), "flat form has no tables:\n{text}");
        assert_eq!(RunConfig::from_text(&text).unwrap(), c);
    }

    #[test]
    fn unknown_key_rejected() {
        let text = format!("{}bogus = 1\n", sample().to_text());
        assert!(matches!(RunConfig::from_text(&text), Err(Error::Config(_))));
    }

    #[test]
    fn invalid_values_rejected() {
        let mut c = sample();
        c.total_steps = 0;
        assert!(c.validate().is_err());
        let mut c = sample();
        c.optimizer = OptimizerSpec::AltGd;
        assert!(c.validate().is_err());
        let mut c = sample();
        c.lr = LrSpec::InverseLipschitzRank(RankRule::Exact);
        assert!(c.validate().is_err(), "momentum mode with inverse lr");
    }

    #[test]
    fn hash_ignores_output_path() {
        let a = sample();
        let mut b = sample();
        b.output = Some("elsewhere".into());
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), a.clone().with_seed(9).hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn labels() {
        assert_eq!(sample().optimizer.label(), "PolarGradM(QDWH, polar-first)");
        assert_eq!(OptimizerSpec::AltGd.label(), "AltGD");
    }
}
