//! Named run configurations.
//!
//! `<problem>/<optimizer>` uses the published dimensions and hyperparameters;
//! `desk/<problem>/<optimizer>` shrinks every dimension about 25× (aspect
//! ratios kept). Optimizers whose step is measured in curvature units
//! (PolarGrad family, AltGD) get their learning rate multiplied by the ratio
//! of `L·r` between the two sizes; Muon, Adam, sign descent and Newton keep
//! theirs. A trailing `@<seed>` picks the seed (default 0).

use crate::error::{Error, Result};
use crate::harness::config::{OptimizerSpec, PolarBackend, PolarSpec, RunConfig};
use crate::optim::{MomentumMode, MuonScaling, Schedule};
use crate::problems::ProblemSpec;

pub const PRESET_SEEDS: [u64; 3] = [0, 1, 2];
pub const DESK_PREFIX: &str = "desk/";

/// `L·r` at full size over `L·r` at desk size, with `L` from the expected
/// extreme singular values of Gaussian factors. For quad that ratio is about
/// 125, which puts PolarGrad(QDWH) past its stability edge on the desk
/// instances; 100 stays inside it.
pub const QUAD_DESK_LR_SCALE: f64 = 100.0;
pub const LOGISTIC_DESK_LR_SCALE: f64 = 125.0;
/// Rank is unchanged and the per-row curvature grows 5× as `m` shrinks.
pub const COMPLETION_DESK_LR_SCALE: f64 = 0.2;

const QUAD_STEPS: usize = 1000;
const LOGISTIC_STEPS: usize = 500;
const COMPLETION_STEPS: usize = 500;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Quad,
    Logistic,
    Completion,
}

impl Kind {
    fn key(self) -> &'static str {
        match self {
            Self::Quad => "quad",
            Self::Logistic => "logistic",
            Self::Completion => "completion",
        }
    }

    fn problem(self, desk: bool) -> ProblemSpec {
        match (self, desk) {
            (Self::Quad, false) => ProblemSpec::Quad { m: 500, n: 100, p: 1000, q: 250, seed: 0 },
            (Self::Quad, true) => ProblemSpec::Quad { m: 100, n: 20, p: 200, q: 50, seed: 0 },
            (Self::Logistic, false) => ProblemSpec::Logistic {
                m: 1000,
                n: 100,
                samples: 10000,
                q: 400,
                batch: 1000,
                seed: 0,
                signed_labels: false,
            },
            (Self::Logistic, true) => ProblemSpec::Logistic {
                m: 200,
                n: 20,
                samples: 2000,
                q: 80,
                batch: 200,
                seed: 0,
                signed_labels: false,
            },
            (Self::Completion, false) => ProblemSpec::Completion { m: 500, n: 250, rank: 5, seed: 0 },
            (Self::Completion, true) => ProblemSpec::Completion { m: 100, n: 50, rank: 5, seed: 0 },
        }
    }

    fn decay(self, lr: f64) -> Schedule {
        let factor = if self == Self::Quad { 0.99 } else { 0.95 };
        Schedule::StepDecay { lr, factor, every: 25 }
    }

    fn steps(self) -> usize {
        match self {
            Self::Quad => QUAD_STEPS,
            Self::Logistic => LOGISTIC_STEPS,
            Self::Completion => COMPLETION_STEPS,
        }
    }

    fn desk_lr_scale(self) -> f64 {
        match self {
            Self::Quad => QUAD_DESK_LR_SCALE,
            Self::Logistic => LOGISTIC_DESK_LR_SCALE,
            Self::Completion => COMPLETION_DESK_LR_SCALE,
        }
    }
}

struct Row {
    kind: Kind,
    name: &'static str,
    opt: OptimizerSpec,
    lr: f64,
    decay: bool,
}

fn polar(backend: PolarBackend, steps: Option<usize>) -> PolarSpec {
    PolarSpec::new(backend, steps)
}

fn pg(mode: MomentumMode, momentum: f64, backend: PolarBackend, steps: Option<usize>) -> OptimizerSpec {
    OptimizerSpec::PolarGrad { mode, momentum, weight_decay: 0.0, polar: polar(backend, steps) }
}

fn muon(momentum: f64, backend: PolarBackend, steps: Option<usize>) -> OptimizerSpec {
    OptimizerSpec::Muon {
        momentum,
        weight_decay: 0.0,
        polar: polar(backend, steps),
        scaling: MuonScaling::Unit,
        nuclear_scaling: false,
    }
}

fn adam() -> OptimizerSpec {
    OptimizerSpec::Adam { beta1: 0.9, beta2: 0.999, eps: 1e-8, weight_decay: 0.0 }
}

fn rows() -> Vec<Row> {
    use Kind::*;
    use MomentumMode::{MomentumFirst as MF, None as NoM, PolarFirst as PF};
    use PolarBackend::{NewtonSchulz as Ns, Qdwh, ZoloPd as Zolo};
    let row = |kind, name, opt, lr, decay| Row { kind, name, opt, lr, decay };
    vec![
        row(Quad, "PolarGrad(QDWH)", pg(NoM, 0.0, Qdwh, Some(2)), 4e-8, false),
        row(Quad, "PolarGrad(ZOLO)", pg(NoM, 0.0, Zolo, None), 3e-8, false),
        row(Quad, "PolarGrad(QDWH)+decay", pg(NoM, 0.0, Qdwh, Some(2)), 4.75e-8, true),
        row(Quad, "Muon(NS)", muon(0.95, Ns, Some(5)), 0.1, false),
        row(Quad, "Muon(QDWH)", muon(0.95, Qdwh, Some(2)), 0.1, false),
        row(Quad, "Muon(ZOLO)", muon(0.95, Zolo, None), 0.1, false),
        row(Quad, "Muon(QDWH)+decay", muon(0.95, Qdwh, Some(2)), 0.05, true),
        row(Quad, "Newton", OptimizerSpec::Newton, 0.25, false),
        row(Quad, "Adam", adam(), 0.05, false),
        row(Quad, "Adam+decay", adam(), 0.05, true),
        row(Quad, "PolarGradM(polar-first)", pg(PF, 0.95, Qdwh, Some(2)), 4e-7, false),
        row(Quad, "PolarGradM(polar-first)+decay", pg(PF, 0.95, Qdwh, Some(2)), 5e-7, true),
        row(Quad, "PolarGradM(momentum-first)", pg(MF, 0.9, Qdwh, Some(2)), 2e-7, false),
        row(Quad, "PolarGradM(momentum-first)+decay", pg(MF, 0.9, Qdwh, Some(2)), 2.5e-7, true),
        row(Logistic, "PolarSGD(QDWH)", pg(NoM, 0.0, Qdwh, Some(2)), 2.5e-7, false),
        row(Logistic, "PolarSGD(QDWH)+decay", pg(NoM, 0.0, Qdwh, Some(2)), 5e-7, true),
        row(Logistic, "Muon(NS)", muon(0.95, Ns, Some(5)), 0.075, false),
        row(Logistic, "Muon(QDWH)", muon(0.95, Qdwh, Some(2)), 0.075, false),
        row(Logistic, "Muon(QDWH)+decay", muon(0.95, Qdwh, Some(2)), 0.15, true),
        row(Logistic, "Adam", adam(), 0.005, false),
        row(Logistic, "Adam+decay", adam(), 0.01, true),
        row(Logistic, "PolarSGDM(polar-first)", pg(PF, 0.95, Qdwh, Some(2)), 5e-7, false),
        row(Logistic, "PolarSGDM(polar-first)+decay", pg(PF, 0.95, Qdwh, Some(2)), 5e-7, true),
        row(Logistic, "PolarSGDM(momentum-first)", pg(MF, 0.9, Qdwh, Some(2)), 5e-7, false),
        row(Logistic, "PolarSGDM(momentum-first)+decay", pg(MF, 0.9, Qdwh, Some(2)), 5e-7, true),
        row(Completion, "PolarGrad(QDWH)", pg(NoM, 0.0, Qdwh, Some(2)), 15.0, false),
        row(Completion, "PolarGrad(QDWH)+decay", pg(NoM, 0.0, Qdwh, Some(2)), 15.0, true),
        row(Completion, "Muon(NS)", muon(0.95, Ns, Some(5)), 0.25, false),
        row(Completion, "Muon(QDWH)", muon(0.95, Qdwh, Some(2)), 0.25, false),
        row(Completion, "Muon(QDWH)+decay", muon(0.95, Qdwh, Some(2)), 0.25, true),
        row(Completion, "Adam", adam(), 0.05, false),
        row(Completion, "Adam+decay", adam(), 0.05, true),
        row(Completion, "AltGD", OptimizerSpec::AltGd, 50.0, false),
        row(Completion, "PolarGradM(polar-first)", pg(PF, 0.5, Qdwh, Some(2)), 15.0, false),
        row(Completion, "PolarGradM(polar-first)+decay", pg(PF, 0.5, Qdwh, Some(2)), 15.0, true),
        row(Completion, "PolarGradM(momentum-first)", pg(MF, 0.5, Qdwh, Some(2)), 7.5, false),
        row(Completion, "PolarGradM(momentum-first)+decay", pg(MF, 0.5, Qdwh, Some(2)), 7.5, true),
    ]
}

/// Rows not taken from a published table: matrix sign descent as the
/// unscaled counterpart of PolarGrad. Its step size is ours.
const SIGN_DESCENT_NAME: &str = "SignDescent(QDWH)";
pub const SIGN_DESCENT_LR: f64 = 0.1;

fn curvature_scaled(opt: &OptimizerSpec) -> bool {
    matches!(opt, OptimizerSpec::PolarGrad { .. } | OptimizerSpec::AltGd)
}

fn build(row: &Row, desk: bool) -> RunConfig {
    let lr = if desk && curvature_scaled(&row.opt) { row.lr * row.kind.desk_lr_scale() } else { row.lr };
    let schedule = if row.decay { row.kind.decay(lr) } else { Schedule::constant(lr) };
    let prefix = if desk { DESK_PREFIX } else { "" };
    let mut cfg = RunConfig::new(
        format!("{prefix}{}/{}", row.kind.key(), row.name),
        row.kind.problem(desk),
        row.opt,
        schedule,
    );
    cfg.total_steps = row.kind.steps();
    cfg
}

fn all_rows() -> Vec<Row> {
    let mut r = rows();
    r.push(Row {
        kind: Kind::Quad,
        name: SIGN_DESCENT_NAME,
        opt: OptimizerSpec::SignDescent { polar: polar(PolarBackend::Qdwh, None) },
        lr: SIGN_DESCENT_LR,
        decay: false,
    });
    r
}

/// Every preset name (seed suffix omitted).
pub fn preset_names() -> Vec<String> {
    let rows = all_rows();
    let full = rows.iter().map(|r| build(r, false).name);
    let desk = rows.iter().map(|r| build(r, true).name);
    full.chain(desk).collect()
}

/// Resolves `name`, with an optional `@seed` suffix.
pub fn preset(name: &str) -> Result<RunConfig> {
    let (base, seed) = match name.rsplit_once('@') {
        Some((b, s)) => {
            let seed = s.parse::<u64>().map_err(|_| Error::UnknownPreset(name.into()))?;
            (b, seed)
        }
        None => (name, 0),
    };
    let (desk, rest) = match base.strip_prefix(DESK_PREFIX) {
        Some(r) => (true, r),
        None => (false, base),
    };
    all_rows()
        .iter()
        .find(|r| format!("{}/{}", r.kind.key(), r.name) == rest)
        .map(|r| build(r, desk).with_seed(seed))
        .ok_or_else(|| Error::UnknownPreset(name.into()))
}

/// The preset at each of [`PRESET_SEEDS`].
pub fn preset_seeds(name: &str) -> Result<Vec<RunConfig>> {
    let base = preset(name)?;
    Ok(PRESET_SEEDS.iter().map(|&s| base.clone().with_seed(s)).collect())
}
