//! Matrix optimizers: the PolarGrad family and baselines.
//!
//! Every step reads the learning rate from its schedule at the state's step
//! counter, updates `x` in place and advances the counter by one. A failed
//! polar decomposition leaves both `x` and the state untouched.

mod schedule;

pub use schedule::Schedule;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::polar::{PolarFactors, PolarMethod};
use crate::problems::{CompletionProblem, QuadRegProblem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentumMode {
    /// `X ← (1−λγ)X − γ ν U`, `UH = polar(G)`.
    None,
    /// `M ← βM + (1−β)G`, then polar of `M`.
    MomentumFirst,
    /// Polar of `G`, then `M ← βM + (1−β)U`; `ν` from the gradient.
    PolarFirst,
    /// `M ← βM + G`, then polar of `M`.
    HeavyBall,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarGradConfig {
    pub schedule: Schedule,
    pub weight_decay: f64,
    pub momentum: f64,
    pub mode: MomentumMode,
    pub polar: PolarMethod,
}

impl PolarGradConfig {
    pub fn new(schedule: Schedule) -> Self {
        Self { schedule, weight_decay: 0.0, momentum: 0.0, mode: MomentumMode::None, polar: PolarMethod::default() }
    }

    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        check_momentum(self.momentum)?;
        check_decay(self.weight_decay)
    }
}

/// Shape factor `s` multiplying the Muon update.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MuonScaling {
    Unit,
    /// `√max(1, m/n)`.
    AspectRatio,
    /// `√max(m, n)`.
    MaxDim,
}

impl MuonScaling {
    pub fn factor(self, rows: usize, cols: usize) -> f64 {
        match self {
            Self::Unit => 1.0,
            Self::AspectRatio => (rows as f64 / cols as f64).max(1.0).sqrt(),
            Self::MaxDim => (rows.max(cols) as f64).sqrt(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MuonConfig {
    pub schedule: Schedule,
    pub momentum: f64,
    pub weight_decay: f64,
    pub polar: PolarMethod,
    pub scaling: MuonScaling,
    /// Multiply by `ν = ⟨M, msgn(M)⟩`, turning Muon into momentum-first PolarGradM.
    pub nuclear_scaling: bool,
}

impl MuonConfig {
    pub fn new(schedule: Schedule, momentum: f64) -> Self {
        Self {
            schedule,
            momentum,
            weight_decay: 0.0,
            polar: PolarMethod::newton_schulz(5),
            scaling: MuonScaling::Unit,
            nuclear_scaling: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        check_momentum(self.momentum)?;
        check_decay(self.weight_decay)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdamConfig {
    pub schedule: Schedule,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    /// Decoupled (AdamW-style) decay.
    pub weight_decay: f64,
}

impl AdamConfig {
    pub fn new(schedule: Schedule) -> Self {
        Self { schedule, beta1: 0.9, beta2: 0.999, eps: 1e-8, weight_decay: 0.0 }
    }

    /// `(0.8, 0.95, 1e-10)`.
    pub fn llm(schedule: Schedule) -> Self {
        Self { schedule, beta1: 0.8, beta2: 0.95, eps: 1e-10, weight_decay: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        if !((0.0..1.0).contains(&self.beta1) && (0.0..1.0).contains(&self.beta2)) {
            return Err(Error::Config(format!("Adam betas must lie in [0, 1), got ({}, {})", self.beta1, self.beta2)));
        }
        if !(self.eps > 0.0) {
            return Err(Error::Config(format!("Adam eps must be > 0, got {}", self.eps)));
        }
        check_decay(self.weight_decay)
    }
}

/// Matrix sign descent `X ← X − γ msgn(G)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignDescentConfig {
    pub schedule: Schedule,
    pub polar: PolarMethod,
}

fn check_momentum(beta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::Config(format!("momentum must lie in [0, 1), got {beta}")));
    }
    Ok(())
}

fn check_decay(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Config(format!("weight decay must be >= 0, got {lambda}")));
    }
    Ok(())
}

/// Per-parameter mutable state.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerState {
    pub momentum: DenseMatrix,
    /// Adam's second moment; unused elsewhere.
    pub second_moment: Option<DenseMatrix>,
    pub step: usize,
}

impl OptimizerState {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { momentum: DenseMatrix::zeros(rows, cols), second_moment: None, step: 0 }
    }

    pub fn for_param(x: &DenseMatrix) -> Self {
        Self::new(x.rows(), x.cols())
    }
}

/// What a step did.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StepInfo {
    pub lr: f64,
    /// Nuclear scaling `ν` when the rule uses one.
    pub nu: Option<f64>,
    pub polar_iterations: Option<usize>,
    pub polar_converged: Option<bool>,
    /// `‖X_{k+1} − X_k‖_F`.
    pub update_norm: f64,
}

fn check_shapes(x: &DenseMatrix, grad: &DenseMatrix, state: &OptimizerState) -> Result<()> {
    if x.shape() != grad.shape() || state.momentum.shape() != x.shape() {
        return Err(Error::DimensionMismatch(format!(
            "parameter {:?}, gradient {:?}, state {:?}",
            x.shape(),
            grad.shape(),
            state.momentum.shape()
        )));
    }
    Ok(())
}

/// Polar factors with non-finite output turned into an error. Truncated
/// iteration budgets are accepted.
fn polar(method: &PolarMethod, a: &DenseMatrix) -> Result<PolarFactors> {
    let f = method.compute(a)?;
    if !f.u.is_finite() {
        return Err(Error::Polar(format!("{} returned a non-finite factor", method.algorithm().name())));
    }
    Ok(f)
}

/// `x ← (1 − λγ)x − coef·dir`; returns the update norm.
fn apply(x: &mut DenseMatrix, decay: f64, lr: f64, coef: f64, dir: &DenseMatrix) -> f64 {
    let before = x.clone();
    if decay != 0.0 {
        x.scale(1.0 - decay * lr);
    }
    x.axpy(-coef, dir);
    x.distance(&before)
}

/// PolarGrad with the momentum rule chosen by `cfg.mode`.
pub fn polargrad_step(
    x: &mut DenseMatrix,
    grad: &DenseMatrix,
    cfg: &PolarGradConfig,
    state: &mut OptimizerState,
) -> Result<StepInfo> {
    step_with_mode(x, grad, cfg, cfg.mode, state)
}

/// Vanilla PolarGrad: `X ← (1−λγ)X − γ ν U`, `ν = ⟨G, U⟩ = tr(H)`.
pub fn polar_grad_step(
    x: &mut DenseMatrix,
    grad: &DenseMatrix,
    cfg: &PolarGradConfig,
    state: &mut OptimizerState,
) -> Result<StepInfo> {
    step_with_mode(x, grad, cfg, MomentumMode::None, state)
}

pub fn polar_gradm_momentum_first_step(
    x: &mut DenseMatrix,
    grad: &DenseMatrix,
    cfg: &PolarGradConfig,
    state: &mut OptimizerState,
) -> Result<StepInfo> {
    step_with_mode(x, grad, cfg, MomentumMode::MomentumFirst, state)
}

pub fn polar_gradm_polar_first_step(
    x: &mut DenseMatrix,
    grad: &DenseMatrix,
    cfg: &PolarGradConfig,
    state: &mut OptimizerState,
) -> Result<StepInfo> {
    step_with_mode(x, grad, cfg, MomentumMode::PolarFirst, state)
}

pub fn polar_hb_step(
    x: &mut DenseMatrix,
    grad: &DenseMatrix,
    cfg: &PolarGradConfig,
    state: &mut OptimizerState,
) -> Result<StepInfo> {
    step_with_mode(x, grad, cfg, MomentumMode::HeavyBall, state)
}

fn step_with_mode(
    x: &mut DenseMatrix,
    grad: &DenseMatrix,
    cfg: &PolarGradConfig,
    mode: MomentumMode,
    state: &mut OptimizerState,
) -> Result<StepInfo> {
    check_shapes(x, grad, state)?;
    let lr = cfg.schedule.value(state.step);
    let beta = cfg.momentum;

    let (factors, nu, momentum) = match mode {
        MomentumMode::None => {
            let f = polar(&cfg.polar, grad)?;
            let nu = grad.dot(&f.u);
            (f, nu, None)
        }
        MomentumMode::MomentumFirst | MomentumMode::HeavyBall => {
            let mut m = state.momentum.scaled(beta);
            let w = if mode == MomentumMode::HeavyBall { 1.0 } else { 1.0 - beta };
            m.axpy(w, grad);
            let f = polar(&cfg.polar, &m)?;
            let nu = m.dot(&f.u);
            (f, nu, Some(m))
        }
        MomentumMode::PolarFirst => {
            let f = polar(&cfg.polar, grad)?;
            let nu = grad.dot(&f.u);
            let mut m = state.momentum.scaled(beta);
            m.axpy(1.0 - beta, &f.u);
            (f, nu, Some(m))
        }
    };

    let dir = match (mode, &momentum) {
        (MomentumMode::PolarFirst, Some(m)) => m,
        _ => &factors.u,
    };
    let update_norm = apply(x, cfg.weight_decay, lr, lr * nu, dir);
    if let Some(m) = momentum {
        state.momentum = m;
    }
    state.step += 1;
    Ok(StepInfo {
        lr,
        nu: Some(nu),
        polar_iterations: Some(factors.iterations),
        polar_converged: Some(factors.converged),
        update_norm,
    })
}

/// `M ← βM + (1−β)G`, `X ← (1−λγ)X − γ s msgn(M)` (times `ν` with nuclear scaling).
pub fn muon_step(
    x: &mut DenseMatrix,
    grad: &DenseMatrix,
    cfg: &MuonConfig,
    state: &mut OptimizerState,
) -> Result<StepInfo> {
    check_shapes(x, grad, state)?;
    let lr = cfg.schedule.value(state.step);
    let mut m = state.momentum.scaled(cfg.momentum);
    m.axpy(1.0 - cfg.momentum, grad);
    let f = polar(&cfg.polar, &m)?;
    let s = cfg.scaling.factor(x.rows(), x.cols());
    let nu = cfg.nuclear_scaling.then(|| m.dot(&f.u));
    let coef = lr * s * nu.unwrap_or(1.0);
    let update_norm = apply(x, cfg.weight_decay, lr, coef, &f.u);
    state.momentum = m;
    state.step += 1;
    Ok(StepInfo {
        lr,
        nu,
        polar_iterations: Some(f.iterations),
        polar_converged: Some(f.converged),
        update_norm,
    })
}

/// `X ← X − γ msgn(G)`.
pub fn matrix_signsgd_step(
    x: &mut DenseMatrix,
    grad: &DenseMatrix,
    cfg: &SignDescentConfig,
    state: &mut OptimizerState,
) -> Result<StepInfo> {
    check_shapes(x, grad, state)?;
    let lr = cfg.schedule.value(state.step);
    let f = polar(&cfg.polar, grad)?;
    let update_norm = apply(x, 0.0, lr, lr, &f.u);
    state.step += 1;
    Ok(StepInfo {
        lr,
        nu: None,
        polar_iterations: Some(f.iterations),
        polar_converged: Some(f.converged),
        update_norm,
    })
}

/// Bias-corrected Adam with decoupled weight decay, entrywise.
pub fn adam_step(
    x: &mut DenseMatrix,
    grad: &DenseMatrix,
    cfg: &AdamConfig,
    state: &mut OptimizerState,
) -> Result<StepInfo> {
    check_shapes(x, grad, state)?;
    let lr = cfg.schedule.value(state.step);
    let t = (state.step + 1) as i32;
    let (b1, b2) = (cfg.beta1, cfg.beta2);
    let v = state.second_moment.get_or_insert_with(|| DenseMatrix::zeros(x.rows(), x.cols()));
    let c1 = 1.0 - b1.powi(t);
    let c2 = 1.0 - b2.powi(t);
    let before = x.clone();
    let shrink = 1.0 - cfg.weight_decay * lr;
    let (ms, vs, xs) = (state.momentum.as_mut_slice(), v.as_mut_slice(), x.as_mut_slice());
    for (((m, v), xi), &g) in ms.iter_mut().zip(vs.iter_mut()).zip(xs.iter_mut()).zip(grad.as_slice()) {
        *m = b1 * *m + (1.0 - b1) * g;
        *v = b2 * *v + (1.0 - b2) * g * g;
        let mhat = *m / c1;
        let vhat = *v / c2;
        *xi = shrink * *xi - lr * mhat / (vhat.sqrt() + cfg.eps);
    }
    state.step += 1;
    Ok(StepInfo { lr, update_norm: x.distance(&before), ..Default::default() })
}

/// `X ← X − γ (AᵀA)⁻¹ G (BBᵀ)⁻¹`.
pub fn newton_step_quadratic(
    x: &mut DenseMatrix,
    grad: &DenseMatrix,
    problem: &QuadRegProblem,
    schedule: &Schedule,
    state: &mut OptimizerState,
) -> Result<StepInfo> {
    check_shapes(x, grad, state)?;
    let lr = schedule.value(state.step);
    let dir = problem.newton_direction(grad);
    let update_norm = apply(x, 0.0, lr, lr, &dir);
    state.step += 1;
    Ok(StepInfo { lr, update_norm, ..Default::default() })
}

/// One alternating sweep: step `X` with the current `Y`, then `Y` with the
/// updated `X`.
pub fn altgd_step(x: &mut DenseMatrix, y: &mut DenseMatrix, problem: &CompletionProblem, lr: f64) -> StepInfo {
    let before = (x.clone(), y.clone());
    let gx = problem.grad_x(x, y);
    x.axpy(-lr, &gx);
    let gy = problem.grad_y(x, y);
    y.axpy(-lr, &gy);
    let update_norm = (x.distance(&before.0).powi(2) + y.distance(&before.1).powi(2)).sqrt();
    StepInfo { lr, update_norm, ..Default::default() }
}

/// Any single-matrix rule, for drivers that pick the optimizer at runtime.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MatrixOptimizer {
    PolarGrad(PolarGradConfig),
    Muon(MuonConfig),
    Adam(AdamConfig),
    SignDescent(SignDescentConfig),
}

impl MatrixOptimizer {
    pub fn step(&self, x: &mut DenseMatrix, grad: &DenseMatrix, state: &mut OptimizerState) -> Result<StepInfo> {
        match self {
            Self::PolarGrad(c) => polargrad_step(x, grad, c, state),
            Self::Muon(c) => muon_step(x, grad, c, state),
            Self::Adam(c) => adam_step(x, grad, c, state),
            Self::SignDescent(c) => matrix_signsgd_step(x, grad, c, state),
        }
    }

    pub fn schedule(&self) -> &Schedule {
        match self {
            Self::PolarGrad(c) => &c.schedule,
            Self::Muon(c) => &c.schedule,
            Self::Adam(c) => &c.schedule,
            Self::SignDescent(c) => &c.schedule,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::PolarGrad(c) => c.validate(),
            Self::Muon(c) => c.validate(),
            Self::Adam(c) => c.validate(),
            Self::SignDescent(c) => c.schedule.validate(),
        }
    }
}
