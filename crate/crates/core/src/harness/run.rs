use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::harness::config::{LrSpec, OptimizerSpec, RankRule, RunConfig};
use crate::harness::manifest::{artifact_version, Manifest, MANIFEST_SCHEMA};
use crate::harness::trace::{write_trace_file, TraceRecord};
use crate::linalg::{cond2_from_sigma, svd, DEFAULT_RANK_TOL};
use crate::matrix::DenseMatrix;
use crate::optim::{
    altgd_step, newton_step_quadratic, AdamConfig, MatrixOptimizer, MuonConfig, OptimizerState, PolarGradConfig,
    Schedule, SignDescentConfig, StepInfo,
};
use crate::problems::Problem;
use crate::random::{seeded_rng, GENERATOR_NAME};

/// Relative slack allowed in the sufficient-decrease check.
pub const DESCENT_SLACK: f64 = 1e-10;

/// Why a run stopped before `total_steps`.
#[derive(Clone, Debug, PartialEq)]
pub struct Halt {
    /// Step whose update failed or produced a non-finite loss.
    pub step: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub steps_completed: usize,
    pub final_loss: f64,
    pub final_gap: Option<f64>,
    /// A non-finite loss was produced.
    pub diverged: bool,
    pub halt: Option<Halt>,
    pub descent_violations: usize,
    pub wall_ms: f64,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub config: RunConfig,
    pub records: Vec<TraceRecord>,
    pub summary: RunSummary,
}

impl RunOutput {
    pub fn problem_id(&self) -> String {
        self.config.problem_id()
    }

    /// Last logged value of `gap` (or loss when no gap is known).
    pub fn final_gap_or_loss(&self) -> f64 {
        self.summary.final_gap.unwrap_or(self.summary.final_loss)
    }

    pub fn manifest(&self, trace_file: &str) -> Manifest {
        let s = &self.summary;
        Manifest {
            schema: MANIFEST_SCHEMA.into(),
            name: self.config.name.clone(),
            problem: self.config.problem.kind().into(),
            problem_id: self.problem_id(),
            optimizer: self.config.optimizer.label(),
            seed: self.config.seed(),
            generator: GENERATOR_NAME.into(),
            artifact_version: artifact_version(),
            config_hash: self.config.hash(),
            total_steps: self.config.total_steps,
            steps_completed: s.steps_completed,
            final_loss: s.final_loss,
            final_gap: s.final_gap,
            diverged: s.diverged,
            halt_step: s.halt.as_ref().map(|h| h.step),
            halt_reason: s.halt.as_ref().map(|h| h.reason.clone()),
            descent_violations: s.descent_violations,
            trace_file: trace_file.into(),
            wall_ms: s.wall_ms,
        }
    }
}

enum Stepper {
    Matrix(MatrixOptimizer),
    Newton(Schedule),
    AltGd(Schedule),
}

fn matrix_optimizer(spec: &OptimizerSpec, schedule: Schedule) -> Option<MatrixOptimizer> {
    Some(match *spec {
        OptimizerSpec::PolarGrad { mode, momentum, weight_decay, polar } => {
            MatrixOptimizer::PolarGrad(PolarGradConfig { schedule, weight_decay, momentum, mode, polar: polar.method() })
        }
        OptimizerSpec::Muon { momentum, weight_decay, polar, scaling, nuclear_scaling } => {
            MatrixOptimizer::Muon(MuonConfig { schedule, momentum, weight_decay, polar: polar.method(), scaling, nuclear_scaling })
        }
        OptimizerSpec::Adam { beta1, beta2, eps, weight_decay } => {
            MatrixOptimizer::Adam(AdamConfig { schedule, beta1, beta2, eps, weight_decay })
        }
        OptimizerSpec::SignDescent { polar } => {
            MatrixOptimizer::SignDescent(SignDescentConfig { schedule, polar: polar.method() })
        }
        OptimizerSpec::Newton | OptimizerSpec::AltGd => return None,
    })
}

fn stepper(spec: &OptimizerSpec, schedule: Schedule) -> Stepper {
    match spec {
        OptimizerSpec::Newton => Stepper::Newton(schedule),
        OptimizerSpec::AltGd => Stepper::AltGd(schedule),
        _ => Stepper::Matrix(matrix_optimizer(spec, schedule).expect("matrix optimizer")),
    }
}

/// The gradient whose spectrum is logged: the full gradient, with the two
/// completion factors stacked.
fn logged_gradient(problem: &Problem, params: &[DenseMatrix]) -> DenseMatrix {
    let mut g = problem.grads(params, None);
    if g.len() == 2 {
        let gy = g.pop().unwrap();
        DenseMatrix::vstack(&g[0], &gy)
    } else {
        g.pop().unwrap()
    }
}

fn spectrum(a: &DenseMatrix) -> Option<(f64, f64)> {
    if !a.is_finite() {
        return None;
    }
    let sigma = svd(a).ok()?.sigma;
    let nuclear = sigma.iter().sum();
    let cond = cond2_from_sigma(&sigma, DEFAULT_RANK_TOL).ok();
    Some((cond.unwrap_or(f64::NAN), nuclear))
}

fn record(problem: &Problem, params: &[DenseMatrix], step: usize, loss: f64, lr: Option<f64>, with_cond: bool, ms: f64) -> TraceRecord {
    let finite = loss.is_finite();
    let gap = if finite { problem.gap(params) } else { None };
    let (mut grad_cond, mut grad_nuclear, mut residual_cond) = (None, None, None);
    if with_cond && finite {
        if let Some((c, n)) = spectrum(&logged_gradient(problem, params)) {
            grad_cond = c.is_finite().then_some(c);
            grad_nuclear = Some(n);
        }
        if let Problem::Quad(q) = problem {
            residual_cond = spectrum(&q.residual(&params[0])).map(|(c, _)| c).filter(|c| c.is_finite());
        }
    }
    TraceRecord { step, loss, gap, grad_cond, residual_cond, grad_nuclear, lr, wall_ms: ms }
}

/// Runs the training loop in memory.
///
/// A non-finite loss or a failed optimizer step ends the run early with a
/// [`Halt`]; only configuration and problem-construction errors are `Err`.
pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let instance = cfg.problem.build()?;
    let problem = instance.problem;
    let mut params = instance.init;
    let mut states: Vec<OptimizerState> = params.iter().map(OptimizerState::for_param).collect();
    let mut batch_rng = seeded_rng(cfg.seed());
    batch_rng.set_stream(1);

    let base_schedule = match cfg.lr {
        LrSpec::Schedule(s) => s,
        LrSpec::InverseLipschitzRank(_) => Schedule::constant(0.0),
    };
    let mut stepper = stepper(&cfg.optimizer, base_schedule);

    let start = Instant::now();
    let ms = |s: &Instant| s.elapsed().as_secs_f64() * 1e3;
    let mut loss = problem.loss(&params);
    let mut records = vec![record(&problem, &params, 0, loss, None, true, ms(&start))];
    let mut halt = None;
    let mut diverged = false;
    let mut descent_violations = 0;
    let mut steps_completed = 0;

    for k in 0..cfg.total_steps {
        let step = k + 1;
        let rows = problem.is_stochastic().then(|| match &problem {
            Problem::Logistic(p) => p.sample_batch(&mut batch_rng),
            _ => unreachable!(),
        });

        let mut rank_used = None;
        if let (LrSpec::InverseLipschitzRank(rule), Problem::Quad(q)) = (cfg.lr, &problem) {
            let g = q.grad(&params[0]);
            let r = match rule {
                RankRule::Max => g.rows().min(g.cols()),
                RankRule::Exact => crate::linalg::rank(&g, DEFAULT_RANK_TOL)?.max(1),
            };
            rank_used = Some(r as f64);
            stepper = stepper_with_lr(&cfg.optimizer, 1.0 / (q.lipschitz() * r as f64));
        }

        let result: Result<Vec<StepInfo>> = match &stepper {
            Stepper::AltGd(s) => match &problem {
                Problem::Completion(p) => {
                    let (x, y) = params.split_at_mut(1);
                    Ok(vec![altgd_step(&mut x[0], &mut y[0], p, s.value(k))])
                }
                _ => unreachable!("validated"),
            },
            Stepper::Newton(s) => match &problem {
                Problem::Quad(q) => {
                    let g = q.grad(&params[0]);
                    newton_step_quadratic(&mut params[0], &g, q, s, &mut states[0]).map(|i| vec![i])
                }
                _ => unreachable!("validated"),
            },
            Stepper::Matrix(opt) => {
                let grads = problem.grads(&params, rows.as_deref());
                let before = params.clone();
                let mut infos = Vec::with_capacity(params.len());
                let mut err = None;
                for ((x, g), st) in params.iter_mut().zip(&grads).zip(states.iter_mut()) {
                    match opt.step(x, g, st) {
                        Ok(i) => infos.push(i),
                        Err(e) => {
                            err = Some(e);
                            break;
                        }
                    }
                }
                match err {
                    Some(e) => {
                        params = before;
                        Err(e)
                    }
                    None => Ok(infos),
                }
            }
        };
        let infos = match result {
            Ok(i) => i,
            Err(e) => {
                halt = Some(Halt { step, reason: format!("step failed: {e}") });
                break;
            }
        };
        let lr = infos[0].lr;

        let new_loss = problem.loss(&params);
        steps_completed = step;
        if !new_loss.is_finite() {
            diverged = true;
            halt = Some(Halt { step, reason: format!("non-finite loss {new_loss}") });
            records.push(record(&problem, &params, step, new_loss, Some(lr), false, ms(&start)));
            loss = new_loss;
            break;
        }
        if cfg.check_descent {
            let nu = infos[0].nu.unwrap_or(0.0);
            let r = rank_used.unwrap_or(1.0);
            let Problem::Quad(q) = &problem else { unreachable!("validated") };
            let bound = loss - nu * nu / (2.0 * q.lipschitz() * r);
            if new_loss > bound + DESCENT_SLACK * loss.abs() {
                descent_violations += 1;
            }
        }
        loss = new_loss;
        if step % cfg.log_every == 0 || step == cfg.total_steps {
            let with_cond = step % cfg.cond_every == 0;
            records.push(record(&problem, &params, step, loss, Some(lr), with_cond, ms(&start)));
        }
    }

    let final_gap = if loss.is_finite() { problem.gap(&params) } else { None };
    Ok(RunOutput {
        config: cfg.clone(),
        records,
        summary: RunSummary {
            steps_completed,
            final_loss: loss,
            final_gap,
            diverged,
            halt,
            descent_violations,
            wall_ms: ms(&start),
        },
    })
}

fn stepper_with_lr(spec: &OptimizerSpec, lr: f64) -> Stepper {
    stepper(spec, Schedule::constant(lr))
}

/// Paths written by [`run_experiment`].
#[derive(Clone, Debug)]
pub struct RunArtifacts {
    pub output: RunOutput,
    pub trace_path: PathBuf,
    pub manifest_path: PathBuf,
}

/// File stem for a run: the config name made filesystem-safe, plus the seed.
pub fn run_stem(cfg: &RunConfig) -> String {
    let safe: String = cfg
        .name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect();
    format!("{}_seed{}", safe.trim_matches('_'), cfg.seed())
}

/// Runs `cfg` and writes `<stem>.csv` and `<stem>.manifest.toml` into
/// `cfg.output`, or `default_dir` when the config names none.
pub fn run_experiment(cfg: &RunConfig, default_dir: &Path) -> Result<RunArtifacts> {
    let dir = cfg.output.clone().unwrap_or_else(|| default_dir.to_path_buf());
    std::fs::create_dir_all(&dir)?;
    let output = run(cfg)?;
    let stem = run_stem(cfg);
    let trace_name = format!("{stem}.csv");
    let trace_path = dir.join(&trace_name);
    let manifest_path = dir.join(format!("{stem}.manifest.toml"));
    write_trace_file(&trace_path, &output.records)?;
    output.manifest(&trace_name).write(&manifest_path)?;
    Ok(RunArtifacts { output, trace_path, manifest_path })
}

/// Reads a manifest and the trace it points to.
pub fn load_run(manifest_path: &Path) -> Result<(Manifest, Vec<TraceRecord>)> {
    let m = Manifest::read(manifest_path)?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let records = crate::harness::trace::read_trace_file(&dir.join(&m.trace_file))?;
    if records.is_empty() {
        return Err(Error::Trace(format!("{}: empty trace", m.trace_file)));
    }
    Ok((m, records))
}
