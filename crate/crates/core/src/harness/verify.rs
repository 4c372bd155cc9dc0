//! Numerical checks shared by the `verify` command and the acceptance suite.
//!
//! Each function runs one property end to end on seeded instances and reports
//! a [`Check`] instead of panicking, so callers can print every outcome.

use std::fmt;
use std::time::Instant;

use rand::Rng;

use crate::error::{Error, Result};
use crate::harness::presets::{preset, PRESET_SEEDS};
use crate::harness::run::run;
use crate::harness::trace::TraceRecord;
use crate::linalg::{inverse, nuclear_norm, rank, DEFAULT_RANK_TOL};
use crate::matrix::DenseMatrix;
use crate::optim::{
    muon_step, newton_step_quadratic, polar_grad_step, MuonConfig, OptimizerState, PolarGradConfig, Schedule,
};
use crate::polar::{hermitian_factor, polar_reference, PolarMethod, ZoloOrder};
use crate::problems::{CompletionProblem, LogisticProblem, QuadRegProblem};
use crate::random::{gaussian_matrix, matrix_with_condition, seeded_rng, uniform_matrix};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag}  {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Polar,
    Theorems,
    Gradients,
    Experiments,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "polar" => Ok(Self::Polar),
            "theorems" => Ok(Self::Theorems),
            "gradients" => Ok(Self::Gradients),
            "experiments" => Ok(Self::Experiments),
            "all" => Ok(Self::All),
            _ => Err(Error::Config(format!(
                "unknown suite {s:?} (polar, theorems, gradients, experiments, all)"
            ))),
        }
    }
}

pub fn run_suite(suite: Suite) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Polar | Suite::All) {
        out.push(polar_oracle(50)?);
        out.push(iteration_budgets(5)?);
        out.push(duality_identity(100)?);
        out.push(preconditioner_identity(20)?);
    }
    if matches!(suite, Suite::Theorems | Suite::All) {
        out.push(descent_bound(500)?);
        out.push(sign_descent_floor()?);
        out.push(null_gradient()?);
        out.push(newton_one_step()?);
    }
    if matches!(suite, Suite::Gradients | Suite::All) {
        out.push(gradient_fd()?);
        out.push(stochastic_unbiased(2000)?);
    }
    if matches!(suite, Suite::Experiments | Suite::All) {
        out.push(quad_ordering()?);
        out.push(completion_plateau()?);
        out.push(logistic_decay()?);
    }
    Ok(out)
}

pub const ORACLE_SHAPES: [(usize, usize); 3] = [(40, 25), (100, 60), (64, 64)];
pub const ORACLE_KAPPAS: [f64; 3] = [1e2, 1e6, 1e12];
pub const ORACLE_TOL: f64 = 1e-8;

/// QDWH and ZOLO-PD against the SVD polar factor, `‖ΔU‖_F/√n`.
pub fn polar_oracle(per_cell: usize) -> Result<Check> {
    let t0 = Instant::now();
    let mut rng = seeded_rng(11);
    let methods = [("QDWH", PolarMethod::qdwh()), ("ZOLO", PolarMethod::zolo())];
    let mut worst = vec![[0.0f64; 2]; ORACLE_KAPPAS.len()];
    for &(m, n) in &ORACLE_SHAPES {
        for (ki, &kappa) in ORACLE_KAPPAS.iter().enumerate() {
            for _ in 0..per_cell {
                let a = matrix_with_condition(m, n, kappa, &mut rng);
                let reference = polar_reference(&a, 0.0)?.u;
                for (mi, (_, method)) in methods.iter().enumerate() {
                    let u = method.compute(&a)?.u;
                    let err = u.distance(&reference) / (n as f64).sqrt();
                    worst[ki][mi] = worst[ki][mi].max(if err.is_nan() { f64::INFINITY } else { err });
                }
            }
        }
    }
    let passed = worst.iter().flatten().all(|&e| e <= ORACLE_TOL);
    let cells: Vec<String> = ORACLE_KAPPAS
        .iter()
        .zip(&worst)
        .map(|(k, w)| format!("κ={k:.0e} QDWH {:.1e} ZOLO {:.1e}", w[0], w[1]))
        .collect();
    Ok(Check::new(
        "polar oracle",
        passed,
        format!(
            "max ‖ΔU‖_F/√n ≤ {ORACLE_TOL:e}: {}; {} matrices in {:.1} s",
            cells.join(", "),
            per_cell * ORACLE_SHAPES.len() * ORACLE_KAPPAS.len(),
            t0.elapsed().as_secs_f64()
        ),
    ))
}

/// Worst iteration counts with exact bounds: QDWH ≤ 4/5/6 at κ = 1e3/1e5/1e16,
/// ZOLO-PD at order 8 ≤ 2 up to κ = 1e16.
pub fn iteration_budgets(per_kappa: usize) -> Result<Check> {
    let mut rng = seeded_rng(12);
    let zolo8 = PolarMethod::ZoloPd {
        bounds: crate::linalg::BoundsMode::Exact,
        order: ZoloOrder::Fixed(8),
        tol: crate::polar::ZOLO_DEFAULT_TOL,
        max_steps: crate::polar::ZOLO_DEFAULT_MAX_STEPS,
    };
    let mut passed = true;
    let mut parts = Vec::new();
    for (kappa, qdwh_budget) in [(1e3, 4), (1e5, 5), (1e16, 6)] {
        let (mut q_worst, mut z_worst) = (0, 0);
        for _ in 0..per_kappa {
            let a = matrix_with_condition(60, 40, kappa, &mut rng);
            let q = PolarMethod::qdwh().compute(&a)?;
            let z = zolo8.compute(&a)?;
            passed &= q.converged && z.converged;
            q_worst = q_worst.max(q.iterations);
            z_worst = z_worst.max(z.iterations);
        }
        passed &= q_worst <= qdwh_budget && z_worst <= 2;
        parts.push(format!("κ={kappa:.0e} QDWH {q_worst}/{qdwh_budget} ZOLO(8) {z_worst}/2"));
    }
    Ok(Check::new("iteration budgets", passed, parts.join(", ")))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn random_shape(rng: &mut impl Rng, tall_only: bool) -> (usize, usize) {
    let n = rng.random_range(3..30);
    let m = if tall_only { n + rng.random_range(0..20) } else { rng.random_range(3..40) };
    (m, n)
}

/// `⟨G, msgn G⟩ = ‖G‖_* = tr H` for QDWH factors of Gaussian matrices.
pub fn duality_identity(count: usize) -> Result<Check> {
    let mut rng = seeded_rng(13);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let (m, n) = random_shape(&mut rng, false);
        let g = gaussian_matrix(m, n, &mut rng);
        let f = PolarMethod::qdwh().compute(&g)?;
        let nuc = nuclear_norm(&g)?;
        worst = worst.max(rel(g.dot(&f.u), nuc)).max(rel(f.h.trace(), nuc));
    }
    Ok(Check::new(
        "duality identity",
        worst <= 1e-10,
        format!("max relative error {worst:.1e} over {count} matrices (tol 1e-10)"),
    ))
}

/// `tr(H) U = tr(P) G P⁻¹` with `P = H`, for full-rank `G` (`m ≥ n`).
pub fn preconditioner_identity(count: usize) -> Result<Check> {
    let mut rng = seeded_rng(14);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let (m, n) = random_shape(&mut rng, true);
        let g = gaussian_matrix(m, n, &mut rng);
        let f = PolarMethod::qdwh().compute(&g)?;
        let h = hermitian_factor(&g, &f.u);
        let lhs = f.u.scaled(h.trace());
        let rhs = g.matmul(&inverse(&h)?).scaled(h.trace());
        worst = worst.max(lhs.distance(&rhs) / lhs.frobenius_norm());
    }
    Ok(Check::new(
        "explicit preconditioner",
        worst <= 1e-8,
        format!("max ‖tr(H)U − tr(H)GH⁻¹‖_F/‖tr(H)U‖_F = {worst:.1e} over {count} matrices (tol 1e-8)"),
    ))
}

/// Vanilla PolarGrad with `γ_k = 1/(L r_k)` on the (20,10,40,15) quadratic:
/// every step contracts the gap by at least `1 − 1/(r_k² κ_H)`.
///
/// The comparison allows `1e-13·f(X_k)` of rounding in the computed gap.
pub fn descent_bound(steps: usize) -> Result<Check> {
    let mut violations = 0;
    let mut parts = Vec::new();
    for seed in PRESET_SEEDS {
        let (prob, mut x) = QuadRegProblem::make(20, 10, 40, 15, seed)?;
        let (l, kh) = (prob.lipschitz(), prob.kappa_h());
        let gap0 = prob.gap(&x);
        let mut gap = gap0;
        let mut log_bound = 0.0;
        let mut state = OptimizerState::for_param(&x);
        for _ in 0..steps {
            let g = prob.grad(&x);
            let r = rank(&g, DEFAULT_RANK_TOL)? as f64;
            let cfg = PolarGradConfig::new(Schedule::constant(1.0 / (l * r)));
            let fx = prob.loss(&x);
            polar_grad_step(&mut x, &g, &cfg, &mut state)?;
            let rho = 1.0 - 1.0 / (r * r * kh);
            let next = prob.gap(&x);
            if next > rho * gap + 1e-13 * fx {
                violations += 1;
            }
            log_bound += rho.ln();
            gap = next;
        }
        let observed = (gap / gap0).ln() / steps as f64;
        let bound = log_bound / steps as f64;
        if observed > bound {
            violations += 1;
        }
        parts.push(format!("seed {seed}: slope {observed:.3e} vs bound {bound:.3e}"));
    }
    Ok(Check::new(
        "descent bound",
        violations == 0,
        format!("{violations} violations over {steps} steps × {} seeds; {}", PRESET_SEEDS.len(), parts.join(", ")),
    ))
}

fn run_preset(name: &str) -> Result<Vec<TraceRecord>> {
    let out = run(&preset(name)?)?;
    if let Some(h) = &out.summary.halt {
        return Err(Error::InvalidArgument(format!("{name} halted at step {}: {}", h.step, h.reason)));
    }
    Ok(out.records)
}

fn at_step(records: &[TraceRecord], step: usize, f: impl Fn(&TraceRecord) -> Option<f64>) -> Result<f64> {
    records
        .iter()
        .find(|r| r.step == step)
        .and_then(f)
        .ok_or_else(|| Error::InvalidArgument(format!("trace has no value at step {step}")))
}

fn gap_of(r: &TraceRecord) -> Option<f64> {
    r.gap
}

/// Constant-step matrix sign descent stalls at a floor while PolarGrad keeps
/// converging. The plateau is the last quarter of the sign-descent trace and
/// must have gap variance below 1% of its mean.
pub fn sign_descent_floor() -> Result<Check> {
    let t0 = Instant::now();
    let mut passed = true;
    let mut parts = Vec::new();
    for seed in PRESET_SEEDS {
        let sign = run_preset(&format!("desk/quad/SignDescent(QDWH)@{seed}"))?;
        let pg = run_preset(&format!("desk/quad/PolarGrad(QDWH)@{seed}"))?;
        let horizon = 1000;
        let f0 = pg[0].loss;
        let pg_gap = at_step(&pg, horizon, gap_of)?;
        let sign_gap = at_step(&sign, horizon, gap_of)?;
        let tail: Vec<f64> = sign.iter().filter(|r| 4 * r.step >= 3 * horizon).filter_map(gap_of).collect();
        let (mean, var) = mean_var(&tail);
        // Every other step, to tell a limit cycle from drift.
        let even: Vec<f64> = tail.iter().step_by(2).copied().collect();
        let (even_mean, even_var) = mean_var(&even);
        let ratio_ok = sign_gap >= 1e3 * pg_gap;
        let pg_ok = pg_gap <= 1e-6 * f0;
        let flat_ok = var < 0.01 * mean;
        passed &= ratio_ok && pg_ok && flat_ok;
        parts.push(format!(
            "seed {seed}: sign/PolarGrad {:.1e} [{}], PolarGrad/f(X₀) {:.1e} [{}], tail var/mean {:.1e} [{}] \
             (alternate steps {:.1e})",
            sign_gap / pg_gap,
            ok(ratio_ok),
            pg_gap / f0,
            ok(pg_ok),
            var / mean,
            ok(flat_ok),
            even_var / even_mean,
        ));
    }
    Ok(Check::new(
        "sign descent floor",
        passed,
        format!("{}; {:.1} s", parts.join("; "), t0.elapsed().as_secs_f64()),
    ))
}

fn mean_var(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (mean, v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n)
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "no"
    }
}

/// PolarGrad's step shrinks linearly with the gradient; Muon's does not.
pub fn null_gradient() -> Result<Check> {
    let (prob, x0) = QuadRegProblem::make(20, 10, 40, 15, 0)?;
    let g0 = prob.grad(&x0);
    let lr = 1e-3;
    let pg_cfg = PolarGradConfig::new(Schedule::constant(lr));
    let muon_cfg = MuonConfig { polar: PolarMethod::qdwh(), ..MuonConfig::new(Schedule::constant(lr), 0.0) };
    let norms = |c: f64| -> Result<(f64, f64)> {
        let g = g0.scaled(c);
        let mut x = DenseMatrix::zeros(x0.rows(), x0.cols());
        let pg = polar_grad_step(&mut x, &g, &pg_cfg, &mut OptimizerState::for_param(&x0))?;
        let mut x = DenseMatrix::zeros(x0.rows(), x0.cols());
        let mu = muon_step(&mut x, &g, &muon_cfg, &mut OptimizerState::for_param(&x0))?;
        Ok((pg.update_norm, mu.update_norm))
    };
    let (pg1, mu1) = norms(1.0)?;
    let (mut pg_err, mut mu_err) = (0.0f64, 0.0f64);
    for c in [1e-2, 1e-4, 1e-6] {
        let (pg, mu) = norms(c)?;
        pg_err = pg_err.max(rel(pg, c * pg1));
        mu_err = mu_err.max(rel(mu, mu1));
    }
    Ok(Check::new(
        "null-gradient consistency",
        pg_err <= 1e-8 && mu_err <= 1e-8,
        format!("PolarGrad deviation from linear {pg_err:.1e}, Muon deviation from constant {mu_err:.1e} (tol 1e-8)"),
    ))
}

/// One exact Newton step with `γ = 1` solves any quadratic instance.
pub fn newton_one_step() -> Result<Check> {
    let mut worst = 0.0f64;
    for (m, n, p, q) in [(20, 10, 40, 15), (100, 20, 200, 50), (5, 5, 5, 5)] {
        for seed in PRESET_SEEDS {
            let (prob, mut x) = QuadRegProblem::make(m, n, p, q, seed)?;
            let f0 = prob.loss(&x);
            let g = prob.grad(&x);
            let mut state = OptimizerState::for_param(&x);
            newton_step_quadratic(&mut x, &g, &prob, &Schedule::constant(1.0), &mut state)?;
            worst = worst.max(prob.gap(&x) / f0);
        }
    }
    Ok(Check::new("newton one step", worst <= 1e-18, format!("max gap/f(X₀) {worst:.1e} (tol 1e-18)")))
}

const FD_STEP: f64 = 1e-5;

fn fd_error(x: &DenseMatrix, grad: &DenseMatrix, f: impl Fn(&DenseMatrix) -> f64) -> f64 {
    let mut fd = DenseMatrix::zeros(x.rows(), x.cols());
    let mut xp = x.clone();
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            let v = x[(i, j)];
            xp[(i, j)] = v + FD_STEP;
            let up = f(&xp);
            xp[(i, j)] = v - FD_STEP;
            let down = f(&xp);
            xp[(i, j)] = v;
            fd[(i, j)] = (up - down) / (2.0 * FD_STEP);
        }
    }
    fd.distance(grad) / grad.frobenius_norm()
}

/// Central differences against the analytic gradients, 3 seeds × 3 points.
pub fn gradient_fd() -> Result<Check> {
    let mut worst = [0.0f64; 3];
    for seed in PRESET_SEEDS {
        let mut rng = seeded_rng(100 + seed);
        let (quad, _) = QuadRegProblem::make(6, 4, 10, 5, seed)?;
        let (logi, _) = LogisticProblem::make(5, 3, 40, 4, 10, seed, false)?;
        let (comp, _, _) = CompletionProblem::make(8, 6, 2, seed)?;
        for _ in 0..3 {
            let x = uniform_matrix(6, 4, -1.0, 1.0, &mut rng);
            worst[0] = worst[0].max(fd_error(&x, &quad.grad(&x), |z| quad.loss(z)));
            let x = uniform_matrix(5, 3, -1.0, 1.0, &mut rng);
            worst[1] = worst[1].max(fd_error(&x, &logi.grad(&x, None), |z| logi.loss(z, None)));
            let rows = logi.sample_batch(&mut rng);
            worst[1] = worst[1].max(fd_error(&x, &logi.grad(&x, Some(&rows)), |z| logi.loss(z, Some(&rows))));
            let x = uniform_matrix(8, 2, -1.0, 1.0, &mut rng);
            let y = uniform_matrix(6, 2, -1.0, 1.0, &mut rng);
            let (gx, gy) = comp.grads(&x, &y);
            worst[2] = worst[2].max(fd_error(&x, &gx, |z| comp.loss(z, &y)));
            worst[2] = worst[2].max(fd_error(&y, &gy, |z| comp.loss(&x, z)));
        }
    }
    Ok(Check::new(
        "gradient finite differences",
        worst.iter().all(|&e| e <= 1e-6),
        format!("max relative error quad {:.1e}, logistic {:.1e}, completion {:.1e} (tol 1e-6)", worst[0], worst[1], worst[2]),
    ))
}

/// The minibatch gradient is a sum over the batch, so `(N/b)·∇_B` is the
/// unbiased estimate of the full gradient. Passes when every entry of the
/// batch average is within 3 standard errors of the full gradient.
pub fn stochastic_unbiased(batches: usize) -> Result<Check> {
    let (prob, x) = LogisticProblem::make(10, 5, 200, 8, 20, 3, false)?;
    let full = prob.grad(&x, None);
    let scale = prob.samples() as f64 / 20.0;
    let mut rng = seeded_rng(3);
    rng.set_stream(1);
    let mut sum = DenseMatrix::zeros(full.rows(), full.cols());
    let mut sum_sq = DenseMatrix::zeros(full.rows(), full.cols());
    for _ in 0..batches {
        let g = prob.grad(&x, Some(&prob.sample_batch(&mut rng))).scaled(scale);
        sum_sq += &g.hadamard(&g);
        sum += &g;
    }
    let k = batches as f64;
    let mean = sum.scaled(1.0 / k);
    let var = sum_sq.scaled(1.0 / k).zip_map(&mean, |s, m| (s - m * m) * k / (k - 1.0));
    let se = var.map(|v| (v / k).sqrt());
    let dev = mean.distance(&full);
    let se_f = (var.as_slice().iter().sum::<f64>() / k).sqrt();
    let within = mean
        .as_slice()
        .iter()
        .zip(full.as_slice())
        .zip(se.as_slice())
        .filter(|((m, f), s)| (*m - *f).abs() <= 3.0 * *s)
        .count();
    Ok(Check::new(
        "stochastic gradient unbiased",
        within == full.as_slice().len(),
        format!(
            "{within}/{} entries within 3 SE over {batches} batches; ‖mean − full‖_F = {dev:.3e}, 3·SE_F = {:.3e}",
            full.as_slice().len(),
            3.0 * se_f
        ),
    ))
}

pub const QUAD_HORIZON: usize = 200;

/// PolarGrad's gap at step 200 is below every constant-lr Muon and Adam gap.
pub fn quad_ordering() -> Result<Check> {
    let t0 = Instant::now();
    let rivals = ["Muon(NS)", "Muon(QDWH)", "Muon(ZOLO)", "Adam"];
    let mut wins = 0;
    let mut parts = Vec::new();
    for seed in PRESET_SEEDS {
        let pg = at_step(&run_preset(&format!("desk/quad/PolarGrad(QDWH)@{seed}"))?, QUAD_HORIZON, gap_of)?;
        let mut best = f64::INFINITY;
        for r in rivals {
            best = best.min(at_step(&run_preset(&format!("desk/quad/{r}@{seed}"))?, QUAD_HORIZON, gap_of)?);
        }
        wins += usize::from(pg < best);
        parts.push(format!("seed {seed}: PolarGrad {pg:.2e} vs best rival {best:.2e}"));
    }
    Ok(Check::new(
        "quad ordering at step 200",
        wins == PRESET_SEEDS.len(),
        format!("{wins}/3; {}; {:.1} s", parts.join(", "), t0.elapsed().as_secs_f64()),
    ))
}

/// Over the last quarter of the run every Muon loss stays above PolarGrad's
/// final loss.
pub fn completion_plateau() -> Result<Check> {
    let t0 = Instant::now();
    let mut wins = 0;
    let mut parts = Vec::new();
    for seed in PRESET_SEEDS {
        let pg = run_preset(&format!("desk/completion/PolarGrad(QDWH)@{seed}"))?;
        let pg_final = pg.last().map(|r| r.loss).unwrap_or(f64::NAN);
        let end = pg.last().map(|r| r.step).unwrap_or(0);
        let mut floor = f64::INFINITY;
        for m in ["Muon(NS)", "Muon(QDWH)"] {
            let tr = run_preset(&format!("desk/completion/{m}@{seed}"))?;
            let tail_min = tr.iter().filter(|r| 4 * r.step >= 3 * end).map(|r| r.loss).fold(f64::INFINITY, f64::min);
            floor = floor.min(tail_min);
        }
        wins += usize::from(floor > pg_final);
        parts.push(format!("seed {seed}: Muon tail min {floor:.2e} vs PolarGrad final {pg_final:.2e}"));
    }
    Ok(Check::new(
        "completion Muon plateau",
        wins == PRESET_SEEDS.len(),
        format!("{wins}/3; {}; {:.1} s", parts.join(", "), t0.elapsed().as_secs_f64()),
    ))
}

pub const LOGISTIC_PAIRS: [&str; 5] = [
    "PolarSGD(QDWH)",
    "Muon(QDWH)",
    "Adam",
    "PolarSGDM(polar-first)",
    "PolarSGDM(momentum-first)",
];

/// Every optimizer with a `+decay` twin ends lower with decay, on every seed.
pub fn logistic_decay() -> Result<Check> {
    let t0 = Instant::now();
    let mut losses = Vec::new();
    let mut wins = 0;
    for name in LOGISTIC_PAIRS {
        for seed in PRESET_SEEDS {
            let last = |n: &str| -> Result<f64> {
                let tr = run_preset(&format!("desk/logistic/{n}@{seed}"))?;
                Ok(tr.last().map(|r| r.loss).unwrap_or(f64::NAN))
            };
            let (c, d) = (last(name)?, last(&format!("{name}+decay"))?);
            if d < c {
                wins += 1;
            } else {
                losses.push(format!("{name} seed {seed}: decay {d:.4e} ≥ constant {c:.4e}"));
            }
        }
    }
    let total = LOGISTIC_PAIRS.len() * PRESET_SEEDS.len();
    let detail = if losses.is_empty() {
        format!("{wins}/{total} pairs; {:.1} s", t0.elapsed().as_secs_f64())
    } else {
        format!("{wins}/{total} pairs; {}", losses.join("; "))
    };
    Ok(Check::new("logistic decay", wins == total, detail))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        assert_eq!(Suite::parse("polar").unwrap(), Suite::Polar);
        assert!(Suite::parse("everything").is_err());
    }

    #[test]
    fn cheap_checks_pass() {
        assert!(duality_identity(5).unwrap().passed);
        assert!(preconditioner_identity(5).unwrap().passed);
        assert!(null_gradient().unwrap().passed);
        assert!(newton_one_step().unwrap().passed);
    }

    #[test]
    fn check_display() {
        let c = Check::new("x", false, "y".into());
        assert_eq!(c.to_string(), "FAIL  x: y");
    }
}
