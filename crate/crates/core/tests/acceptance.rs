//! Acceptance criteria. Each test prints one PASS/FAIL line to stderr (bypassing
//! output capture) and fails when its criterion does.

use std::io::Write;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use polargrad::harness::verify::{self, Check};

// Runtime limits are wall-clock, so criteria run one at a time.
static SERIAL: Mutex<()> = Mutex::new(());

fn report(criterion: &str, check: polargrad::Result<Check>, elapsed: Duration, limit: Option<Duration>) {
    let check = check.unwrap_or_else(|e| panic!("{criterion}: error {e}"));
    let in_time = limit.map_or(true, |l| elapsed <= l);
    let passed = check.passed && in_time;
    let timing = match limit {
        Some(l) => format!(" [{:.1} s, limit {} s]", elapsed.as_secs_f64(), l.as_secs()),
        None => format!(" [{:.1} s]", elapsed.as_secs_f64()),
    };
    let line = format!(
        "acceptance {} {criterion}: {}{timing}\n",
        if passed { "PASS" } else { "FAIL" },
        check.detail
    );
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(passed, "{}", line.trim_end());
}

fn timed(f: impl FnOnce() -> polargrad::Result<Check>) -> (polargrad::Result<Check>, Duration) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let t0 = Instant::now();
    let c = f();
    (c, t0.elapsed())
}

#[test]
fn polar_oracle_equivalence() {
    let (c, t) = timed(|| verify::polar_oracle(50));
    report("polar oracle equivalence", c, t, Some(Duration::from_secs(30)));
}

#[test]
fn iteration_budgets() {
    let (c, t) = timed(|| verify::iteration_budgets(5));
    report("iteration budgets", c, t, None);
}

#[test]
fn duality_identity() {
    let (c, t) = timed(|| verify::duality_identity(100));
    report("duality identity", c, t, None);
}

#[test]
fn descent_bound() {
    let (c, t) = timed(|| verify::descent_bound(500));
    report("per-step descent bound", c, t, None);
}

#[test]
fn sign_descent_floor() {
    let (c, t) = timed(verify::sign_descent_floor);
    report("sign descent floor", c, t, Some(Duration::from_secs(60)));
}

#[test]
fn null_gradient_consistency() {
    let (c, t) = timed(verify::null_gradient);
    report("null-gradient consistency", c, t, None);
}

#[test]
fn newton_one_step() {
    let (c, t) = timed(verify::newton_one_step);
    report("newton one step", c, t, None);
}

#[test]
fn gradient_correctness() {
    let (c, t) = timed(verify::gradient_fd);
    report("gradient correctness", c, t, None);
}

/// The three desk orderings share one runtime budget.
#[test]
fn desk_orderings() {
    let guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let t0 = Instant::now();
    let checks = [verify::quad_ordering(), verify::completion_plateau(), verify::logistic_decay()];
    let elapsed = t0.elapsed();
    drop(guard);
    let mut passed = true;
    let mut detail = Vec::new();
    for c in checks {
        let c = c.expect("ordering run");
        passed &= c.passed;
        detail.push(c.to_string());
    }
    let check = Check { name: "desk orderings", passed, detail: detail.join(" | ") };
    report("desk orderings", Ok(check), elapsed, Some(Duration::from_secs(600)));
}

#[test]
fn stochastic_gradient_unbiased() {
    let (c, t) = timed(|| verify::stochastic_unbiased(2000));
    report("stochastic gradient unbiased", c, t, None);
}

#[test]
fn explicit_preconditioner() {
    let (c, t) = timed(|| verify::preconditioner_identity(20));
    report("explicit preconditioner identity", c, t, None);
}
