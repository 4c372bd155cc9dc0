use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::harness::trace::{Metric, TraceRecord};

/// Outcome of comparing two runs of the same problem.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub metric: Metric,
    pub horizon: usize,
    /// Value at the last record with `step ≤ horizon`.
    pub a: f64,
    pub b: f64,
    /// `Less` when run `a` is lower. Values within `1e-12` relative tie.
    pub ordering: Ordering,
    /// Trapezoid area of `log10(metric)` over `[0, horizon]`, a over b.
    pub auc_log_ratio: f64,
}

impl Comparison {
    pub fn a_lower(&self) -> bool {
        self.ordering == Ordering::Less
    }
}

fn value_at(records: &[TraceRecord], metric: Metric, horizon: usize) -> Result<f64> {
    let last = records.last().ok_or_else(|| Error::Trace("empty trace".into()))?;
    if last.step < horizon {
        return Err(Error::InvalidArgument(format!("trace ends at step {} before horizon {horizon}", last.step)));
    }
    records
        .iter()
        .filter(|r| r.step <= horizon)
        .filter_map(|r| metric.get(r))
        .last()
        .ok_or_else(|| Error::InvalidArgument(format!("no {metric:?} values up to step {horizon}")))
}

fn log_area(records: &[TraceRecord], metric: Metric, horizon: usize) -> f64 {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.step <= horizon)
        .filter_map(|r| metric.get(r).filter(|v| *v > 0.0).map(|v| (r.step as f64, v.log10())))
        .collect();
    pts.windows(2).map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0).sum()
}

/// Compares `metric` of two traces at `horizon`. Both traces must come from
/// the same problem instance and reach the horizon.
pub fn compare_runs(
    (problem_a, a): (&str, &[TraceRecord]),
    (problem_b, b): (&str, &[TraceRecord]),
    metric: Metric,
    horizon: usize,
) -> Result<Comparison> {
    if problem_a != problem_b {
        return Err(Error::InvalidArgument(format!("runs are on different problems: {problem_a:?} vs {problem_b:?}")));
    }
    let va = value_at(a, metric, horizon)?;
    let vb = value_at(b, metric, horizon)?;
    let ordering = if (va - vb).abs() <= 1e-12 * va.abs().max(vb.abs()) {
        Ordering::Equal
    } else {
        va.partial_cmp(&vb).unwrap_or(Ordering::Equal)
    };
    Ok(Comparison {
        metric,
        horizon,
        a: va,
        b: vb,
        ordering,
        auc_log_ratio: log_area(a, metric, horizon) / log_area(b, metric, horizon),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(vals: &[f64]) -> Vec<TraceRecord> {
        vals.iter()
            .enumerate()
            .map(|(i, &v)| TraceRecord {
                step: i,
                loss: v,
                gap: Some(v),
                grad_cond: None,
                residual_cond: None,
                grad_nuclear: None,
                lr: None,
                wall_ms: 0.0,
            })
            .collect()
    }

    #[test]
    fn identical_traces_tie() {
        let t = trace(&[1.0, 0.1, 0.01]);
        let c = compare_runs(("p", &t), ("p", &t), Metric::Gap, 2).unwrap();
        assert_eq!(c.ordering, Ordering::Equal);
        assert!((c.auc_log_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lower_run_wins() {
        let a = trace(&[1.0, 0.1, 0.01, 0.001]);
        let b = trace(&[1.0, 0.5, 0.2, 0.1]);
        let c = compare_runs(("p", &a), ("p", &b), Metric::Loss, 3).unwrap();
        assert!(c.a_lower());
        assert_eq!((c.a, c.b), (0.001, 0.1));
    }

    #[test]
    fn domain_checks() {
        let a = trace(&[1.0, 0.1, 0.01]);
        assert!(compare_runs(("p", &a[..2]), ("p", &a), Metric::Loss, 2).is_err(), "prefix cannot reach horizon");
        assert!(compare_runs(("p", &a), ("q", &a), Metric::Loss, 1).is_err());
        assert!(compare_runs(("p", &a), ("p", &a), Metric::GradCond, 1).is_err());
    }
}
