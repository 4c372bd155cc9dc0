//! CSV traces. The first line is a schema comment, the second the header.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

pub const TRACE_SCHEMA: &str = "polargrad-trace v1";
pub const TRACE_COLUMNS: [&str; 8] =
    ["step", "loss", "gap", "grad_cond", "residual_cond", "grad_nuclear", "lr", "wall_ms"];

/// One logged step. `None` fields are written as empty cells.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub step: usize,
    pub loss: f64,
    pub gap: Option<f64>,
    pub grad_cond: Option<f64>,
    pub residual_cond: Option<f64>,
    pub grad_nuclear: Option<f64>,
    /// Learning rate of the step that produced this record; empty at step 0.
    pub lr: Option<f64>,
    pub wall_ms: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Loss,
    Gap,
    GradCond,
    ResidualCond,
    GradNuclear,
}

impl Metric {
    pub fn get(self, r: &TraceRecord) -> Option<f64> {
        match self {
            Self::Loss => Some(r.loss),
            Self::Gap => r.gap,
            Self::GradCond => r.grad_cond,
            Self::ResidualCond => r.residual_cond,
            Self::GradNuclear => r.grad_nuclear,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "loss" => Self::Loss,
            "gap" => Self::Gap,
            "grad_cond" => Self::GradCond,
            "residual_cond" => Self::ResidualCond,
            "grad_nuclear" => Self::GradNuclear,
            _ => return Err(Error::Config(format!("unknown metric {s:?}"))),
        })
    }
}

/// Shortest round-trip form, so identical runs give identical bytes.
fn num(v: f64) -> String {
    format!("{v:e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn write_trace(out: impl Write, records: &[TraceRecord]) -> Result<()> {
    let mut out = out;
    writeln!(out, "# {TRACE_SCHEMA}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_COLUMNS).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.step.to_string(),
            num(r.loss),
            opt(r.gap),
            opt(r.grad_cond),
            opt(r.residual_cond),
            opt(r.grad_nuclear),
            opt(r.lr),
            format!("{:.3}", r.wall_ms),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn trace_to_string(records: &[TraceRecord]) -> String {
    let mut buf = Vec::new();
    write_trace(&mut buf, records).expect("writing to memory");
    String::from_utf8(buf).expect("trace is utf-8")
}

pub fn write_trace_file(path: &Path, records: &[TraceRecord]) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_trace(std::io::BufWriter::new(f), records)
}

pub fn parse_trace(text: &str) -> Result<Vec<TraceRecord>> {
    let (first, rest) = text.split_once('\n').unwrap_or((text, ""));
    if first.trim_end() != format!("# {TRACE_SCHEMA}") {
        return Err(Error::Trace(format!("expected schema line `# {TRACE_SCHEMA}`, found {first:?}")));
    }
    let mut rdr = csv::Reader::from_reader(rest.as_bytes());
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.iter().ne(TRACE_COLUMNS) {
        return Err(Error::Trace(format!("unexpected columns {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut out = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row.map_err(csv_err)?;
        let field = |i: usize| -> Result<Option<f64>> {
            let s = &row[i];
            if s.is_empty() {
                return Ok(None);
            }
            s.parse::<f64>()
                .map(Some)
                .map_err(|_| Error::Trace(format!("row {}: column {} = {s:?} is not a number", line + 1, TRACE_COLUMNS[i])))
        };
        let step = row[0]
            .parse::<usize>()
            .map_err(|_| Error::Trace(format!("row {}: bad step {:?}", line + 1, &row[0])))?;
        let loss = field(1)?.ok_or_else(|| Error::Trace(format!("row {}: empty loss", line + 1)))?;
        out.push(TraceRecord {
            step,
            loss,
            gap: field(2)?,
            grad_cond: field(3)?,
            residual_cond: field(4)?,
            grad_nuclear: field(5)?,
            lr: field(6)?,
            wall_ms: field(7)?.unwrap_or(0.0),
        });
    }
    if out.windows(2).any(|w| w[1].step <= w[0].step) {
        return Err(Error::Trace("steps are not strictly increasing".into()));
    }
    Ok(out)
}

pub fn read_trace_file(path: &Path) -> Result<Vec<TraceRecord>> {
    let text = std::fs::read_to_string(path)?;
    parse_trace(&text).map_err(|e| Error::Trace(format!("{}: {e}", path.display())))
}

/// The trace text with the `wall_ms` column dropped, for determinism checks.
pub fn strip_wall_clock(text: &str) -> String {
    text.lines().map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head)).collect::<Vec<_>>().join("\n")
}

fn csv_err(e: csv::Error) -> Error {
    Error::Trace(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(step: usize, loss: f64) -> TraceRecord {
        TraceRecord { step, loss, gap: None, grad_cond: None, residual_cond: None, grad_nuclear: None, lr: None, wall_ms: 1.5 }
    }

    #[test]
    fn round_trip_with_empty_fields() {
        let mut r1 = rec(1, 0.1);
        r1.gap = Some(1e-300);
        r1.lr = Some(4e-8);
        let records = vec![rec(0, 3.0), r1];
        let text = trace_to_string(&records);
        assert!(text.starts_with("# polargrad-trace v1\nstep,loss,gap,grad_cond,residual_cond,grad_nuclear,lr,wall_ms\n"));
        assert!(text.contains("0,3e0,,,,,,1.500"));
        assert_eq!(parse_trace(&text).unwrap(), records);
    }

    #[test]
    fn non_finite_loss_survives() {
        let text = trace_to_string(&[rec(0, f64::NAN), rec(1, f64::INFINITY)]);
        let back = parse_trace(&text).unwrap();
        assert!(back[0].loss.is_nan() && back[1].loss == f64::INFINITY);
    }

    #[test]
    fn schema_mismatch_is_error() {
        let text = trace_to_string(&[rec(0, 1.0)]).replace("v1", "v0");
        assert!(matches!(parse_trace(&text), Err(Error::Trace(_))));
        let text = trace_to_string(&[rec(0, 1.0)]).replace("grad_cond", "kappa");
        assert!(parse_trace(&text).is_err());
        let text = trace_to_string(&[rec(1, 1.0), rec(1, 2.0)]);
        assert!(parse_trace(&text).is_err());
    }

    #[test]
    fn strip_wall_clock_drops_last_column() {
        assert_eq!(strip_wall_clock("a,b,c\n1,2,3"), "a,b\n1,2");
    }
}
