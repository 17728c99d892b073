//! Trace rows as CSV: `n,x,next,d_to_set,gamma,F_gamma,n_gamma_k`, header
//! mandatory, LF line endings, floats with 17 significant digits.

use mvfix::solver::Step;
use mvfix::{FFunction, IterationTrace, MultiMap};

use crate::error::CliError;
use crate::machine::num;

pub const HEADER: [&str; 7] = ["n", "x", "next", "d_to_set", "gamma", "F_gamma", "n_gamma_k"];

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    pub x: f64,
    pub next: f64,
    pub d_to_set: f64,
    pub gamma: f64,
    /// `F(gamma)`; `-inf` if `gamma` underflowed to zero.
    pub f_gamma: f64,
    pub n_gamma_k: f64,
}

pub fn rows_from_trace(trace: &IterationTrace, f: &FFunction, k: f64) -> Vec<TraceRow> {
    trace
        .steps
        .iter()
        .map(|s| TraceRow {
            n: s.n,
            x: s.x,
            next: s.next,
            d_to_set: s.d_to_set,
            gamma: s.gamma,
            f_gamma: f.eval(s.gamma).unwrap_or(f64::NEG_INFINITY),
            n_gamma_k: s.n as f64 * s.gamma.powf(k),
        })
        .collect()
}

pub fn write_csv(rows: &[TraceRow]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            num(r.x),
            num(r.next),
            num(r.d_to_set),
            num(r.gamma),
            num(r.f_gamma),
            num(r.n_gamma_k),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

pub fn read_csv(text: &str) -> Result<Vec<TraceRow>, CliError> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = r.headers()?.clone();
    if header.iter().ne(HEADER) {
        return Err(CliError::Csv(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let field = |i: usize| -> Result<f64, CliError> {
            rec[i]
                .parse()
                .map_err(|_| CliError::Csv(format!("bad number `{}` in column {}", &rec[i], HEADER[i])))
        };
        rows.push(TraceRow {
            n: rec[0]
                .parse()
                .map_err(|_| CliError::Csv(format!("bad index `{}`", &rec[0])))?,
            x: field(1)?,
            next: field(2)?,
            d_to_set: field(3)?,
            gamma: field(4)?,
            f_gamma: field(5)?,
            n_gamma_k: field(6)?,
        });
    }
    Ok(rows)
}

/// Rebuilds trace steps from CSV rows; the value sets are recomputed as `Tx_n`.
pub fn steps_from_rows(rows: &[TraceRow], map: &MultiMap) -> Result<Vec<Step<f64>>, CliError> {
    rows.iter()
        .map(|r| {
            Ok(Step {
                n: r.n,
                x: r.x,
                value_set: map.apply(r.x)?,
                next: r.next,
                d_to_set: r.d_to_set,
                gamma: r.gamma,
            })
        })
        .collect()
}
