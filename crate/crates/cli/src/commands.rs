//! The `certify`, `solve` and `check-f` commands. Each returns its report
//! text, any files to write and the process exit code; nothing here touches
//! the filesystem.

use std::fmt::Write as _;

use mvfix::analysis::certify;
use mvfix::mvmap::MapKind;
use mvfix::solver::{iterate, validate_trace, Outcome};
use mvfix::wardowski::log_grid;
use mvfix::{CertificateReport, CertifyOptions, CompactSet, FFunction, FKind, MultiMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ProblemConfig;
use crate::error::CliError;
use crate::machine::MachineBlock;
use crate::trace_csv::{rows_from_trace, write_csv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_VIOLATED: i32 = 3;
pub const EXIT_VACUOUS: i32 = 4;

const LISTED_VIOLATIONS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub report: String,
    /// `(file name, contents)` to place in the output directory.
    pub files: Vec<(String, String)>,
    pub exit_code: i32,
}

/// Exit code of a certificate: per-pair errors first, then vacuity, then violations.
pub fn certify_exit_code(report: &CertificateReport) -> i32 {
    if !report.errors.is_empty() {
        EXIT_ERROR
    } else if report.tau_star.is_none() {
        EXIT_VACUOUS
    } else if !report.violations.is_empty() {
        EXIT_VIOLATED
    } else {
        EXIT_OK
    }
}

fn verdict_name(code: i32) -> &'static str {
    match code {
        EXIT_OK => "certified",
        EXIT_VACUOUS => "vacuous",
        EXIT_VIOLATED => "violated",
        _ => "error",
    }
}

pub fn describe_map(map: &MultiMap) -> String {
    let body = match map.kind() {
        MapKind::IntervalEndpoints { lo, hi } => format!("Tx = [{lo}, {hi}]"),
        MapKind::Singleton(f) => format!("Tx = {{{f}}}"),
        MapKind::FiniteSet(fs) => {
            let parts: Vec<String> = fs.iter().map(ToString::to_string).collect();
            format!("Tx = {{{}}}", parts.join(", "))
        }
        MapKind::Table(entries) => format!("table with {} entries", entries.len()),
    };
    format!("{body} on {}", map.domain())
}

pub fn run_certify(cfg: &ProblemConfig) -> Result<CommandOutput, CliError> {
    let problem = cfg.problem()?;
    let opts = CertifyOptions {
        grid_size: cfg.grid_size,
        random_pairs: cfg.random_pairs,
        seed: cfg.seed,
        mode: cfg.mode.into(),
    };
    let report = certify(&problem.map, &problem.f, &problem.integrand, &opts)?;
    let exit_code = certify_exit_code(&report);
    let total = report.evaluated_pairs + report.errors.len();

    let mut out = String::new();
    writeln!(out, "mvfix certify").unwrap();
    writeln!(out, "map:        {}", describe_map(&problem.map)).unwrap();
    writeln!(out, "F:          {}", problem.f.id()).unwrap();
    writeln!(out, "integrand:  {}", problem.integrand.id()).unwrap();
    writeln!(out, "mode:       {}", report.mode).unwrap();
    writeln!(
        out,
        "pairs:      {} grid + {} random (seed {})",
        report.grid_pairs, report.random_pairs, report.seed
    )
    .unwrap();
    writeln!(
        out,
        "evaluated:  {} ({} vacuous, {} errors)",
        report.evaluated_pairs,
        report.vacuous_pairs,
        report.errors.len()
    )
    .unwrap();
    match (&report.tau_star, &report.worst_pair) {
        (Some(t), Some(w)) => writeln!(
            out,
            "tau*:       {t} at (x, y) = ({}, {}), h = {}, m = {}",
            w.x, w.y, w.h, w.m
        )
        .unwrap(),
        _ => writeln!(out, "tau*:       undefined (every pair has H(Tx,Ty) = 0)").unwrap(),
    }
    writeln!(
        out,
        "certified on {total} pairs: tau* is the smallest margin F(Phi(M)) - F(Phi(H)) over this sample, not a proof"
    )
    .unwrap();
    if let Some(tau) = cfg.tau {
        let ok = report.tau_star.is_some_and(|t| tau <= t + mvfix::VERDICT_SLACK);
        writeln!(out, "requested tau = {tau}: {}", if ok { "admissible" } else { "NOT admissible" })
            .unwrap();
    }
    writeln!(out, "violations: {}", report.violations.len()).unwrap();
    for v in report.violations.iter().take(LISTED_VIOLATIONS) {
        writeln!(
            out,
            "  x = {}, y = {}: h = {}, m = {}, margin = {}",
            v.x,
            v.y,
            v.h,
            v.m,
            v.margin.unwrap_or(f64::NAN)
        )
        .unwrap();
    }
    for e in report.errors.iter().take(LISTED_VIOLATIONS) {
        writeln!(out, "  error at x = {}, y = {}: {}", e.x, e.y, e.error).unwrap();
    }
    writeln!(out, "verdict:    {}", verdict_name(exit_code)).unwrap();

    let mut m = MachineBlock::new();
    m.put("command", "certify")
        .put("mode", report.mode)
        .put("seed", report.seed)
        .put("grid_pairs", report.grid_pairs)
        .put("random_pairs", report.random_pairs)
        .put("evaluated_pairs", report.evaluated_pairs)
        .put("vacuous_pairs", report.vacuous_pairs)
        .put("error_pairs", report.errors.len())
        .put_opt_num("tau_star", report.tau_star)
        .put_opt_num("worst_x", report.worst_pair.as_ref().map(|w| w.x))
        .put_opt_num("worst_y", report.worst_pair.as_ref().map(|w| w.y))
        .put_opt_num("worst_h", report.worst_pair.as_ref().map(|w| w.h))
        .put_opt_num("worst_m", report.worst_pair.as_ref().map(|w| w.m))
        .put("violations", report.violations.len());
    if let Some(tau) = cfg.tau {
        m.put_num("tau", tau)
            .put("tau_admissible", report.tau_star.is_some_and(|t| tau <= t + mvfix::VERDICT_SLACK));
    }
    m.put("verdict", verdict_name(exit_code)).put("exit_code", exit_code);
    out.push('\n');
    out.push_str(&m.render());

    Ok(CommandOutput {
        files: vec![("certify_report.txt".into(), out.clone())],
        report: out,
        exit_code,
    })
}

pub fn run_solve(cfg: &ProblemConfig) -> Result<CommandOutput, CliError> {
    let problem = cfg.problem()?;
    let x0 = cfg.x0.ok_or_else(|| CliError::Schema {
        key: "x0".into(),
        message: "solve needs a starting point x0".into(),
    })?;
    let trace = iterate(&problem.map, x0, cfg.tol, cfg.max_iter, &problem.integrand)?;
    let k = cfg.f.k;
    let rows = rows_from_trace(&trace, &problem.f, k);
    let csv = write_csv(&rows)?;

    let verdict = match validate_trace(&trace, &problem.f, cfg.tau.unwrap_or(f64::MIN_POSITIVE), k) {
        Ok(v) => Some(v),
        Err(mvfix::Error::InsufficientTrace) => None,
        Err(e) => return Err(e.into()),
    };
    let chain_checked = cfg.tau.is_some();
    let validations_pass = verdict
        .as_ref()
        .is_none_or(|v| v.rate_bound_ok && (!chain_checked || v.decay_chain_ok));

    let exit_code = match &trace.outcome {
        Outcome::Error(_) => EXIT_ERROR,
        Outcome::MaxIterReached => EXIT_BUDGET,
        Outcome::FixedPointFound(_) if validations_pass => EXIT_OK,
        Outcome::FixedPointFound(_) => EXIT_VIOLATED,
    };

    let mut out = String::new();
    writeln!(out, "mvfix solve").unwrap();
    writeln!(out, "map:        {}", describe_map(&problem.map)).unwrap();
    writeln!(out, "F:          {}", problem.f.id()).unwrap();
    writeln!(out, "integrand:  {}", problem.integrand.id()).unwrap();
    writeln!(out, "x0 = {x0}, tol = {}, max_iter = {}", cfg.tol, cfg.max_iter).unwrap();
    let outcome_name = match &trace.outcome {
        Outcome::FixedPointFound(x) => {
            writeln!(out, "outcome:    fixed point found at x = {x} after {} steps", trace.steps.len())
                .unwrap();
            "fixed_point_found"
        }
        Outcome::MaxIterReached => {
            writeln!(out, "outcome:    iteration budget of {} steps exhausted", cfg.max_iter).unwrap();
            "max_iter_reached"
        }
        Outcome::Error(e) => {
            writeln!(out, "outcome:    error after {} steps: {e}", trace.steps.len()).unwrap();
            "error"
        }
    };
    match &verdict {
        None => writeln!(out, "validation: not applicable (fewer than two steps with gamma > 0)").unwrap(),
        Some(v) => {
            if chain_checked {
                writeln!(
                    out,
                    "decay chain F(gamma_n) <= F(gamma_0) - n tau (tau = {}): {}",
                    v.tau,
                    match v.decay_first_failure {
                        None => "holds".to_string(),
                        Some(n) => format!("FAILS first at n = {n}"),
                    }
                )
                .unwrap();
            } else {
                writeln!(out, "decay chain: not checked (no tau in config)").unwrap();
            }
            match v.n1 {
                Some(n1) => writeln!(
                    out,
                    "rate bound gamma_n <= n^(-1/k) for n >= n1 = {n1}: {}",
                    match v.rate_first_failure {
                        None => "holds".to_string(),
                        Some(n) => format!("FAILS first at n = {n}"),
                    }
                )
                .unwrap(),
                None => writeln!(out, "rate bound: no n >= 1 with n gamma_n^k <= 1 in the trace").unwrap(),
            }
            if let Some(tail) = v.cauchy_tail_bound {
                writeln!(out, "Cauchy tail bound sum_(i >= n1) i^(-1/k) over the trace: {tail}").unwrap();
            }
        }
    }

    let mut m = MachineBlock::new();
    m.put("command", "solve")
        .put("outcome", outcome_name)
        .put_opt_num("final_x", trace.final_x())
        .put("steps", trace.steps.len());
    match &verdict {
        None => {
            m.put("validation", "not_applicable");
        }
        Some(v) => {
            m.put("validation", "run");
            if chain_checked {
                m.put_num("tau", v.tau).put("decay_chain_ok", v.decay_chain_ok).put(
                    "decay_first_failure",
                    v.decay_first_failure.map_or("none".into(), |n| n.to_string()),
                );
            } else {
                m.put("decay_chain_ok", "unchecked");
            }
            m.put_num("k", v.k)
                .put("n1", v.n1.map_or("none".into(), |n| n.to_string()))
                .put("rate_bound_ok", v.rate_bound_ok)
                .put_opt_num("cauchy_tail_bound", v.cauchy_tail_bound);
        }
    }
    m.put("exit_code", exit_code);
    out.push('\n');
    out.push_str(&m.render());

    Ok(CommandOutput {
        files: vec![
            ("trace.csv".into(), csv),
            ("solve_report.txt".into(), out.clone()),
        ],
        report: out,
        exit_code,
    })
}

/// Finite-grid checks of (F1)-(F4) for one built-in `F`.
pub fn run_check_f(kind: FKind, k: f64, seed: u64) -> Result<CommandOutput, CliError> {
    let f = FFunction::new(kind, k)?;
    let grid = log_grid::<f64>(-8, 8, 4);
    let f1 = f.check_f1(&grid)?;
    let f23 = f.check_f2_f3(k)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f4_sets = vec![
        CompactSet::interval(2.0, 3.0)?,
        CompactSet::new([(1.0, 1.0), (5.0, 6.0)])?,
    ];
    for _ in 0..100 {
        let pieces = rng.gen_range(1..4);
        let ivs: Vec<(f64, f64)> = (0..pieces)
            .map(|_| {
                let lo: f64 = rng.gen_range(1e-3..10.0);
                (lo, lo + rng.gen_range(0.0..2.0))
            })
            .collect();
        f4_sets.push(CompactSet::new(ivs)?);
    }
    let mut f4_failures = Vec::new();
    for set in &f4_sets {
        if !f.check_f4(set)?.pass {
            f4_failures.push(set.to_string());
        }
    }

    let all = f1.pass && f23.f2 && f23.f3 && f4_failures.is_empty();
    let exit_code = if all { EXIT_OK } else { EXIT_VIOLATED };

    let mut out = String::new();
    writeln!(out, "mvfix check-f: {}", f.id()).unwrap();
    match f1.first_violation {
        None => writeln!(out, "(F1) strictly increasing on {} points in [1e-8, 1e8]: pass", grid.len()).unwrap(),
        Some((a, b)) => writeln!(out, "(F1) FAILS: F({a}) >= F({b})").unwrap(),
    }
    writeln!(out, "probe grid alpha_i = 10^(-2i), i = 1..8").unwrap();
    writeln!(out, "  {:>8}  {:>24}  {:>24}", "alpha", "F(alpha)", "|alpha^k F(alpha)|").unwrap();
    for (i, (fv, sv)) in f23.f_values.iter().zip(&f23.scaled_values).enumerate() {
        writeln!(out, "  {:>8}  {:>24}  {:>24}", format!("1e-{}", 2 * (i + 1)), fv, sv).unwrap();
    }
    writeln!(out, "(F2) F(alpha_i) strictly decreasing and F(alpha_8) < -20: {}", pass(f23.f2)).unwrap();
    writeln!(
        out,
        "(F3) |alpha_i^k F(alpha_i)| strictly decreasing over the last 4 probes and below 1e-6 at alpha_8 (k = {k}): {}",
        pass(f23.f3)
    )
    .unwrap();
    writeln!(
        out,
        "(F4) F(inf A) = inf F(A) on {} positive sets: {}",
        f4_sets.len(),
        pass(f4_failures.is_empty())
    )
    .unwrap();
    for s in &f4_failures {
        writeln!(out, "  fails on {s}").unwrap();
    }

    let mut m = MachineBlock::new();
    m.put("command", "check-f")
        .put("kind", kind)
        .put_num("k", k)
        .put("f1", f1.pass)
        .put("f2", f23.f2)
        .put("f3", f23.f3)
        .put("f4", f4_failures.is_empty())
        .put("exit_code", exit_code);
    out.push('\n');
    out.push_str(&m.render());
    Ok(CommandOutput {
        files: vec![("check_f_report.txt".into(), out.clone())],
        report: out,
        exit_code,
    })
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}
