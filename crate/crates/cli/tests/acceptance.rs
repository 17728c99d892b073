//! Acceptance suite. Runs every criterion at its stated tolerance, prints
//! one PASS/FAIL line per criterion and exits nonzero if any fails.

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use mvfix::analysis::certify;
use mvfix::mvmap::is_fixed_point;
use mvfix::sets1d::{dist_point_set, hausdorff};
use mvfix::solver::{gamma_sequence_probe, iterate, validate_trace, Outcome};
use mvfix::{CertifyOptions, CompactSet, FFunction, Integrand, MultiMap};
use mvfix_cli::machine::{machine_block_text, parse_machine_block};
use mvfix_cli::trace_csv::{read_csv, rows_from_trace, steps_from_rows, write_csv};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn mvfix(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_mvfix"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn random_interval(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let a: f64 = rng.gen_range(-10.0..10.0);
    (a, a + rng.gen_range(0.0..5.0))
}

fn random_set(rng: &mut ChaCha8Rng) -> CompactSet {
    let n = rng.gen_range(1..=4);
    CompactSet::new((0..n).map(|_| random_interval(rng))).unwrap()
}

/// Distance from `x` to the `n`-point uniform sample of `[c, d]`.
fn dist_to_sampled_interval(x: f64, c: f64, d: f64, n: usize) -> f64 {
    if d == c {
        return (x - c).abs();
    }
    let step = (d - c) / (n - 1) as f64;
    let i = ((x - c) / step).round().clamp(0.0, (n - 1) as f64);
    let mut best = f64::INFINITY;
    for j in [i - 1.0, i, i + 1.0] {
        if (0.0..=(n - 1) as f64).contains(&j) {
            let p = if j == (n - 1) as f64 { d } else { c + j * step };
            best = best.min((x - p).abs());
        }
    }
    best
}

fn sampled_interval_excess(a: (f64, f64), b: (f64, f64), n: usize) -> f64 {
    let step = (a.1 - a.0) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let x = if i == n - 1 { a.1 } else { a.0 + i as f64 * step };
            dist_to_sampled_interval(x, b.0, b.1, n)
        })
        .fold(0.0, f64::max)
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let out = mvfix(&["paper-demo"]);
    let elapsed = start.elapsed();
    let text = String::from_utf8(out.stdout).unwrap();
    let m = parse_machine_block(&text).ok_or("no machine block")?;
    let get = |k: &str| -> Result<f64, String> {
        m.get(k).ok_or(format!("missing {k}"))?.parse::<f64>().map_err(|e| e.to_string())
    };
    ensure!(out.status.code() == Some(0), "exit code {:?}", out.status.code());
    let ex = get("excess_t0_t1")?;
    ensure!(ex == 0.25, "excess(T0,T1) = {ex}");
    let alpha = get("alpha_excess")?;
    ensure!((alpha - 0.25).abs() <= 1e-12, "alpha = {alpha}");
    let tau = get("tau_excess")?;
    ensure!((tau - 4f64.ln()).abs() <= 1e-9 && tau < 1.39, "tau (excess) = {tau}");
    let h = get("hausdorff_t0_t1")?;
    ensure!(h == 0.5, "hausdorff(T0,T1) = {h}");
    let tau_h = get("tau_hausdorff")?;
    ensure!((tau_h - 2f64.ln()).abs() <= 1e-9, "tau (hausdorff) = {tau_h}");
    ensure!(
        text.contains("excess(T0,T1) = 0.25 (paper: 1/4 — MATCH under excess mode)")
            && text.contains("hausdorff(T0,T1) = 0.5 (paper reports 1/4 — DISCREPANCY, see notes)"),
        "discrepancy labels missing"
    );
    ensure!(elapsed < Duration::from_secs(1), "runtime {elapsed:?}");
    Ok(format!(
        "excess 0.25, alpha {alpha}, tau {tau} (ln 4), hausdorff 0.5, tau {tau_h} (ln 2), {elapsed:?}"
    ))
}

fn criterion_2() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 100_000;
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (a, b) = (random_interval(&mut rng), random_interval(&mut rng));
        let lib = hausdorff(
            &CompactSet::interval(a.0, a.1).unwrap(),
            &CompactSet::interval(b.0, b.1).unwrap(),
        );
        let endpoint = (a.0 - b.0).abs().max((a.1 - b.1).abs());
        let oracle = sampled_interval_excess(a, b, n).max(sampled_interval_excess(b, a, n));
        worst = worst.max((lib - endpoint).abs()).max((lib - oracle).abs());
    }
    ensure!(worst <= 1e-9, "max error {worst:e}");
    for _ in 0..1000 {
        let (a, b, c) = (random_set(&mut rng), random_set(&mut rng), random_set(&mut rng));
        let (ab, ba, ac, bc) = (hausdorff(&a, &b), hausdorff(&b, &a), hausdorff(&a, &c), hausdorff(&b, &c));
        ensure!((ab - ba).abs() <= 1e-12, "symmetry: {ab} vs {ba}");
        ensure!(hausdorff(&a, &a) == 0.0, "H(A,A) != 0 for {a}");
        ensure!(a == b || ab > 0.0, "H(A,B) = 0 for distinct {a}, {b}");
        ensure!(ac <= ab + bc + 1e-12, "triangle: {ac} > {ab} + {bc}");
    }
    Ok(format!("max |H - oracle| = {worst:e} over 1000 pairs; axioms hold on 1000 triples"))
}

fn criterion_3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut violations = 0;
    for _ in 0..1000 {
        let (a, b) = (random_set(&mut rng), random_set(&mut rng));
        let h = hausdorff(&a, &b);
        for _ in 0..100 {
            let x = a.point_at_fraction(rng.gen_range(0.0..=1.0));
            if dist_point_set(x, &b) > h + 1e-12 {
                violations += 1;
            }
        }
    }
    ensure!(violations == 0, "{violations} violations");
    Ok("0 violations over 100000 samples".into())
}

fn criterion_4() -> Verdict {
    let domain = CompactSet::interval(0.0, 1.0).unwrap();
    let opts = CertifyOptions::default();
    let half = MultiMap::singleton(domain.clone(), "x/2").unwrap();
    let r = certify(&half, &FFunction::log(), &Integrand::unit(), &opts).unwrap();
    ensure!(r.grid_pairs == 5050 && r.random_pairs == 1000, "pair counts {} + {}", r.grid_pairs, r.random_pairs);
    let tau = r.tau_star.ok_or("tau* undefined")?;
    ensure!((tau - 2f64.ln()).abs() <= 1e-9, "tau* = {tau}");

    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("id.json");
    fs::write(&cfg, r#"{"domain": [[0, 1]], "map": {"kind": "singleton", "f": "x"}}"#).unwrap();
    let out = mvfix(&["certify", cfg.to_str().unwrap()]);
    let m = parse_machine_block(&String::from_utf8(out.stdout).unwrap()).ok_or("no machine block")?;
    let tau_id: f64 = m["tau_star"].parse().unwrap();
    ensure!(tau_id == 0.0, "identity tau* = {tau_id}");
    ensure!(out.status.code() == Some(3), "identity exit code {:?}", out.status.code());
    Ok(format!("tau* = {tau} (ln 2); identity tau* = 0, exit 3"))
}

fn halving_trace() -> mvfix::IterationTrace {
    let map = MultiMap::singleton(CompactSet::interval(0.0, 1.0).unwrap(), "x/2").unwrap();
    iterate(&map, 1.0, 1e-15, 10_000, &Integrand::unit()).unwrap()
}

fn criterion_5() -> Verdict {
    let trace = halving_trace();
    ensure!(matches!(trace.outcome, Outcome::FixedPointFound(_)), "outcome {:?}", trace.outcome);
    let steps = &trace.steps;
    ensure!(steps.len() >= 40, "only {} steps", steps.len());
    let g0 = steps[0].gamma.ln();
    let mut worst = 0.0f64;
    for s in steps {
        let expected = g0 - s.n as f64 * 2f64.ln();
        worst = worst.max((s.gamma.ln() - expected).abs());
    }
    ensure!(worst <= 1e-9, "max deviation {worst:e}");
    let v = validate_trace(&trace, &FFunction::log(), 0.8, 0.5).unwrap();
    ensure!(v.decay_first_failure == Some(1), "tau = 0.8 first failure {:?}", v.decay_first_failure);
    Ok(format!(
        "{} steps, max |F(gamma_n) - F(gamma_0) + n ln 2| = {worst:e}; tau = 0.8 fails first at n = 1",
        steps.len()
    ))
}

fn criterion_6() -> Verdict {
    let trace = halving_trace();
    let v = validate_trace(&trace, &FFunction::log(), 2f64.ln(), 0.5).unwrap();
    let n1 = v.n1.ok_or("no n1")?;
    for s in trace.steps.iter().filter(|s| s.n >= n1) {
        let bound = (s.n as f64).powf(-2.0) + 1e-12;
        ensure!(s.gamma <= bound, "gamma_{} = {} > n^-2", s.n, s.gamma);
    }
    ensure!(v.rate_bound_ok, "validator rate bound failed at {:?}", v.rate_first_failure);
    let seq: Vec<(usize, f64)> = trace
        .steps
        .iter()
        .filter(|s| s.n >= n1)
        .map(|s| (s.n, s.n as f64 * s.gamma.sqrt()))
        .collect();
    for w in seq.windows(2) {
        ensure!(
            w[1].1 < w[0].1,
            "n1 = {n1}, rate bound holds, but n gamma_n^(1/2) rises from {} at n = {} to {} at n = {} \
             (decreasing only from n = {:?})",
            w[0].1,
            w[0].0,
            w[1].1,
            w[1].0,
            v.alt_decreasing_from
        );
    }
    Ok(format!("n1 = {n1}, rate bound holds, n gamma_n^(1/2) decreasing beyond n1"))
}

fn criterion_7() -> Verdict {
    let start = Instant::now();
    let ns: Vec<u64> = (0..=6).map(|e| 10u64.pow(e)).collect();
    let h = |n: u64| 1.0 / (4.0 * n as f64 * (n as f64 + 1.0));
    let probe = gamma_sequence_probe(ns.iter().map(|&n| (n, h(n))), &Integrand::unit(), &FFunction::log(), 0.5)
        .unwrap();
    let elapsed = start.elapsed();
    for r in &probe.rows {
        let nf = r.n as f64;
        let f_oracle = -(4.0 * nf * (nf + 1.0)).ln();
        ensure!((r.f_gamma - f_oracle).abs() <= 1e-12, "F(gamma_{}) = {} vs {f_oracle}", r.n, r.f_gamma);
        let gk_oracle = f_oracle / (2.0 * (nf * (nf + 1.0)).sqrt());
        ensure!(
            (r.gamma_k_f_gamma - gk_oracle).abs() <= 1e-12,
            "gamma^k F at n = {}: {} vs {gk_oracle}",
            r.n,
            r.gamma_k_f_gamma
        );
    }
    let at = |n: u64| probe.rows.iter().find(|r| r.n == n).unwrap();
    ensure!(at(100_000).f_gamma < -20.0, "F(gamma_1e5) = {}", at(100_000).f_gamma);
    ensure!(at(1_000_000).gamma_k_f_gamma.abs() < 1e-2, "|gamma^k F| at 1e6 = {}", at(1_000_000).gamma_k_f_gamma);
    ensure!(probe.f_gamma_decreasing() && probe.gamma_k_f_gamma_decreasing(), "probe not monotone");
    ensure!(elapsed < Duration::from_secs(1), "runtime {elapsed:?}");
    Ok(format!(
        "F(gamma_1e5) = {}, |gamma^(1/2) F| at 1e6 = {:e}, monotone, {elapsed:?}",
        at(100_000).f_gamma,
        at(1_000_000).gamma_k_f_gamma.abs()
    ))
}

fn criterion_8() -> Verdict {
    let n = 1e7;
    let txn = CompactSet::interval(1.0 / (4.0 * n), (n + 1.0) / (2.0 * n)).unwrap();
    let h = hausdorff(&txn, &CompactSet::interval(0.0, 0.5).unwrap());
    ensure!(h < 1e-6, "H = {h}");
    ensure!((h - 1.0 / (2.0 * n)).abs() <= 1e-15, "H = {h} vs 1/(2n)");
    let fixed = is_fixed_point(&MultiMap::worked_example(), 0.0, 0.0).unwrap();
    ensure!(fixed, "0 not fixed");
    Ok(format!("H(Tx_1e7, [0, 1/2]) = {h:e}; is_fixed_point(T, 0, 0) = true"))
}

fn criterion_9() -> Verdict {
    let phi = Integrand::unit();
    let map = MultiMap::interval_endpoints(CompactSet::interval(0.0, 1.0).unwrap(), "x/3", "x/2").unwrap();
    let trace = iterate(&map, 1.0, 1e-12, 50, &phi).unwrap();
    let x = match trace.outcome {
        Outcome::FixedPointFound(x) => x,
        ref o => return Err(format!("outcome {o:?}")),
    };
    ensure!(x.abs() < 1e-11 && trace.steps.len() <= 50, "x = {x} after {} steps", trace.steps.len());
    for s in &trace.steps {
        let oracle = s.x / 2.0;
        ensure!(
            (s.x - s.next).abs() == s.d_to_set && s.d_to_set == oracle && s.next == oracle,
            "step {}: |x - next| = {}, D = {}, oracle {oracle}",
            s.n,
            (s.x - s.next).abs(),
            s.d_to_set
        );
    }
    let shift = MultiMap::singleton(CompactSet::interval(0.0, 3.0).unwrap(), "x/2 + 1").unwrap();
    let t2 = iterate(&shift, 0.0, 1e-12, 10_000, &phi).unwrap();
    let x2 = t2.final_x().ok_or("no iterate")?;
    ensure!(matches!(t2.outcome, Outcome::FixedPointFound(_)) && (x2 - 2.0).abs() < 1e-11, "x = {x2}");
    Ok(format!(
        "[x/3, x/2]: x = {x:e} after {} steps, every step exact; {{x/2 + 1}}: x = {x2}",
        trace.steps.len()
    ))
}

fn criterion_10() -> Verdict {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(
        &cfg,
        r#"{"domain": [[0, 1]], "map": {"kind": "interval_endpoints", "lo": "x/4", "hi": "(x+1)/2"}, "seed": 42, "x0": 1, "tau": 0.5}"#,
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let runs: Vec<String> = (0..3)
        .map(|_| String::from_utf8(mvfix(&["certify", cfg]).stdout).unwrap())
        .collect();
    let blocks: Vec<&str> = runs.iter().map(|r| machine_block_text(r).unwrap_or("")).collect();
    ensure!(!blocks[0].is_empty(), "no machine block");
    ensure!(blocks.iter().all(|b| *b == blocks[0]), "machine blocks differ");

    let map = MultiMap::interval_endpoints(CompactSet::interval(0.0, 1.0).unwrap(), "x/3", "x/2").unwrap();
    let f = FFunction::log();
    let trace = iterate(&map, 1.0, 1e-12, 10_000, &Integrand::unit()).unwrap();
    let csv = write_csv(&rows_from_trace(&trace, &f, 0.5)).map_err(|e| e.to_string())?;
    let steps = steps_from_rows(&read_csv(&csv).map_err(|e| e.to_string())?, &map).map_err(|e| e.to_string())?;
    ensure!(steps == trace.steps, "CSV round trip differs");
    let bitwise = steps.iter().zip(&trace.steps).all(|(a, b)| {
        a.x.to_bits() == b.x.to_bits()
            && a.next.to_bits() == b.next.to_bits()
            && a.d_to_set.to_bits() == b.d_to_set.to_bits()
            && a.gamma.to_bits() == b.gamma.to_bits()
    });
    ensure!(bitwise, "CSV round trip not bit-exact");
    Ok(format!("3 identical machine blocks; {} trace rows round-trip bit-exactly", steps.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("worked example arithmetic", criterion_1),
        ("hausdorff correctness", criterion_2),
        ("point-to-set bounded by hausdorff", criterion_3),
        ("certifier closed-form oracle", criterion_4),
        ("decay chain exactness", criterion_5),
        ("rate bound and monotone n gamma_n^k", criterion_6),
        ("F2/F3 probes on 1/(4n(n+1))", criterion_7),
        ("set limit and fixed point", criterion_8),
        ("solver convergence", criterion_9),
        ("determinism and CSV round trip", criterion_10),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .map(String::as_str)
                    .or(p.downcast_ref::<&str>().copied())
                    .unwrap_or("unknown panic");
                Err(format!("panicked: {msg}"))
            });
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
