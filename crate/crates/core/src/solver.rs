//! Nearest-point iteration `x_{n+1} in Tx_n` and validation of the decay
//! bounds it is expected to satisfy under an `F`-contraction.

use crate::error::{Error, Result};
use crate::integrand::Integrand;
use crate::mvmap::MultiMap;
use crate::scalar::{Scalar, VERDICT_SLACK};
use crate::sets1d::CompactSet;
use crate::wardowski::FFunction;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 10_000;
/// Slack on the telescoped chain `F(gamma_n) <= F(gamma_0) - n tau`.
pub const CHAIN_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Step<S> {
    pub n: usize,
    pub x: S,
    /// `Tx_n`.
    pub value_set: CompactSet<S>,
    /// `x_{n+1}`: the point of `Tx_n` nearest to `x_n`.
    pub next: S,
    /// `D(x_n, Tx_n)`.
    pub d_to_set: S,
    /// `gamma_n = Phi(d(x_n, x_{n+1}))`.
    pub gamma: S,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome<S> {
    FixedPointFound(S),
    MaxIterReached,
    Error(Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceParams<S> {
    pub tol: S,
    pub max_iter: usize,
    pub integrand: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace<S> {
    pub steps: Vec<Step<S>>,
    pub outcome: Outcome<S>,
    pub params: TraceParams<S>,
}

impl<S: Scalar> IterationTrace<S> {
    /// Last iterate reached: the fixed point, or the last `next`.
    pub fn final_x(&self) -> Option<S> {
        match self.outcome {
            Outcome::FixedPointFound(x) => Some(x),
            _ => self.steps.last().map(|s| s.next),
        }
    }
}

/// Runs `x_{n+1} = nearest_point(x_n, Tx_n)` from `x0` until
/// `D(x_n, Tx_n) <= tol` or `max_iter` steps have been recorded.
///
/// Evaluation failures and iterates leaving the domain end the trace with
/// [`Outcome::Error`]; the steps recorded so far are kept.
pub fn iterate<S: Scalar>(
    map: &MultiMap<S>,
    x0: S,
    tol: S,
    max_iter: usize,
    phi: &Integrand<S>,
) -> Result<IterationTrace<S>> {
    if !(tol >= S::zero()) {
        return Err(Error::InvalidParameter(format!("tol must be nonnegative, got {tol}")));
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
    }
    if !map.domain().contains(x0) {
        return Err(Error::Domain(format!("x0 = {x0} lies outside the domain {}", map.domain())));
    }
    let params = TraceParams {
        tol,
        max_iter,
        integrand: phi.id(),
    };
    let mut steps = Vec::new();
    let mut x = x0;
    for n in 0..=max_iter {
        let value_set = match map.apply(x) {
            Ok(s) => s,
            Err(e) => return Ok(finish(steps, Outcome::Error(e), params)),
        };
        let d_to_set = value_set.dist_point(x);
        if d_to_set <= tol {
            return Ok(finish(steps, Outcome::FixedPointFound(x), params));
        }
        if n == max_iter {
            break;
        }
        let next = value_set.nearest_point(x);
        let gamma = match phi.capital_phi((x - next).abs()) {
            Ok(g) => g,
            Err(e) => return Ok(finish(steps, Outcome::Error(e), params)),
        };
        steps.push(Step {
            n,
            x,
            value_set,
            next,
            d_to_set,
            gamma,
        });
        if !map.domain().contains(next) {
            let e = Error::Domain(format!(
                "iterate x_{} = {next} escaped the domain {}",
                n + 1,
                map.domain()
            ));
            return Ok(finish(steps, Outcome::Error(e), params));
        }
        x = next;
    }
    Ok(finish(steps, Outcome::MaxIterReached, params))
}

fn finish<S>(steps: Vec<Step<S>>, outcome: Outcome<S>, params: TraceParams<S>) -> IterationTrace<S> {
    IterationTrace {
        steps,
        outcome,
        params,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceVerdict<S> {
    pub tau: S,
    pub k: S,
    /// `F(gamma_n) <= F(gamma_0) - n tau + 1e-9` at every step with `gamma_n > 0`.
    pub decay_chain_ok: bool,
    pub decay_first_failure: Option<usize>,
    /// First `n >= 1` with `n gamma_n^k <= 1`.
    pub n1: Option<usize>,
    /// `gamma_n <= n^(-1/k) + 1e-12` for every `n >= n1`; false if `n1` does not exist.
    pub rate_bound_ok: bool,
    pub rate_first_failure: Option<usize>,
    /// `sum_{i = n1}^{N} i^(-1/k)`.
    pub cauchy_tail_bound: Option<S>,
    /// Whether `n gamma_n^k` strictly decreases at every step after `n1`.
    pub alt_decreasing_after_n1: bool,
    /// Smallest index from which `n gamma_n^k` strictly decreases to the end.
    pub alt_decreasing_from: Option<usize>,
    /// `F(gamma_{n-1}) - F(gamma_n)` for `n >= 1`.
    pub per_step_margins: Vec<S>,
}

/// Checks a trace against the telescoped decay chain, the rate bound
/// `gamma_n <= n^(-1/k)` beyond `n1`, and sums the Cauchy tail bound.
pub fn validate_trace<S: Scalar>(
    trace: &IterationTrace<S>,
    f: &FFunction<S>,
    tau: S,
    k: S,
) -> Result<TraceVerdict<S>> {
    if !(tau > S::zero()) {
        return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
    }
    if !(k > S::zero() && k < S::one()) {
        return Err(Error::InvalidParameter(format!("k must lie in (0, 1), got {k}")));
    }
    let positive = trace.steps.iter().filter(|s| s.gamma > S::zero()).count();
    if positive < 2 || trace.steps.first().is_none_or(|s| s.gamma <= S::zero()) {
        return Err(Error::InsufficientTrace);
    }

    let f_values: Vec<Option<S>> = trace
        .steps
        .iter()
        .map(|s| (s.gamma > S::zero()).then(|| f.eval(s.gamma)).transpose())
        .collect::<Result<_>>()?;
    let f0 = f_values[0].expect("gamma_0 > 0");

    let mut decay_first_failure = None;
    for (n, fv) in f_values.iter().enumerate() {
        let Some(fv) = *fv else { continue };
        let bound = f0 - idx::<S>(n) * tau + S::lit(CHAIN_SLACK);
        if fv > bound {
            decay_first_failure = Some(n);
            break;
        }
    }

    let per_step_margins = f_values
        .windows(2)
        .map(|w| match (w[0], w[1]) {
            (Some(a), Some(b)) => a - b,
            _ => S::infinity(),
        })
        .collect();

    let alt: Vec<S> = trace
        .steps
        .iter()
        .map(|s| idx::<S>(s.n) * s.gamma.powf(k))
        .collect();
    let n1 = (1..alt.len()).find(|&n| alt[n] <= S::one());

    let inv_k = k.recip();
    let (rate_first_failure, cauchy_tail_bound, alt_decreasing_after_n1) = match n1 {
        Some(n1) => {
            let fail = (n1..trace.steps.len()).find(|&n| {
                trace.steps[n].gamma > idx::<S>(n).powf(-inv_k) + S::lit(VERDICT_SLACK)
            });
            let tail = (n1..trace.steps.len())
                .map(|i| idx::<S>(i).powf(-inv_k))
                .fold(S::zero(), |acc, v| acc + v);
            let decreasing = alt[n1..].windows(2).all(|w| w[1] < w[0]);
            (fail, Some(tail), decreasing)
        }
        None => (None, None, false),
    };
    let mut alt_decreasing_from = Some(alt.len() - 1);
    for n in (0..alt.len() - 1).rev() {
        if alt[n + 1] < alt[n] {
            alt_decreasing_from = Some(n);
        } else {
            break;
        }
    }

    Ok(TraceVerdict {
        tau,
        k,
        decay_chain_ok: decay_first_failure.is_none(),
        decay_first_failure,
        n1,
        rate_bound_ok: n1.is_some() && rate_first_failure.is_none(),
        rate_first_failure,
        cauchy_tail_bound,
        alt_decreasing_after_n1,
        alt_decreasing_from,
        per_step_margins,
    })
}

fn idx<S: Scalar>(n: usize) -> S {
    S::from_usize(n).expect("index fits scalar")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRow<S> {
    pub n: u64,
    pub h: S,
    /// `gamma_n = Phi(h_n)`.
    pub gamma: S,
    pub f_gamma: S,
    /// `n gamma_n^k`.
    pub n_gamma_k: S,
    /// `gamma_n^k F(gamma_n)`.
    pub gamma_k_f_gamma: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport<S> {
    pub k: S,
    pub rows: Vec<ProbeRow<S>>,
}

impl<S: Scalar> ProbeReport<S> {
    /// `F(gamma_n)` strictly decreasing over the probe.
    pub fn f_gamma_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].f_gamma < w[0].f_gamma)
    }

    /// `|gamma_n^k F(gamma_n)|` strictly decreasing over the probe.
    pub fn gamma_k_f_gamma_decreasing(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].gamma_k_f_gamma.abs() < w[0].gamma_k_f_gamma.abs())
    }

    /// A stationary or growing `F(gamma_n)` cannot witness `F(gamma_n) -> -inf`.
    pub fn flags_non_convergence(&self) -> bool {
        !self.f_gamma_decreasing()
    }
}

/// Tabulates `gamma_n = Phi(h_n)`, `F(gamma_n)`, `n gamma_n^k` and
/// `gamma_n^k F(gamma_n)` for the supplied `(n, h_n)` pairs.
pub fn gamma_sequence_probe<S, I>(
    h_values: I,
    phi: &Integrand<S>,
    f: &FFunction<S>,
    k: S,
) -> Result<ProbeReport<S>>
where
    S: Scalar,
    I: IntoIterator<Item = (u64, S)>,
{
    if !(k > S::zero() && k < S::one()) {
        return Err(Error::InvalidParameter(format!("k must lie in (0, 1), got {k}")));
    }
    let rows = h_values
        .into_iter()
        .map(|(n, h)| {
            if !(h > S::zero()) {
                return Err(Error::InvalidParameter(format!("h_{n} must be positive, got {h}")));
            }
            let gamma = phi.capital_phi(h)?;
            let f_gamma = f.eval(gamma)?;
            let gk = gamma.powf(k);
            Ok(ProbeRow {
                n,
                h,
                gamma,
                f_gamma,
                n_gamma_k: S::from_u64(n).expect("index fits scalar") * gk,
                gamma_k_f_gamma: gk * f_gamma,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProbeReport { k, rows })
}

/// [`gamma_sequence_probe`] with `n = 1, 2, ...` assigned in order.
pub fn gamma_sequence_probe_indexed<S: Scalar>(
    h_values: &[S],
    phi: &Integrand<S>,
    f: &FFunction<S>,
    k: S,
) -> Result<ProbeReport<S>> {
    gamma_sequence_probe(
        h_values.iter().enumerate().map(|(i, &h)| (i as u64 + 1, h)),
        phi,
        f,
        k,
    )
}
