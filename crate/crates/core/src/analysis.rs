//! The generalized gap `M(x, y)`, pointwise checks of the three contraction
//! notions (Nadler, integral type with a constant, integral type with `F`),
//! and grid certification of the `F`-contraction inequality.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::integrand::Integrand;
use crate::mvmap::MultiMap;
use crate::scalar::{Scalar, VERDICT_SLACK};
use crate::sets1d::CompactSet;
use crate::wardowski::FFunction;

/// Which set distance plays the role of `H(Tx, Ty)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// The Hausdorff distance.
    #[default]
    Hausdorff,
    /// The one-sided excess of `Tx` over `Ty`.
    Excess,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Hausdorff => "hausdorff",
            Mode::Excess => "excess",
        }
    }

    pub fn set_distance<S: Scalar>(self, tx: &CompactSet<S>, ty: &CompactSet<S>) -> S {
        match self {
            Mode::Hausdorff => tx.hausdorff(ty),
            Mode::Excess => tx.excess(ty),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hausdorff" => Ok(Mode::Hausdorff),
            "excess" => Ok(Mode::Excess),
            _ => Err(Error::InvalidParameter(format!(
                "unknown mode `{s}` (expected hausdorff or excess)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairVerdict {
    Holds,
    Violated,
    /// `H(Tx, Ty) = 0`: the implication is vacuous.
    Vacuous,
}

/// Both sides of the integral `F`-contraction inequality at one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairEvaluation<S> {
    pub x: S,
    pub y: S,
    /// `H(Tx, Ty)` (or the excess, by mode).
    pub h: S,
    /// `M(x, y)`.
    pub m: S,
    pub phi_h: S,
    pub phi_m: S,
    /// `F(Phi(m)) - F(Phi(h))`; `None` when `h = 0`.
    pub margin: Option<S>,
}

impl<S: Scalar> PairEvaluation<S> {
    pub fn is_vacuous(&self) -> bool {
        self.margin.is_none()
    }
}

/// `M(x, y) = max{ d(x,y), D(x,Tx), D(y,Ty), (D(x,Ty) + D(y,Tx)) / 2 }`.
pub fn m_value<S: Scalar>(map: &MultiMap<S>, x: S, y: S) -> Result<S> {
    let (tx, ty) = (map.apply(x)?, map.apply(y)?);
    Ok(m_from_sets(x, y, &tx, &ty))
}

fn m_from_sets<S: Scalar>(x: S, y: S, tx: &CompactSet<S>, ty: &CompactSet<S>) -> S {
    let cross = (tx.dist_point(y) + ty.dist_point(x)) / S::lit(2.0);
    (x - y)
        .abs()
        .max(tx.dist_point(x))
        .max(ty.dist_point(y))
        .max(cross)
}

fn h_and_m<S: Scalar>(map: &MultiMap<S>, x: S, y: S, mode: Mode) -> Result<(S, S)> {
    let (tx, ty) = (map.apply(x)?, map.apply(y)?);
    Ok((mode.set_distance(&tx, &ty), m_from_sets(x, y, &tx, &ty)))
}

/// Evaluates `h`, `m`, `Phi(h)`, `Phi(m)` and the margin at `(x, y)`.
pub fn evaluate_pair<S: Scalar>(
    map: &MultiMap<S>,
    f: &FFunction<S>,
    phi: &Integrand<S>,
    x: S,
    y: S,
    mode: Mode,
) -> Result<PairEvaluation<S>> {
    let (h, m) = h_and_m(map, x, y, mode)?;
    let phi_h = phi.capital_phi(h)?;
    let phi_m = phi.capital_phi(m)?;
    let margin = if h > S::zero() {
        let f_h = f.eval(phi_h)?;
        let f_m = if phi_m > S::zero() {
            f.eval(phi_m)?
        } else {
            S::neg_infinity()
        };
        Some(f_m - f_h)
    } else {
        None
    };
    Ok(PairEvaluation {
        x,
        y,
        h,
        m,
        phi_h,
        phi_m,
        margin,
    })
}

/// `H(Tx,Ty) > 0  =>  tau + F(Phi(H)) <= F(Phi(M))`.
#[allow(clippy::too_many_arguments)]
pub fn check_pair_f_integral<S: Scalar>(
    map: &MultiMap<S>,
    f: &FFunction<S>,
    phi: &Integrand<S>,
    tau: S,
    x: S,
    y: S,
    mode: Mode,
) -> Result<PairVerdict> {
    if !(tau > S::zero()) {
        return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
    }
    let ev = evaluate_pair(map, f, phi, x, y, mode)?;
    Ok(match ev.margin {
        None => PairVerdict::Vacuous,
        Some(margin) if tau <= margin + S::lit(VERDICT_SLACK) => PairVerdict::Holds,
        Some(_) => PairVerdict::Violated,
    })
}

/// The same inequality for `F = ln`, rearranged as
/// `Phi(H) <= e^(-tau) Phi(M)`.
pub fn check_pair_log_form<S: Scalar>(
    map: &MultiMap<S>,
    phi: &Integrand<S>,
    tau: S,
    x: S,
    y: S,
    mode: Mode,
) -> Result<PairVerdict> {
    if !(tau > S::zero()) {
        return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
    }
    let (h, m) = h_and_m(map, x, y, mode)?;
    if h == S::zero() {
        return Ok(PairVerdict::Vacuous);
    }
    let lhs = phi.capital_phi(h)?;
    let rhs = (-tau).exp() * phi.capital_phi(m)?;
    Ok(if lhs <= rhs + S::lit(VERDICT_SLACK) {
        PairVerdict::Holds
    } else {
        PairVerdict::Violated
    })
}

/// `Phi(H(Tx,Ty)) <= alpha Phi(M(x,y))` with `0 <= alpha < 1`.
pub fn check_pair_ojha<S: Scalar>(
    map: &MultiMap<S>,
    phi: &Integrand<S>,
    alpha: S,
    x: S,
    y: S,
    mode: Mode,
) -> Result<PairVerdict> {
    if !(alpha >= S::zero() && alpha < S::one()) {
        return Err(Error::InvalidParameter(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    let (h, m) = h_and_m(map, x, y, mode)?;
    let lhs = phi.capital_phi(h)?;
    let rhs = alpha * phi.capital_phi(m)?;
    Ok(if lhs <= rhs + S::lit(VERDICT_SLACK) {
        PairVerdict::Holds
    } else {
        PairVerdict::Violated
    })
}

/// `H(Tx,Ty) <= lambda d(x,y)` with `0 <= lambda < 1`.
pub fn check_pair_nadler<S: Scalar>(
    map: &MultiMap<S>,
    lambda: S,
    x: S,
    y: S,
    mode: Mode,
) -> Result<PairVerdict> {
    if !(lambda >= S::zero() && lambda < S::one()) {
        return Err(Error::InvalidParameter(format!("lambda must lie in [0, 1), got {lambda}")));
    }
    let (tx, ty) = (map.apply(x)?, map.apply(y)?);
    let h = mode.set_distance(&tx, &ty);
    Ok(if h <= lambda * (x - y).abs() + S::lit(VERDICT_SLACK) {
        PairVerdict::Holds
    } else {
        PairVerdict::Violated
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairError<S> {
    pub x: S,
    pub y: S,
    pub error: Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Points of the domain grid; every unordered pair of distinct points is evaluated.
    pub grid_size: usize,
    /// Extra seeded random pairs.
    pub random_pairs: usize,
    pub seed: u64,
    pub mode: Mode,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            grid_size: 101,
            random_pairs: 1000,
            seed: 42,
            mode: Mode::Hausdorff,
        }
    }
}

/// Empirical certificate of the `F`-contraction inequality over a finite
/// sample of pairs. `tau_star` is an infimum over that sample, not a proof.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport<S> {
    pub mode: Mode,
    pub seed: u64,
    pub grid_pairs: usize,
    pub random_pairs: usize,
    /// Pairs evaluated without error, vacuous ones included.
    pub evaluated_pairs: usize,
    pub vacuous_pairs: usize,
    /// Minimum margin over non-vacuous pairs; `None` iff all pairs are vacuous.
    pub tau_star: Option<S>,
    pub worst_pair: Option<PairEvaluation<S>>,
    /// Pairs with margin `<= 0`, in canonical order.
    pub violations: Vec<PairEvaluation<S>>,
    pub errors: Vec<PairError<S>>,
}

impl<S: Scalar> CertificateReport<S> {
    pub fn is_certified(&self) -> bool {
        self.errors.is_empty() && matches!(self.tau_star, Some(t) if t > S::zero())
    }
}

/// Sweeps all unordered pairs of a domain grid plus seeded random pairs and
/// records the margin `F(Phi(M)) - F(Phi(H))` at each. Pairs are stored as
/// `x <= y` and sorted by `(x, y)`; in excess mode the excess of `Tx` over
/// `Ty` is used in that orientation.
pub fn certify<S: Scalar>(
    map: &MultiMap<S>,
    f: &FFunction<S>,
    phi: &Integrand<S>,
    opts: &CertifyOptions,
) -> Result<CertificateReport<S>> {
    if opts.grid_size < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid size must be at least 2, got {}",
            opts.grid_size
        )));
    }
    let grid = map.domain().grid(opts.grid_size);
    let mut pairs: Vec<(S, S)> = Vec::with_capacity(grid.len() * grid.len() / 2 + opts.random_pairs);
    for (i, &x) in grid.iter().enumerate() {
        for &y in &grid[i + 1..] {
            pairs.push((x, y));
        }
    }
    let grid_pairs = pairs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_pairs {
        let a = map.domain().point_at_fraction(S::lit(rng.gen::<f64>()));
        let b = map.domain().point_at_fraction(S::lit(rng.gen::<f64>()));
        pairs.push(if a <= b { (a, b) } else { (b, a) });
    }
    pairs.sort_by(|p, q| p.partial_cmp(q).expect("finite pair coordinates"));

    let results: Vec<Result<PairEvaluation<S>>> = pairs
        .par_iter()
        .map(|&(x, y)| evaluate_pair(map, f, phi, x, y, opts.mode))
        .collect();

    let mut report = CertificateReport {
        mode: opts.mode,
        seed: opts.seed,
        grid_pairs,
        random_pairs: opts.random_pairs,
        evaluated_pairs: 0,
        vacuous_pairs: 0,
        tau_star: None,
        worst_pair: None,
        violations: Vec::new(),
        errors: Vec::new(),
    };
    for (&(x, y), res) in pairs.iter().zip(results) {
        let ev = match res {
            Ok(ev) => ev,
            Err(error) => {
                report.errors.push(PairError { x, y, error });
                continue;
            }
        };
        report.evaluated_pairs += 1;
        let Some(margin) = ev.margin else {
            report.vacuous_pairs += 1;
            continue;
        };
        if report.tau_star.is_none_or(|t| margin < t) {
            report.tau_star = Some(margin);
            report.worst_pair = Some(ev.clone());
        }
        if margin <= S::zero() {
            report.violations.push(ev);
        }
    }
    Ok(report)
}
