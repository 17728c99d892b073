//! Wardowski-type functions `F: (0, inf) -> R` and finite-grid checks of the
//! axioms (F1)-(F4).
//!
//! (F2) and (F3) are limit statements. The checks here evaluate them on the
//! fixed probe grid `alpha_i = 10^(-2i)`, `i = 1..=8`, with explicit
//! thresholds, so a verdict is a reproducible witness and not a proof.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sets1d::CompactSet;

pub const DEFAULT_K: f64 = 0.5;
/// Number of probe points `10^(-2i)` used by [`FFunction::check_f2_f3`].
pub const PROBE_POINTS: i32 = 8;
/// (F2) requires `F(alpha_8)` below this value.
pub const F2_THRESHOLD: f64 = -20.0;
/// (F3) requires `|alpha_8^k F(alpha_8)|` below this value.
pub const F3_THRESHOLD: f64 = 1e-6;
/// Trailing probe points over which `|alpha^k F(alpha)|` must strictly decrease.
pub const F3_TAIL: usize = 4;
pub const F4_TOL: f64 = 1e-9;
const F4_SAMPLES_PER_INTERVAL: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FKind {
    /// `ln a`
    Log,
    /// `ln a + a`
    LogPlusLinear,
    /// `-1 / sqrt(a)`
    NegInvSqrt,
}

impl FKind {
    pub const ALL: [FKind; 3] = [FKind::Log, FKind::LogPlusLinear, FKind::NegInvSqrt];

    pub fn name(self) -> &'static str {
        match self {
            FKind::Log => "log",
            FKind::LogPlusLinear => "log_plus_linear",
            FKind::NegInvSqrt => "neg_inv_sqrt",
        }
    }
}

impl fmt::Display for FKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown F kind `{s}` (expected log, log_plus_linear or neg_inv_sqrt)"
                ))
            })
    }
}

/// A Wardowski function together with the exponent `k` claimed for (F3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FFunction<S> {
    kind: FKind,
    k: S,
}

impl<S: Scalar> FFunction<S> {
    pub fn new(kind: FKind, k: S) -> Result<Self> {
        check_k(k)?;
        Ok(Self { kind, k })
    }

    pub fn log() -> Self {
        Self {
            kind: FKind::Log,
            k: S::lit(DEFAULT_K),
        }
    }

    pub fn kind(&self) -> FKind {
        self.kind
    }

    pub fn k_witness(&self) -> S {
        self.k
    }

    pub fn id(&self) -> String {
        format!("{}(k={})", self.kind, self.k)
    }

    /// `F(alpha)`; only defined for `alpha > 0`.
    pub fn eval(&self, alpha: S) -> Result<S> {
        if !(alpha > S::zero()) {
            return Err(Error::Domain(format!("F is defined on (0, inf), got {alpha}")));
        }
        Ok(self.eval_unchecked(alpha))
    }

    fn eval_unchecked(&self, alpha: S) -> S {
        match self.kind {
            FKind::Log => alpha.ln(),
            FKind::LogPlusLinear => alpha.ln() + alpha,
            FKind::NegInvSqrt => -alpha.sqrt().recip(),
        }
    }

    pub fn check_f1(&self, grid: &[S]) -> Result<F1Verdict<S>> {
        check_f1_with(|a| self.eval(a), grid)
    }

    /// (F2) and (F3) on the probe grid for the exponent `k`.
    pub fn check_f2_f3(&self, k: S) -> Result<F2F3Verdict<S>> {
        check_k(k)?;
        let hundredth = S::lit(0.01);
        let mut alpha = S::one();
        let mut f_values = Vec::with_capacity(PROBE_POINTS as usize);
        let mut scaled = Vec::with_capacity(PROBE_POINTS as usize);
        for _ in 1..=PROBE_POINTS {
            alpha = alpha * hundredth;
            let f = self.eval(alpha)?;
            f_values.push(f);
            scaled.push((alpha.powf(k) * f).abs());
        }
        let last_f = *f_values.last().expect("nonempty probe grid");
        let last_scaled = *scaled.last().expect("nonempty probe grid");
        let f2 = strictly_decreasing(&f_values) && last_f < S::lit(F2_THRESHOLD);
        let tail = &scaled[scaled.len() - F3_TAIL..];
        let f3 = strictly_decreasing(tail) && last_scaled < S::lit(F3_THRESHOLD);
        Ok(F2F3Verdict {
            k,
            f2,
            f3,
            f_values,
            scaled_values: scaled,
        })
    }

    /// (F4): `F(inf A) = inf F(A)` on the breakpoints of `set` plus a sample
    /// of each of its intervals.
    pub fn check_f4(&self, set: &CompactSet<S>) -> Result<F4Verdict<S>> {
        if !(set.min() > S::zero()) {
            return Err(Error::Domain(format!(
                "(F4) needs a set of positive reals, got minimum {}",
                set.min()
            )));
        }
        let last = S::from_usize(F4_SAMPLES_PER_INTERVAL).expect("sample count fits scalar");
        let mut inf_f = S::infinity();
        for &(lo, hi) in set.intervals() {
            for i in 0..=F4_SAMPLES_PER_INTERVAL {
                let a = lo + (hi - lo) * S::from_usize(i).expect("index fits scalar") / last;
                inf_f = inf_f.min(self.eval(a)?);
            }
        }
        let f_at_inf = self.eval(set.min())?;
        let gap = (f_at_inf - inf_f).abs();
        Ok(F4Verdict {
            pass: gap <= S::lit(F4_TOL),
            f_at_inf,
            inf_f,
        })
    }
}

fn check_k<S: Scalar>(k: S) -> Result<()> {
    if k > S::zero() && k < S::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("k must lie in (0, 1), got {k}")))
    }
}

fn strictly_decreasing<S: Scalar>(xs: &[S]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

#[derive(Debug, Clone, PartialEq)]
pub struct F1Verdict<S> {
    pub pass: bool,
    /// First consecutive pair `(a, b)` with `F(a) >= F(b)`.
    pub first_violation: Option<(S, S)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct F2F3Verdict<S> {
    pub k: S,
    pub f2: bool,
    pub f3: bool,
    /// `F(alpha_i)` on the probe grid.
    pub f_values: Vec<S>,
    /// `|alpha_i^k F(alpha_i)|` on the probe grid.
    pub scaled_values: Vec<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct F4Verdict<S> {
    pub pass: bool,
    pub f_at_inf: S,
    pub inf_f: S,
}

/// (F1) for an arbitrary function on an ascending grid of positive reals.
pub fn check_f1_with<S, F>(f: F, grid: &[S]) -> Result<F1Verdict<S>>
where
    S: Scalar,
    F: Fn(S) -> Result<S>,
{
    if grid.len() < 2 {
        return Err(Error::InvalidParameter("(F1) grid needs at least two points".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter("(F1) grid must be strictly ascending".into()));
    }
    let mut prev = f(grid[0])?;
    for w in grid.windows(2) {
        let next = f(w[1])?;
        if !(prev < next) {
            return Ok(F1Verdict {
                pass: false,
                first_violation: Some((w[0], w[1])),
            });
        }
        prev = next;
    }
    Ok(F1Verdict {
        pass: true,
        first_violation: None,
    })
}

/// `10^e` for `e` in `lo..=hi` in steps of `1 / per_decade`.
pub fn log_grid<S: Scalar>(lo: i32, hi: i32, per_decade: u32) -> Vec<S> {
    let ten = S::lit(10.0);
    let per = per_decade.max(1) as i32;
    (lo * per..=hi * per)
        .map(|i| ten.powf(S::lit(f64::from(i) / f64::from(per))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(kind: FKind) -> FFunction<f64> {
        FFunction::new(kind, 0.5).unwrap()
    }

    #[test]
    fn evaluates() {
        assert_eq!(f(FKind::Log).eval(1.0).unwrap(), 0.0);
        assert!((f(FKind::Log).eval(0.25).unwrap() + 1.386_294_361_119_890_6).abs() < 1e-15);
        assert_eq!(f(FKind::NegInvSqrt).eval(4.0).unwrap(), -0.5);
        assert_eq!(f(FKind::LogPlusLinear).eval(1.0).unwrap(), 1.0);
        assert!(f(FKind::Log).eval(0.0).is_err());
        assert!(f(FKind::Log).eval(-1.0).is_err());
    }

    #[test]
    fn f1_on_decades() {
        let grid = log_grid::<f64>(-8, 8, 1);
        assert_eq!(grid.len(), 17);
        for kind in FKind::ALL {
            assert!(f(kind).check_f1(&grid).unwrap().pass, "{kind}");
        }
    }

    #[test]
    fn f1_negative_control() {
        let v = check_f1_with(|a: f64| Ok(a.sin()), &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(!v.pass);
        assert_eq!(v.first_violation, Some((2.0, 3.0)));
    }

    #[test]
    fn f1_rejects_bad_grids() {
        assert!(f(FKind::Log).check_f1(&[1.0]).is_err());
        assert!(f(FKind::Log).check_f1(&[2.0, 1.0]).is_err());
    }

    #[test]
    fn f2_f3_log() {
        for k in [0.5, 0.99] {
            let v = f(FKind::Log).check_f2_f3(k).unwrap();
            assert!(v.f2 && v.f3, "k = {k}");
        }
        assert!(f(FKind::Log).check_f2_f3(0.0).is_err());
        assert!(f(FKind::Log).check_f2_f3(1.0).is_err());
    }

    #[test]
    fn f2_f3_neg_inv_sqrt() {
        // alpha^k F(alpha) = -alpha^(k - 1/2)
        let g = f(FKind::NegInvSqrt);
        let half = g.check_f2_f3(0.5).unwrap();
        assert!(half.f2);
        assert!(!half.f3);
        assert!(half.scaled_values.iter().all(|&s| (s - 1.0).abs() < 1e-12));
        assert!(!g.check_f2_f3(0.25).unwrap().f3);
        assert!(g.check_f2_f3(0.9).unwrap().f3);
    }

    #[test]
    fn f4_cases() {
        let log = f(FKind::Log);
        let v = log.check_f4(&CompactSet::interval(2.0, 3.0).unwrap()).unwrap();
        assert!(v.pass);
        assert_eq!(v.f_at_inf, 2f64.ln());
        let v = log
            .check_f4(&CompactSet::new([(1.0, 1.0), (5.0, 6.0)]).unwrap())
            .unwrap();
        assert!(v.pass);
        assert_eq!(v.inf_f, 0.0);
        assert!(log.check_f4(&CompactSet::interval(0.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in FKind::ALL {
            assert_eq!(kind.name().parse::<FKind>().unwrap(), kind);
        }
        assert!("sin".parse::<FKind>().is_err());
    }
}
