//! Compact subsets of the real line.
//!
//! A [`CompactSet`] is a finite union of pairwise disjoint closed intervals
//! `[lo, hi]` (singletons allowed as `lo == hi`). Distances on such sets are
//! piecewise linear, so the point-set distance, the one-sided excess and the
//! Hausdorff distance are all computed exactly by enumerating breakpoints.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Nonempty finite union of disjoint closed intervals, sorted ascending with
/// strictly positive gaps between consecutive intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactSet<S> {
    intervals: Vec<(S, S)>,
}

impl<S: Scalar> CompactSet<S> {
    /// Builds a set from arbitrary intervals: sorts them and merges
    /// overlapping or touching pieces.
    pub fn new<I>(intervals: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S)>,
    {
        let mut raw: Vec<(S, S)> = intervals.into_iter().collect();
        if raw.is_empty() {
            return Err(Error::InvalidSet("a compact set needs at least one interval".into()));
        }
        for &(lo, hi) in &raw {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidSet(format!(
                    "non-finite endpoint in [{lo}, {hi}]"
                )));
            }
            if lo > hi {
                return Err(Error::InvalidSet(format!("inverted interval [{lo}, {hi}]")));
            }
        }
        raw.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite endpoints"));

        let mut merged: Vec<(S, S)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        Ok(Self { intervals: merged })
    }

    pub fn interval(lo: S, hi: S) -> Result<Self> {
        Self::new([(lo, hi)])
    }

    pub fn singleton(x: S) -> Result<Self> {
        Self::new([(x, x)])
    }

    /// Finite set of points.
    pub fn points<I: IntoIterator<Item = S>>(points: I) -> Result<Self> {
        Self::new(points.into_iter().map(|p| (p, p)))
    }

    pub fn intervals(&self) -> &[(S, S)] {
        &self.intervals
    }

    pub fn min(&self) -> S {
        self.intervals[0].0
    }

    pub fn max(&self) -> S {
        self.intervals[self.intervals.len() - 1].1
    }

    /// Lebesgue measure.
    pub fn measure(&self) -> S {
        self.intervals
            .iter()
            .fold(S::zero(), |acc, &(lo, hi)| acc + (hi - lo))
    }

    pub fn contains(&self, x: S) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= x && x <= hi)
    }

    /// `D(x, B)`: distance from `x` to the nearest point of the set.
    pub fn dist_point(&self, x: S) -> S {
        self.intervals
            .iter()
            .map(|&(lo, hi)| gap_to_interval(x, lo, hi))
            .fold(S::infinity(), S::min)
    }

    /// A point of the set closest to `x`; ties go to the smaller coordinate.
    pub fn nearest_point(&self, x: S) -> S {
        let mut best = clamp(x, self.intervals[0]);
        let mut best_d = (x - best).abs();
        for &iv in &self.intervals[1..] {
            let b = clamp(x, iv);
            let d = (x - b).abs();
            if d < best_d {
                best = b;
                best_d = d;
            }
        }
        best
    }

    /// One-sided excess `sup_{a in self} D(a, other)`.
    ///
    /// `D(., other)` is piecewise linear with slopes of magnitude one, so on
    /// each interval of `self` the supremum sits at an endpoint or at the
    /// midpoint of a gap of `other` lying inside that interval.
    pub fn excess(&self, other: &Self) -> S {
        let two = S::lit(2.0);
        let mut sup = S::zero();
        for &(lo, hi) in &self.intervals {
            sup = sup.max(other.dist_point(lo)).max(other.dist_point(hi));
        }
        for w in other.intervals.windows(2) {
            let mid = (w[0].1 + w[1].0) / two;
            if self.contains(mid) {
                sup = sup.max(other.dist_point(mid));
            }
        }
        sup
    }

    /// Hausdorff distance induced by `d(x, y) = |x - y|`.
    pub fn hausdorff(&self, other: &Self) -> S {
        self.excess(other).max(other.excess(self))
    }

    /// Up to `n` points spread evenly by arc length over the set, together
    /// with every interval endpoint. Sorted and deduplicated.
    pub fn grid(&self, n: usize) -> Vec<S> {
        let mut pts: Vec<S> = Vec::with_capacity(n + 2 * self.intervals.len());
        for &(lo, hi) in &self.intervals {
            pts.push(lo);
            pts.push(hi);
        }
        let total = self.measure();
        if n >= 2 && total > S::zero() {
            let denom = S::from_usize(n - 1).expect("grid size fits scalar");
            for j in 0..n {
                let s = total * S::from_usize(j).expect("grid index fits scalar") / denom;
                pts.push(self.point_at_length(s));
            }
        }
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite grid points"));
        pts.dedup();
        pts
    }

    /// Maps `u` in `[0, 1]` onto the set proportionally to arc length. Sets of
    /// measure zero are indexed by point instead.
    pub fn point_at_fraction(&self, u: S) -> S {
        let u = u.max(S::zero()).min(S::one());
        let total = self.measure();
        if total > S::zero() {
            return self.point_at_length(u * total);
        }
        let count = self.intervals.len();
        let idx = (u * S::from_usize(count).expect("count fits scalar"))
            .floor()
            .to_usize()
            .unwrap_or(0)
            .min(count - 1);
        self.intervals[idx].0
    }

    fn point_at_length(&self, s: S) -> S {
        let mut acc = S::zero();
        for &(lo, hi) in &self.intervals {
            let len = hi - lo;
            if len > S::zero() && s <= acc + len {
                return (lo + (s - acc)).min(hi);
            }
            acc = acc + len;
        }
        self.max()
    }
}

fn gap_to_interval<S: Scalar>(x: S, lo: S, hi: S) -> S {
    if x < lo {
        lo - x
    } else if x > hi {
        x - hi
    } else {
        S::zero()
    }
}

fn clamp<S: Scalar>(x: S, (lo, hi): (S, S)) -> S {
    if x < lo {
        lo
    } else if x > hi {
        hi
    } else {
        x
    }
}

/// `D(x, B)`.
pub fn dist_point_set<S: Scalar>(x: S, set: &CompactSet<S>) -> S {
    set.dist_point(x)
}

pub fn nearest_point<S: Scalar>(x: S, set: &CompactSet<S>) -> S {
    set.nearest_point(x)
}

pub fn excess<S: Scalar>(a: &CompactSet<S>, b: &CompactSet<S>) -> S {
    a.excess(b)
}

pub fn hausdorff<S: Scalar>(a: &CompactSet<S>, b: &CompactSet<S>) -> S {
    a.hausdorff(b)
}

impl<S: Scalar> fmt::Display for CompactSet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(lo, hi)) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(" U ")?;
            }
            if lo == hi {
                write!(f, "{{{lo}}}")?;
            } else {
                write!(f, "[{lo}, {hi}]")?;
            }
        }
        Ok(())
    }
}
