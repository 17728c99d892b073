//! Multivalued maps `T: X -> K(X)` on compact subsets of the real line.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::scalar::{Scalar, VERDICT_SLACK};
use crate::sets1d::CompactSet;

/// Domain points checked when a map is constructed.
pub const VALIDATION_GRID: usize = 10_001;

#[derive(Debug, Clone, PartialEq)]
pub enum MapKind<S> {
    /// `Tx = [lo(x), hi(x)]`
    IntervalEndpoints { lo: Expr, hi: Expr },
    /// `Tx = {f(x)}`
    Singleton(Expr),
    /// `Tx = {f_1(x), ..., f_m(x)}`
    FiniteSet(Vec<Expr>),
    /// Explicit values at isolated points; `x` must match a key exactly.
    Table(Vec<(S, CompactSet<S>)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiMap<S> {
    domain: CompactSet<S>,
    kind: MapKind<S>,
}

impl<S: Scalar> MultiMap<S> {
    /// Builds the map and grid-checks it: on [`VALIDATION_GRID`] points of the
    /// domain every value must evaluate, and interval endpoints must satisfy
    /// `lo(x) <= hi(x) + 1e-12`.
    pub fn new(domain: CompactSet<S>, kind: MapKind<S>) -> Result<Self> {
        if let MapKind::FiniteSet(fs) = &kind {
            if fs.is_empty() {
                return Err(Error::InvalidMap("finite_set needs at least one expression".into()));
            }
        }
        if let MapKind::Table(_) = &kind {
            return Err(Error::InvalidMap(
                "table maps take their domain from the keys; use MultiMap::table".into(),
            ));
        }
        let map = Self { domain, kind };
        for x in map.domain.grid(VALIDATION_GRID) {
            if let MapKind::IntervalEndpoints { lo, hi } = &map.kind {
                let (l, h) = (lo.eval(x)?, hi.eval(x)?);
                if l > h + S::lit(VERDICT_SLACK) {
                    return Err(Error::InvalidMap(format!(
                        "lower endpoint {lo} = {l} exceeds upper endpoint {hi} = {h} at x = {x}"
                    )));
                }
            }
            map.apply(x)?;
        }
        Ok(map)
    }

    pub fn interval_endpoints(domain: CompactSet<S>, lo: &str, hi: &str) -> Result<Self> {
        Self::new(
            domain,
            MapKind::IntervalEndpoints {
                lo: Expr::parse(lo, "x")?,
                hi: Expr::parse(hi, "x")?,
            },
        )
    }

    pub fn singleton(domain: CompactSet<S>, f: &str) -> Result<Self> {
        Self::new(domain, MapKind::Singleton(Expr::parse(f, "x")?))
    }

    pub fn finite_set(domain: CompactSet<S>, fs: &[&str]) -> Result<Self> {
        let exprs = fs
            .iter()
            .map(|s| Expr::parse(s, "x"))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(domain, MapKind::FiniteSet(exprs))
    }

    /// Table map; the domain is the set of keys.
    pub fn table(entries: Vec<(S, CompactSet<S>)>) -> Result<Self> {
        let domain = CompactSet::points(entries.iter().map(|(x, _)| *x))?;
        let mut keys: Vec<S> = entries.iter().map(|(x, _)| *x).collect();
        keys.sort_by(|a, b| a.partial_cmp(b).expect("finite keys"));
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidMap("duplicate table key".into()));
        }
        Ok(Self {
            domain,
            kind: MapKind::Table(entries),
        })
    }

    /// The paper's worked map `Tx = [x/4, (x+1)/2]` on `[0, 1]`.
    pub fn worked_example() -> Self {
        let domain = CompactSet::interval(S::zero(), S::one()).expect("valid unit interval");
        Self::interval_endpoints(domain, "x/4", "(x+1)/2").expect("valid example map")
    }

    pub fn domain(&self) -> &CompactSet<S> {
        &self.domain
    }

    pub fn kind(&self) -> &MapKind<S> {
        &self.kind
    }

    /// `Tx`.
    pub fn apply(&self, x: S) -> Result<CompactSet<S>> {
        if !self.domain.contains(x) {
            return Err(Error::Domain(format!("x = {x} lies outside the domain {}", self.domain)));
        }
        match &self.kind {
            MapKind::IntervalEndpoints { lo, hi } => {
                let (l, h) = (lo.eval(x)?, hi.eval(x)?);
                if l <= h {
                    CompactSet::interval(l, h)
                } else if l <= h + S::lit(VERDICT_SLACK) {
                    // inversion within slack: rounding noise, take the hull
                    CompactSet::interval(h, l)
                } else {
                    Err(Error::InvalidMap(format!(
                        "lower endpoint {l} exceeds upper endpoint {h} at x = {x}"
                    )))
                }
            }
            MapKind::Singleton(f) => CompactSet::singleton(f.eval(x)?),
            MapKind::FiniteSet(fs) => {
                CompactSet::points(fs.iter().map(|f| f.eval(x)).collect::<Result<Vec<_>>>()?)
            }
            MapKind::Table(entries) => entries
                .iter()
                .find(|(key, _)| *key == x)
                .map(|(_, set)| set.clone())
                .ok_or_else(|| Error::Domain(format!("no table entry for x = {x}"))),
        }
    }

    /// `D(x, Tx) <= tol`.
    pub fn is_fixed_point(&self, x: S, tol: S) -> Result<bool> {
        Ok(self.apply(x)?.dist_point(x) <= tol)
    }
}

pub fn apply_map<S: Scalar>(map: &MultiMap<S>, x: S) -> Result<CompactSet<S>> {
    map.apply(x)
}

pub fn is_fixed_point<S: Scalar>(map: &MultiMap<S>, x: S, tol: S) -> Result<bool> {
    map.is_fixed_point(x, tol)
}
