//! JSON problem configuration.
//!
//! ```json
//! {
//!   "domain": [[0, 1]],
//!   "map": { "kind": "interval_endpoints", "lo": "x/4", "hi": "(x+1)/2" },
//!   "f": { "kind": "log", "k": 0.5 },
//!   "integrand": { "kind": "constant", "c": 1 },
//!   "tau": 1.0,
//!   "x0": 0.5
//! }
//! ```
//!
//! Omitted keys take the defaults below; unknown keys are rejected.

use std::path::Path;

use mvfix::analysis::Mode;
use mvfix::integrand::DEFAULT_U_MAX;
use mvfix::mvmap::MapKind;
use mvfix::wardowski::DEFAULT_K;
use mvfix::{CompactSet, Expr, FFunction, FKind, Integrand, MultiMap};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ModeSpec {
    #[default]
    Hausdorff,
    Excess,
}

impl From<ModeSpec> for Mode {
    fn from(m: ModeSpec) -> Self {
        match m {
            ModeSpec::Hausdorff => Mode::Hausdorff,
            ModeSpec::Excess => Mode::Excess,
        }
    }
}

impl From<Mode> for ModeSpec {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Hausdorff => ModeSpec::Hausdorff,
            Mode::Excess => ModeSpec::Excess,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    IntervalEndpoints { lo: String, hi: String },
    Singleton { f: String },
    FiniteSet { points: Vec<String> },
    Table { entries: Vec<TableEntry> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub x: f64,
    pub set: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FKindSpec {
    #[default]
    Log,
    LogPlusLinear,
    NegInvSqrt,
}

impl From<FKindSpec> for FKind {
    fn from(k: FKindSpec) -> Self {
        match k {
            FKindSpec::Log => FKind::Log,
            FKindSpec::LogPlusLinear => FKind::LogPlusLinear,
            FKindSpec::NegInvSqrt => FKind::NegInvSqrt,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FSpec {
    #[serde(default)]
    pub kind: FKindSpec,
    #[serde(default = "default_k")]
    pub k: f64,
}

impl Default for FSpec {
    fn default() -> Self {
        Self {
            kind: FKindSpec::Log,
            k: DEFAULT_K,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IntegrandSpec {
    Constant {
        c: f64,
    },
    Power {
        p: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    Exponential {
        rate: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    Expression {
        expr: String,
        #[serde(default = "default_u_max")]
        u_max: f64,
    },
}

impl Default for IntegrandSpec {
    fn default() -> Self {
        IntegrandSpec::Constant { c: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub domain: Vec<[f64; 2]>,
    pub map: MapSpec,
    #[serde(default)]
    pub f: FSpec,
    #[serde(default)]
    pub integrand: IntegrandSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default = "default_grid_size")]
    pub grid_size: usize,
    #[serde(default = "default_random_pairs")]
    pub random_pairs: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub mode: ModeSpec,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
}

fn default_k() -> f64 {
    DEFAULT_K
}
fn one() -> f64 {
    1.0
}
fn default_u_max() -> f64 {
    DEFAULT_U_MAX
}
fn default_grid_size() -> usize {
    101
}
fn default_random_pairs() -> usize {
    1000
}
fn default_seed() -> u64 {
    42
}
fn default_tol() -> f64 {
    mvfix::solver::DEFAULT_TOL
}
fn default_max_iter() -> usize {
    mvfix::solver::DEFAULT_MAX_ITER
}

/// The runtime objects a config describes.
#[derive(Debug, Clone)]
pub struct Problem {
    pub map: MultiMap,
    pub f: FFunction,
    pub integrand: Integrand,
}

fn schema(key: &str, msg: impl Into<String>) -> CliError {
    CliError::Schema {
        key: key.to_string(),
        message: msg.into(),
    }
}

fn parse_x(key: &str, src: &str) -> Result<Expr, CliError> {
    Expr::parse(src, "x").map_err(|e| CliError::Expression {
        key: key.to_string(),
        source: e,
    })
}

fn intervals(key: &str, raw: &[[f64; 2]]) -> Result<CompactSet, CliError> {
    CompactSet::new(raw.iter().map(|&[lo, hi]| (lo, hi))).map_err(|e| schema(key, e.to_string()))
}

impl ProblemConfig {
    /// Parses a config from JSON text and validates it, including building
    /// the map, `F` and the integrand.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: ProblemConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(tau) = self.tau {
            if !(tau > 0.0) || !tau.is_finite() {
                return Err(schema("tau", "tau must be positive"));
            }
        }
        if self.grid_size < 2 {
            return Err(schema("grid_size", "grid_size must be at least 2"));
        }
        if !(self.tol >= 0.0) || !self.tol.is_finite() {
            return Err(schema("tol", "tol must be nonnegative"));
        }
        if self.max_iter == 0 {
            return Err(schema("max_iter", "max_iter must be at least 1"));
        }
        if !(self.f.k > 0.0 && self.f.k < 1.0) {
            return Err(schema("f.k", "k must lie in (0, 1)"));
        }
        if let Some(x0) = self.x0 {
            if !x0.is_finite() {
                return Err(schema("x0", "x0 must be finite"));
            }
        }
        self.problem().map(|_| ())
    }

    pub fn problem(&self) -> Result<Problem, CliError> {
        let domain = intervals("domain", &self.domain)?;
        let map = match &self.map {
            MapSpec::IntervalEndpoints { lo, hi } => MultiMap::new(
                domain,
                MapKind::IntervalEndpoints {
                    lo: parse_x("map.lo", lo)?,
                    hi: parse_x("map.hi", hi)?,
                },
            ),
            MapSpec::Singleton { f } => MultiMap::new(domain, MapKind::Singleton(parse_x("map.f", f)?)),
            MapSpec::FiniteSet { points } => {
                let exprs = points
                    .iter()
                    .enumerate()
                    .map(|(i, p)| parse_x(&format!("map.points[{i}]"), p))
                    .collect::<Result<Vec<_>, _>>()?;
                MultiMap::new(domain, MapKind::FiniteSet(exprs))
            }
            MapSpec::Table { entries } => {
                let mut table = Vec::with_capacity(entries.len());
                for (i, e) in entries.iter().enumerate() {
                    if !domain.contains(e.x) {
                        return Err(schema(
                            &format!("map.entries[{i}].x"),
                            format!("table key {} lies outside the domain", e.x),
                        ));
                    }
                    table.push((e.x, intervals(&format!("map.entries[{i}].set"), &e.set)?));
                }
                MultiMap::table(table)
            }
        }
        .map_err(|e| CliError::Construction(e.to_string()))?;

        let f = FFunction::new(self.f.kind.into(), self.f.k).map_err(|e| schema("f", e.to_string()))?;
        let integrand = match &self.integrand {
            IntegrandSpec::Constant { c } => Integrand::constant(*c),
            IntegrandSpec::Power { p, scale } => Integrand::power(*p, *scale),
            IntegrandSpec::Exponential { rate, scale } => Integrand::exponential(*rate, *scale),
            IntegrandSpec::Expression { expr, u_max } => {
                let e = Expr::parse(expr, "t").map_err(|e| CliError::Expression {
                    key: "integrand.expr".into(),
                    source: e,
                })?;
                Integrand::expression(e, *u_max)
            }
        }
        .map_err(|e| schema("integrand", e.to_string()))?;
        Ok(Problem { map, f, integrand })
    }
}

pub fn load_config(path: &Path) -> Result<ProblemConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    ProblemConfig::from_json(&text)
}
