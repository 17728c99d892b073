//! Compact-valued maps on the real line and numerical tooling for
//! integral-type `F`-contractions: exact Hausdorff machinery on finite unions
//! of closed intervals, integrands and their cumulative transforms,
//! Wardowski functions, contraction certification over sampled pairs, and the
//! nearest-point fixed-point iteration with validation of its decay bounds.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`). The
//! aliases at the crate root fix the scalar to `f64`; the `*32` aliases fix
//! it to `f32`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod expr;
pub mod integrand;
pub mod mvmap;
pub mod scalar;
pub mod sets1d;
pub mod solver;
pub mod wardowski;

pub use analysis::{CertifyOptions, Mode, PairVerdict};
pub use error::{Error, Result};
pub use expr::{Expr, ParseError};
pub use scalar::{Scalar, VERDICT_SLACK};
pub use solver::Outcome;
pub use wardowski::FKind;

pub type CompactSet = sets1d::CompactSet<f64>;
pub type Integrand = integrand::Integrand<f64>;
pub type FFunction = wardowski::FFunction<f64>;
pub type MultiMap = mvmap::MultiMap<f64>;
pub type PairEvaluation = analysis::PairEvaluation<f64>;
pub type CertificateReport = analysis::CertificateReport<f64>;
pub type IterationTrace = solver::IterationTrace<f64>;
pub type TraceVerdict = solver::TraceVerdict<f64>;
pub type ProbeReport = solver::ProbeReport<f64>;

pub type CompactSet32 = sets1d::CompactSet<f32>;
pub type Integrand32 = integrand::Integrand<f32>;
pub type FFunction32 = wardowski::FFunction<f32>;
pub type MultiMap32 = mvmap::MultiMap<f32>;
pub type CertificateReport32 = analysis::CertificateReport<f32>;
pub type IterationTrace32 = solver::IterationTrace<f32>;
