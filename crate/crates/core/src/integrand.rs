//! Integrands `phi` and their cumulative transform `Phi(u) = int_0^u phi(t) dt`.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::scalar::Scalar;

/// Absolute tolerance of the adaptive Simpson fallback.
pub const QUAD_TOL: f64 = 1e-10;
/// Recursion limit of the adaptive Simpson fallback.
pub const QUAD_MAX_DEPTH: u32 = 40;
/// Points in the positivity grid checked when an expression integrand is built.
pub const POSITIVITY_GRID: usize = 10_001;
pub const DEFAULT_U_MAX: f64 = 100.0;

#[derive(Debug, Clone, PartialEq)]
pub enum IntegrandKind<S> {
    /// `phi(t) = c`
    Constant { c: S },
    /// `phi(t) = scale * t^p`, `p > -1`
    Power { p: S, scale: S },
    /// `phi(t) = scale * exp(rate * t)`
    Exponential { rate: S, scale: S },
    /// `phi(t)` given by an expression in `t`
    Expression { expr: Expr, u_max: S },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Integrand<S> {
    kind: IntegrandKind<S>,
}

impl<S: Scalar> Integrand<S> {
    pub fn constant(c: S) -> Result<Self> {
        if !(c > S::zero()) || !c.is_finite() {
            return Err(Error::InvalidIntegrand(format!("constant must be positive, got {c}")));
        }
        Ok(Self {
            kind: IntegrandKind::Constant { c },
        })
    }

    /// `phi = 1`.
    pub fn unit() -> Self {
        Self {
            kind: IntegrandKind::Constant { c: S::one() },
        }
    }

    pub fn power(p: S, scale: S) -> Result<Self> {
        if !(p > -S::one()) || !p.is_finite() {
            return Err(Error::InvalidIntegrand(format!("power exponent must exceed -1, got {p}")));
        }
        if !(scale > S::zero()) || !scale.is_finite() {
            return Err(Error::InvalidIntegrand(format!("scale must be positive, got {scale}")));
        }
        Ok(Self {
            kind: IntegrandKind::Power { p, scale },
        })
    }

    pub fn exponential(rate: S, scale: S) -> Result<Self> {
        if !rate.is_finite() {
            return Err(Error::InvalidIntegrand(format!("rate must be finite, got {rate}")));
        }
        if !(scale > S::zero()) || !scale.is_finite() {
            return Err(Error::InvalidIntegrand(format!("scale must be positive, got {scale}")));
        }
        Ok(Self {
            kind: IntegrandKind::Exponential { rate, scale },
        })
    }

    /// Expression integrand in the variable `t`. Rejected unless it evaluates
    /// to a finite value on a [`POSITIVITY_GRID`]-point grid over `[0, u_max]`,
    /// nonnegative everywhere on it and strictly positive at every grid point
    /// other than `t = 0`.
    pub fn expression(expr: Expr, u_max: S) -> Result<Self> {
        if !(u_max > S::zero()) || !u_max.is_finite() {
            return Err(Error::InvalidIntegrand(format!("u_max must be positive, got {u_max}")));
        }
        let last = S::from_usize(POSITIVITY_GRID - 1).expect("grid size fits scalar");
        for i in 0..POSITIVITY_GRID {
            let t = u_max * S::from_usize(i).expect("grid index fits scalar") / last;
            let v = expr.eval(t)?;
            if v < S::zero() || (i > 0 && v == S::zero()) {
                return Err(Error::InvalidIntegrand(format!(
                    "phi({t}) = {v}; phi must be strictly positive on (0, {u_max}]"
                )));
            }
        }
        Ok(Self {
            kind: IntegrandKind::Expression { expr, u_max },
        })
    }

    pub fn parse_expression(src: &str, u_max: S) -> Result<Self> {
        Self::expression(Expr::parse(src, "t")?, u_max)
    }

    pub fn kind(&self) -> &IntegrandKind<S> {
        &self.kind
    }

    /// Short identifier used in trace parameters and reports.
    pub fn id(&self) -> String {
        match &self.kind {
            IntegrandKind::Constant { c } => format!("constant(c={c})"),
            IntegrandKind::Power { p, scale } => format!("power(p={p}, scale={scale})"),
            IntegrandKind::Exponential { rate, scale } => {
                format!("exponential(rate={rate}, scale={scale})")
            }
            IntegrandKind::Expression { expr, .. } => format!("expression({expr})"),
        }
    }

    /// `phi(t)`.
    pub fn phi(&self, t: S) -> Result<S> {
        if !(t >= S::zero()) {
            return Err(Error::Domain(format!("phi is defined on [0, inf), got t = {t}")));
        }
        let v = match &self.kind {
            IntegrandKind::Constant { c } => *c,
            IntegrandKind::Power { p, scale } => {
                if t == S::zero() && *p < S::zero() {
                    return Err(Error::Domain(format!("phi(t) = t^{p} is singular at t = 0")));
                }
                *scale * t.powf(*p)
            }
            IntegrandKind::Exponential { rate, scale } => *scale * (*rate * t).exp(),
            IntegrandKind::Expression { expr, .. } => {
                let v = expr.eval(t)?;
                if v < S::zero() {
                    return Err(Error::Eval {
                        subexpr: expr.to_string(),
                        reason: format!("negative value {v} at t = {t}"),
                    });
                }
                v
            }
        };
        Ok(v)
    }

    /// `Phi(u) = int_0^u phi(t) dt`: closed form for the built-in kinds,
    /// adaptive Simpson for expressions.
    pub fn capital_phi(&self, u: S) -> Result<S> {
        if !(u >= S::zero()) {
            return Err(Error::Domain(format!("Phi is defined on [0, inf), got u = {u}")));
        }
        if u == S::zero() {
            return Ok(S::zero());
        }
        match &self.kind {
            IntegrandKind::Constant { c } => Ok(*c * u),
            IntegrandKind::Power { p, scale } => {
                let q = *p + S::one();
                Ok(*scale * u.powf(q) / q)
            }
            IntegrandKind::Exponential { rate, scale } => {
                if *rate == S::zero() {
                    Ok(*scale * u)
                } else {
                    Ok(*scale * (*rate * u).exp_m1() / *rate)
                }
            }
            IntegrandKind::Expression { .. } => self.integrate(S::zero(), u),
        }
    }

    /// `int_a^b phi(t) dt` by adaptive Simpson, whatever the kind. Used as the
    /// fallback for expressions and as an independent check on closed forms.
    pub fn integrate(&self, a: S, b: S) -> Result<S> {
        adaptive_simpson(|t| self.phi(t), a, b, S::lit(QUAD_TOL), QUAD_MAX_DEPTH)
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` with absolute tolerance
/// `tol`. Fails once `max_depth` bisections do not meet the local tolerance.
pub fn adaptive_simpson<S, F>(f: F, a: S, b: S, tol: S, max_depth: u32) -> Result<S>
where
    S: Scalar,
    F: Fn(S) -> Result<S>,
{
    if a == b {
        return Ok(S::zero());
    }
    if b < a {
        return adaptive_simpson(f, b, a, tol, max_depth).map(|v| -v);
    }
    let two = S::lit(2.0);
    let m = (a + b) / two;
    let (fa, fm, fb) = (f(a)?, f(m)?, f(b)?);
    let whole = simpson(a, b, fa, fm, fb);
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, max_depth)
}

fn simpson<S: Scalar>(a: S, b: S, fa: S, fm: S, fb: S) -> S {
    (b - a) / S::lit(6.0) * (fa + S::lit(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<S, F>(f: &F, a: S, b: S, fa: S, fm: S, fb: S, whole: S, tol: S, depth: u32) -> Result<S>
where
    S: Scalar,
    F: Fn(S) -> Result<S>,
{
    let two = S::lit(2.0);
    let m = (a + b) / two;
    let lm = (a + m) / two;
    let rm = (m + b) / two;
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= S::lit(15.0) * tol {
        return Ok(left + right + delta / S::lit(15.0));
    }
    if depth == 0 {
        return Err(Error::Quadrature {
            lo: a.as_f64(),
            hi: b.as_f64(),
        });
    }
    let half = tol / two;
    Ok(simpson_step(f, a, m, fa, flm, fm, left, half, depth - 1)?
        + simpson_step(f, m, b, fm, frm, fb, right, half, depth - 1)?)
}
