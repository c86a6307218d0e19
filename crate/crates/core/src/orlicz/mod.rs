//! Orlicz functions: convex gauges `φ: [0, ∞) → [0, ∞]` with `φ(0) = 0`.
//!
//! Four families are supported:
//!
//! | kind          | φ(u)                    |
//! |---------------|-------------------------|
//! | `Power`       | `c·uᵖ`, `p ≥ 1`         |
//! | `ExpMinusOne` | `eᵘ − 1`                |
//! | `PowerLog`    | `uᵖ·ln(1 + u)`, `p ≥ 1` |
//! | `Tabulated`   | convex piecewise-linear |
//!
//! Runtime arithmetic is finite on `[0, domain_max]`; arguments beyond
//! `domain_max` evaluate to `f64::INFINITY`.

mod conjugate;
mod delta2;

pub use conjugate::{conjugate, conjugate_value, exact_conjugate, ConjugateGrid, TabulatedConjugate};
pub use delta2::{delta2_probe, Delta2Grid, Delta2Report, Delta2Verdict};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative slack allowed when validating convexity of tabulated knots.
const CONVEXITY_SLACK: f64 = 1e-9;
const INVERSE_MAX_DOUBLINGS: usize = 2100;
const BISECTION_MAX_ITERS: usize = 400;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrliczError {
    #[error("negative argument {0}")]
    NegativeArgument(f64),
    #[error("argument {u} outside the finite domain [0, {domain_max})")]
    OutOfDomain { u: f64, domain_max: f64 },
    #[error("value {y} exceeds the supremum of φ on its domain")]
    Unreachable { y: f64 },
    #[error("conjugate diverges at u = {u}: φ grows at most linearly with slope below u")]
    ConjugateDiverges { u: f64 },
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),
    #[error("invalid Orlicz function: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, OrliczError>;

/// Asserted Δ₂ metadata: `φ(2u) ≤ k·φ(u)` for all `u > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "k", rename_all = "snake_case")]
pub enum Delta2Hint {
    Holds(f64),
    Fails,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrliczKind {
    Power {
        p: f64,
        #[serde(default = "unit_scale")]
        scale: f64,
    },
    #[serde(alias = "expm1")]
    ExpMinusOne,
    PowerLog { p: f64 },
    Tabulated { knots: Vec<[f64; 2]> },
}

fn unit_scale() -> f64 {
    1.0
}

/// Serialized shape of an [`OrliczFunction`]; `domain_max` is omitted when infinite.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct OrliczRecord {
    #[serde(flatten)]
    kind: OrliczKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta2_hint: Option<Delta2Hint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OrliczRecord", into = "OrliczRecord")]
pub struct OrliczFunction {
    kind: OrliczKind,
    domain_max: f64,
    delta2_hint: Option<Delta2Hint>,
}

impl TryFrom<OrliczRecord> for OrliczFunction {
    type Error = OrliczError;

    fn try_from(rec: OrliczRecord) -> Result<Self> {
        let mut phi = OrliczFunction::new(rec.kind)?;
        if let Some(d) = rec.domain_max {
            phi = phi.with_domain_max(d)?;
        }
        if rec.delta2_hint.is_some() {
            phi.delta2_hint = rec.delta2_hint;
        }
        Ok(phi)
    }
}

impl From<OrliczFunction> for OrliczRecord {
    fn from(phi: OrliczFunction) -> Self {
        OrliczRecord {
            domain_max: phi.domain_max.is_finite().then_some(phi.domain_max),
            delta2_hint: phi.delta2_hint,
            kind: phi.kind,
        }
    }
}

impl OrliczFunction {
    /// Validates `kind` and attaches the Δ₂ hint known for the family.
    pub fn new(kind: OrliczKind) -> Result<Self> {
        let hint = match &kind {
            OrliczKind::Power { p, scale } => {
                if !(p.is_finite() && *p >= 1.0) {
                    return Err(OrliczError::Invalid(format!("power exponent {p} must be ≥ 1")));
                }
                if !(scale.is_finite() && *scale > 0.0) {
                    return Err(OrliczError::Invalid(format!("power scale {scale} must be > 0")));
                }
                Some(Delta2Hint::Holds(2f64.powf(*p)))
            }
            OrliczKind::ExpMinusOne => Some(Delta2Hint::Fails),
            OrliczKind::PowerLog { p } => {
                if !(p.is_finite() && *p >= 1.0) {
                    return Err(OrliczError::Invalid(format!("power-log exponent {p} must be ≥ 1")));
                }
                // sup of 2ᵖ·ln(1+2u)/ln(1+u) is its u → 0 limit
                Some(Delta2Hint::Holds(2f64.powf(*p + 1.0)))
            }
            OrliczKind::Tabulated { knots } => {
                validate_knots(knots)?;
                Some(Delta2Hint::Unknown)
            }
        };
        Ok(OrliczFunction { kind, domain_max: f64::INFINITY, delta2_hint: hint })
    }

    pub fn power(p: f64) -> Result<Self> {
        Self::new(OrliczKind::Power { p, scale: 1.0 })
    }

    pub fn scaled_power(p: f64, scale: f64) -> Result<Self> {
        Self::new(OrliczKind::Power { p, scale })
    }

    pub fn exp_minus_one() -> Self {
        OrliczFunction {
            kind: OrliczKind::ExpMinusOne,
            domain_max: f64::INFINITY,
            delta2_hint: Some(Delta2Hint::Fails),
        }
    }

    pub fn power_log(p: f64) -> Result<Self> {
        Self::new(OrliczKind::PowerLog { p })
    }

    pub fn tabulated(knots: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(OrliczKind::Tabulated { knots })
    }

    pub fn with_domain_max(mut self, domain_max: f64) -> Result<Self> {
        if !(domain_max > 0.0) || domain_max.is_nan() {
            return Err(OrliczError::Invalid(format!("domain_max {domain_max} must be > 0")));
        }
        self.domain_max = domain_max;
        Ok(self)
    }

    pub fn with_delta2_hint(mut self, hint: Delta2Hint) -> Self {
        self.delta2_hint = Some(hint);
        self
    }

    pub fn kind(&self) -> &OrliczKind {
        &self.kind
    }

    pub fn domain_max(&self) -> f64 {
        self.domain_max
    }

    pub fn delta2_hint(&self) -> Option<Delta2Hint> {
        self.delta2_hint
    }

    /// Short human-readable label, e.g. `power:2` or `expm1`.
    pub fn label(&self) -> String {
        match &self.kind {
            OrliczKind::Power { p, scale } if *scale == 1.0 => format!("power:{p}"),
            OrliczKind::Power { p, scale } => format!("power:{p}:{scale}"),
            OrliczKind::ExpMinusOne => "expm1".to_string(),
            OrliczKind::PowerLog { p } => format!("powerlog:{p}"),
            OrliczKind::Tabulated { knots } => format!("tabulated[{}]", knots.len()),
        }
    }

    /// `φ(u)`; `+∞` when `u > domain_max`.
    pub fn eval(&self, u: f64) -> Result<f64> {
        if u < 0.0 || u.is_nan() {
            return Err(OrliczError::NegativeArgument(u));
        }
        if u > self.domain_max {
            return Ok(f64::INFINITY);
        }
        Ok(self.eval_unchecked(u))
    }

    /// `φ(u)` for `u ≥ 0` already known to be valid. Saturates at `+∞`.
    pub(crate) fn eval_unchecked(&self, u: f64) -> f64 {
        if u > self.domain_max {
            return f64::INFINITY;
        }
        match &self.kind {
            OrliczKind::Power { p, scale } => {
                if *p == 1.0 {
                    scale * u
                } else if *p == 2.0 {
                    scale * u * u
                } else {
                    scale * u.powf(*p)
                }
            }
            OrliczKind::ExpMinusOne => u.exp_m1(),
            OrliczKind::PowerLog { p } => u.powf(*p) * u.ln_1p(),
            OrliczKind::Tabulated { knots } => tabulated_eval(knots, u),
        }
    }

    /// Right derivative `p(u) = φ′(u+)`.
    pub fn right_derivative(&self, u: f64) -> Result<f64> {
        if u < 0.0 || u.is_nan() {
            return Err(OrliczError::NegativeArgument(u));
        }
        if u >= self.domain_max {
            return Err(OrliczError::OutOfDomain { u, domain_max: self.domain_max });
        }
        Ok(self.derivative_unchecked(u))
    }

    pub(crate) fn derivative_unchecked(&self, u: f64) -> f64 {
        match &self.kind {
            OrliczKind::Power { p, scale } => {
                if *p == 1.0 {
                    *scale
                } else if u == 0.0 {
                    0.0
                } else {
                    scale * p * u.powf(p - 1.0)
                }
            }
            OrliczKind::ExpMinusOne => u.exp(),
            OrliczKind::PowerLog { p } => {
                if u == 0.0 {
                    0.0
                } else {
                    p * u.powf(p - 1.0) * u.ln_1p() + u.powf(*p) / (1.0 + u)
                }
            }
            OrliczKind::Tabulated { knots } => tabulated_slope_right(knots, u),
        }
    }

    /// Generalized inverse `φ⁻¹(y) = inf{u ≥ 0 : φ(u) ≥ y}`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if y < 0.0 || y.is_nan() {
            return Err(OrliczError::NegativeArgument(y));
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        if y == f64::INFINITY {
            return Err(OrliczError::Unreachable { y });
        }
        if self.domain_max.is_finite() && self.eval_unchecked(self.domain_max) < y {
            return Err(OrliczError::Unreachable { y });
        }
        let u = match &self.kind {
            OrliczKind::Power { p, scale } => (y / scale).powf(1.0 / p),
            OrliczKind::ExpMinusOne => y.ln_1p(),
            OrliczKind::PowerLog { .. } => self.inverse_by_bisection(y)?,
            OrliczKind::Tabulated { knots } => tabulated_inverse(knots, y)?,
        };
        Ok(u.min(self.domain_max))
    }

    fn inverse_by_bisection(&self, y: f64) -> Result<f64> {
        let mut lo = 0.0;
        let mut hi = 1.0_f64.min(self.domain_max);
        let mut doublings = 0;
        while self.eval_unchecked(hi) < y {
            lo = hi;
            hi = (hi * 2.0).min(self.domain_max);
            doublings += 1;
            if doublings > INVERSE_MAX_DOUBLINGS || !hi.is_finite() || lo == hi {
                return Err(OrliczError::Unreachable { y });
            }
        }
        // invariant: φ(lo) < y ≤ φ(hi)
        for _ in 0..BISECTION_MAX_ITERS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval_unchecked(mid) >= y {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// `φ(2u)/φ(u)`, with the conventions `0/0 = 1` and `x/0 = ∞` for `x > 0`.
    pub(crate) fn doubling_ratio(&self, u: f64) -> f64 {
        let num = self.eval_unchecked(2.0 * u);
        let den = self.eval_unchecked(u);
        if den == 0.0 {
            if num == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            num / den
        }
    }
}

/// Young gap `φ(u) + ψ(v) − uv`.
pub fn young_gap(phi: &OrliczFunction, psi: &OrliczFunction, u: f64, v: f64) -> Result<f64> {
    let a = phi.eval(u)?;
    let b = psi.eval(v)?;
    Ok(a + b - u * v)
}

fn validate_knots(knots: &[[f64; 2]]) -> Result<()> {
    if knots.len() < 2 {
        return Err(OrliczError::Invalid("tabulated φ needs at least two knots".into()));
    }
    if knots[0] != [0.0, 0.0] {
        return Err(OrliczError::Invalid(format!(
            "first knot must be (0, 0), got ({}, {})",
            knots[0][0], knots[0][1]
        )));
    }
    let mut prev_slope = 0.0_f64;
    for (i, w) in knots.windows(2).enumerate() {
        let [u0, f0] = w[0];
        let [u1, f1] = w[1];
        if !(u1.is_finite() && f1.is_finite()) {
            return Err(OrliczError::Invalid(format!("knot {} is not finite", i + 1)));
        }
        if u1 <= u0 {
            return Err(OrliczError::Invalid(format!("knot abscissae must increase at index {}", i + 1)));
        }
        let slope = (f1 - f0) / (u1 - u0);
        if slope < -CONVEXITY_SLACK * f1.abs().max(1.0) {
            return Err(OrliczError::Invalid(format!("φ decreases on segment {i}")));
        }
        if slope < prev_slope - CONVEXITY_SLACK * prev_slope.abs().max(1.0) {
            return Err(OrliczError::Invalid(format!(
                "knots are not convex at index {}: slope {slope} after {prev_slope}",
                i
            )));
        }
        prev_slope = prev_slope.max(slope);
    }
    if prev_slope <= 0.0 {
        return Err(OrliczError::Invalid("tabulated φ must grow without bound".into()));
    }
    Ok(())
}

fn segment_slope(knots: &[[f64; 2]], i: usize) -> f64 {
    let [u0, f0] = knots[i];
    let [u1, f1] = knots[i + 1];
    ((f1 - f0) / (u1 - u0)).max(0.0)
}

/// Index `i` of the segment `[uᵢ, uᵢ₊₁)` containing `u` (clamped to the last segment).
fn segment_index(knots: &[[f64; 2]], u: f64) -> usize {
    let pos = knots.partition_point(|k| k[0] <= u);
    pos.saturating_sub(1).min(knots.len() - 2)
}

fn tabulated_eval(knots: &[[f64; 2]], u: f64) -> f64 {
    let i = segment_index(knots, u);
    let [u0, f0] = knots[i];
    f0 + segment_slope(knots, i) * (u - u0)
}

fn tabulated_slope_right(knots: &[[f64; 2]], u: f64) -> f64 {
    segment_slope(knots, segment_index(knots, u))
}

fn tabulated_inverse(knots: &[[f64; 2]], y: f64) -> Result<f64> {
    let pos = knots.partition_point(|k| k[1] < y);
    let i = if pos >= knots.len() {
        knots.len() - 2
    } else {
        pos.saturating_sub(1)
    };
    let slope = segment_slope(knots, i);
    let [u0, f0] = knots[i];
    if slope == 0.0 {
        return Err(OrliczError::Unreachable { y });
    }
    Ok(u0 + ((y - f0) / slope).max(0.0))
}
