//! Executable checks of the structural statements about `L_φ` on generated
//! operator sequences: Kadec-Klee for convergence in measure, modular/norm
//! co-convergence, continuity of `φ(μ_t)`, LLUM/ULUM, order continuity,
//! duality and the singular value inequality battery.
//!
//! Limits are discretized as tail criteria (see [`tail_converges`]).

mod checks;
mod counterexample;
mod fack_kosaki;
mod family;
mod kadec_klee;
mod suite;

pub use checks::{
    check_duality, check_modular_norm, duality_pairing, check_mu_continuity, check_monotonicity, check_order_continuity, holder_battery,
    llum_counterexample_control, DualityReport, HolderReport, ModularNormReport, MuProbe, MuContinuityReport,
    LlumControlReport, MonotonicityKind, MonotonicityReport, OrderContinuityReport,
};
pub use counterexample::{build_counterexample, AmplitudeRule, Certificate, CounterexampleInstance};
pub use fack_kosaki::{fack_kosaki_suite, random_pair_shape, trace_formula_violation, FackKosakiReport};
pub use family::{FamilyKind, GeneratedFamily, MonotoneDirection, Rate, SequenceFamily, SpectralMap};
pub use kadec_klee::{run_kadec_klee, ExperimentRecord, KadecKleeOutcome, RowFlag};
pub use suite::{run_suite, SuiteEntry, SuiteSummary};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::norm::NormError;
use crate::operator::OperatorError;
use crate::orlicz::OrliczError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Orlicz(#[from] OrliczError),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error("family generation failed: {0}")]
    FamilyGenerationFailure(String),
    #[error("amplitude rule violated at k = {k}: φ((1+1/k)u_k) = {lhs:e} ≤ 2^k·φ(u_k) = {rhs:e}")]
    AmplitudeRuleViolation { k: usize, lhs: f64, rhs: f64 },
    #[error("probe t = {t} lies within {gap:e} of the breakpoint {breakpoint}")]
    ProbeOnBreakpoint { t: f64, breakpoint: f64, gap: f64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// The family violates a hypothesis; nothing is claimed.
    NegativeControl,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::NegativeControl => "NEGATIVE_CONTROL",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Allowed growth between consecutive tail entries.
pub const TAIL_SLACK: f64 = 0.10;
/// Absolute floor below which tail entries count as numerically zero.
pub const NOISE_FLOOR: f64 = 1e-12;

/// Length of the tail examined for a sequence of `n` values: `⌈n/4⌉`.
pub fn tail_len(n: usize) -> usize {
    n.div_ceil(4)
}

/// Finite-sequence stand-in for `vₙ → 0`: the last `⌈N/4⌉` entries are `≤ tol`
/// and never grow by more than [`TAIL_SLACK`] from one entry to the next.
pub fn tail_converges(values: &[f64], tol: f64) -> bool {
    tail_converges_above(values, tol, NOISE_FLOOR)
}

/// [`tail_converges`] with a caller-chosen noise floor, for sequences whose
/// entries carry a known solver error.
pub fn tail_converges_above(values: &[f64], tol: f64, floor: f64) -> bool {
    if values.is_empty() {
        return true;
    }
    let tail = &values[values.len() - tail_len(values.len())..];
    tail.iter().all(|v| v.is_finite() && *v <= tol)
        && tail.windows(2).all(|w| w[1] <= (1.0 + TAIL_SLACK) * w[0] + floor)
}

/// Largest value over the tail.
pub fn tail_max(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values[values.len() - tail_len(values.len())..].iter().copied().fold(0.0, f64::max)
}
