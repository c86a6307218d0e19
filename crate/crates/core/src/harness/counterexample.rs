//! The non-Δ₂ construction: mutually orthogonal atoms `e_k` with
//! `φ(u_k)·τ(e_k) = 2⁻ᵏ`, `x = Σ u_k e_k` and `xₙ = x − uₙeₙ`.
//!
//! `xₙ → x` in measure while `‖x − xₙ‖` stays above `n/(n+1)`.

use serde::{Deserialize, Serialize};

use super::{HarnessError, Result};
use crate::norm::{luxemburg_norm, DEFAULT_TOL};
use crate::operator::{measure_gauge, BlockOperator};
use crate::orlicz::{delta2_probe, Delta2Grid, Delta2Verdict, OrliczFunction};

const DELTA2_THRESHOLD: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum AmplitudeRule {
    /// `u_k = k²`
    Squares,
    Explicit { values: Vec<f64> },
}

impl AmplitudeRule {
    fn amplitude(&self, k: usize) -> Result<f64> {
        match self {
            AmplitudeRule::Squares => Ok((k * k) as f64),
            AmplitudeRule::Explicit { values } => values
                .get(k - 1)
                .copied()
                .filter(|u| *u > 0.0 && u.is_finite())
                .ok_or_else(|| HarnessError::Precondition(format!("no positive amplitude for k = {k}"))),
        }
    }
}

/// Numerical evidence for one index `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: usize,
    pub amplitude: f64,
    pub trace: f64,
    /// `φ((1+1/n)uₙ)`
    pub construction_lhs: f64,
    /// `2ⁿ·φ(uₙ)`
    pub construction_rhs: f64,
    /// `τ(e_{(1,∞)}(|xₙ − x|))`
    pub gauge_eps1: f64,
    /// `2⁻ⁿ`
    pub gauge_bound: f64,
    /// `‖x − xₙ‖` by bisection.
    pub diff_norm: f64,
    /// `uₙ/φ⁻¹(1/tₙ)`
    pub diff_norm_closed_form: f64,
    /// `n/(n+1)`
    pub diff_lower_bound: f64,
    /// `2n/(n+1)`, the bound for `‖2uₙeₙ‖`; reported only, since `x − xₙ = uₙeₙ`.
    pub doubled_bound: f64,
    pub norm_term: f64,
    /// `|‖xₙ‖ − ‖x‖|`
    pub norm_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleInstance {
    pub k: usize,
    pub amplitudes: Vec<f64>,
    pub traces: Vec<f64>,
    pub norm_x: f64,
    /// Largest relative defect of `φ(u_k)·t_k = 2⁻ᵏ`.
    pub modular_defect: f64,
    pub certificates: Vec<Certificate>,
    #[serde(skip)]
    pub x: BlockOperator,
    #[serde(skip)]
    pub sequence: Vec<BlockOperator>,
}

pub fn build_counterexample(phi: &OrliczFunction, k: usize, rule: &AmplitudeRule) -> Result<CounterexampleInstance> {
    if k == 0 {
        return Err(HarnessError::Precondition("K must be positive".into()));
    }
    let probe = delta2_probe(phi, Delta2Grid::default(), DELTA2_THRESHOLD)?;
    if probe.verdict != Delta2Verdict::FailsEmpirically {
        return Err(HarnessError::Precondition(format!("{} satisfies Δ₂ on the probe grid", phi.label())));
    }

    let mut amplitudes = Vec::with_capacity(k);
    let mut traces = Vec::with_capacity(k);
    let mut modular_defect = 0.0_f64;
    let mut construction = Vec::with_capacity(k);
    for j in 1..=k {
        let u = rule.amplitude(j)?;
        let phi_u = phi.eval(u)?;
        let lhs = phi.eval((1.0 + 1.0 / j as f64) * u).unwrap_or(f64::INFINITY);
        let rhs = 2f64.powi(j as i32) * phi_u;
        if !(lhs > rhs) || !(phi_u > 0.0 && phi_u.is_finite()) {
            return Err(HarnessError::AmplitudeRuleViolation { k: j, lhs, rhs });
        }
        let target = 2f64.powi(-(j as i32));
        let t = target / phi_u;
        modular_defect = modular_defect.max((phi_u * t - target).abs() / target);
        amplitudes.push(u);
        traces.push(t);
        construction.push((lhs, rhs));
    }

    let x = BlockOperator::atomic(&amplitudes, &traces)?;
    let norm_x = luxemburg_norm(phi, &x, DEFAULT_TOL)?.value;
    let mut sequence = Vec::with_capacity(k);
    let mut certificates = Vec::with_capacity(k);
    for n in 1..=k {
        let mut values = amplitudes.clone();
        values[n - 1] = 0.0;
        let xn = BlockOperator::atomic(&values, &traces)?;
        let diff = x.sub(&xn)?;
        let (u, t) = (amplitudes[n - 1], traces[n - 1]);
        let norm_term = luxemburg_norm(phi, &xn, DEFAULT_TOL)?.value;
        certificates.push(Certificate {
            n,
            amplitude: u,
            trace: t,
            construction_lhs: construction[n - 1].0,
            construction_rhs: construction[n - 1].1,
            gauge_eps1: measure_gauge(&xn, &x, 1.0)?,
            gauge_bound: 2f64.powi(-(n as i32)),
            diff_norm: luxemburg_norm(phi, &diff, DEFAULT_TOL)?.value,
            diff_norm_closed_form: u / phi.inverse(1.0 / t)?,
            diff_lower_bound: n as f64 / (n as f64 + 1.0),
            doubled_bound: 2.0 * n as f64 / (n as f64 + 1.0),
            norm_term,
            norm_gap: (norm_term - norm_x).abs(),
        });
        sequence.push(xn);
    }
    Ok(CounterexampleInstance { k, amplitudes, traces, norm_x, modular_defect, certificates, x, sequence })
}
