//! Empirical probe of the Δ₂ condition `φ(2u) ≤ k·φ(u)`.
//!
//! A finite probe can refute boundedness of the doubling ratio only up to a
//! threshold, so a negative outcome is reported as `FailsEmpirically`.

use serde::{Deserialize, Serialize};

use super::conjugate::log_space;
use super::{OrliczError, OrliczFunction, Result};

/// Relative slack when checking that the ratio does not increase over the top decade.
const TREND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Delta2Grid {
    pub u_min: f64,
    pub u_max: f64,
    pub count: usize,
}

impl Default for Delta2Grid {
    fn default() -> Self {
        Delta2Grid { u_min: 1e-3, u_max: 40.0, count: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Delta2Verdict {
    Holds,
    FailsEmpirically,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Delta2Report {
    pub verdict: Delta2Verdict,
    /// Largest sampled ratio `φ(2u)/φ(u)`.
    pub k_estimate: f64,
    pub witness_u: f64,
    pub grid: Delta2Grid,
}

pub fn delta2_probe(phi: &OrliczFunction, grid: Delta2Grid, threshold: f64) -> Result<Delta2Report> {
    if !(grid.u_min > 0.0 && grid.u_max > grid.u_min && grid.u_max.is_finite()) {
        return Err(OrliczError::DegenerateGrid(format!(
            "need 0 < u_min < u_max < ∞, got ({}, {})",
            grid.u_min, grid.u_max
        )));
    }
    if grid.count < 2 {
        return Err(OrliczError::DegenerateGrid(format!("count {} < 2", grid.count)));
    }
    if !(threshold > 1.0) {
        return Err(OrliczError::DegenerateGrid(format!("threshold {threshold} must exceed 1")));
    }

    let us = log_space(grid.u_min, grid.u_max, grid.count);
    let ratios: Vec<f64> = us.iter().map(|&u| phi.doubling_ratio(u)).collect();

    let (mut k_estimate, mut witness_u) = (ratios[0], us[0]);
    for (&u, &r) in us.iter().zip(&ratios) {
        if r > k_estimate || r.is_nan() {
            k_estimate = r;
            witness_u = u;
        }
    }

    let decade_start = us.partition_point(|&u| u < grid.u_max / 10.0).min(us.len() - 2);
    let top = &ratios[decade_start..];
    let non_increasing = top
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + TREND_SLACK) + f64::EPSILON);

    let verdict = if k_estimate <= threshold && non_increasing {
        Delta2Verdict::Holds
    } else {
        Delta2Verdict::FailsEmpirically
    };
    Ok(Delta2Report { verdict, k_estimate, witness_u, grid })
}
