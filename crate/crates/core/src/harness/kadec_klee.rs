//! Kadec-Klee for convergence in measure:
//! `‖xₙ − x‖ → 0  ⇔  ‖xₙ‖ → ‖x‖ and xₙ → x in measure`.

use serde::{Deserialize, Serialize};

use super::family::SequenceFamily;
use super::{tail_converges, tail_converges_above, HarnessError, Result, Verdict};
use crate::norm::{luxemburg_norm, modular, DEFAULT_TOL};
use crate::operator::measure_gauge;
use crate::orlicz::{delta2_probe, Delta2Grid, Delta2Verdict, OrliczFunction};

const DELTA2_THRESHOLD: f64 = 1e6;
const ROW_SLACK: f64 = 1e-9;

/// Pointwise check of `‖xₙ − x‖ ≤ tol ⇒ |‖xₙ‖ − ‖x‖| ≤ ‖xₙ − x‖ and
/// gauge_ε ≤ 1/φ(ε/‖xₙ − x‖)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowFlag {
    Ok,
    Violated,
    /// `‖xₙ − x‖ > tol`, nothing to check.
    Skipped,
}

impl RowFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            RowFlag::Ok => "ok",
            RowFlag::Violated => "violated",
            RowFlag::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub n: usize,
    pub luxemburg: f64,
    pub modular: f64,
    pub diff_norm: f64,
    /// `measure_gauge(xₙ, x, ε)` for each configured ε, in order.
    pub gauges: Vec<f64>,
    pub norm_gap: f64,
    pub flag: RowFlag,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KadecKleeOutcome {
    pub records: Vec<ExperimentRecord>,
    pub eps_list: Vec<f64>,
    pub limit_norm: f64,
    pub delta2: Delta2Verdict,
    /// Tail of `‖xₙ − x‖` converges.
    pub diff_converges: bool,
    /// Tails of `|‖xₙ‖ − ‖x‖|` and of every gauge converge.
    pub hypothesis_converges: bool,
    /// No row violates the pointwise forward implication.
    pub forward_holds: bool,
    pub verdict: Verdict,
}

pub fn run_kadec_klee(
    phi: &OrliczFunction,
    family: &SequenceFamily,
    eps_list: &[f64],
    tol: f64,
) -> Result<KadecKleeOutcome> {
    if !(tol > 0.0) || eps_list.iter().any(|e| !(*e > 0.0)) {
        return Err(HarnessError::Precondition("tolerance and every ε must be positive".into()));
    }
    let fam = family.generate(phi)?;
    let delta2 = delta2_probe(phi, Delta2Grid::default(), DELTA2_THRESHOLD)?.verdict;
    let limit_norm = luxemburg_norm(phi, &fam.limit, DEFAULT_TOL)?.value;

    let mut records = Vec::with_capacity(fam.terms.len());
    for (i, term) in fam.terms.iter().enumerate() {
        let luxemburg = luxemburg_norm(phi, term, DEFAULT_TOL)?.value;
        let diff = term.sub(&fam.limit)?;
        let diff_norm = luxemburg_norm(phi, &diff, DEFAULT_TOL)?.value;
        let gauges = eps_list.iter().map(|&e| measure_gauge(term, &fam.limit, e)).collect::<std::result::Result<Vec<_>, _>>()?;
        let norm_gap = (luxemburg - limit_norm).abs();
        let flag = if diff_norm > tol {
            RowFlag::Skipped
        } else {
            // both norms carry a bisection error of order DEFAULT_TOL
            let norm_ok = norm_gap <= diff_norm * (1.0 + ROW_SLACK) + 4.0 * DEFAULT_TOL * luxemburg.max(limit_norm);
            let gauges_ok = eps_list.iter().zip(&gauges).all(|(&e, &g)| {
                let bound = if diff_norm == 0.0 { 0.0 } else { 1.0 / phi.eval_unchecked(e / diff_norm) };
                g <= bound * (1.0 + ROW_SLACK)
            });
            if norm_ok && gauges_ok {
                RowFlag::Ok
            } else {
                RowFlag::Violated
            }
        };
        records.push(ExperimentRecord {
            n: i + 1,
            luxemburg,
            modular: modular(phi, term)?,
            diff_norm,
            gauges,
            norm_gap,
            flag,
        });
    }

    let column = |f: &dyn Fn(&ExperimentRecord) -> f64| records.iter().map(f).collect::<Vec<f64>>();
    let diff_converges = tail_converges(&column(&|r| r.diff_norm), tol);
    // the gap of two bisected norms is only known to a few DEFAULT_TOL
    let gap_floor = 4.0 * DEFAULT_TOL * records.iter().map(|r| r.luxemburg).fold(limit_norm, f64::max);
    let hypothesis_converges = tail_converges_above(&column(&|r| r.norm_gap), tol, gap_floor)
        && (0..eps_list.len()).all(|j| tail_converges(&column(&|r| r.gauges[j]), tol));
    let forward_holds = records.iter().all(|r| r.flag != RowFlag::Violated);
    let verdict = match (forward_holds, diff_converges, hypothesis_converges) {
        (false, _, _) => Verdict::Fail,
        (true, true, true) => Verdict::Pass,
        (true, false, false) => Verdict::NegativeControl,
        _ => Verdict::Fail,
    };
    Ok(KadecKleeOutcome {
        records,
        eps_list: eps_list.to_vec(),
        limit_norm,
        delta2,
        diff_converges,
        hypothesis_converges,
        forward_holds,
        verdict,
    })
}
