//! The full battery behind `suite --seed`: every check with fixed sizes,
//! per-check seeds derived from the master seed, CSV output per check plus a
//! `summary.csv`.

use std::path::{Path, PathBuf};

use serde::Serialize;

use super::checks::{
    check_duality, check_modular_norm, check_monotonicity, check_order_continuity, holder_battery,
    llum_counterexample_control, MonotonicityKind,
};
use super::counterexample::{build_counterexample, AmplitudeRule};
use super::fack_kosaki::fack_kosaki_suite;
use super::family::{FamilyKind, Rate, SequenceFamily, SpectralMap};
use super::kadec_klee::run_kadec_klee;
use super::{HarnessError, Result, Verdict};
use crate::io::{format_float, write_records, write_table};
use crate::operator::{derive_seed, random_operator, AlgebraShape, BlockOperator, Ensemble};
use crate::orlicz::OrliczFunction;

const KK_LENGTH: usize = 200;
const KK_TOL: f64 = 1e-3;
const KK_EPS: [f64; 2] = [1.0, 0.1];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteEntry {
    pub name: String,
    pub expected: Verdict,
    pub verdict: Verdict,
    pub metric: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub entries: Vec<SuiteEntry>,
    pub files: Vec<PathBuf>,
}

impl SuiteSummary {
    /// Every entry met its expected verdict (negative controls included).
    pub fn all_as_expected(&self) -> bool {
        self.entries.iter().all(|e| e.verdict == e.expected)
    }
}

fn io_err(e: crate::io::IoError) -> HarnessError {
    HarnessError::Io(e.to_string())
}

fn power(p: f64) -> OrliczFunction {
    OrliczFunction::power(p).expect("valid exponent")
}

fn pass_if(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

pub fn run_suite(seed: u64, out_dir: &Path) -> Result<SuiteSummary> {
    std::fs::create_dir_all(out_dir).map_err(|e| HarnessError::Io(e.to_string()))?;
    let mut entries = Vec::new();
    let mut files = Vec::new();
    let mut entry = |name: &str, expected, verdict, metric| {
        entries.push(SuiteEntry { name: name.into(), expected, verdict, metric });
    };

    let base = BlockOperator::diagonal(&[1.0, 1.0], 1.0)?;
    for (i, p) in [1.5, 2.0, 3.0].into_iter().enumerate() {
        let kind = FamilyKind::SpikePerturbation { amplitudes: Rate::power(1.0, 0.25), traces: Rate::power(1.0, -6.0) };
        let family = SequenceFamily::new(kind, base.clone(), KK_LENGTH, derive_seed(seed, i as u64));
        let out = run_kadec_klee(&power(p), &family, &KK_EPS, KK_TOL)?;
        let path = out_dir.join(format!("kk_spike_p{p}.csv"));
        write_records(&out.records, KK_EPS.len(), &path).map_err(io_err)?;
        files.push(path);
        let last = out.records.last().map_or(0.0, |r| r.diff_norm);
        entry(&format!("kadec_klee_spike_p{p}"), Verdict::Pass, out.verdict, last);
    }

    let kind = FamilyKind::SpikePerturbation { amplitudes: Rate::power(1.0, 0.25), traces: Rate::ModularLevel { level: 0.5 } };
    let out = run_kadec_klee(&power(2.0), &SequenceFamily::new(kind, base.clone(), KK_LENGTH, 0), &KK_EPS, KK_TOL)?;
    let path = out_dir.join("kk_negative_control.csv");
    write_records(&out.records, KK_EPS.len(), &path).map_err(io_err)?;
    files.push(path);
    entry("kadec_klee_negative_control", Verdict::NegativeControl, out.verdict, out.records.last().map_or(0.0, |r| r.diff_norm));

    let expm1 = OrliczFunction::exp_minus_one();
    let inst = build_counterexample(&expm1, 12, &AmplitudeRule::Squares)?;
    let header: Vec<String> = [
        "n", "amplitude", "trace", "construction_lhs", "construction_rhs", "gauge_eps1", "gauge_bound", "diff_norm",
        "diff_lower_bound", "doubled_bound", "norm_term", "norm_gap",
    ]
    .map(String::from)
    .to_vec();
    let rows: Vec<Vec<String>> = inst
        .certificates
        .iter()
        .map(|c| {
            let mut row = vec![c.n.to_string()];
            row.extend(
                [
                    c.amplitude,
                    c.trace,
                    c.construction_lhs,
                    c.construction_rhs,
                    c.gauge_eps1,
                    c.gauge_bound,
                    c.diff_norm,
                    c.diff_lower_bound,
                    c.doubled_bound,
                    c.norm_term,
                    c.norm_gap,
                ]
                .map(format_float),
            );
            row
        })
        .collect();
    let path = out_dir.join("counterexample.csv");
    write_table(&path, &header, &rows).map_err(io_err)?;
    files.push(path);
    let certified = inst.certificates.iter().all(|c| {
        c.construction_lhs > c.construction_rhs && c.gauge_eps1 <= c.gauge_bound && c.diff_norm >= c.diff_lower_bound - 1e-6
    });
    entry("counterexample_certificates", Verdict::Pass, pass_if(certified), inst.norm_x);

    let fk = fack_kosaki_suite(200, derive_seed(seed, 10))?;
    let path = out_dir.join("fack_kosaki.csv");
    let header: Vec<String> = ["inequality", "max_violation"].map(String::from).to_vec();
    let rows = [
        ("subadditivity", fk.subadditivity),
        ("unitary_invariance", fk.unitary_invariance),
        ("trace_formula", fk.trace_formula),
        ("convexity", fk.convexity),
    ]
    .map(|(n, v)| vec![n.to_string(), format_float(v)])
    .to_vec();
    write_table(&path, &header, &rows).map_err(io_err)?;
    files.push(path);
    entry("fack_kosaki", Verdict::Pass, pass_if(fk.max_violation() <= 1e-9), fk.max_violation());

    let shape = AlgebraShape::from_pairs(&[(3, 1.0), (2, 0.5)])?;
    for (i, p) in [1.5, 2.0, 3.0].into_iter().enumerate() {
        let noise_seed = derive_seed(seed, 20 + i as u64);
        let x = random_operator(&shape, &Ensemble::GaussianComplex { sigma: 1.0 }, noise_seed)?;
        let kind = FamilyKind::ShrinkingNoise { scales: Rate::power(1.0, -2.0), ensemble: Ensemble::GaussianComplex { sigma: 1.0 } };
        let rep = check_modular_norm(&power(p), &SequenceFamily::new(kind, x, KK_LENGTH, noise_seed), KK_TOL)?;
        entry(&format!("modular_norm_noise_p{p}"), Verdict::Pass, pass_if(rep.pass), rep.implied_tol);
    }
    for (kind, name, offset) in [(MonotonicityKind::Llum, "llum", 30), (MonotonicityKind::Ulum, "ulum", 31)] {
        let rep = check_monotonicity(&power(2.0), kind, 10, 1e-4, derive_seed(seed, offset))?;
        entry(name, Verdict::Pass, rep.verdict, rep.max_tail);
    }
    let control = llum_counterexample_control(&expm1, 12, 1e-4)?;
    entry("llum_without_delta2", Verdict::Fail, pass_if(!control.llum_fails), control.diff_norm_tail_min);

    let x = random_operator(&shape, &Ensemble::PsdWishart, derive_seed(seed, 40))?;
    let kind = FamilyKind::MonotoneDown { map: SpectralMap::Shrink { rate: 2.0 } };
    let rep = check_order_continuity(&power(2.0), &SequenceFamily::new(kind, x, KK_LENGTH, 0), 1e-4)?;
    entry("order_continuity", Verdict::Pass, rep.verdict, rep.norms.last().copied().unwrap_or(0.0));

    for (i, p) in [1.5, 2.0, 3.0].into_iter().enumerate() {
        let rep = check_duality(&power(p), 10, 1e-4, derive_seed(seed, 50 + i as u64))?;
        entry(&format!("duality_p{p}"), Verdict::Pass, rep.verdict, rep.lp_gap.unwrap_or(rep.max_gap));
    }
    let holder = holder_battery(&power(2.0), 50, derive_seed(seed, 60))?;
    entry("holder", Verdict::Pass, pass_if(holder.max_excess <= 1e-8), holder.max_excess);

    let path = out_dir.join("summary.csv");
    let header: Vec<String> = ["check", "expected", "verdict", "metric"].map(String::from).to_vec();
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|e| vec![e.name.clone(), e.expected.to_string(), e.verdict.to_string(), format_float(e.metric)])
        .collect();
    write_table(&path, &header, &rows).map_err(io_err)?;
    files.push(path);
    Ok(SuiteSummary { entries, files })
}
