//! Sequential checks: modular/norm co-convergence, continuity of `φ(μ_t)`,
//! LLUM/ULUM, order continuity, duality and the Hölder pairing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::counterexample::{build_counterexample, AmplitudeRule};
use super::fack_kosaki::random_pair_shape;
use super::family::{FamilyKind, SequenceFamily, SpectralMap};
use super::{tail_converges, tail_len, tail_max, HarnessError, Result, Verdict};
use crate::norm::{
    holder_pairing, luxemburg_norm, modular, orlicz_norm_sup_with, p_norm, pairing_conjugate, amemiya_norm, DEFAULT_TOL,
};
use crate::operator::{derive_seed, random_operator, singular_value_profile, AlgebraShape, BlockOperator, Ensemble};
use crate::orlicz::{delta2_probe, Delta2Grid, Delta2Verdict, OrliczFunction, OrliczKind};

const DELTA2_THRESHOLD: f64 = 1e6;
const ORDER_TOL: f64 = 1e-10;
/// Probes closer than this to a breakpoint of `μ(x)` are rejected.
const GAP_TOL: f64 = 1e-6;
/// Length of the monotone families built by [`check_monotonicity`].
const MONOTONE_LENGTH: usize = 200;
const DUALITY_WITNESSES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModularNormReport {
    pub delta2: Delta2Verdict,
    pub k_estimate: f64,
    /// Tolerance used for the implied side: `2·max(1, log₂ k)·tol`.
    pub implied_tol: f64,
    /// Tail of `|‖xₙ‖/‖x‖ − 1|` is below `tol`.
    pub norm_converges: bool,
    /// Tail of `|ρ(xₙ/‖x‖) − 1|` is below `tol`.
    pub modular_converges: bool,
    /// Tail of `|ρ(xₙ) − ρ(x)|` is below `tol`.
    pub raw_modular_converges: bool,
    /// Tail of `‖xₙ − x‖` is below `tol`.
    pub diff_norm_converges: bool,
    pub pass: bool,
}

/// `‖xₙ‖ → ‖x‖ ⇔ ρ(xₙ) → ρ(x)`, checked in both directions after normalizing by
/// `‖x‖` (for `x = 0`, on `‖xₙ‖` and `ρ(xₙ)` directly).
pub fn check_modular_norm(phi: &OrliczFunction, family: &SequenceFamily, tol: f64) -> Result<ModularNormReport> {
    let fam = family.generate(phi)?;
    let probe = delta2_probe(phi, Delta2Grid::default(), DELTA2_THRESHOLD)?;
    let implied_tol = 2.0 * probe.k_estimate.log2().max(1.0) * tol;
    let norm_x = luxemburg_norm(phi, &fam.limit, DEFAULT_TOL)?.value;
    let rho_x = modular(phi, &fam.limit)?;

    let mut norm_seq = Vec::with_capacity(fam.terms.len());
    let mut mod_seq = Vec::with_capacity(fam.terms.len());
    let mut raw_seq = Vec::with_capacity(fam.terms.len());
    let mut diff_seq = Vec::with_capacity(fam.terms.len());
    for term in &fam.terms {
        let norm = luxemburg_norm(phi, term, DEFAULT_TOL)?.value;
        let rho = modular(phi, term)?;
        if norm_x > 0.0 {
            norm_seq.push((norm / norm_x - 1.0).abs());
            mod_seq.push((modular(phi, &term.scale(1.0 / norm_x))? - 1.0).abs());
        } else {
            norm_seq.push(norm);
            mod_seq.push(rho);
        }
        raw_seq.push((rho - rho_x).abs());
        diff_seq.push(luxemburg_norm(phi, &term.sub(&fam.limit)?, DEFAULT_TOL)?.value);
    }
    let norm_converges = tail_converges(&norm_seq, tol);
    let modular_converges = tail_converges(&mod_seq, tol);
    let forward = !norm_converges || tail_converges(&mod_seq, implied_tol);
    let backward = !modular_converges || tail_converges(&norm_seq, implied_tol);
    Ok(ModularNormReport {
        delta2: probe.verdict,
        k_estimate: probe.k_estimate,
        implied_tol,
        norm_converges,
        modular_converges,
        raw_modular_converges: tail_converges(&raw_seq, tol),
        diff_norm_converges: tail_converges(&diff_seq, tol),
        pass: forward && backward,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuProbe {
    pub t: f64,
    /// `φ(μ_t(x))`
    pub limit_value: f64,
    /// Largest `|φ(μ_t(xₙ)) − φ(μ_t(x))|` over the tail.
    pub tail_max: f64,
    pub converges: bool,
    /// Same check for `μ_t(φ(xₙ))`, only when every term is PSD.
    pub psd_converges: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuContinuityReport {
    pub probes: Vec<MuProbe>,
    pub pass: bool,
}

/// `φ(μ_t(xₙ)) → φ(μ_t(x))` at probes `t` where `μ(x)` is continuous.
pub fn check_mu_continuity(phi: &OrliczFunction, family: &SequenceFamily, probes: &[f64], tol: f64) -> Result<MuContinuityReport> {
    let fam = family.generate(phi)?;
    let limit_profile = singular_value_profile(&fam.limit)?;
    let breakpoints = limit_profile.breakpoints();
    for &t in probes {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(HarnessError::Precondition(format!("probe {t} must be finite and ≥ 0")));
        }
        if let Some(&b) = breakpoints.iter().find(|&&b| (t - b).abs() < GAP_TOL) {
            return Err(HarnessError::ProbeOnBreakpoint { t, breakpoint: b, gap: GAP_TOL });
        }
    }
    let profiles = fam.terms.iter().map(singular_value_profile).collect::<std::result::Result<Vec<_>, _>>()?;

    let all_psd = fam.limit.is_psd(ORDER_TOL).unwrap_or(false)
        && fam.terms.iter().all(|t| t.is_psd(ORDER_TOL).unwrap_or(false));
    let applied = if all_psd {
        let f = |x: &BlockOperator| -> Result<_> {
            Ok(singular_value_profile(&x.hermitian_apply(|s| phi.eval_unchecked(s.max(0.0)))?)?)
        };
        Some((f(&fam.limit)?, fam.terms.iter().map(f).collect::<Result<Vec<_>>>()?))
    } else {
        None
    };

    let mut out = Vec::with_capacity(probes.len());
    for &t in probes {
        let limit_value = phi.eval_unchecked(limit_profile.mu_at(t));
        let gaps: Vec<f64> = profiles.iter().map(|p| (phi.eval_unchecked(p.mu_at(t)) - limit_value).abs()).collect();
        let psd_converges = applied.as_ref().map(|(lim, terms)| {
            let target = lim.mu_at(t);
            let g: Vec<f64> = terms.iter().map(|p| (p.mu_at(t) - target).abs()).collect();
            tail_converges(&g, tol)
        });
        out.push(MuProbe {
            t,
            limit_value,
            tail_max: tail_max(&gaps),
            converges: tail_converges(&gaps, tol),
            psd_converges,
        });
    }
    let pass = out.iter().all(|p| p.converges && p.psd_converges.unwrap_or(true));
    Ok(MuContinuityReport { probes: out, pass })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum MonotonicityKind {
    /// `0 ≤ xₙ ≤ x`, `‖xₙ‖ → ‖x‖`
    Llum,
    /// `xₙ ≥ x`, `‖xₙ‖ → ‖x‖`
    Ulum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub kind: MonotonicityKind,
    pub trials: usize,
    pub passed: usize,
    /// Trials whose norms did not converge; not counted either way.
    pub negative_controls: usize,
    /// Largest tail entry of `‖xₙ − x‖` over counted trials.
    pub max_tail: f64,
    pub verdict: Verdict,
}

fn monotone_maps(kind: MonotonicityKind) -> Vec<FamilyKind> {
    match kind {
        MonotonicityKind::Llum => vec![
            FamilyKind::MonotoneUp { map: SpectralMap::Scale { coefficient: -1.0, rate: 3.0 } },
            FamilyKind::MonotoneUp { map: SpectralMap::Shift { coefficient: -1.0, rate: 3.0 } },
            FamilyKind::MonotoneUp { map: SpectralMap::TruncateBelow { coefficient: 1.0, rate: 3.0 } },
        ],
        MonotonicityKind::Ulum => vec![
            FamilyKind::MonotoneDown { map: SpectralMap::Scale { coefficient: 1.0, rate: 3.0 } },
            FamilyKind::MonotoneDown { map: SpectralMap::Shift { coefficient: 1.0, rate: 3.0 } },
        ],
    }
}

/// Sequential LLUM/ULUM on commuting families `xₙ = gₙ(x)` over random PSD `x`.
pub fn check_monotonicity(
    phi: &OrliczFunction,
    kind: MonotonicityKind,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<MonotonicityReport> {
    let maps = monotone_maps(kind);
    let (mut passed, mut controls, mut max_tail) = (0, 0, 0.0_f64);
    for i in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i as u64));
        let shape = random_pair_shape(&mut rng);
        let base = random_operator(&shape, &Ensemble::PsdWishart, rng.random())?;
        let family = SequenceFamily::new(maps[i % maps.len()].clone(), base, MONOTONE_LENGTH, 0);
        let fam = family.generate(phi)?;
        let norm_x = luxemburg_norm(phi, &fam.limit, DEFAULT_TOL)?.value;
        let mut gaps = Vec::with_capacity(fam.terms.len());
        let mut diffs = Vec::with_capacity(fam.terms.len());
        for term in &fam.terms {
            gaps.push((luxemburg_norm(phi, term, DEFAULT_TOL)?.value - norm_x).abs());
            diffs.push(luxemburg_norm(phi, &term.sub(&fam.limit)?, DEFAULT_TOL)?.value);
        }
        if !tail_converges(&gaps, tol) {
            controls += 1;
            continue;
        }
        max_tail = max_tail.max(tail_max(&diffs));
        if tail_converges(&diffs, tol) {
            passed += 1;
        }
    }
    let counted = trials - controls;
    let verdict = if counted > 0 && passed == counted { Verdict::Pass } else { Verdict::Fail };
    Ok(MonotonicityReport { kind, trials, passed, negative_controls: controls, max_tail, verdict })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LlumControlReport {
    /// `0 ≤ yₙ ≤ x` for every n.
    pub below_limit: bool,
    /// Largest `|‖yₙ‖ − ‖x‖|` over the tail.
    pub norm_gap_tail: f64,
    /// Smallest `‖x − yₙ‖` over the tail.
    pub diff_norm_tail_min: f64,
    /// `‖x − yₙ‖ ≥ n/(n+1) − 1e−6` at every n.
    pub diff_bounded_below: bool,
    /// The norm differences do not converge: LLUM fails for this φ.
    pub llum_fails: bool,
}

/// LLUM applied to the non-Δ₂ construction: `yₙ = x − uₙeₙ` sits below `x`,
/// its norms approach `‖x‖`, yet `‖x − yₙ‖` stays large.
pub fn llum_counterexample_control(phi: &OrliczFunction, k: usize, tol: f64) -> Result<LlumControlReport> {
    let inst = build_counterexample(phi, k, &AmplitudeRule::Squares)?;
    let mut below_limit = true;
    for y in &inst.sequence {
        below_limit &= y.min_eigenvalue()? >= -ORDER_TOL && inst.x.sub(y)?.min_eigenvalue()? >= -ORDER_TOL;
    }
    let tail = &inst.certificates[inst.certificates.len() - tail_len(inst.certificates.len())..];
    let diffs: Vec<f64> = inst.certificates.iter().map(|c| c.diff_norm).collect();
    Ok(LlumControlReport {
        below_limit,
        norm_gap_tail: tail.iter().map(|c| c.norm_gap).fold(0.0, f64::max),
        diff_norm_tail_min: tail.iter().map(|c| c.diff_norm).fold(f64::INFINITY, f64::min),
        diff_bounded_below: inst.certificates.iter().all(|c| c.diff_norm >= c.diff_lower_bound - 1e-6),
        llum_fails: !tail_converges(&diffs, tol),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderContinuityReport {
    pub norms: Vec<f64>,
    pub non_increasing: bool,
    pub tail_converges: bool,
    pub verdict: Verdict,
}

/// `xₙ ↓ 0 ⇒ ‖xₙ‖ ↓ 0`.
pub fn check_order_continuity(phi: &OrliczFunction, family: &SequenceFamily, tol: f64) -> Result<OrderContinuityReport> {
    let fam = family.generate(phi)?;
    if fam.limit.max_abs_entry() > ORDER_TOL {
        return Err(HarnessError::Precondition("the family must decrease to 0".into()));
    }
    for (n, w) in fam.terms.windows(2).enumerate() {
        if w[0].sub(&w[1])?.min_eigenvalue()? < -ORDER_TOL || w[1].min_eigenvalue()? < -ORDER_TOL {
            return Err(HarnessError::Precondition(format!("terms {} and {} are not decreasing", n + 1, n + 2)));
        }
    }
    let norms = fam
        .terms
        .iter()
        .map(|t| Ok(luxemburg_norm(phi, t, DEFAULT_TOL)?.value))
        .collect::<Result<Vec<f64>>>()?;
    let non_increasing = norms.windows(2).all(|w| w[1] <= w[0] * (1.0 + 4.0 * DEFAULT_TOL));
    let tail_ok = tail_converges(&norms, tol);
    let verdict = if non_increasing && tail_ok { Verdict::Pass } else { Verdict::Fail };
    Ok(OrderContinuityReport { norms, non_increasing, tail_converges: tail_ok, verdict })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub trials: usize,
    /// `max |sup pairing − ‖y‖°_ψ|` over the commuting instances.
    pub max_gap: f64,
    /// `max (sup pairing − ‖y‖°_ψ)`; positive values break the upper bound.
    pub max_excess: f64,
    /// For power φ: `max |sup pairing − ‖y‖_q|`.
    pub lp_gap: Option<f64>,
    pub verdict: Verdict,
}

/// `sup {τ(|xy|) : ‖x‖_φ ≤ 1}` against the Amemiya norm of `y` under ψ.
pub fn duality_pairing(phi: &OrliczFunction, psi: &OrliczFunction, y: &BlockOperator, seed: u64) -> Result<(f64, f64)> {
    // τ(|xy|) = τ(|y*x*|): roles swap, with the witnesses normalized in L_φ
    let sup = orlicz_norm_sup_with(psi, phi, &y.adjoint(), DUALITY_WITNESSES, seed)?.value;
    let upper = amemiya_norm(psi, y, DEFAULT_TOL)?.value;
    Ok((sup, upper))
}

/// Duality on random diagonal `y`; for power φ also against `‖y‖_q`.
pub fn check_duality(phi: &OrliczFunction, trials: usize, tol: f64, seed: u64) -> Result<DualityReport> {
    let psi = pairing_conjugate(phi)?;
    let q = match phi.kind() {
        OrliczKind::Power { p, scale } if *p > 1.0 && *scale == 1.0 => Some(p / (p - 1.0)),
        _ => None,
    };
    let (mut max_gap, mut max_excess, mut lp_gap) = (0.0_f64, f64::NEG_INFINITY, q.map(|_| 0.0_f64));
    for i in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i as u64));
        let dims = rng.random_range(1..=6);
        let weights: Vec<f64> = (0..dims).map(|_| rng.random_range(0.25..2.0)).collect();
        let values: Vec<f64> = (0..dims).map(|_| rng.random_range(-3.0..3.0)).collect();
        let y = BlockOperator::atomic(&values, &weights)?;
        let (sup, upper) = duality_pairing(phi, &psi, &y, rng.random())?;
        max_gap = max_gap.max((sup - upper).abs());
        max_excess = max_excess.max(sup - upper);
        if let (Some(q), Some(g)) = (q, lp_gap.as_mut()) {
            *g = g.max((sup - p_norm(&y, q)?).abs());
        }
    }
    let ok = max_gap <= tol && max_excess <= tol && lp_gap.is_none_or(|g| g <= tol);
    Ok(DualityReport {
        trials,
        max_gap,
        max_excess: max_excess.max(0.0),
        lp_gap,
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderReport {
    pub trials: usize,
    /// `max (τ(|xy|) − ‖x‖_Amemiya)` over ψ-feasible `y`.
    pub max_excess: f64,
}

/// Hölder–Young pairing on random noncommuting `x, y` with `ρ_ψ(y) ≤ 1`.
pub fn holder_battery(phi: &OrliczFunction, trials: usize, seed: u64) -> Result<HolderReport> {
    let psi = pairing_conjugate(phi)?;
    let mut max_excess = f64::NEG_INFINITY;
    for i in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i as u64));
        let shape: AlgebraShape = random_pair_shape(&mut rng);
        let x = random_operator(&shape, &Ensemble::GaussianComplex { sigma: rng.random_range(0.1..2.0) }, rng.random())?;
        let y = random_operator(&shape, &Ensemble::GaussianComplex { sigma: 1.0 }, rng.random())?;
        let lux = luxemburg_norm(&psi, &y, DEFAULT_TOL)?.value;
        let y = y.scale((1.0 - 1e-9) / lux);
        let (lhs, rhs) = holder_pairing(phi, &psi, &x, &y)?;
        max_excess = max_excess.max(lhs - rhs);
    }
    Ok(HolderReport { trials, max_excess })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::family::Rate;

    fn sq() -> OrliczFunction {
        OrliczFunction::power(2.0).unwrap()
    }

    #[test]
    fn modular_norm_scalar_family() {
        let base = BlockOperator::diagonal(&[1.0, 2.0], 1.0).unwrap();
        let kind = FamilyKind::MonotoneDown { map: SpectralMap::Scale { coefficient: 1.0, rate: 1.0 } };
        let rep = check_modular_norm(&sq(), &SequenceFamily::new(kind, base, 400, 0), 1e-2).unwrap();
        assert!(rep.norm_converges && rep.modular_converges && rep.pass);
        // Δ₂ constant of u² is 4
        assert!((rep.k_estimate - 4.0).abs() < 1e-12);
        assert!((rep.implied_tol - 2.0 * 2.0 * 1e-2).abs() < 1e-12);
    }

    #[test]
    fn modular_norm_zero_family() {
        let base = BlockOperator::zeros(&AlgebraShape::single(2, 1.0).unwrap());
        let kind = FamilyKind::MonotoneDown { map: SpectralMap::Shrink { rate: 1.0 } };
        let rep = check_modular_norm(&sq(), &SequenceFamily::new(kind, base, 20, 0), 1e-9).unwrap();
        assert!(rep.norm_converges && rep.modular_converges && rep.pass);
    }

    #[test]
    fn modular_norm_cubic_noise() {
        let phi = OrliczFunction::power(3.0).unwrap();
        let shape = AlgebraShape::from_pairs(&[(3, 1.0), (2, 0.5)]).unwrap();
        let base = random_operator(&shape, &Ensemble::GaussianComplex { sigma: 1.0 }, 1).unwrap();
        let kind = FamilyKind::ShrinkingNoise { scales: Rate::power(1.0, -2.0), ensemble: Ensemble::GaussianComplex { sigma: 1.0 } };
        let rep = check_modular_norm(&phi, &SequenceFamily::new(kind, base, 200, 2), 1e-3).unwrap();
        assert!(rep.pass && rep.norm_converges && rep.modular_converges, "{rep:?}");
    }

    #[test]
    fn modular_norm_negative_control() {
        let phi = OrliczFunction::exp_minus_one();
        let base = BlockOperator::diagonal(&[1.0], 1.0).unwrap();
        let kind = FamilyKind::NonDoubling { rule: AmplitudeRule::Squares };
        let rep = check_modular_norm(&phi, &SequenceFamily::new(kind, base, 12, 0), 1e-3).unwrap();
        assert_eq!(rep.delta2, Delta2Verdict::FailsEmpirically);
        assert!(rep.raw_modular_converges && !rep.diff_norm_converges);
    }

    #[test]
    fn mu_continuity_explicit_shift() {
        let base = BlockOperator::diagonal(&[3.0, 2.0, 1.0], 1.0).unwrap();
        let kind = FamilyKind::MonotoneDown { map: SpectralMap::Shift { coefficient: 1.0, rate: 1.0 } };
        let fam = SequenceFamily::new(kind, base, 400, 0);
        let rep = check_mu_continuity(&sq(), &fam, &[0.5, 2.5], 0.05).unwrap();
        assert!((rep.probes[0].limit_value - 9.0).abs() < 1e-12);
        assert!((rep.probes[1].limit_value - 1.0).abs() < 1e-12);
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.probes[0].psd_converges, Some(true));
        assert!(matches!(check_mu_continuity(&sq(), &fam, &[1.0], 0.05), Err(HarnessError::ProbeOnBreakpoint { .. })));
    }

    #[test]
    fn monotonicity_passes() {
        for kind in [MonotonicityKind::Llum, MonotonicityKind::Ulum] {
            let rep = check_monotonicity(&sq(), kind, 6, 1e-4, 3).unwrap();
            assert_eq!(rep.verdict, Verdict::Pass, "{rep:?}");
            assert_eq!(rep.passed, 6);
        }
    }

    #[test]
    fn llum_control_with_expm1() {
        let rep = llum_counterexample_control(&OrliczFunction::exp_minus_one(), 12, 1e-4).unwrap();
        assert!(rep.below_limit && rep.diff_bounded_below && rep.llum_fails);
        assert!(rep.diff_norm_tail_min > 0.9);
    }

    #[test]
    fn order_continuity_examples() {
        let shape = AlgebraShape::from_pairs(&[(2, 1.0), (1, 3.0)]).unwrap();
        let one = BlockOperator::identity(&shape);
        let kind = FamilyKind::MonotoneDown { map: SpectralMap::Shrink { rate: 1.0 } };
        let rep = check_order_continuity(&sq(), &SequenceFamily::new(kind.clone(), one, 400, 0), 0.02).unwrap();
        // ‖1/n‖ = ‖1‖/n with ‖1‖ = 1/φ⁻¹(1/5)
        let unit = 5f64.sqrt();
        for (i, v) in rep.norms.iter().enumerate() {
            assert!((v - unit / (i + 1) as f64).abs() < 1e-9);
        }
        assert_eq!(rep.verdict, Verdict::Pass);

        let zero = BlockOperator::zeros(&shape);
        assert_eq!(check_order_continuity(&sq(), &SequenceFamily::new(kind, zero, 5, 0), 1e-12).unwrap().verdict, Verdict::Pass);

        let up = FamilyKind::MonotoneUp { map: SpectralMap::Scale { coefficient: -1.0, rate: 1.0 } };
        let base = BlockOperator::identity(&shape);
        assert!(matches!(
            check_order_continuity(&sq(), &SequenceFamily::new(up, base, 5, 0), 1e-3),
            Err(HarnessError::Precondition(_))
        ));
    }

    #[test]
    fn duality_cauchy_schwarz() {
        let y = BlockOperator::diagonal(&[3.0, 4.0], 1.0).unwrap();
        let psi = pairing_conjugate(&sq()).unwrap();
        let (sup, upper) = duality_pairing(&sq(), &psi, &y, 1).unwrap();
        assert!((sup - 5.0).abs() < 1e-8, "{sup}");
        assert!((upper - 5.0).abs() < 1e-8);
        let zero = BlockOperator::zeros(y.shape());
        assert_eq!(duality_pairing(&sq(), &psi, &zero, 1).unwrap().0, 0.0);
    }

    #[test]
    fn duality_lp_and_expm1() {
        let rep = check_duality(&OrliczFunction::power(3.0).unwrap(), 10, 1e-4, 7).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{rep:?}");
        assert!(rep.lp_gap.unwrap() <= 1e-4);
        let rep = check_duality(&OrliczFunction::exp_minus_one(), 5, 1e-3, 7).unwrap();
        assert!(rep.lp_gap.is_none());
        assert!(rep.max_excess <= 1e-3, "{rep:?}");
    }

    #[test]
    fn holder_pairing_bounded() {
        let rep = holder_battery(&OrliczFunction::power(1.5).unwrap(), 30, 2).unwrap();
        assert!(rep.max_excess <= 1e-8, "{rep:?}");
    }
}
