//! Modulars and norms on `L_φ`: Luxemburg (bisection on the modular equation),
//! Amemiya (`inf_k (1 + ρ(kx))/k`), the sup-form Orlicz norm and `L_p` norms.
//!
//! Everything is computed from the singular value profile, so operators with the
//! same profile receive identical values.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::operator::{
    derive_seed, random_operator, singular_value_profile, spectrum_abs, BlockOperator, Ensemble, OperatorError,
    SingularValueProfile,
};
use crate::orlicz::{conjugate, exact_conjugate, ConjugateGrid, OrliczError, OrliczFunction};

pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_BRACKET_STEPS: usize = 2100;
const MAX_BISECTION_ITERS: usize = 400;
const MAX_GOLDEN_ITERS: usize = 200;
/// Amemiya search stops moving right once `k·μ₀(x)` passes this (linear-growth φ).
const AMEMIYA_K_CEILING: f64 = 1e15;
const INV_GOLDEN: f64 = 0.618_033_988_749_894_9;
/// Aligned witnesses are scanned over `k ∈ [k*/SPAN, k*·SPAN]`.
const ALIGNED_SPAN: f64 = 100.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Orlicz(#[from] OrliczError),
    #[error("bracket failure: {0}")]
    BracketFailure(String),
    #[error("conjugate unavailable: {0}")]
    ConjugateUnavailable(String),
    #[error("infeasible witness: ψ-modular {0} exceeds 1")]
    InfeasibleWitness(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, NormError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    Luxemburg,
    Amemiya,
    OrliczSup,
    PNorm,
}

/// A norm value with solver diagnostics.
///
/// `bracket` is the final λ-bracket for Luxemburg, the final k-bracket for
/// Amemiya and `(lower estimate, Amemiya upper bound)` for the sup form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub value: f64,
    pub method: NormMethod,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimizer_k: Option<f64>,
}

impl NormReport {
    fn zero(method: NormMethod) -> Self {
        NormReport { value: 0.0, method, bracket: (0.0, 0.0), iterations: 0, residual: 0.0, minimizer_k: None }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(NormError::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    Ok(())
}

/// `Σ wⱼ·φ(sⱼ)` over arbitrary `(level, width)` pairs.
fn levels_modular(phi: &OrliczFunction, levels: &[(f64, f64)], scale: f64) -> f64 {
    levels.iter().map(|&(s, w)| w * phi.eval_unchecked(scale * s)).sum()
}

fn profile_levels(profile: &SingularValueProfile) -> Vec<(f64, f64)> {
    profile.steps().iter().map(|s| (s.level, s.width)).collect()
}

/// `ρ_φ(x) = τ(φ(|x|)) = Σ wⱼ·φ(sⱼ)`; `+∞` once a level leaves φ's domain.
pub fn modular(phi: &OrliczFunction, x: &BlockOperator) -> Result<f64> {
    Ok(profile_modular(phi, &singular_value_profile(x)?))
}

pub fn profile_modular(phi: &OrliczFunction, profile: &SingularValueProfile) -> f64 {
    profile.integrate(|s| phi.eval_unchecked(s))
}

pub fn luxemburg_norm(phi: &OrliczFunction, x: &BlockOperator, tol: f64) -> Result<NormReport> {
    luxemburg_norm_profile(phi, &singular_value_profile(x)?, tol)
}

/// `inf{λ > 0 : ρ(x/λ) ≤ 1}` by bisection on λ.
pub fn luxemburg_norm_profile(phi: &OrliczFunction, profile: &SingularValueProfile, tol: f64) -> Result<NormReport> {
    luxemburg_of_levels(phi, &profile_levels(profile), tol)
}

fn luxemburg_of_levels(phi: &OrliczFunction, levels: &[(f64, f64)], tol: f64) -> Result<NormReport> {
    check_tol(tol)?;
    let levels: Vec<(f64, f64)> = levels.iter().copied().filter(|&(s, w)| s > 0.0 && w > 0.0).collect();
    if levels.is_empty() {
        return Ok(NormReport::zero(NormMethod::Luxemburg));
    }
    let s_max = levels.iter().map(|l| l.0).fold(0.0, f64::max);
    let w_top: f64 = levels.iter().filter(|l| l.0 == s_max).map(|l| l.1).sum();
    let w_total: f64 = levels.iter().map(|l| l.1).sum();
    let rho = |lambda: f64| levels_modular(phi, &levels, 1.0 / lambda);

    // ρ(x/λ) ≥ w_top·φ(s_max/λ) and ≤ w_total·φ(s_max/λ) give the starting bracket
    let mut lo = phi.inverse(1.0 / w_top).ok().filter(|u| *u > 0.0).map_or(s_max, |u| s_max / u);
    let mut hi = phi.inverse(1.0 / w_total).ok().filter(|u| *u > 0.0).map_or(s_max, |u| s_max / u).max(lo);
    let mut steps = 0;
    while rho(lo) <= 1.0 {
        lo *= 0.5;
        steps += 1;
        if steps > MAX_BRACKET_STEPS || lo == 0.0 {
            return Err(NormError::BracketFailure("modular never exceeds 1".into()));
        }
    }
    while rho(hi) > 1.0 {
        hi *= 2.0;
        steps += 1;
        if steps > MAX_BRACKET_STEPS || !hi.is_finite() {
            return Err(NormError::BracketFailure("modular never drops to 1".into()));
        }
    }

    // invariant: ρ(x/lo) > 1 ≥ ρ(x/hi)
    let mut value = hi;
    let mut iterations = 0;
    while iterations < MAX_BISECTION_ITERS {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            value = hi;
            break;
        }
        let r = rho(mid);
        if r > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (r - 1.0).abs() <= tol {
            value = mid;
            break;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            value = hi;
            break;
        }
        value = hi;
    }
    let residual = (rho(value) - 1.0).abs();
    Ok(NormReport {
        value,
        method: NormMethod::Luxemburg,
        bracket: (lo.min(value), hi.max(value)),
        iterations,
        residual,
        minimizer_k: None,
    })
}

/// `(τ|x|ᵖ)^{1/p}`.
pub fn p_norm(x: &BlockOperator, p: f64) -> Result<f64> {
    p_norm_profile(&singular_value_profile(x)?, p)
}

pub fn p_norm_profile(profile: &SingularValueProfile, p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(NormError::InvalidParameter(format!("exponent {p} must be ≥ 1")));
    }
    Ok(profile.integrate(|s| s.powf(p)).powf(1.0 / p))
}

pub fn amemiya_norm(phi: &OrliczFunction, x: &BlockOperator, tol: f64) -> Result<NormReport> {
    amemiya_norm_profile(phi, &singular_value_profile(x)?, tol)
}

/// `inf_{k>0} (1 + ρ(kx))/k` by golden-section search on `ln k`.
///
/// The objective is quasi-convex in k (convexity of `k ↦ ρ(kx)`), hence unimodal in `ln k`.
pub fn amemiya_norm_profile(phi: &OrliczFunction, profile: &SingularValueProfile, tol: f64) -> Result<NormReport> {
    amemiya_of_levels(phi, &profile_levels(profile), tol)
}

fn amemiya_of_levels(phi: &OrliczFunction, levels: &[(f64, f64)], tol: f64) -> Result<NormReport> {
    check_tol(tol)?;
    let levels: Vec<(f64, f64)> = levels.iter().copied().filter(|&(s, w)| s > 0.0 && w > 0.0).collect();
    if levels.is_empty() {
        return Ok(NormReport::zero(NormMethod::Amemiya));
    }
    let s_max = levels.iter().map(|l| l.0).fold(0.0, f64::max);
    let w_total: f64 = levels.iter().map(|l| l.1).sum();
    let objective = |t: f64| {
        let k = t.exp();
        (1.0 + levels_modular(phi, &levels, k)) / k
    };
    let t_ceiling = (AMEMIYA_K_CEILING / s_max).ln();
    let mut evaluations = 0usize;
    let mut best = (f64::INFINITY, 0.0);
    let mut eval = |t: f64| {
        evaluations += 1;
        let v = objective(t);
        if v < best.0 {
            best = (v, t);
        }
        v
    };

    let start = phi.inverse(1.0 / w_total).ok().filter(|u| *u > 0.0).map_or(1.0 / s_max, |u| u / s_max).ln();
    let (mut a, mut b) = (start - 1.0, start);
    let (mut fa, mut fb) = (eval(a), eval(b));
    let mut step = 1.0;
    // walk left while the objective keeps decreasing
    while fa < fb {
        step *= 2.0;
        b = a;
        fb = fa;
        a = b - step;
        fa = eval(a);
        if a < -1400.0 {
            return Err(NormError::BracketFailure("Amemiya objective decreases as k → 0".into()));
        }
    }
    let mut c = b + step.min(1.0);
    let mut fc = eval(c);
    let mut step = c - b;
    let mut saturated = false;
    while fc < fb {
        a = b;
        b = c;
        fb = fc;
        step *= 2.0;
        c = b + step;
        if c >= t_ceiling {
            c = t_ceiling;
            fc = eval(c);
            if fc <= fb {
                saturated = true;
            }
            break;
        }
        fc = eval(c);
    }

    let mut iterations = 0;
    if !saturated {
        let mut x1 = c - INV_GOLDEN * (c - a);
        let mut x2 = a + INV_GOLDEN * (c - a);
        let mut f1 = eval(x1);
        let mut f2 = eval(x2);
        while iterations < MAX_GOLDEN_ITERS && c - a > tol {
            iterations += 1;
            if f1 <= f2 {
                c = x2;
                x2 = x1;
                f2 = f1;
                x1 = c - INV_GOLDEN * (c - a);
                f1 = eval(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + INV_GOLDEN * (c - a);
                f2 = eval(x2);
            }
        }
    }
    let (value, t_best) = best;
    if !value.is_finite() {
        return Err(NormError::BracketFailure("Amemiya objective is infinite everywhere".into()));
    }
    Ok(NormReport {
        value,
        method: NormMethod::Amemiya,
        bracket: (a.exp(), c.exp()),
        iterations: iterations.max(evaluations),
        residual: if saturated { 1.0 / t_ceiling.exp() } else { (c - a).abs() },
        minimizer_k: Some(t_best.exp()),
    })
}

/// The conjugate used by the pairing routines: closed form when available, tabulated otherwise.
pub fn pairing_conjugate(phi: &OrliczFunction) -> Result<OrliczFunction> {
    if let Some(psi) = exact_conjugate(phi) {
        return Ok(psi);
    }
    conjugate(phi, &ConjugateGrid::default())
        .map(|t| t.psi)
        .map_err(|e| NormError::ConjugateUnavailable(e.to_string()))
}

/// `τ(|xy|)`.
pub fn pairing_trace(x: &BlockOperator, y: &BlockOperator) -> Result<f64> {
    Ok(spectrum_abs(&x.mul(y)?)?.iter().map(|&(s, c)| c * s).sum())
}

/// Lower estimate of `‖x‖° = sup{τ(|xy|) : ρ_ψ(y) ≤ 1}`.
///
/// Witnesses are (a) `y = β·p(k|x|)` aligned with the singular vectors of `x`,
/// scanned over k around the Amemiya minimizer and (b) seeded random PSD operators.
/// Each witness is scaled so that `ρ_ψ(y) = 1`.
pub fn orlicz_norm_sup(phi: &OrliczFunction, x: &BlockOperator, witnesses: usize, seed: u64) -> Result<NormReport> {
    let psi = pairing_conjugate(phi)?;
    orlicz_norm_sup_with(phi, &psi, x, witnesses, seed)
}

pub fn orlicz_norm_sup_with(
    phi: &OrliczFunction,
    psi: &OrliczFunction,
    x: &BlockOperator,
    witnesses: usize,
    seed: u64,
) -> Result<NormReport> {
    if witnesses == 0 {
        return Err(NormError::InvalidParameter("at least one witness is required".into()));
    }
    let profile = singular_value_profile(x)?;
    if profile.is_empty() {
        return Ok(NormReport::zero(NormMethod::OrliczSup));
    }
    let upper = amemiya_norm_profile(phi, &profile, DEFAULT_TOL)?;
    let k_star = upper.minimizer_k.unwrap_or(1.0 / profile.max_level());
    let levels = profile_levels(&profile);

    let mut best = 0.0_f64;
    let mut best_residual = 0.0;
    let mut evaluated = 0;
    let mut ks = vec![k_star];
    if witnesses > 1 {
        let (lo, hi) = ((k_star / ALIGNED_SPAN).ln(), (k_star * ALIGNED_SPAN).ln());
        ks.extend((0..witnesses).map(|i| (lo + (hi - lo) * i as f64 / (witnesses - 1) as f64).exp()));
    }
    for k in ks {
        let y: Vec<(f64, f64)> = levels
            .iter()
            .map(|&(s, w)| {
                let u = k * s;
                let d = if u < phi.domain_max() { phi.derivative_unchecked(u) } else { 0.0 };
                (d, w)
            })
            .collect();
        let lux = luxemburg_of_levels(psi, &y, DEFAULT_TOL)?;
        if lux.value == 0.0 {
            continue;
        }
        evaluated += 1;
        let pairing: f64 = levels.iter().zip(&y).map(|(&(s, w), &(d, _))| w * s * d).sum::<f64>() / lux.value;
        if pairing > best {
            best = pairing;
            best_residual = lux.residual;
        }
    }
    for i in 0..witnesses {
        let y = random_operator(x.shape(), &Ensemble::PsdWishart, derive_seed(seed, i as u64))?;
        let lux = luxemburg_norm(psi, &y, DEFAULT_TOL)?;
        if lux.value == 0.0 {
            continue;
        }
        evaluated += 1;
        let pairing = pairing_trace(x, &y)? / lux.value;
        if pairing > best {
            best = pairing;
            best_residual = lux.residual;
        }
    }
    Ok(NormReport {
        value: best,
        method: NormMethod::OrliczSup,
        bracket: (best, upper.value),
        iterations: evaluated,
        residual: best_residual,
        minimizer_k: Some(k_star),
    })
}

/// `(τ(|xy|), ‖x‖_Amemiya)` for a ψ-feasible `y`; Hölder–Young gives `lhs ≤ rhs`.
pub fn holder_pairing(
    phi: &OrliczFunction,
    psi: &OrliczFunction,
    x: &BlockOperator,
    y: &BlockOperator,
) -> Result<(f64, f64)> {
    let rho_y = modular(psi, y)?;
    if rho_y > 1.0 + 1e-12 {
        return Err(NormError::InfeasibleWitness(rho_y));
    }
    let lhs = pairing_trace(x, y)?;
    let rhs = amemiya_norm(phi, x, DEFAULT_TOL)?.value;
    Ok((lhs, rhs))
}
