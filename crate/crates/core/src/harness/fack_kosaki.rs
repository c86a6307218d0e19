//! Randomized battery for the singular value inequalities used throughout:
//! `μ_{t+s}(x+y) ≤ μ_t(x) + μ_s(y)`, unitary invariance, the trace formula
//! `τ(φ(|x|)) = ∫ φ(μ_t(x)) dt` and convexity of `∫ φ(μ_t(·)) dt` along the
//! rearranged segment. Violations are normalized by `max(1, magnitude)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Result;
use crate::operator::{
    derive_seed, random_operator, random_unitary, singular_value_profile, AlgebraShape, BlockOperator, Ensemble,
    SingularValueProfile,
};
use crate::orlicz::OrliczFunction;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FackKosakiReport {
    pub trials: usize,
    pub subadditivity: f64,
    pub unitary_invariance: f64,
    pub trace_formula: f64,
    pub convexity: f64,
}

impl FackKosakiReport {
    pub fn max_violation(&self) -> f64 {
        self.subadditivity.max(self.unitary_invariance).max(self.trace_formula).max(self.convexity)
    }
}

/// One to three blocks of dimension 1–4 with weights in `[0.25, 2)`.
pub fn random_pair_shape(rng: &mut impl Rng) -> AlgebraShape {
    let blocks = rng.random_range(1..=3);
    let pairs: Vec<(usize, f64)> =
        (0..blocks).map(|_| (rng.random_range(1..=4), rng.random_range(0.25..2.0))).collect();
    AlgebraShape::from_pairs(&pairs).expect("positive dims and weights")
}

/// Relative gap between `Σ wⱼφ(sⱼ)` and `τ(φ(|x|))` by spectral calculus on `|x|`.
pub fn trace_formula_violation(phi: &OrliczFunction, x: &BlockOperator) -> Result<f64> {
    let via_profile = singular_value_profile(x)?.integrate(|s| phi.eval_unchecked(s));
    let direct = x.abs()?.hermitian_apply(|s| phi.eval_unchecked(s.max(0.0)))?.trace().re;
    Ok((via_profile - direct).abs() / direct.abs().max(f64::MIN_POSITIVE))
}

fn battery_phis() -> [OrliczFunction; 4] {
    [
        OrliczFunction::power(1.5).expect("valid"),
        OrliczFunction::power(2.0).expect("valid"),
        OrliczFunction::power(3.0).expect("valid"),
        OrliczFunction::exp_minus_one(),
    ]
}

/// Midpoints of the intervals cut by the breakpoints of both profiles.
fn merged_midpoints(a: &SingularValueProfile, b: &SingularValueProfile) -> Vec<(f64, f64)> {
    let mut cuts = vec![0.0];
    cuts.extend(a.breakpoints());
    cuts.extend(b.breakpoints());
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2).filter(|w| w[1] > w[0]).map(|w| (0.5 * (w[0] + w[1]), w[1] - w[0])).collect()
}

pub fn fack_kosaki_suite(trials: usize, seed: u64) -> Result<FackKosakiReport> {
    let phis = battery_phis();
    let mut report = FackKosakiReport { trials, subadditivity: 0.0, unitary_invariance: 0.0, trace_formula: 0.0, convexity: 0.0 };
    for i in 0..trials {
        let trial_seed = derive_seed(seed, i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        let shape = random_pair_shape(&mut rng);
        let sigma_x = rng.random_range(0.1..2.0);
        let sigma_y = rng.random_range(0.1..2.0);
        let x = random_operator(&shape, &Ensemble::GaussianComplex { sigma: sigma_x }, rng.random())?;
        let y = random_operator(&shape, &Ensemble::GaussianComplex { sigma: sigma_y }, rng.random())?;
        let px = singular_value_profile(&x)?;
        let py = singular_value_profile(&y)?;
        let pxy = singular_value_profile(&x.add(&y)?)?;

        let total = shape.total_trace();
        let mut probes = vec![(0.0, 0.0)];
        probes.extend((0..4).map(|_| (rng.random_range(0.0..total), rng.random_range(0.0..total))));
        for (t, s) in probes {
            let rhs = px.mu_at(t) + py.mu_at(s);
            let gap = (pxy.mu_at(t + s) - rhs) / rhs.max(1.0);
            report.subadditivity = report.subadditivity.max(gap);
        }

        let u = random_unitary(&shape, rng.random());
        let v = random_unitary(&shape, rng.random());
        let rotated = singular_value_profile(&u.mul(&x)?.mul(&v)?)?;
        for (mid, _) in merged_midpoints(&px, &rotated) {
            let a = px.mu_at(mid);
            let gap = (rotated.mu_at(mid) - a).abs() / a.max(1.0);
            report.unitary_invariance = report.unitary_invariance.max(gap);
        }

        let phi = &phis[i % phis.len()];
        report.trace_formula = report.trace_formula.max(trace_formula_violation(phi, &x)?);

        let a: f64 = rng.random_range(0.0..=1.0);
        let lhs: f64 = merged_midpoints(&px, &py)
            .iter()
            .map(|&(mid, len)| len * phi.eval_unchecked(a * px.mu_at(mid) + (1.0 - a) * py.mu_at(mid)))
            .sum();
        let rhs = a * px.integrate(|s| phi.eval_unchecked(s)) + (1.0 - a) * py.integrate(|s| phi.eval_unchecked(s));
        report.convexity = report.convexity.max((lhs - rhs) / rhs.max(1.0));
    }
    Ok(report)
}
