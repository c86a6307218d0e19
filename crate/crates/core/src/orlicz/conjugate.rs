//! Complementary (Young-conjugate) functions `ψ(u) = sup{uv − φ(v) : v ≥ 0}`.

use serde::{Deserialize, Serialize};

use super::{Delta2Hint, OrliczError, OrliczFunction, OrliczKind, Result};

const MAX_BRACKET_V: f64 = 1e300;
const STATIONARITY_ITERS: usize = 200;
const GOLDEN_ITERS: usize = 80;
const INV_GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Log-spaced abscissae for tabulating ψ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjugateGrid {
    pub u_min: f64,
    pub u_max: f64,
    pub count: usize,
}

impl Default for ConjugateGrid {
    fn default() -> Self {
        ConjugateGrid { u_min: 1e-6, u_max: 1e6, count: 512 }
    }
}

impl ConjugateGrid {
    pub fn new(u_min: f64, u_max: f64, count: usize) -> Result<Self> {
        let grid = ConjugateGrid { u_min, u_max, count };
        grid.validate()?;
        Ok(grid)
    }

    fn validate(&self) -> Result<()> {
        if !(self.u_min > 0.0 && self.u_max > self.u_min && self.u_max.is_finite()) {
            return Err(OrliczError::DegenerateGrid(format!(
                "need 0 < u_min < u_max < ∞, got ({}, {})",
                self.u_min, self.u_max
            )));
        }
        if self.count < 2 {
            return Err(OrliczError::DegenerateGrid(format!("count {} < 2", self.count)));
        }
        Ok(())
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        self.validate()?;
        Ok(log_space(self.u_min, self.u_max, self.count))
    }

    /// Same range with every log-interval halved.
    pub fn doubled(&self) -> Self {
        ConjugateGrid { count: 2 * self.count - 1, ..*self }
    }
}

pub(crate) fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (count - 1) as f64;
    (0..count)
        .map(|i| match i {
            0 => lo,
            i if i == count - 1 => hi,
            i => (a + step * i as f64).exp(),
        })
        .collect()
}

/// A tabulated ψ together with its estimated relative tabulation error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedConjugate {
    pub psi: OrliczFunction,
    /// `max |ψ_table(u) − ψ(u)| / max(1, ψ(u))` over the midpoints of the doubled grid.
    pub eps_tab: f64,
    pub grid: ConjugateGrid,
}

impl TabulatedConjugate {
    /// Absolute slack to allow at a ψ-value of size `value`.
    pub fn slack(&self, value: f64) -> f64 {
        self.eps_tab * value.abs().max(1.0)
    }
}

/// Pointwise `ψ(u) = sup_{v ≥ 0} (uv − φ(v))`.
///
/// The maximizer is bracketed on the stationarity condition `p(v) ≥ u`, narrowed
/// by bisection and finished with a golden-section search on the concave objective.
pub fn conjugate_value(phi: &OrliczFunction, u: f64) -> Result<f64> {
    if u < 0.0 || u.is_nan() {
        return Err(OrliczError::NegativeArgument(u));
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    if let OrliczKind::Tabulated { knots } = phi.kind() {
        if phi.domain_max().is_infinite() {
            let n = knots.len();
            let last = (knots[n - 1][1] - knots[n - 2][1]) / (knots[n - 1][0] - knots[n - 2][0]);
            if u > last {
                return Err(OrliczError::ConjugateDiverges { u });
            }
        }
    }
    let dmax = phi.domain_max();
    let slope = |v: f64| phi.derivative_unchecked(v);
    let objective = |v: f64| u * v - phi.eval_unchecked(v);

    if slope(0.0) >= u {
        return Ok(0.0);
    }
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64.min(dmax);
    // dmax acts as a hard wall: the maximizer sits there if p stays below u
    while hi < dmax && slope(hi) < u {
        lo = hi;
        hi = (2.0 * hi).min(dmax);
        if hi > MAX_BRACKET_V {
            return Err(OrliczError::ConjugateDiverges { u });
        }
    }
    for _ in 0..STATIONARITY_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) >= u {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let best = golden_max(&objective, lo, hi).max(objective(lo)).max(objective(hi));
    if !best.is_finite() {
        return Err(OrliczError::ConjugateDiverges { u });
    }
    Ok(best.max(0.0))
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut c = b - INV_GOLDEN * (b - a);
    let mut d = a + INV_GOLDEN * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..GOLDEN_ITERS {
        if b - a <= f64::EPSILON * b.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_GOLDEN * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

/// Tabulates ψ on `grid`. `ψ(0) = 0` is always the first knot; the error bound is
/// estimated against exact values at the midpoints of the doubled grid.
pub fn conjugate(phi: &OrliczFunction, grid: &ConjugateGrid) -> Result<TabulatedConjugate> {
    let points = grid.points()?;
    let mut knots = Vec::with_capacity(points.len() + 1);
    knots.push([0.0, 0.0]);
    for &u in &points {
        knots.push([u, conjugate_value(phi, u)?]);
    }
    let psi = OrliczFunction::tabulated(knots)?.with_delta2_hint(Delta2Hint::Unknown);

    let fine = grid.doubled().points()?;
    let mut eps_tab = 0.0_f64;
    for &u in fine.iter().skip(1).step_by(2) {
        let exact = conjugate_value(phi, u)?;
        let table = psi.eval_unchecked(u);
        eps_tab = eps_tab.max((table - exact).abs() / exact.abs().max(1.0));
    }
    Ok(TabulatedConjugate { psi, eps_tab, grid: *grid })
}

/// Closed-form conjugate where one exists: `c·uᵖ` (p > 1) has conjugate
/// `(p − 1)·c·(v/(c·p))^q` with `1/p + 1/q = 1`.
pub fn exact_conjugate(phi: &OrliczFunction) -> Option<OrliczFunction> {
    if phi.domain_max().is_finite() {
        return None;
    }
    match *phi.kind() {
        OrliczKind::Power { p, scale } if p > 1.0 => {
            let q = p / (p - 1.0);
            let coeff = (p - 1.0) * scale * (scale * p).powf(-q);
            OrliczFunction::scaled_power(q, coeff).ok()
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orlicz::young_gap;

    /// Brute-force `sup_v (uv − φ(v))` over a uniform v-grid on `[0, v_max]`.
    fn grid_sup(phi: &OrliczFunction, u: f64, v_max: f64, n: usize) -> f64 {
        (0..=n)
            .map(|i| {
                let v = v_max * i as f64 / n as f64;
                u * v - phi.eval(v).unwrap()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn probe_values_match_grid_oracle() {
        let half_sq = OrliczFunction::scaled_power(2.0, 0.5).unwrap();
        let oracle = grid_sup(&half_sq, 3.0, 10.0, 200_000);
        assert!((oracle - 4.5).abs() < 1e-8);
        assert!((conjugate_value(&half_sq, 3.0).unwrap() - 4.5).abs() < 1e-12);
        assert_eq!(conjugate_value(&half_sq, 0.0).unwrap(), 0.0);

        let cube = OrliczFunction::scaled_power(3.0, 1.0 / 3.0).unwrap();
        let oracle = grid_sup(&cube, 1.0, 4.0, 400_000);
        assert!((oracle - 2.0 / 3.0).abs() < 1e-9);
        assert!((conjugate_value(&cube, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn expm1_conjugate_closed_form() {
        // ψ(v) = v ln v − v + 1 for v ≥ 1, zero below
        let e = OrliczFunction::exp_minus_one();
        for v in [0.5f64, 1.0, 2.0, 10.0, 1e4] {
            let expected = if v <= 1.0 { 0.0 } else { v * v.ln() - v + 1.0 };
            let got = conjugate_value(&e, v).unwrap();
            assert!((got - expected).abs() <= 1e-12 * expected.max(1.0), "v={v} got={got}");
        }
    }

    #[test]
    fn tabulated_conjugate_probe_within_eps() {
        let half_sq = OrliczFunction::scaled_power(2.0, 0.5).unwrap();
        let tab = conjugate(&half_sq, &ConjugateGrid::default()).unwrap();
        assert!(tab.eps_tab > 0.0 && tab.eps_tab < 2e-3, "eps_tab={}", tab.eps_tab);
        let probe = tab.psi.eval(3.0).unwrap();
        assert!((probe - 4.5).abs() <= tab.slack(4.5));
        assert_eq!(tab.psi.eval(0.0).unwrap(), 0.0);
    }

    #[test]
    fn linear_phi_diverges() {
        let lin = OrliczFunction::power(1.0).unwrap();
        assert_eq!(conjugate_value(&lin, 0.5).unwrap(), 0.0);
        assert!(matches!(conjugate_value(&lin, 2.0), Err(OrliczError::ConjugateDiverges { .. })));
        assert!(matches!(
            conjugate(&lin, &ConjugateGrid::default()),
            Err(OrliczError::ConjugateDiverges { .. })
        ));
        let t = OrliczFunction::tabulated(vec![[0.0, 0.0], [1.0, 1.0], [2.0, 3.0]]).unwrap();
        assert!(matches!(conjugate_value(&t, 2.5), Err(OrliczError::ConjugateDiverges { .. })));
        // at the last slope the sup is attained along the whole tail
        assert!((conjugate_value(&t, 2.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bounded_domain_caps_the_maximizer() {
        let phi = OrliczFunction::power(2.0).unwrap().with_domain_max(1.0).unwrap();
        // p(v) = 2v < 5 on [0, 1], so ψ(5) = 5·1 − 1
        assert!((conjugate_value(&phi, 5.0).unwrap() - 4.0).abs() < 1e-12);
        assert!((conjugate_value(&phi, 1.0).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn exact_conjugate_of_powers() {
        for (p, c) in [(2.0, 0.5), (3.0, 1.0 / 3.0), (1.5, 1.0), (2.0, 1.0), (4.0, 2.5)] {
            let phi = OrliczFunction::scaled_power(p, c).unwrap();
            let psi = exact_conjugate(&phi).unwrap();
            for v in [0.1, 0.7, 2.0, 9.0] {
                let num = conjugate_value(&phi, v).unwrap();
                let ex = psi.eval(v).unwrap();
                assert!((num - ex).abs() <= 1e-11 * ex.max(1.0), "p={p} v={v}: {num} vs {ex}");
            }
        }
        assert!(exact_conjugate(&OrliczFunction::power(1.0).unwrap()).is_none());
        assert!(exact_conjugate(&OrliczFunction::exp_minus_one()).is_none());
    }

    #[test]
    fn young_equality_at_derivative_pairs() {
        for phi in [
            OrliczFunction::scaled_power(2.0, 0.5).unwrap(),
            OrliczFunction::power(1.5).unwrap(),
            OrliczFunction::exp_minus_one(),
            OrliczFunction::power_log(2.0).unwrap(),
        ] {
            let tab = conjugate(&phi, &ConjugateGrid::default()).unwrap();
            for u in [0.01, 0.3, 1.0, 2.5, 7.0] {
                let v = phi.right_derivative(u).unwrap();
                let gap = young_gap(&phi, &tab.psi, u, v).unwrap();
                let psi_v = tab.psi.eval(v).unwrap();
                assert!(gap.abs() <= tab.slack(psi_v) + 1e-12, "{} u={u} gap={gap}", phi.label());
            }
        }
    }

    #[test]
    fn biconjugate_recovers_phi() {
        let grid = ConjugateGrid::new(1e-3, 1e2, 512).unwrap();
        for phi in [
            OrliczFunction::scaled_power(2.0, 0.5).unwrap(),
            OrliczFunction::power(3.0).unwrap(),
            OrliczFunction::power_log(1.5).unwrap(),
        ] {
            let once = conjugate(&phi, &ConjugateGrid::default()).unwrap();
            let twice = conjugate(&once.psi, &grid).unwrap();
            let bound = 10.0 * once.eps_tab.max(twice.eps_tab);
            for u in log_space(1e-2, 1e2, 41) {
                let f = phi.eval(u).unwrap();
                let g = twice.psi.eval(u).unwrap();
                assert!((f - g).abs() <= bound * f.max(1.0), "{} u={u}: {f} vs {g}", phi.label());
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn young_inequality_holds(p in 1.2f64..4.0, c in 0.2f64..3.0, u in 0.0f64..20.0, v in 0.0f64..20.0) {
                let phi = OrliczFunction::scaled_power(p, c).unwrap();
                let psi = conjugate_value(&phi, v).unwrap();
                let gap = phi.eval(u).unwrap() + psi - u * v;
                prop_assert!(gap >= -1e-10 * (u * v).max(1.0));
            }

            #[test]
            fn conjugation_reverses_order(p in 1.2f64..4.0, c1 in 0.2f64..3.0, bump in 0.0f64..2.0, v in 0.0f64..30.0) {
                let lo = OrliczFunction::scaled_power(p, c1).unwrap();
                let hi = OrliczFunction::scaled_power(p, c1 + bump).unwrap();
                let psi_lo = conjugate_value(&lo, v).unwrap();
                let psi_hi = conjugate_value(&hi, v).unwrap();
                prop_assert!(psi_lo >= psi_hi - 1e-10 * psi_lo.max(1.0));
            }
        }
    }
}
