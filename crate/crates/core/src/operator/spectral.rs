//! Weighted singular values, the generalized singular value function `μ_t(x)`,
//! the distribution function `s ↦ τ(e_{(s,∞)}(|x|))` and the measure gauge.

use serde::{Deserialize, Serialize};

use nalgebra::SymmetricEigen;

use super::{Block, BlockOperator, OperatorError, Result, C64};

/// Singular values closer than this are merged into one level; levels at or
/// below it are treated as zero.
pub const MERGE_TOL: f64 = 1e-12;

const EIGEN_MAX_ITERS: usize = 10_000;
const RESIDUAL_TOL: f64 = 1e-10;
const HERMITIAN_SLACK: f64 = 1e-14;

/// One step of μ: the value `level` on an interval of length `width`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub level: f64,
    pub width: f64,
}

/// Decreasing right-continuous step function `t ↦ μ_t(x)` on `[0, ∞)`.
///
/// Levels are strictly decreasing and positive; `μ_t = 0` past `total_width()`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SingularValueProfile {
    steps: Vec<Step>,
}

impl SingularValueProfile {
    /// Groups `(σ, weight)` pairs into steps: sort descending, merge levels within
    /// [`MERGE_TOL`] of the group's leading value, drop zero levels.
    pub fn from_spectrum(entries: &[(f64, f64)]) -> Self {
        let mut sorted: Vec<(f64, f64)> = entries.to_vec();
        sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut steps: Vec<Step> = Vec::new();
        for (sigma, weight) in sorted {
            if sigma <= MERGE_TOL {
                break;
            }
            match steps.last_mut() {
                Some(last) if last.level - sigma <= MERGE_TOL => last.width += weight,
                _ => steps.push(Step { level: sigma, width: weight }),
            }
        }
        SingularValueProfile { steps }
    }

    pub fn from_steps(steps: Vec<Step>) -> Result<Self> {
        for (i, s) in steps.iter().enumerate() {
            if !(s.level > 0.0 && s.level.is_finite() && s.width > 0.0 && s.width.is_finite()) {
                return Err(OperatorError::InvalidArgument(format!("step {i} must have positive finite level and width")));
            }
            if i > 0 && s.level >= steps[i - 1].level {
                return Err(OperatorError::InvalidArgument(format!("levels must strictly decrease at step {i}")));
            }
        }
        Ok(SingularValueProfile { steps })
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Trace of the support projection of `|x|`.
    pub fn total_width(&self) -> f64 {
        self.steps.iter().map(|s| s.width).sum()
    }

    /// `μ_0(x) = ‖x‖_∞`.
    pub fn max_level(&self) -> f64 {
        self.steps.first().map_or(0.0, |s| s.level)
    }

    /// Right-continuous evaluation of `μ_t`.
    pub fn mu_at(&self, t: f64) -> f64 {
        let mut edge = 0.0;
        for s in &self.steps {
            edge += s.width;
            if t < edge {
                return s.level;
            }
        }
        0.0
    }

    /// `Σ {width : level > s}`.
    pub fn distribution(&self, s: f64) -> f64 {
        self.steps.iter().filter(|st| st.level > s).map(|st| st.width).sum()
    }

    /// Right endpoints of the steps (cumulative widths).
    pub fn breakpoints(&self) -> Vec<f64> {
        self.steps
            .iter()
            .scan(0.0, |acc, s| {
                *acc += s.width;
                Some(*acc)
            })
            .collect()
    }

    /// `∫₀^∞ f(μ_t) dt = Σ wⱼ·f(sⱼ)`, exact for `f(0) = 0`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.steps.iter().map(|s| s.width * f(s.level)).sum()
    }

    /// Profile of `α·x`.
    pub fn scaled(&self, alpha: f64) -> Self {
        let a = alpha.abs();
        if a == 0.0 {
            return SingularValueProfile::default();
        }
        SingularValueProfile {
            steps: self.steps.iter().map(|s| Step { level: a * s.level, width: s.width }).collect(),
        }
    }
}

/// Singular values of every block, each tagged with the block's trace weight.
///
/// Each right singular vector is checked against `‖x*x v − σ²v‖ ≤ 1e−8·‖x‖²`.
pub fn spectrum_abs(x: &BlockOperator) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for (k, (m, spec)) in x.blocks().iter().zip(x.shape().blocks()).enumerate() {
        let amax = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if amax == 0.0 {
            out.extend(std::iter::repeat_n((0.0, spec.weight), spec.dim));
            continue;
        }
        let unit = m.unscale(amax);
        let n = spec.dim;
        let hermitian = (&unit - unit.adjoint()).norm() <= HERMITIAN_SLACK * unit.norm();
        // singular values come from a Hermitian eigensolve: |λ| directly, or the
        // positive half of the spectrum of [[0, a], [a*, 0]]
        let h = if hermitian {
            let mut h = unit.clone();
            h += unit.adjoint();
            h.unscale(2.0)
        } else {
            let mut d = Block::zeros(2 * n, 2 * n);
            d.view_mut((0, n), (n, n)).copy_from(&unit);
            d.view_mut((n, 0), (n, n)).copy_from(&unit.adjoint());
            d
        };
        let eig = SymmetricEigen::try_new(h.clone(), f64::EPSILON, EIGEN_MAX_ITERS)
            .ok_or_else(|| OperatorError::NumericalFailure(format!("eigensolver did not converge on block {k}")))?;
        let scale = h.norm().max(f64::MIN_POSITIVE);
        for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
            let v = eig.eigenvectors.column(i);
            let residual = (&h * v - v * C64::new(lambda, 0.0)).norm();
            if residual > RESIDUAL_TOL * scale {
                return Err(OperatorError::NumericalFailure(format!(
                    "eigenpair {i} on block {k} has residual {residual:e}"
                )));
            }
        }
        let mut sigma: Vec<f64> = eig.eigenvalues.iter().map(|l| l.abs()).collect();
        if !hermitian {
            // eigenvalues pair up as ±σ; keep the larger half
            sigma.sort_by(|a, b| b.total_cmp(a));
            sigma = sigma.chunks(2).map(|c| 0.5 * (c[0] + c[1])).collect();
        }
        out.extend(sigma.into_iter().map(|s| (s * amax, spec.weight)));
    }
    Ok(out)
}

pub fn singular_value_profile(x: &BlockOperator) -> Result<SingularValueProfile> {
    Ok(SingularValueProfile::from_spectrum(&spectrum_abs(x)?))
}

/// `τ(e_{(s,∞)}(|x|))`.
pub fn distribution(x: &BlockOperator, s: f64) -> Result<f64> {
    Ok(singular_value_profile(x)?.distribution(s))
}

/// `μ_t(x) = inf{s ≥ 0 : τ(e_{(s,∞)}(|x|)) ≤ t}`.
pub fn mu_at(x: &BlockOperator, t: f64) -> Result<f64> {
    Ok(singular_value_profile(x)?.mu_at(t))
}

/// `τ(e_{(ε,∞)}(|x − y|))`; a sequence converges in measure iff this vanishes for every `ε > 0`.
pub fn measure_gauge(x: &BlockOperator, y: &BlockOperator, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(OperatorError::InvalidArgument(format!("ε = {eps} must be positive")));
    }
    distribution(&x.sub(y)?, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{random_operator, random_unitary, AlgebraShape, Block, Ensemble, C64};

    fn diag132() -> BlockOperator {
        BlockOperator::diagonal(&[1.0, 3.0, 2.0], 1.0).unwrap()
    }

    fn sorted_spectrum(x: &BlockOperator) -> Vec<(f64, f64)> {
        let mut s = spectrum_abs(x).unwrap();
        s.sort_by(|a, b| b.0.total_cmp(&a.0));
        s
    }

    #[test]
    fn spectrum_examples() {
        let s = sorted_spectrum(&diag132());
        let expected = [(3.0, 1.0), (2.0, 1.0), (1.0, 1.0)];
        for (got, want) in s.iter().zip(expected) {
            assert!((got.0 - want.0).abs() < 1e-14 && got.1 == want.1);
        }
        let zero = BlockOperator::zeros(diag132().shape());
        assert!(spectrum_abs(&zero).unwrap().iter().all(|&(s, _)| s == 0.0));

        // nilpotent [[0,2],[0,0]]: x*x = diag(0, 4)
        let shape = AlgebraShape::single(2, 1.0).unwrap();
        let m = Block::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(2.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]);
        let x = BlockOperator::new(shape, vec![m]).unwrap();
        let s = sorted_spectrum(&x);
        assert!((s[0].0 - 2.0).abs() < 1e-14 && s[1].0.abs() < 1e-14);
    }

    #[test]
    fn profile_examples() {
        let p = singular_value_profile(&diag132()).unwrap();
        let levels: Vec<(f64, f64)> = p.steps().iter().map(|s| (s.level, s.width)).collect();
        assert_eq!(levels.len(), 3);
        for (got, want) in levels.iter().zip([(3.0, 1.0), (2.0, 1.0), (1.0, 1.0)]) {
            assert!((got.0 - want.0).abs() < 1e-14 && got.1 == want.1);
        }

        let shape = AlgebraShape::from_pairs(&[(3, 1.0), (2, 1.0), (4, 0.5)]).unwrap();
        let e = random_operator(&shape, &Ensemble::Projection { ranks: vec![2, 1, 2] }, 5).unwrap();
        let p = singular_value_profile(&e).unwrap();
        assert_eq!(p.steps().len(), 1);
        assert!((p.steps()[0].level - 1.0).abs() < 1e-12);
        assert!((p.total_width() - 4.0).abs() < 1e-12);

        let x = BlockOperator::atomic(&[2.0, 2.0], &[0.5, 1.5]).unwrap();
        let p = singular_value_profile(&x).unwrap();
        assert_eq!(p.steps(), &[Step { level: 2.0, width: 2.0 }]);
    }

    #[test]
    fn distribution_examples() {
        assert_eq!(distribution(&diag132(), 1.5).unwrap(), 2.0);
        assert_eq!(distribution(&diag132(), 3.0).unwrap(), 0.0);
        assert_eq!(distribution(&diag132(), 7.0).unwrap(), 0.0);
        let x = BlockOperator::atomic(&[2.0, 2.0], &[0.5, 1.5]).unwrap();
        assert_eq!(distribution(&x, 1.0).unwrap(), 2.0);
    }

    #[test]
    fn mu_examples() {
        let x = diag132();
        assert!((mu_at(&x, 0.0).unwrap() - 3.0).abs() < 1e-14);
        assert!((mu_at(&x, 1.0).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(mu_at(&x, 3.5).unwrap(), 0.0);
    }

    #[test]
    fn gauge_examples() {
        let x = diag132();
        assert_eq!(measure_gauge(&x, &x, 0.3).unwrap(), 0.0);
        let a = BlockOperator::diagonal(&[1.5, 3.0], 1.0).unwrap();
        let b = BlockOperator::diagonal(&[1.0, 0.0], 1.0).unwrap();
        assert_eq!(measure_gauge(&a, &b, 1.0).unwrap(), 1.0);
        let shape = AlgebraShape::from_pairs(&[(3, 0.7)]).unwrap();
        let e = random_operator(&shape, &Ensemble::Projection { ranks: vec![2] }, 9).unwrap();
        let spike = e.scale(4.0);
        let zero = BlockOperator::zeros(&shape);
        assert!((measure_gauge(&spike, &zero, 1.0).unwrap() - 1.4).abs() < 1e-12);
        assert!(measure_gauge(&spike, &zero, 0.0).is_err());
        let other = BlockOperator::zeros(&AlgebraShape::single(3, 1.0).unwrap());
        assert!(matches!(measure_gauge(&spike, &other, 1.0), Err(OperatorError::ShapeMismatch(_))));
    }

    #[test]
    fn from_steps_validates() {
        assert!(SingularValueProfile::from_steps(vec![Step { level: 2.0, width: 1.0 }, Step { level: 1.0, width: 0.5 }]).is_ok());
        assert!(SingularValueProfile::from_steps(vec![Step { level: 1.0, width: 1.0 }, Step { level: 1.0, width: 0.5 }]).is_err());
        assert!(SingularValueProfile::from_steps(vec![Step { level: 1.0, width: 0.0 }]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn shape_strategy() -> impl Strategy<Value = AlgebraShape> {
            prop::collection::vec((1usize..5, 0.1f64..3.0), 1..4)
                .prop_map(|pairs| AlgebraShape::from_pairs(&pairs).unwrap())
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn galois_connection(shape in shape_strategy(), seed in any::<u64>(), t in 0.0f64..12.0) {
                let x = random_operator(&shape, &Ensemble::GaussianComplex { sigma: 1.0 }, seed).unwrap();
                let p = singular_value_profile(&x).unwrap();
                prop_assert!(p.distribution(p.mu_at(t)) <= t + 1e-12);
            }

            #[test]
            fn scaling(shape in shape_strategy(), seed in any::<u64>(), alpha in -5.0f64..5.0, t in 0.0f64..12.0) {
                prop_assume!(alpha.abs() > 1e-3);
                let x = random_operator(&shape, &Ensemble::GaussianComplex { sigma: 1.0 }, seed).unwrap();
                let a = mu_at(&x.scale(alpha), t).unwrap();
                let b = alpha.abs() * mu_at(&x, t).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300) + 1e-13);
            }

            #[test]
            fn unitary_invariance(shape in shape_strategy(), seed in any::<u64>()) {
                let x = random_operator(&shape, &Ensemble::GaussianComplex { sigma: 1.0 }, seed).unwrap();
                let u = random_unitary(&shape, seed.wrapping_add(1));
                let v = random_unitary(&shape, seed.wrapping_add(2));
                let y = u.mul(&x).unwrap().mul(&v).unwrap();
                let px = sorted_spectrum(&x);
                let py = sorted_spectrum(&y);
                for (a, b) in px.iter().zip(&py) {
                    prop_assert!((a.0 - b.0).abs() <= 1e-9);
                }
            }

            #[test]
            fn subadditivity(shape in shape_strategy(), seed in any::<u64>(), t in 0.0f64..6.0, s in 0.0f64..6.0) {
                let x = random_operator(&shape, &Ensemble::GaussianComplex { sigma: 1.0 }, seed).unwrap();
                let y = random_operator(&shape, &Ensemble::GaussianComplex { sigma: 2.0 }, seed ^ 0xabcd).unwrap();
                let lhs = mu_at(&x.add(&y).unwrap(), t + s).unwrap();
                prop_assert!(lhs <= mu_at(&x, t).unwrap() + mu_at(&y, s).unwrap() + 1e-9);
            }

            #[test]
            fn monotone_in_psd_order(shape in shape_strategy(), seed in any::<u64>(), t in 0.0f64..12.0) {
                let x = random_operator(&shape, &Ensemble::PsdWishart, seed).unwrap();
                let h = random_operator(&shape, &Ensemble::PsdWishart, seed ^ 0x5555).unwrap();
                let y = x.add(&h).unwrap();
                prop_assert!(mu_at(&x, t).unwrap() <= mu_at(&y, t).unwrap() + 1e-9);
            }

            #[test]
            fn trace_formula_two_groupings(shape in shape_strategy(), seed in any::<u64>()) {
                let x = random_operator(&shape, &Ensemble::GaussianComplex { sigma: 1.0 }, seed).unwrap();
                let phi = |s: f64| s.powf(1.5) + s * s;
                let raw: f64 = spectrum_abs(&x).unwrap().iter().map(|&(s, c)| c * phi(s)).sum();
                let p = singular_value_profile(&x).unwrap();
                let grouped = p.integrate(phi);
                prop_assert!((raw - grouped).abs() <= 1e-12 * raw.max(1.0));
                // midpoint rule on each step interval is exact for a step function
                let mut riemann = 0.0;
                let mut left = 0.0;
                for right in p.breakpoints() {
                    riemann += (right - left) * phi(p.mu_at(0.5 * (left + right)));
                    left = right;
                }
                prop_assert!((riemann - grouped).abs() <= 1e-12 * raw.max(1.0));
            }
        }
    }
}
