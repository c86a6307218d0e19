//! Sequence generators. Every generator checks its defining relation before
//! handing the terms out.

use serde::{Deserialize, Serialize};

use super::counterexample::{build_counterexample, AmplitudeRule};
use super::{HarnessError, Result};
use crate::operator::{random_operator, singular_value_profile, AlgebraShape, BlockOperator, Ensemble};
use crate::orlicz::OrliczFunction;

const RELATION_TOL: f64 = 1e-10;

/// A scalar sequence indexed by `n = 1, 2, …`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rate {
    /// `coefficient · n^exponent`
    Power { coefficient: f64, exponent: f64 },
    Explicit { values: Vec<f64> },
    /// Spike traces only: `tₙ = level / φ(aₙ)`, so that `φ(aₙ)·tₙ = level`.
    ModularLevel { level: f64 },
}

impl Rate {
    pub fn power(coefficient: f64, exponent: f64) -> Self {
        Rate::Power { coefficient, exponent }
    }

    fn value(&self, n: usize, spike: Option<(&OrliczFunction, f64)>) -> Result<f64> {
        let v = match self {
            Rate::Power { coefficient, exponent } => coefficient * (n as f64).powf(*exponent),
            Rate::Explicit { values } => *values.get(n - 1).ok_or_else(|| {
                HarnessError::FamilyGenerationFailure(format!("explicit rate has no entry for n = {n}"))
            })?,
            Rate::ModularLevel { level } => {
                let (phi, a) = spike.ok_or_else(|| {
                    HarnessError::FamilyGenerationFailure("modular_level is only valid for spike traces".into())
                })?;
                level / phi.eval(a)?
            }
        };
        if !(v.is_finite() && v > 0.0) {
            return Err(HarnessError::FamilyGenerationFailure(format!("rate value {v} at n = {n} must be positive")));
        }
        Ok(v)
    }
}

/// Maps `s ↦ gₙ(s)` applied to the spectrum of a PSD base. All maps are
/// parametrized by `δₙ = coefficient · n^(−rate)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case")]
pub enum SpectralMap {
    /// `s·(1 + δₙ)`; converges to `s`.
    Scale { coefficient: f64, rate: f64 },
    /// `max(s + δₙ, 0)`; converges to `s`.
    Shift { coefficient: f64, rate: f64 },
    /// `s·1[s ≥ δₙ]`; converges to `s` from below.
    TruncateBelow { coefficient: f64, rate: f64 },
    /// `s·1[s ≤ δₙ]`; converges to 0 from above.
    TruncateAbove { coefficient: f64, rate: f64 },
    /// `s·n^(−rate)`; converges to 0.
    Shrink { rate: f64 },
}

impl SpectralMap {
    fn delta(&self, n: usize) -> f64 {
        let n = n as f64;
        match *self {
            SpectralMap::Scale { coefficient, rate }
            | SpectralMap::Shift { coefficient, rate }
            | SpectralMap::TruncateBelow { coefficient, rate }
            | SpectralMap::TruncateAbove { coefficient, rate } => coefficient * n.powf(-rate),
            SpectralMap::Shrink { rate } => n.powf(-rate),
        }
    }

    fn apply(&self, n: usize, s: f64) -> f64 {
        let s = s.max(0.0);
        let d = self.delta(n);
        match self {
            SpectralMap::Scale { .. } => s * (1.0 + d),
            SpectralMap::Shift { .. } => (s + d).max(0.0),
            SpectralMap::TruncateBelow { .. } => {
                if s >= d {
                    s
                } else {
                    0.0
                }
            }
            SpectralMap::TruncateAbove { .. } => {
                if s <= d {
                    s
                } else {
                    0.0
                }
            }
            SpectralMap::Shrink { .. } => s * d,
        }
    }

    fn limit(&self, s: f64) -> f64 {
        match self {
            SpectralMap::Scale { .. } | SpectralMap::Shift { .. } | SpectralMap::TruncateBelow { .. } => s.max(0.0),
            SpectralMap::TruncateAbove { .. } | SpectralMap::Shrink { .. } => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotoneDirection {
    Down,
    Up,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    /// `xₙ = x ⊕ aₙeₙ` with `eₙ` an atom of trace `tₙ` orthogonal to `x`.
    SpikePerturbation { amplitudes: Rate, traces: Rate },
    /// `xₙ = x + εₙ·g` for one draw `g` from the ensemble.
    ShrinkingNoise { scales: Rate, ensemble: Ensemble },
    /// `xₙ = gₙ(x)` decreasing in the PSD order.
    MonotoneDown { map: SpectralMap },
    /// `xₙ = gₙ(x)` increasing in the PSD order.
    MonotoneUp { map: SpectralMap },
    /// `xₙ = x − uₙeₙ` from the non-Δ₂ construction; the base is ignored.
    NonDoubling { rule: AmplitudeRule },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceFamily {
    pub kind: FamilyKind,
    pub base: BlockOperator,
    pub length: usize,
    pub seed: u64,
}

/// The limit `x` and the terms `x₁, …, x_N`, all in one algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedFamily {
    pub limit: BlockOperator,
    pub terms: Vec<BlockOperator>,
}

impl SequenceFamily {
    pub fn new(kind: FamilyKind, base: BlockOperator, length: usize, seed: u64) -> Self {
        SequenceFamily { kind, base, length, seed }
    }

    pub fn generate(&self, phi: &OrliczFunction) -> Result<GeneratedFamily> {
        if self.length == 0 {
            return Err(HarnessError::FamilyGenerationFailure("length must be positive".into()));
        }
        match &self.kind {
            FamilyKind::SpikePerturbation { amplitudes, traces } => self.spikes(phi, amplitudes, traces),
            FamilyKind::ShrinkingNoise { scales, ensemble } => {
                let g = random_operator(self.base.shape(), ensemble, self.seed)?;
                let terms = (1..=self.length)
                    .map(|n| Ok(self.base.add(&g.scale(scales.value(n, None)?))?))
                    .collect::<Result<Vec<_>>>()?;
                Ok(GeneratedFamily { limit: self.base.clone(), terms })
            }
            FamilyKind::MonotoneDown { map } => self.monotone(map, MonotoneDirection::Down),
            FamilyKind::MonotoneUp { map } => self.monotone(map, MonotoneDirection::Up),
            FamilyKind::NonDoubling { rule } => {
                let inst = build_counterexample(phi, self.length, rule)?;
                Ok(GeneratedFamily { limit: inst.x, terms: inst.sequence })
            }
        }
    }

    fn spikes(&self, phi: &OrliczFunction, amplitudes: &Rate, traces: &Rate) -> Result<GeneratedFamily> {
        let mut a = Vec::with_capacity(self.length);
        let mut t = Vec::with_capacity(self.length);
        for n in 1..=self.length {
            let an = amplitudes.value(n, None)?;
            t.push(traces.value(n, Some((phi, an)))?);
            a.push(an);
        }
        let shape = self.base.shape().direct_sum(&AlgebraShape::atomic(&t)?);
        let zeros = BlockOperator::zeros(&AlgebraShape::atomic(&t)?);
        let limit = self.base.direct_sum(&zeros);
        let mut terms = Vec::with_capacity(self.length);
        for n in 0..self.length {
            let mut spike = vec![0.0; self.length];
            spike[n] = a[n];
            let tail = BlockOperator::atomic(&spike, &t)?;
            let term = self.base.direct_sum(&tail);
            debug_assert_eq!(term.shape(), &shape);
            let diff = singular_value_profile(&term.sub(&limit)?)?;
            let ok = matches!(diff.steps(), [s] if (s.level - a[n]).abs() <= RELATION_TOL * a[n]
                && (s.width - t[n]).abs() <= RELATION_TOL * t[n]);
            if !ok {
                return Err(HarnessError::FamilyGenerationFailure(format!("spike {} lost its profile", n + 1)));
            }
            terms.push(term);
        }
        Ok(GeneratedFamily { limit, terms })
    }

    fn monotone(&self, map: &SpectralMap, direction: MonotoneDirection) -> Result<GeneratedFamily> {
        if !self.base.is_psd(RELATION_TOL)? {
            return Err(HarnessError::FamilyGenerationFailure("monotone families need a PSD base".into()));
        }
        let limit = self.base.hermitian_apply(|s| map.limit(s))?;
        let terms = (1..=self.length)
            .map(|n| Ok(self.base.hermitian_apply(|s| map.apply(n, s))?))
            .collect::<Result<Vec<_>>>()?;
        // Down: xₙ − xₙ₊₁ ⪰ 0 and xₙ − x ⪰ 0; Up: the reverse
        let ordered = |hi: &BlockOperator, lo: &BlockOperator| -> Result<bool> {
            let (a, b) = match direction {
                MonotoneDirection::Down => (hi, lo),
                MonotoneDirection::Up => (lo, hi),
            };
            Ok(a.sub(b)?.min_eigenvalue()? >= -RELATION_TOL)
        };
        for (n, term) in terms.iter().enumerate() {
            if !ordered(term, &limit)? {
                return Err(HarnessError::FamilyGenerationFailure(format!(
                    "term {} is not on the {:?} side of the limit",
                    n + 1,
                    direction
                )));
            }
            if let Some(next) = terms.get(n + 1) {
                if !ordered(term, next)? {
                    return Err(HarnessError::FamilyGenerationFailure(format!(
                        "terms {} and {} are not {:?}-ordered",
                        n + 1,
                        n + 2,
                        direction
                    )));
                }
            }
        }
        Ok(GeneratedFamily { limit, terms })
    }
}
