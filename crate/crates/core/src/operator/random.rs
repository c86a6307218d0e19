//! Seeded random ensembles over an [`AlgebraShape`].

use nalgebra::QR;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{symmetrize, AlgebraShape, Block, BlockOperator, OperatorError, Result, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Ensemble {
    /// Real diagonal entries uniform on `[lo, hi)`.
    DiagonalUniform { lo: f64, hi: f64 },
    /// Independent complex Gaussian entries, real and imaginary parts `N(0, σ²/2)`.
    GaussianComplex { sigma: f64 },
    /// `G*G/n` for a complex Gaussian `G` in each block.
    PsdWishart,
    /// Orthogonal projection of the given rank in each block.
    Projection { ranks: Vec<usize> },
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-trial seed: the master seed offset by the hashed trial index.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix(master.wrapping_add(mix(index)))
}

fn gaussian_block(rng: &mut ChaCha8Rng, rows: usize, cols: usize, sigma: f64) -> Block {
    let normal = Normal::new(0.0, sigma / std::f64::consts::SQRT_2).expect("finite sigma");
    Block::from_fn(rows, cols, |_, _| C64::new(normal.sample(rng), normal.sample(rng)))
}

pub fn random_operator(shape: &AlgebraShape, ensemble: &Ensemble, seed: u64) -> Result<BlockOperator> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = Vec::with_capacity(shape.num_blocks());
    match ensemble {
        Ensemble::DiagonalUniform { lo, hi } => {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(OperatorError::InvalidArgument(format!("empty uniform range [{lo}, {hi})")));
            }
            for spec in shape.blocks() {
                let diag = nalgebra::DVector::from_fn(spec.dim, |_, _| C64::new(rng.random_range(*lo..*hi), 0.0));
                blocks.push(Block::from_diagonal(&diag));
            }
        }
        Ensemble::GaussianComplex { sigma } => {
            if !(sigma.is_finite() && *sigma >= 0.0) {
                return Err(OperatorError::InvalidArgument(format!("σ = {sigma} must be finite and ≥ 0")));
            }
            for spec in shape.blocks() {
                blocks.push(gaussian_block(&mut rng, spec.dim, spec.dim, *sigma));
            }
        }
        Ensemble::PsdWishart => {
            for spec in shape.blocks() {
                let g = gaussian_block(&mut rng, spec.dim, spec.dim, 1.0);
                let mut w = g.adjoint() * &g / C64::new(spec.dim as f64, 0.0);
                symmetrize(&mut w);
                blocks.push(w);
            }
        }
        Ensemble::Projection { ranks } => {
            if ranks.len() != shape.num_blocks() {
                return Err(OperatorError::ShapeMismatch(format!(
                    "{} ranks for {} blocks",
                    ranks.len(),
                    shape.num_blocks()
                )));
            }
            for (k, (spec, &rank)) in shape.blocks().iter().zip(ranks).enumerate() {
                if rank > spec.dim {
                    return Err(OperatorError::RankTooLarge { block: k, rank, dim: spec.dim });
                }
                if rank == 0 {
                    blocks.push(Block::zeros(spec.dim, spec.dim));
                    continue;
                }
                let g = gaussian_block(&mut rng, spec.dim, rank, 1.0);
                let q = QR::new(g).q();
                let mut e = &q * q.adjoint();
                symmetrize(&mut e);
                blocks.push(e);
            }
        }
    }
    BlockOperator::new(shape.clone(), blocks)
}

/// Unitary in every block, from the QR factorization of a complex Gaussian matrix.
pub fn random_unitary(shape: &AlgebraShape, seed: u64) -> BlockOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = shape
        .blocks()
        .iter()
        .map(|spec| QR::new(gaussian_block(&mut rng, spec.dim, spec.dim, 1.0)).q())
        .collect();
    BlockOperator::new(shape.clone(), blocks).expect("QR factor has the block's dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projections_are_exact() {
        let shape = AlgebraShape::from_pairs(&[(3, 2.5), (4, 0.25)]).unwrap();
        let e = random_operator(&shape, &Ensemble::Projection { ranks: vec![1, 3] }, 7).unwrap();
        assert!(e.is_projection(1e-12));
        assert!((e.trace().re - (2.5 + 0.75)).abs() < 1e-12);
    }

    #[test]
    fn rank_too_large() {
        let shape = AlgebraShape::single(3, 1.0).unwrap();
        let err = random_operator(&shape, &Ensemble::Projection { ranks: vec![4] }, 1).unwrap_err();
        assert_eq!(err, OperatorError::RankTooLarge { block: 0, rank: 4, dim: 3 });
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let shape = AlgebraShape::from_pairs(&[(3, 1.0), (2, 0.5)]).unwrap();
        for ens in [
            Ensemble::DiagonalUniform { lo: 0.0, hi: 1.0 },
            Ensemble::GaussianComplex { sigma: 1.0 },
            Ensemble::PsdWishart,
        ] {
            let a = random_operator(&shape, &ens, 42).unwrap();
            let b = random_operator(&shape, &ens, 42).unwrap();
            assert_eq!(a, b);
            let c = random_operator(&shape, &ens, 43).unwrap();
            assert_ne!(a, c);
        }
    }

    #[test]
    fn wishart_is_psd() {
        for seed in 0..20 {
            let shape = AlgebraShape::from_pairs(&[(5, 1.0), (1, 2.0), (3, 0.1)]).unwrap();
            let w = random_operator(&shape, &Ensemble::PsdWishart, seed).unwrap();
            assert!(w.min_eigenvalue().unwrap() >= -1e-12);
        }
    }

    #[test]
    fn unitary_blocks() {
        let shape = AlgebraShape::from_pairs(&[(4, 1.0), (2, 3.0)]).unwrap();
        let u = random_unitary(&shape, 3);
        let id = BlockOperator::identity(&shape);
        assert!(u.adjoint().mul(&u).unwrap().sub(&id).unwrap().frobenius_norm() < 1e-13);
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: std::collections::BTreeSet<u64> = (0..1000).map(|i| derive_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(derive_seed(42, 3), derive_seed(42, 3));
    }
}
