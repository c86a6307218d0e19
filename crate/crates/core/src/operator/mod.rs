//! Finite model of a semifinite von Neumann algebra: `⊕ₖ M_{nₖ}(ℂ)` with trace
//! `τ(x) = Σₖ cₖ·Tr(xₖ)` for positive block weights `cₖ`.
//!
//! All blocks of size 1 give an atomic commutative model; larger blocks give
//! genuinely noncommutative examples.

mod random;
mod spectral;

pub use random::{derive_seed, random_operator, random_unitary, Ensemble};
pub use spectral::{
    distribution, measure_gauge, mu_at, singular_value_profile, spectrum_abs, SingularValueProfile, Step,
    MERGE_TOL,
};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type C64 = Complex64;
pub type Block = DMatrix<C64>;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITERS: usize = 10_000;
const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid algebra shape: {0}")]
    InvalidShape(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("block {block}: rank {rank} exceeds dimension {dim}")]
    RankTooLarge { block: usize, rank: usize, dim: usize },
    #[error("operator is not self-adjoint (block {block}, defect {defect:e})")]
    NotHermitian { block: usize, defect: f64 },
    #[error("non-finite entry in block {0}")]
    NonFinite(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, OperatorError>;

/// One summand `M_n(ℂ)` with its trace weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub dim: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraShape {
    blocks: Vec<BlockSpec>,
}

impl AlgebraShape {
    pub fn new(blocks: Vec<BlockSpec>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(OperatorError::InvalidShape("at least one block is required".into()));
        }
        for (k, b) in blocks.iter().enumerate() {
            if b.dim == 0 {
                return Err(OperatorError::InvalidShape(format!("block {k} has dimension 0")));
            }
            if !(b.weight > 0.0 && b.weight.is_finite()) {
                return Err(OperatorError::InvalidShape(format!(
                    "block {k} has weight {}; weights must be positive and finite",
                    b.weight
                )));
            }
        }
        Ok(AlgebraShape { blocks })
    }

    pub fn from_pairs(pairs: &[(usize, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(dim, weight)| BlockSpec { dim, weight }).collect())
    }

    pub fn single(dim: usize, weight: f64) -> Result<Self> {
        Self::from_pairs(&[(dim, weight)])
    }

    /// One-dimensional blocks: the atomic (commutative) measure space with point masses `weights`.
    pub fn atomic(weights: &[f64]) -> Result<Self> {
        Self::new(weights.iter().map(|&weight| BlockSpec { dim: 1, weight }).collect())
    }

    pub fn blocks(&self) -> &[BlockSpec] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// `τ(1) = Σ cₖ·nₖ`.
    pub fn total_trace(&self) -> f64 {
        self.blocks.iter().map(|b| b.weight * b.dim as f64).sum()
    }

    pub fn direct_sum(&self, other: &AlgebraShape) -> AlgebraShape {
        let mut blocks = self.blocks.clone();
        blocks.extend_from_slice(&other.blocks);
        AlgebraShape { blocks }
    }
}

/// An element of the block algebra. Immutable; every operation returns a new value.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator {
    shape: AlgebraShape,
    blocks: Vec<Block>,
}

impl BlockOperator {
    pub fn new(shape: AlgebraShape, blocks: Vec<Block>) -> Result<Self> {
        if blocks.len() != shape.num_blocks() {
            return Err(OperatorError::ShapeMismatch(format!(
                "{} matrices for {} blocks",
                blocks.len(),
                shape.num_blocks()
            )));
        }
        for (k, (m, spec)) in blocks.iter().zip(shape.blocks()).enumerate() {
            if m.nrows() != spec.dim || m.ncols() != spec.dim {
                return Err(OperatorError::ShapeMismatch(format!(
                    "block {k} is {}×{}, expected {}×{}",
                    m.nrows(),
                    m.ncols(),
                    spec.dim,
                    spec.dim
                )));
            }
            if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(OperatorError::NonFinite(k));
            }
        }
        Ok(BlockOperator { shape, blocks })
    }

    pub fn zeros(shape: &AlgebraShape) -> Self {
        let blocks = shape.blocks().iter().map(|b| Block::zeros(b.dim, b.dim)).collect();
        BlockOperator { shape: shape.clone(), blocks }
    }

    pub fn identity(shape: &AlgebraShape) -> Self {
        let blocks = shape.blocks().iter().map(|b| Block::identity(b.dim, b.dim)).collect();
        BlockOperator { shape: shape.clone(), blocks }
    }

    /// Real diagonal blocks, one vector of diagonal entries per block.
    pub fn from_real_diagonals(shape: &AlgebraShape, diagonals: &[Vec<f64>]) -> Result<Self> {
        if diagonals.len() != shape.num_blocks() {
            return Err(OperatorError::ShapeMismatch(format!(
                "{} diagonals for {} blocks",
                diagonals.len(),
                shape.num_blocks()
            )));
        }
        let blocks = diagonals
            .iter()
            .map(|d| Block::from_diagonal(&nalgebra::DVector::from_iterator(d.len(), d.iter().map(|&v| C64::new(v, 0.0)))))
            .collect();
        Self::new(shape.clone(), blocks)
    }

    /// `diag(values)` in a single block of trace weight `weight`.
    pub fn diagonal(values: &[f64], weight: f64) -> Result<Self> {
        let shape = AlgebraShape::single(values.len(), weight)?;
        Self::from_real_diagonals(&shape, &[values.to_vec()])
    }

    /// One 1×1 block per value, with the given point masses.
    pub fn atomic(values: &[f64], weights: &[f64]) -> Result<Self> {
        let shape = AlgebraShape::atomic(weights)?;
        let diags: Vec<Vec<f64>> = values.iter().map(|&v| vec![v]).collect();
        Self::from_real_diagonals(&shape, &diags)
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Block> {
        self.blocks
    }

    fn check_same_shape(&self, other: &BlockOperator) -> Result<()> {
        if self.shape != other.shape {
            return Err(OperatorError::ShapeMismatch("operands live in different algebras".into()));
        }
        Ok(())
    }

    fn zip_with(&self, other: &BlockOperator, f: impl Fn(&Block, &Block) -> Block) -> Result<Self> {
        self.check_same_shape(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect();
        Ok(BlockOperator { shape: self.shape.clone(), blocks })
    }

    fn map_blocks(&self, f: impl Fn(&Block) -> Block) -> Self {
        BlockOperator { shape: self.shape.clone(), blocks: self.blocks.iter().map(f).collect() }
    }

    pub fn add(&self, other: &BlockOperator) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &BlockOperator) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &BlockOperator) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, alpha: f64) -> Self {
        self.map_blocks(|a| a * C64::new(alpha, 0.0))
    }

    pub fn scale_complex(&self, alpha: C64) -> Self {
        self.map_blocks(|a| a * alpha)
    }

    pub fn adjoint(&self) -> Self {
        self.map_blocks(|a| a.adjoint())
    }

    /// `|x| = (x*x)^{1/2}`. Self-adjoint blocks use `|λ|` of their own
    /// eigenvalues; otherwise the eigendecomposition of `x*x` is used, with
    /// eigenvalues at rounding level set to zero before the square root.
    pub fn abs(&self) -> Result<Self> {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (k, m) in self.blocks.iter().enumerate() {
            let scale = m.norm();
            let (eig, f): (_, Box<dyn Fn(f64) -> f64>) = if (m - m.adjoint()).norm() <= 4.0 * f64::EPSILON * scale {
                (self.block_eigen(k, m)?, Box::new(f64::abs))
            } else {
                let gram = m.adjoint() * m;
                let floor = 64.0 * f64::EPSILON * scale * scale;
                (self.block_eigen(k, &gram)?, Box::new(move |l: f64| if l <= floor { 0.0 } else { l.sqrt() }))
            };
            let vals = eig.eigenvalues.map(|l| C64::new(f(l), 0.0));
            let u = &eig.eigenvectors;
            let mut out = u * Block::from_diagonal(&vals) * u.adjoint();
            symmetrize(&mut out);
            blocks.push(out);
        }
        BlockOperator::new(self.shape.clone(), blocks)
    }

    /// Weighted trace `τ(x) = Σₖ cₖ·Tr(xₖ)`.
    pub fn trace(&self) -> C64 {
        self.blocks
            .iter()
            .zip(self.shape.blocks())
            .map(|(m, spec)| m.trace() * spec.weight)
            .sum()
    }

    /// Unweighted Frobenius norm over all blocks.
    pub fn frobenius_norm(&self) -> f64 {
        self.blocks.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus over all blocks.
    pub fn max_abs_entry(&self) -> f64 {
        self.blocks.iter().flat_map(|m| m.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn direct_sum(&self, other: &BlockOperator) -> Self {
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned());
        BlockOperator { shape: self.shape.direct_sum(&other.shape), blocks }
    }

    /// Largest `‖xₖ − xₖ*‖_F` over blocks, relative to `max(1, ‖xₖ‖_F)`.
    pub fn hermitian_defect(&self) -> (usize, f64) {
        self.blocks
            .iter()
            .enumerate()
            .map(|(k, m)| (k, (m - m.adjoint()).norm() / m.norm().max(1.0)))
            .fold((0, 0.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc })
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect().1 <= tol
    }

    /// `e² = e = e*` up to `tol` in Frobenius norm.
    pub fn is_projection(&self, tol: f64) -> bool {
        self.blocks.iter().all(|m| (m - m.adjoint()).norm() <= tol && (m * m - m).norm() <= tol)
    }

    /// Eigenvalues of each Hermitian block (unsorted), paired with the block's weight.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<(f64, f64)>> {
        let mut out = Vec::new();
        for (k, (m, spec)) in self.blocks.iter().zip(self.shape.blocks()).enumerate() {
            let eig = self.block_eigen(k, m)?;
            out.extend(eig.eigenvalues.iter().map(|&l| (l, spec.weight)));
        }
        Ok(out)
    }

    /// Smallest eigenvalue over all blocks of a self-adjoint operator.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.hermitian_eigenvalues()?.into_iter().map(|(l, _)| l).fold(f64::INFINITY, f64::min))
    }

    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -tol)
    }

    /// Functional calculus `f(x)` for self-adjoint `x`, computed per block.
    pub fn hermitian_apply(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (k, m) in self.blocks.iter().enumerate() {
            let eig = self.block_eigen(k, m)?;
            let vals = eig.eigenvalues.map(|l| C64::new(f(l), 0.0));
            let u = &eig.eigenvectors;
            let mut out = u * Block::from_diagonal(&vals) * u.adjoint();
            symmetrize(&mut out);
            blocks.push(out);
        }
        BlockOperator::new(self.shape.clone(), blocks)
    }

    fn block_eigen(&self, k: usize, m: &Block) -> Result<SymmetricEigen<C64, nalgebra::Dyn>> {
        let defect = (m - m.adjoint()).norm() / m.norm().max(1.0);
        if defect > HERMITIAN_TOL {
            return Err(OperatorError::NotHermitian { block: k, defect });
        }
        let mut h = m.clone();
        symmetrize(&mut h);
        SymmetricEigen::try_new(h, EIGEN_EPS, EIGEN_MAX_ITERS)
            .ok_or_else(|| OperatorError::NumericalFailure(format!("eigensolver did not converge on block {k}")))
    }
}

/// Replaces `m` with `(m + m*)/2`.
fn symmetrize(m: &mut Block) {
    let adj = m.adjoint();
    *m += adj;
    *m *= C64::new(0.5, 0.0);
}
