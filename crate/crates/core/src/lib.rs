//! Noncommutative Orlicz spaces `L_φ(M̃, τ)` over finite block-matrix algebras.
//!
//! The crate models `M̃` as `⊕ₖ M_{nₖ}(ℂ)` with a weighted trace and provides
//! Orlicz functions and their conjugates, generalized singular value profiles,
//! Luxemburg / Amemiya / Orlicz norms, and a harness that checks Kadec-Klee,
//! monotonicity, order-continuity and duality statements on generated sequences.

pub mod cli;
pub mod harness;
pub mod io;
pub mod norm;
pub mod operator;
pub mod orlicz;
