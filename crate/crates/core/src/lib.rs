//! Exact and numerical solvers for the qudit Quantum Max Cut problem.
//!
//! The Hamiltonian `H_G = sum 2 w_ij (I - Swap_ij)` on `(C^d)^{⊗n}` is a
//! combination of permutation operators, so it splits into blocks indexed by
//! partitions of `n` with at most `d` rows. This crate computes those blocks
//! symbolically (characters, Littlewood-Richardson coefficients), numerically
//! (tensor-space oracle, Young's orthogonal form) and through a moment
//! relaxation hierarchy over the swap algebra.

pub mod bases;
pub mod characters;
pub mod error;
pub mod exact_solvers;
pub mod graph;
pub mod linalg;
pub mod lr;
pub mod npo_sdp;
pub mod oracle;
pub mod partitions;
pub mod swap_algebra;

pub use error::{QmcError, Result};
