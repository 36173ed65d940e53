//! Ground-truth numerics: permutation operators on `(C^d)^{⊗n}`, the
//! Hamiltonian as a matrix-free operator, isotypic projectors, irreps in
//! Young's orthogonal form and Gell-Mann checks.

pub mod gellmann;
pub mod irrep;
pub mod tensor;

pub use crate::graph::GraphSpec;
pub use gellmann::{gellmann_basis, verify_degree_relation, verify_swap_gellmann};
pub use irrep::{evaluate, faithful_irreps, irrep, span_rank, Irrep};
pub use tensor::{
    apply_element, apply_permutation, hamiltonian, isotypic_projector, max_eigenvalue, spectrum_dense, Method,
    TensorHamiltonian,
};
