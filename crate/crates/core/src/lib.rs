//! Hochschild, cyclic and periodic cyclic homology of the quantum n-torus
//! with generic parameters and of its crossed product by the flip
//! `ν_i ↦ ν_i^-1`, computed exactly over `Q(λ_ij)`.

pub mod algebra;
pub mod assembler;
pub mod homology;
pub mod koszul;
pub mod les_solver;
pub mod linalg;
pub mod scalars;
pub mod transport;
