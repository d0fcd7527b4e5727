//! Exact computation with finite orthomodular lattices, Sasaki filters,
//! and rational subspace lattices.

pub mod construct;
pub mod describe;
pub mod filter;
pub mod measure;
pub mod oml;
pub mod scalar;
