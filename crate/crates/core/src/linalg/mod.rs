//! Exact (and float-backed) linear algebra: matrices, subspaces, labelled frames.

mod frame;
mod matrix;
mod subspace;

pub use frame::Frame;
pub use matrix::{rref, unit, Matrix};
pub use subspace::{is_zero_vec, unit_vector, vec_add, vec_scale, Combine, Subspace};
