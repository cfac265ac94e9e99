//! Deterministic dense complex linear algebra: the matrix type, a Jacobi
//! SVD, and the subspace lattice (span, intersection, complement, null
//! space) everything else is built on.

mod matrix;
mod subspace;
mod svd;

pub use matrix::{Matrix, C64};
pub use subspace::{
    complement, complement_within, intersect, max_principal_angle, nullspace, orthonormal_basis,
    overlap, projector_distance, residual_norm, Subspace, Tolerances,
};
pub use svd::{singular_values, spectral_norm};
