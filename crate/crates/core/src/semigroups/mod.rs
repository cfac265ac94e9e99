//! Operator families on the discretised spaces, each carrying the window on
//! which its finite matrix is exact.

mod constructors;
mod family;
mod windowed;

pub use constructors::{
    bishift_pair, circulant_unitary, direct_sum, grid_steps, halfline_shift, modified_bishift,
    modified_bishift_pair, partial_isometry_pair, phi_multiplier, tensor_with_identity,
    torus_translation, Axis,
};
pub use family::{
    bishift_families, check_semigroup_law, circulant_family, halfline_family,
    modified_bishift_families, phi_family, BishiftKernel, CirculantKernel, CompressionKernel,
    DirectSumKernel, FamilyKernel, HalflineShiftKernel, ModifiedBishiftKernel, PairOfSemigroups,
    PhiMultiplierKernel, PowerKernel, ProductKernel, SemigroupFamily, TensorKernel,
};
pub use windowed::{FiberSide, WindowedMap, SUPPORT_EPS};
