//! Exact finite models of one- and two-parameter semigroups of isometries:
//! shifts on the half-line and the quadrant, the modified bishift on the
//! L-shaped region, their Wold/Cooper splittings, dual pairs obtained from
//! minimal unitary extensions, and commutant computations.

pub mod commutant;
pub mod decompose;
pub mod duality;
pub mod error;
pub mod index_set;
pub mod numlin;
pub mod report;
pub mod semigroups;
pub mod spaces;

pub use error::{Error, Result};
pub use index_set::IndexSet;
pub use report::{CheckEntry, Report};
