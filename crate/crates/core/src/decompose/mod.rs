//! Wold/Cooper splitting of one family, commutation classification of a
//! pair, the fourfold splitting of a doubly commuting pair, and model
//! identification checks.

mod classify;
mod equivalence;
mod wold;

pub use classify::{classify_pair, fourfold_decompose, CommutationReport, FourfoldResult, PairClass};
pub use equivalence::{bcl_check, verify_joint_equivalence};
pub use wold::{is_cnu, product_unitary_part, reduction_residual, wold_cooper, ProductUnitaryPart, WoldResult};
