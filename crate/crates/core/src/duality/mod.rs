//! Minimal unitary extensions supplied as finite data, the dual pair they
//! induce, and the checks built on it: c.n.u. of the dual, the double dual,
//! the dual fourfold splitting and the modified-bishift model.

mod extension;
mod fourfold;
mod model;
mod setup;

pub use extension::{
    double_dual_check, dual_cnu_check, dual_pair, minimal_extension, orbit_span, DualResult, MinimalExtension,
};
pub use fourfold::{dual_fourfold, simultaneous_dc_ddc_classify, DualFourfoldResult, SimultaneousResult};
pub use model::modified_bishift_model_check;
pub use setup::{
    cnu_unitary_setup, l_region_setup, quadrant_setup, unitary_cnu_setup, unitary_unitary_setup, ExtensionSetup,
};
