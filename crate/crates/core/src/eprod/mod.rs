//! The ε-product of W-space elements: the coinciding-parameter exclusion
//! map, the dual-basis pairing of intertwiner-wrapped factors, the
//! symmetric-group action and differentiation on products, the sewing
//! substitution ζ1ζ2 = ε, and the commutator product.

mod exclusion;
mod product;
mod sew;

pub use exclusion::{merge_params, ExclusionMap};
pub use product::{
    commutator_product, mirror_exclusion, partial_product, reorder_for_mirror, sigma_on_product,
    slot, split_independence_check, EpsProduct, PairingMode, SlotContent, SplitReport,
};
pub use sew::{sew_substitute, unsew, SewDirection};
