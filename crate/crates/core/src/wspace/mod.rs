//! Representatives of the W_{z_1,...,z_n} spaces: E-element correlators with
//! exact rational evaluation, the symmetric-group action and shuffle sums,
//! L(-1)/L(0) property checks, weight projections, and the composability
//! certificates.

mod compose;
mod correlator;
mod lprops;
mod shuffle;
mod wick;

pub use compose::{composability_i, composability_j, ComposabilityOutcome};
pub use correlator::{e_element, vacuum_correlator, Correlator};
pub use lprops::{check_l0, check_l_minus1};
pub use shuffle::{invert_perm, perm_sign, shuffle_sum, shuffles};
pub use wick::{pole_bound, wick_eval, wick_monomial, Insertion};
