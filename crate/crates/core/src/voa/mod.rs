//! The concrete model algebra: rank-one Heisenberg (free boson) with central
//! charge 1, truncated at a weight cutoff, together with its invariant
//! bilinear form, dual bases, and the coordinate-change representation.

mod bilinear;
mod coord;
mod ctx;
mod fock;
mod modes;
mod virasoro;

pub use bilinear::{
    bilinear_form, bilinear_form_symbolic, dual_basis, dual_basis_for, gram_entry,
};
pub use coord::{
    apply_pf, apply_pf_rat, check_commutator_formula, invert_series, local_change,
    solve_exp_coeffs, CoordChange,
};
pub use ctx::VoaContext;
pub use fock::{
    basis, gv_add, gv_add_term, gv_basis_state, gv_max_weight, gv_scale, gv_vacuum,
    gv_weight_component, gv_zero, parse_state, partition_weight, rv_add_term, rv_from_gv,
    state_to_string, z_mu, GradedVector, Partition, RatVector,
};
pub use modes::{a_mode, mode_action, mode_action_rat, scale_l0};
pub use virasoro::{virasoro, virasoro_rat};
