//! The double complex: cochains C^n_m, coboundary operators δ^n_m and the
//! exceptional δ²_ex, certification, the Leibniz comparison, orthogonality
//! and the product-type class machinery.

mod canonicity;
mod cert;
mod cochain;
mod exceptional;
mod gv;
mod leibniz;

pub use canonicity::{
    compensated_correlator_check, compensated_product_check, transform_op, CanonicityOutcome,
};
pub use cert::{certify, cochain_new, CertDepth};
pub use cochain::{
    cochain_product, commutator_cochain, delta, Body, Cochain, DeltaSigns, ExSigns,
};
pub use exceptional::{
    check_exceptional, connection_forms, delta_ex, ConnectionForms, ExceptionalCochain,
};
pub use gv::{
    class_fingerprint, cohomology_predicates, exceptional_product, gv_class, gv_representative,
    invariance_middle_bracket, orthogonality_check, ClassRep, Predicates,
};
pub use leibniz::{delta_delta_product, leibniz_check, LeibnizReport};

#[cfg(test)]
mod tests;
