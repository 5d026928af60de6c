use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::{One, Zero};

use crate::ratfunc::Scalar;
use crate::{Error, Result};

/// Shared configuration of the truncated model: weight cutoff, ε-order
/// cutoff, bilinear-form parameter λ and the central charge (fixed 1 for the
/// rank-one Heisenberg algebra).
///
/// The context also carries the truncation counter: any operation that drops
/// weight > N_max content increments it, so truncation loss is observable
/// instead of silent.
#[derive(Debug)]
pub struct VoaContext {
    pub n_max: u32,
    pub l_max: i64,
    pub lambda: Scalar,
    pub central_charge: Scalar,
    truncation_drops: AtomicU64,
}

impl VoaContext {
    pub fn new(n_max: u32, l_max: i64, lambda: Scalar) -> Result<VoaContext> {
        if (n_max as i64) < l_max || l_max < 0 {
            return Err(Error::Invalid(format!(
                "require N_max >= L_max >= 0, got N_max={n_max}, L_max={l_max}"
            )));
        }
        if lambda.is_zero() {
            return Err(Error::Invalid("lambda must be nonzero".into()));
        }
        Ok(VoaContext {
            n_max,
            l_max,
            lambda,
            central_charge: Scalar::one(),
            truncation_drops: AtomicU64::new(0),
        })
    }

    pub fn standard(n_max: u32, l_max: i64) -> VoaContext {
        VoaContext::new(n_max, l_max, Scalar::one()).expect("valid defaults")
    }

    pub fn note_truncation(&self) {
        self.truncation_drops.fetch_add(1, Ordering::Relaxed);
    }

    pub fn truncation_drops(&self) -> u64 {
        self.truncation_drops.load(Ordering::Relaxed)
    }

    /// Truncation drops accumulated since a snapshot (per-computation
    /// reporting).
    pub fn drops_since(&self, snapshot: u64) -> u64 {
        self.truncation_drops() - snapshot
    }
}

impl Clone for VoaContext {
    fn clone(&self) -> Self {
        VoaContext {
            n_max: self.n_max,
            l_max: self.l_max,
            lambda: self.lambda.clone(),
            central_charge: self.central_charge.clone(),
            truncation_drops: AtomicU64::new(self.truncation_drops()),
        }
    }
}
