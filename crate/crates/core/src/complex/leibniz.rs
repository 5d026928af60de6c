use super::cochain::{cochain_product, delta, Cochain, DeltaSigns};
use crate::eprod::{ExclusionMap, SlotContent};
use crate::ratfunc::{EpsSeries, RatFunc, Scalar, Var};
use crate::voa::{GradedVector, VoaContext};
use crate::Result;

/// Outcome of the Leibniz comparison δ(Φ·εΨ) vs (δΦ)·εΨ + (-1)^k Φ·ε(δΨ),
/// coefficientwise up to the ε-truncation.
#[derive(Debug, Clone)]
pub struct LeibnizReport {
    pub holds: bool,
    /// first failing (ε-order, lhs coefficient, rhs coefficient)
    pub witness: Option<(i64, RatFunc, RatFunc)>,
    pub lhs: EpsSeries,
    pub rhs: EpsSeries,
}

/// Both sides of the Leibniz law on a merged slot family: the left side is
/// the factor-routed coboundary of the product; the right side assigns the
/// first k+1 slots to δΦ and the last slots to δΨ respectively.
pub fn leibniz_check(
    phi: &Cochain,
    psi: &Cochain,
    wp: &GradedVector,
    slots: &[SlotContent],
    ctx: &VoaContext,
) -> Result<LeibnizReport> {
    let k = phi.n;
    let n = psi.n;
    assert_eq!(slots.len(), k + n + 1, "need k+n+1 merged slots");
    let merged_vars: Vec<Var> = (1..=(k + n + 1) as u32).map(Var::z).collect();

    // LHS: δ(Φ ·ε Ψ), routed
    let prod = cochain_product(
        phi,
        psi,
        ExclusionMap::disjoint(k, n, merged_vars[..k + n].to_vec()),
        0,
    )?;
    let lhs = delta(&prod, DeltaSigns::default())?.eval_s(wp, slots, ctx)?;

    // RHS term 1: (δΦ) ·ε Ψ on slots (0..=k | k+1..)
    let dphi = delta(phi, DeltaSigns::default())?;
    let prod1 = cochain_product(
        &dphi,
        psi,
        ExclusionMap::disjoint(k + 1, n, merged_vars.clone()),
        0,
    )?;
    let t1 = prod1.eval_s(wp, slots, ctx)?;

    // RHS term 2: (-1)^k Φ ·ε (δΨ) on slots (0..k | k..)
    let dpsi = delta(psi, DeltaSigns::default())?;
    let prod2 = cochain_product(
        phi,
        &dpsi,
        ExclusionMap::disjoint(k, n + 1, merged_vars),
        0,
    )?;
    let t2 = prod2.eval_s(wp, slots, ctx)?;
    let sign = if k % 2 == 0 {
        Scalar::from_integer(1.into())
    } else {
        Scalar::from_integer((-1).into())
    };
    let rhs = t1.add(&t2.scale(&RatFunc::constant(sign)));

    let diff = lhs.sub(&rhs);
    if diff.is_zero() {
        return Ok(LeibnizReport {
            holds: true,
            witness: None,
            lhs,
            rhs,
        });
    }
    let ord = diff.lowest_order().unwrap();
    let w = (ord, lhs.coeff(ord)?, rhs.coeff(ord)?);
    Ok(LeibnizReport {
        holds: false,
        witness: Some(w),
        lhs,
        rhs,
    })
}

/// δ∘δ of a product cochain, evaluated on a sample: the double-coboundary
/// property extended to products.
pub fn delta_delta_product(
    phi: &Cochain,
    psi: &Cochain,
    wp: &GradedVector,
    slots: &[SlotContent],
    ctx: &VoaContext,
) -> Result<EpsSeries> {
    let k = phi.n;
    let n = psi.n;
    assert_eq!(slots.len(), k + n + 2);
    let merged_vars: Vec<Var> = (1..=(k + n) as u32).map(Var::z).collect();
    let prod = cochain_product(phi, psi, ExclusionMap::disjoint(k, n, merged_vars), 0)?;
    let d1 = delta(&prod, DeltaSigns::default())?;
    let d2 = delta(&d1, DeltaSigns::default())?;
    d2.eval_s(wp, slots, ctx)
}
