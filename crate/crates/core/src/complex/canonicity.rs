use std::collections::BTreeMap;

use crate::ratfunc::{laurent_expand, ExpansionLocus, RatFunc, Var};
use crate::voa::{
    apply_pf_rat, basis, gv_basis_state, gv_max_weight, invert_series, local_change,
    partition_weight, rv_from_gv, solve_exp_coeffs, CoordChange, GradedVector, RatVector,
    VoaContext,
};
use crate::wspace::wick_eval;
use crate::{Error, Result};

/// Outcome of a compensated coordinate-change comparison: the transformed
/// and original evaluations agree as Laurent series in the configuration
/// gauge up to the truncation-guaranteed order (the dual-side transpose is
/// cut at N_max, which is the only information loss).
#[derive(Debug, Clone)]
pub struct CanonicityOutcome {
    pub defect_order: Option<i64>,
    pub guaranteed_order: i64,
    pub ok: bool,
}

/// Inverse series computed to twice the weight cutoff so that P(ρ⁻¹)P(ρ)
/// is exactly the identity on the truncated space (the composition tail
/// starts beyond order 2·N_max and its Virasoro modes annihilate every
/// truncated state).
fn inverse_to_double_order(rho: &[RatFunc], ctx: &VoaContext) -> Result<Vec<RatFunc>> {
    let mut padded = rho.to_vec();
    padded.resize(((2 * ctx.n_max) as usize).max(rho.len()), RatFunc::zero());
    invert_series(&padded)
}

/// w′ ∘ P(ρ^{-1}) on the truncated space: the compensating dual transform.
fn dual_transpose(
    wp: &GradedVector,
    inv: &CoordChange,
    ctx: &VoaContext,
) -> Result<GradedVector> {
    let mut out = GradedVector::new();
    let base_weight = wp.keys().map(partition_weight).min().unwrap_or(0);
    for q in base_weight..=ctx.n_max {
        for b in basis(q, ctx.n_max)? {
            let pb = apply_pf_rat(inv, &rv_from_gv(&gv_basis_state(b.clone())), ctx);
            let mut coeff = crate::ratfunc::q(0);
            for (label, c) in &pb {
                if let Some(w) = wp.get(label) {
                    let cc = c
                        .as_constant()
                        .ok_or_else(|| Error::Invalid("non-constant transpose".into()))?;
                    coeff += w * cc;
                }
            }
            if !num_traits::Zero::is_zero(&coeff) {
                crate::voa::gv_add_term(&mut out, b, coeff);
            }
        }
    }
    Ok(out)
}

/// Transform one operator datum (state at a point): the state is compensated
/// by P(ρ_p) for the local change at its point, the point moves to ρ(p).
/// The dz^{wt}-tag compensation is the β₀^{L(0)} = ρ′(p)^{L(0)} factor
/// inside P(ρ_p).
pub fn transform_op(
    cc: &CoordChange,
    state: &RatVector,
    point: &RatFunc,
    ctx: &VoaContext,
) -> Result<(RatVector, RatFunc)> {
    let lc = local_change(cc, point)?;
    let new_state = apply_pf_rat(&lc, state, ctx);
    Ok((new_state, cc.rho_at(point)))
}

/// Compensated-pairing check for a plain correlator: with every insertion
/// compensated per slot, the generator compensated by P(ρ) at ρ(0) = 0, and
/// the dual replaced by w′∘P(ρ)⁻¹, the evaluation reproduces the original
/// up to the guaranteed gauge order.
pub fn compensated_correlator_check(
    wp: &GradedVector,
    ops: &[(GradedVector, RatFunc)],
    gen: &GradedVector,
    rho: &[RatFunc],
    ctx: &VoaContext,
) -> Result<CanonicityOutcome> {
    let cc = solve_exp_coeffs(rho)?;
    let inv = solve_exp_coeffs(&inverse_to_double_order(rho, ctx)?)?;
    let original = wick_eval(
        wp,
        &ops.iter()
            .map(|(v, p)| (rv_from_gv(v), p.clone()))
            .collect::<Vec<_>>(),
        (gen, &RatFunc::zero()),
    )?;
    let transformed = {
        let wpt = dual_transpose(wp, &inv, ctx)?;
        let mut tops: Vec<(RatVector, RatFunc)> = Vec::new();
        for (v, p) in ops {
            tops.push(transform_op(&cc, &rv_from_gv(v), p, ctx)?);
        }
        // generator at 0: the local change there is ρ itself
        let gen_t = apply_pf_rat(&cc, &rv_from_gv(gen), ctx);
        let gen_t_q: GradedVector = gen_t
            .iter()
            .map(|(l, c)| (l.clone(), c.as_constant().expect("constant gen transform")))
            .collect();
        wick_eval(&wpt, &tops, (&gen_t_q, &RatFunc::zero()))?
    };
    let guaranteed = ctx.n_max as i64
        - ops.iter().map(|(v, _)| gv_max_weight(v) as i64).sum::<i64>()
        - gv_max_weight(gen) as i64;
    gauge_compare(&original, &transformed, ops, guaranteed)
}

fn gauge_compare(
    original: &RatFunc,
    transformed: &RatFunc,
    ops: &[(GradedVector, RatFunc)],
    guaranteed: i64,
) -> Result<CanonicityOutcome> {
    let diff = transformed.sub(original);
    if diff.is_zero() {
        return Ok(CanonicityOutcome {
            defect_order: None,
            guaranteed_order: guaranteed,
            ok: true,
        });
    }
    let s = Var::aux(890);
    let mut bind = BTreeMap::new();
    for (j, (_, p)) in ops.iter().enumerate() {
        let vs = p.vars();
        if vs.len() == 1 && p == &RatFunc::var(vs[0]) {
            bind.insert(
                vs[0],
                RatFunc::var(s).scale(&crate::ratfunc::q(2 * j as i64 + 2)),
            );
        }
    }
    let d = diff.substitute(&bind)?;
    let e = laurent_expand(&d, ExpansionLocus::Var(s), guaranteed.max(0))?;
    let ok = e.is_empty() || e.lowest > guaranteed;
    Ok(CanonicityOutcome {
        defect_order: if e.is_empty() { None } else { Some(e.lowest) },
        guaranteed_order: guaranteed,
        ok,
    })
}

/// The same compensated comparison for every ε-coefficient of the product
/// of two E-element families: both factors transform covariantly (slot
/// states and points, basis insertions at 0, generators at their ζ's, and
/// both duals).
pub fn compensated_product_check(
    wp: &GradedVector,
    phi_ops: &[(GradedVector, RatFunc)],
    psi_ops: &[(GradedVector, RatFunc)],
    rho: &[RatFunc],
    ctx: &VoaContext,
) -> Result<Vec<(i64, CanonicityOutcome)>> {
    let cc = solve_exp_coeffs(rho)?;
    let inv = solve_exp_coeffs(&inverse_to_double_order(rho, ctx)?)?;
    let wpt = dual_transpose(wp, &inv, ctx)?;
    let z1 = RatFunc::var(Var::zeta(1));
    let z2 = RatFunc::var(Var::zeta(2));
    let vac = crate::voa::gv_vacuum();

    let factor = |u: &GradedVector,
                  ops: &[(GradedVector, RatFunc)],
                  zeta: &RatFunc,
                  transformed: bool|
     -> Result<RatFunc> {
        // shifted intertwiner form: u at 0, contents shifted by ζ, vacuum
        // generator
        let mut states: Vec<(RatVector, RatFunc)> = Vec::new();
        if transformed {
            let lc0 = local_change(&cc, &RatFunc::zero())?;
            let ut = apply_pf_rat(&lc0, &rv_from_gv(u), ctx);
            states.push((ut, RatFunc::zero()));
            for (v, p) in ops {
                let shifted = p.add(zeta);
                states.push(transform_op(&cc, &rv_from_gv(v), &shifted, ctx)?);
            }
            let wpt_local = wpt.clone();
            return wick_eval(&wpt_local, &states, (&vac, &cc.rho_at(zeta)));
        }
        states.push((rv_from_gv(u), RatFunc::zero()));
        for (v, p) in ops {
            states.push((rv_from_gv(v), p.add(zeta)));
        }
        wick_eval(wp, &states, (&vac, zeta))
    };

    let mut out = Vec::new();
    for l in 0..=ctx.l_max {
        let mut orig = RatFunc::zero();
        let mut trans = RatFunc::zero();
        for (u, ubar) in crate::voa::dual_basis(l as u32, ctx)? {
            let a0 = factor(&u, phi_ops, &z1, false)?;
            let b0 = factor(&ubar, psi_ops, &z2, false)?;
            orig = orig.add(&a0.mul(&b0));
            let a1 = factor(&u, phi_ops, &z1, true)?;
            let b1 = factor(&ubar, psi_ops, &z2, true)?;
            trans = trans.add(&a1.mul(&b1));
        }
        let all_ops: Vec<(GradedVector, RatFunc)> = phi_ops
            .iter()
            .chain(psi_ops.iter())
            .cloned()
            .collect();
        let guaranteed = ctx.n_max as i64
            - all_ops.iter().map(|(v, _)| gv_max_weight(v) as i64).sum::<i64>()
            - gv_max_weight(wp) as i64
            - l;
        out.push((l, gauge_compare(&orig, &trans, &all_ops, guaranteed)?));
    }
    Ok(out)
}
