use super::correlator::{e_element, Correlator};
use crate::ratfunc::{laurent_expand, ExpansionLocus, RatFunc, Var};
use crate::voa::{gv_vacuum, gv_max_weight, GradedVector, RatVector, VoaContext};
use crate::{Error, Result};

/// Outcome of a composability check: the exact reassociated rational
/// function (the certified object) plus the diagnostics of the truncated
/// projection route.
#[derive(Debug, Clone)]
pub struct ComposabilityOutcome {
    pub exact: RatFunc,
    /// truncated projection sum (depends on the ζ gauges through the
    /// truncation tail only)
    pub truncated: RatFunc,
    /// order in the contraction gauge to which the truncated route provably
    /// agrees with the exact one
    pub guaranteed_order: i64,
    pub ok: bool,
}

/// First composability condition: group the m+n states into n consecutive
/// groups Ξ_i = E^{(l_i)}(v_k, z_k - ζ_i; ...; 1), project each to weights
/// ≤ N_max, insert at the ζ_i, and sum. The exact value is the reassociated
/// full correlator; the truncated double sum must agree with it to the
/// truncation-guaranteed order in the contraction gauge s (z_k = ζ_i + s·c_k).
pub fn composability_i(
    phi: &Correlator,
    wp: &GradedVector,
    states: &[GradedVector],
    points: &[RatFunc],
    groups: &[usize],
    zetas: &[RatFunc],
    ctx: &VoaContext,
) -> Result<ComposabilityOutcome> {
    let n = phi.arity;
    if groups.len() != n || zetas.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: groups.len(),
        });
    }
    let total: usize = groups.iter().sum();
    if total != states.len() || total != points.len() {
        return Err(Error::ArityMismatch {
            expected: total,
            got: states.len(),
        });
    }
    // exact: the plain reassociated correlator on all m+n insertions
    let exact = reassociated_exact(phi, wp, states, points, ctx)?;

    // truncated projection route
    let mut slot_states: Vec<RatVector> = Vec::new();
    let mut offset = 0usize;
    for (i, &li) in groups.iter().enumerate() {
        let inner = e_element(gv_vacuum(), li);
        let ins: Vec<(GradedVector, RatFunc)> = (0..li)
            .map(|j| {
                (
                    states[offset + j].clone(),
                    points[offset + j].sub(&zetas[i]),
                )
            })
            .collect();
        let mut proj = RatVector::new();
        for r in 0..=ctx.n_max {
            let comp = inner.project(&ins, r, ctx)?;
            for (p, c) in comp {
                crate::voa::rv_add_term(&mut proj, p, c);
            }
        }
        ctx.note_truncation(); // the r-sum cut at N_max is a truncation event
        slot_states.push(proj);
        offset += li;
    }
    let slot_ins: Vec<(RatVector, RatFunc)> = slot_states
        .into_iter()
        .zip(zetas.iter().cloned())
        .collect();
    let truncated = phi.evaluate_rat(wp, &slot_ins, ctx)?;

    let tot_weight: i64 = states.iter().map(|s| gv_max_weight(s) as i64).sum::<i64>()
        + gv_max_weight(wp) as i64
        + gv_max_weight(&phi.generator) as i64;
    let guaranteed = ctx.n_max as i64 - tot_weight;
    let ok = agrees_to_gauge_order(&exact, &truncated, points, zetas, groups, guaranteed)?;
    Ok(ComposabilityOutcome {
        exact,
        truncated,
        guaranteed_order: guaranteed,
        ok,
    })
}

/// Second composability condition: m front operators against the weight
/// projections P_q of the correlator value, summed over q ≤ N_max; the exact
/// object is again the reassociated full correlator.
pub fn composability_j(
    phi: &Correlator,
    wp: &GradedVector,
    front: &[(GradedVector, RatFunc)],
    ins: &[(GradedVector, RatFunc)],
    ctx: &VoaContext,
) -> Result<ComposabilityOutcome> {
    let states: Vec<GradedVector> = front
        .iter()
        .chain(ins.iter())
        .map(|(v, _)| v.clone())
        .collect();
    let points: Vec<RatFunc> = front
        .iter()
        .chain(ins.iter())
        .map(|(_, p)| p.clone())
        .collect();
    let exact = reassociated_exact(phi, wp, &states, &points, ctx)?;

    // truncated q-sum: E^{(m)}(front; P_q(Φ(ins)))
    let mut truncated = RatFunc::zero();
    for q in 0..=ctx.n_max {
        let proj = phi.project(ins, q, ctx)?;
        if proj.is_empty() {
            continue;
        }
        let outer = e_element(gv_vacuum(), front.len() + 1);
        // the projected state is inserted at the generator point of Φ
        let mut outer_ins: Vec<(RatVector, RatFunc)> = front
            .iter()
            .map(|(v, p)| (crate::voa::rv_from_gv(v), p.clone()))
            .collect();
        outer_ins.push((proj, phi.gen_point.clone()));
        truncated = truncated.add(&outer.evaluate_rat(wp, &outer_ins, ctx)?);
    }
    ctx.note_truncation();

    let tot_weight: i64 = states.iter().map(|s| gv_max_weight(s) as i64).sum::<i64>()
        + gv_max_weight(wp) as i64
        + gv_max_weight(&phi.generator) as i64;
    let guaranteed = ctx.n_max as i64 - tot_weight;
    // gauge: scale the inner insertion points toward the generator point
    let diff = exact.sub(&truncated);
    let ok = if diff.is_zero() {
        true
    } else {
        let s = Var::aux(850);
        let mut bind = std::collections::BTreeMap::new();
        for (j, (_, p)) in ins.iter().enumerate() {
            if let Some(v) = point_var(p) {
                // z_j -> gen + s * c_j
                let c = RatFunc::from_i64(2 + j as i64);
                bind.insert(
                    v,
                    phi.gen_point.add(&RatFunc::var(s).mul(&c)),
                );
            }
        }
        let d = diff.substitute(&bind)?;
        vanishes_below(&d, s, guaranteed)?
    };
    Ok(ComposabilityOutcome {
        exact,
        truncated,
        guaranteed_order: guaranteed,
        ok,
    })
}

fn point_var(p: &RatFunc) -> Option<Var> {
    let vs = p.vars();
    if vs.len() == 1 && p == &RatFunc::var(vs[0]) {
        Some(vs[0])
    } else {
        None
    }
}

/// The exact reassociated evaluation: all states inserted directly as a
/// plain (m+n)-point correlator of the same generator.
fn reassociated_exact(
    phi: &Correlator,
    wp: &GradedVector,
    states: &[GradedVector],
    points: &[RatFunc],
    ctx: &VoaContext,
) -> Result<RatFunc> {
    let mut full = e_element(phi.generator.clone(), states.len());
    full.gen_point = phi.gen_point.clone();
    full.pre = phi.pre.clone();
    let ins: Vec<(GradedVector, RatFunc)> = states
        .iter()
        .cloned()
        .zip(points.iter().cloned())
        .collect();
    full.evaluate(wp, &ins, ctx)
}

/// Substitute z_k = ζ_{i(k)} + s·c_k and check the difference vanishes to
/// the guaranteed order in s.
fn agrees_to_gauge_order(
    exact: &RatFunc,
    truncated: &RatFunc,
    points: &[RatFunc],
    zetas: &[RatFunc],
    groups: &[usize],
    guaranteed: i64,
) -> Result<bool> {
    let diff = exact.sub(truncated);
    if diff.is_zero() {
        return Ok(true);
    }
    let s = Var::aux(850);
    let mut bind = std::collections::BTreeMap::new();
    let mut offset = 0usize;
    for (i, &li) in groups.iter().enumerate() {
        for j in 0..li {
            if let Some(v) = point_var(&points[offset + j]) {
                let c = RatFunc::from_i64(2 + (offset + j) as i64);
                bind.insert(v, zetas[i].add(&RatFunc::var(s).mul(&c)));
            }
        }
        offset += li;
    }
    let d = diff.substitute(&bind)?;
    vanishes_below(&d, s, guaranteed)
}

fn vanishes_below(diff: &RatFunc, s: Var, order: i64) -> Result<bool> {
    if diff.is_zero() {
        return Ok(true);
    }
    let e = laurent_expand(diff, ExpansionLocus::Var(s), order.max(0))?;
    Ok(e.is_empty() || e.lowest > order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::q;
    use crate::voa::gv_basis_state;

    fn zr(i: u32) -> RatFunc {
        RatFunc::var(Var::z(i))
    }

    fn a() -> GradedVector {
        gv_basis_state(vec![1])
    }

    #[test]
    fn identity_grouping_reproduces_evaluate() {
        // all l_i = 1: Ξ_i = e^{(z-ζ)L(-1)}v_i effectively; the truncated
        // route agrees with evaluate to the guaranteed order, exactly when
        // weights stay within cutoff.
        let c = VoaContext::standard(7, 3);
        let phi = e_element(gv_vacuum(), 2);
        let out = composability_i(
            &phi,
            &gv_vacuum(),
            &[a(), a()],
            &[zr(1), zr(2)],
            &[1, 1],
            &[RatFunc::var(Var::zeta(1)), RatFunc::var(Var::zeta(2))],
            &c,
        )
        .unwrap();
        assert!(out.ok, "guaranteed order {}", out.guaranteed_order);
        assert_eq!(out.exact, zr(1).sub(&zr(2)).pow(-2).unwrap());
    }

    #[test]
    fn grouped_pair_matches_direct_two_point() {
        // n=1, l_1 = 2 on the 2-point current correlator: associativity.
        let c = VoaContext::standard(7, 3);
        let phi = e_element(gv_vacuum(), 1);
        let out = composability_i(
            &phi,
            &gv_vacuum(),
            &[a(), a()],
            &[zr(1), zr(2)],
            &[2],
            &[RatFunc::var(Var::zeta(1))],
            &c,
        )
        .unwrap();
        assert_eq!(out.exact, zr(1).sub(&zr(2)).pow(-2).unwrap());
        assert!(out.ok);
    }

    #[test]
    fn zeta_independence_of_exact_value() {
        // two distinct ζ-assignments give the identical exact RatFunc
        let c = VoaContext::standard(6, 3);
        let phi = e_element(gv_vacuum(), 1);
        let za = composability_i(
            &phi,
            &gv_vacuum(),
            &[a(), a()],
            &[zr(1), zr(2)],
            &[2],
            &[RatFunc::constant(q(7))],
            &c,
        )
        .unwrap();
        let zb = composability_i(
            &phi,
            &gv_vacuum(),
            &[a(), a()],
            &[zr(1), zr(2)],
            &[2],
            &[RatFunc::constant(q(11))],
            &c,
        )
        .unwrap();
        assert_eq!(za.exact, zb.exact);
    }

    #[test]
    fn j_condition_front_composition() {
        // m=1 front (a, z1) against e_element(1,1) at (a, z2) equals the
        // 2-point function; m=0 reduces to evaluate.
        let c = VoaContext::standard(7, 3);
        let phi = e_element(gv_vacuum(), 1);
        let out = composability_j(
            &phi,
            &gv_vacuum(),
            &[(a(), zr(1))],
            &[(a(), zr(2))],
            &c,
        )
        .unwrap();
        assert_eq!(out.exact, zr(1).sub(&zr(2)).pow(-2).unwrap());
        assert!(out.ok, "J route should agree to order {}", out.guaranteed_order);
        let m0 = composability_j(&phi, &gv_vacuum(), &[], &[(a(), zr(1))], &c).unwrap();
        assert!(m0.exact.is_zero());
    }

    #[test]
    fn j_condition_three_point_style() {
        // m=2 front against the constant cochain: 3-point current correlator
        // (vanishes against the vacuum dual), and a nonzero variant with a
        // generator.
        let c = VoaContext::standard(7, 3);
        let phi0 = e_element(gv_vacuum(), 0);
        let out = composability_j(
            &phi0,
            &gv_vacuum(),
            &[(a(), zr(1)), (a(), zr(2))],
            &[],
            &c,
        )
        .unwrap();
        assert_eq!(out.exact, zr(1).sub(&zr(2)).pow(-2).unwrap());
        assert!(out.ok);
        let phi_a = e_element(a(), 0);
        let out2 = composability_j(
            &phi_a,
            &gv_basis_state(vec![1]),
            &[(a(), zr(1)), (a(), zr(2))],
            &[],
            &c,
        )
        .unwrap();
        assert!(out2.ok);
        Correlator::certify_poles(
            &out2.exact,
            &[(a(), zr(1)), (a(), zr(2))],
            &RatFunc::zero(),
        )
        .unwrap();
    }
}
