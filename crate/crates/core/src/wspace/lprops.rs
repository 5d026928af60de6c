use std::collections::BTreeMap;

use super::correlator::Correlator;
use crate::ratfunc::{factorial, RatFunc, Scalar, Var};
use crate::voa::{
    basis, gv_basis_state, gv_max_weight, partition_weight, virasoro, GradedVector, VoaContext,
};
use crate::{Error, Result};

/// Transpose of L(-1) on a coefficient functional.
fn l_minus1_transpose(wp: &GradedVector, ctx: &VoaContext) -> GradedVector {
    let mut out = GradedVector::new();
    for (pw, cw) in wp {
        let w = partition_weight(pw);
        if w == 0 {
            continue;
        }
        for px in basis(w - 1, ctx.n_max).expect("within cutoff") {
            let lx = virasoro(-1, &gv_basis_state(px.clone()), ctx);
            if let Some(c) = lx.get(pw) {
                crate::voa::gv_add_term(&mut out, px, c * cw);
            }
        }
    }
    out
}

/// L(-1)-derivative checks:
///  (i) per slot: ∂_{z_i} ⟨w′, Φ⟩ = ⟨w′, Φ(..., L(-1)v_i, z_i, ...)⟩;
///  (ii) translation form: ⟨w′, Φ at points shifted by t⟩ (generator point
///       included) equals Σ_j (t^j/j!) ⟨(L(-1)ᵀ)^j w′, Φ⟩ — the rational
///       realization of the e^{tL(-1)} pairing.
/// Insertion points must be plain variables for (i).
pub fn check_l_minus1(
    phi: &Correlator,
    wp: &GradedVector,
    ins: &[(GradedVector, Var)],
    ctx: &VoaContext,
) -> Result<()> {
    let as_rf: Vec<(GradedVector, RatFunc)> = ins
        .iter()
        .map(|(v, z)| (v.clone(), RatFunc::var(*z)))
        .collect();
    let f = phi.evaluate(wp, &as_rf, ctx)?;
    // (i) slot derivatives
    for (i, (_, zi)) in ins.iter().enumerate() {
        let mut modified = as_rf.clone();
        modified[i].0 = virasoro(-1, &ins[i].0, ctx);
        let rhs = if modified[i].0.is_empty() {
            RatFunc::zero()
        } else {
            phi.evaluate(wp, &modified, ctx)?
        };
        let lhs = f.derivative(*zi);
        if lhs != rhs {
            return Err(Error::Certificate(format!(
                "L(-1)-derivative mismatch at slot {i}: {lhs} vs {rhs}"
            )));
        }
    }
    // (ii) translation form
    let t = RatFunc::var(Var::aux(800));
    let shifted: Vec<(GradedVector, RatFunc)> = as_rf
        .iter()
        .map(|(v, p)| (v.clone(), p.add(&t)))
        .collect();
    let mut shifted_phi = phi.clone();
    shifted_phi.gen_point = phi.gen_point.add(&t);
    shifted_phi.pre = phi
        .pre
        .iter()
        .map(|(v, p)| (v.clone(), p.add(&t)))
        .collect();
    let lhs = shifted_phi.evaluate(wp, &shifted, ctx)?;
    let mut rhs = RatFunc::zero();
    let mut functional = wp.clone();
    let mut j: u32 = 0;
    loop {
        if functional.is_empty() {
            break;
        }
        let term = phi.evaluate(&functional, &as_rf, ctx)?;
        let tj = t.pow(j as i64).expect("power").scale(&(Scalar::from_integer(1.into()) / factorial(j)));
        rhs = rhs.add(&term.mul(&tj));
        functional = l_minus1_transpose(&functional, ctx);
        j += 1;
        if j > ctx.n_max + 2 {
            break;
        }
    }
    if lhs != rhs {
        return Err(Error::Certificate(format!(
            "L(-1) translation form mismatch: {lhs} vs {rhs}"
        )));
    }
    Ok(())
}

/// L(0)-conjugation: for homogeneous data the evaluated correlator is
/// homogeneous of degree wt(w′) - Σ wt(v_i) - wt(w), i.e. scaling every point
/// (insertions and generator) by `scale` multiplies the value by
/// scale^degree. This is Eq.-loconj with the scale action applied to the
/// complex parameters as well.
pub fn check_l0(
    phi: &Correlator,
    wp: &GradedVector,
    ins: &[(GradedVector, Var)],
    scale: &Scalar,
    ctx: &VoaContext,
) -> Result<()> {
    let as_rf: Vec<(GradedVector, RatFunc)> = ins
        .iter()
        .map(|(v, z)| (v.clone(), RatFunc::var(*z)))
        .collect();
    let f = phi.evaluate(wp, &as_rf, ctx)?;
    // scale points
    let mut bind = BTreeMap::new();
    for (_, z) in ins {
        bind.insert(*z, RatFunc::var(*z).scale(scale));
    }
    let scaled_pts: Vec<(GradedVector, RatFunc)> = as_rf
        .iter()
        .map(|(v, p)| (v.clone(), p.substitute(&bind).expect("scaling")))
        .collect();
    let mut scaled_phi = phi.clone();
    scaled_phi.gen_point = phi.gen_point.scale(scale);
    scaled_phi.pre = phi
        .pre
        .iter()
        .map(|(v, p)| (v.clone(), p.scale(scale)))
        .collect();
    let lhs = scaled_phi.evaluate(wp, &scaled_pts, ctx)?;
    // homogeneity degree
    let mut deg: i64 = gv_max_weight(wp) as i64;
    for (v, _) in ins {
        deg -= gv_max_weight(v) as i64;
        if v.keys().map(partition_weight).min().unwrap_or(0) != gv_max_weight(v) {
            return Err(Error::Invalid("check_l0 requires homogeneous states".into()));
        }
    }
    deg -= gv_max_weight(&phi.generator) as i64;
    for (v, _) in &phi.pre {
        deg -= gv_max_weight(v) as i64;
    }
    if wp.keys().map(partition_weight).min().unwrap_or(0) != gv_max_weight(wp) {
        return Err(Error::Invalid("check_l0 requires homogeneous dual".into()));
    }
    let mut factor = Scalar::from_integer(1.into());
    if deg >= 0 {
        for _ in 0..deg {
            factor *= scale;
        }
    } else {
        for _ in 0..(-deg) {
            factor /= scale;
        }
    }
    let rhs = f.scale(&factor);
    if lhs != rhs {
        return Err(Error::Certificate(format!(
            "L(0)-conjugation mismatch (degree {deg}): {lhs} vs {rhs}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::correlator::e_element;
    use super::*;
    use crate::ratfunc::{q, qr};
    use crate::voa::gv_vacuum;

    fn ctx() -> VoaContext {
        VoaContext::standard(8, 3)
    }

    #[test]
    fn constant_correlator_trivial() {
        let c = ctx();
        let e0 = e_element(gv_basis_state(vec![1]), 0);
        check_l_minus1(&e0, &gv_basis_state(vec![1]), &[], &c).unwrap();
        check_l0(&e0, &gv_basis_state(vec![1]), &[], &q(3), &c).unwrap();
    }

    #[test]
    fn current_two_point_derivative() {
        // ∂_{z1} 1/(z1-z2)² = -2/(z1-z2)³ matches the L(-1)-insertion
        let c = ctx();
        let e2 = e_element(gv_vacuum(), 2);
        let a = gv_basis_state(vec![1]);
        check_l_minus1(
            &e2,
            &gv_vacuum(),
            &[(a.clone(), Var::z(1)), (a.clone(), Var::z(2))],
            &c,
        )
        .unwrap();
        check_l0(
            &e2,
            &gv_vacuum(),
            &[(a.clone(), Var::z(1)), (a, Var::z(2))],
            &qr(5, 3),
            &c,
        )
        .unwrap();
    }

    #[test]
    fn family_with_nontrivial_generator() {
        let c = ctx();
        for (gen, wp) in [
            (gv_basis_state(vec![1]), gv_basis_state(vec![2])),
            (gv_basis_state(vec![2]), gv_basis_state(vec![1])),
            (gv_basis_state(vec![1, 1]), gv_vacuum()),
        ] {
            let e1 = e_element(gen, 1);
            let v = gv_basis_state(vec![1]);
            check_l_minus1(&e1, &wp, &[(v.clone(), Var::z(1))], &c).unwrap();
            check_l0(&e1, &wp, &[(v, Var::z(1))], &q(2), &c).unwrap();
        }
    }
}
