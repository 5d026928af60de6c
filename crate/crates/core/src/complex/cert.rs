use super::cochain::{Body, Cochain};
use crate::ratfunc::{RatFunc, Var};
use crate::voa::{basis, gv_basis_state, GradedVector, VoaContext};
use crate::wspace::{
    check_l0, check_l_minus1, composability_i, composability_j, shuffle_sum, Correlator,
};
use crate::{Error, Result};

/// Depth of the certificate suite run by `cochain_new`.
#[derive(Clone, Copy, Debug)]
pub struct CertDepth {
    /// max weight of basis states used as test insertions
    pub weight: u32,
    /// max weight of dual-side test functionals
    pub dual_weight: u32,
}

impl Default for CertDepth {
    fn default() -> Self {
        CertDepth {
            weight: 2,
            dual_weight: 2,
        }
    }
}

/// Validate a candidate cochain: the full certificate suite (pole bounds,
/// 2-argument shuffle vanishing, L(-1)/L(0) properties, and the two
/// composability conditions for budgets up to m). Returns the validated
/// cochain or the first failing certificate.
pub fn cochain_new(
    correlator: Correlator,
    n: usize,
    m: usize,
    depth: CertDepth,
    ctx: &VoaContext,
) -> Result<Cochain> {
    if correlator.arity != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: correlator.arity,
        });
    }
    let co = Cochain::from_e(correlator, m);
    certify(&co, depth, ctx)?;
    Ok(co)
}

pub fn certify(co: &Cochain, depth: CertDepth, ctx: &VoaContext) -> Result<()> {
    let corr = match &co.body {
        Body::EBased(c) => c,
        _ => {
            return Err(Error::Certificate(
                "certification runs on E-element-backed cochains".into(),
            ))
        }
    };
    let n = co.n;
    let states: Vec<GradedVector> = (0..=depth.weight)
        .flat_map(|w| basis(w, ctx.n_max).expect("within cutoff"))
        .map(gv_basis_state)
        .collect();
    let duals: Vec<GradedVector> = (0..=depth.dual_weight)
        .flat_map(|w| basis(w, ctx.n_max).expect("within cutoff"))
        .map(gv_basis_state)
        .collect();
    let points: Vec<RatFunc> = (1..=n as u32).map(|i| RatFunc::var(Var::z(i))).collect();
    let vars: Vec<Var> = (1..=n as u32).map(Var::z).collect();

    // n = 0: constant correlators are valid for any budget
    if n == 0 {
        return Ok(());
    }

    for wp in &duals {
        // representative insertions: currents everywhere, then one slot
        // swept through the state family
        for sweep in 0..n {
            for st in &states {
                let ins: Vec<(GradedVector, RatFunc)> = (0..n)
                    .map(|i| {
                        let v = if i == sweep {
                            st.clone()
                        } else {
                            gv_basis_state(vec![1])
                        };
                        (v, points[i].clone())
                    })
                    .collect();
                let value = corr.evaluate(wp, &ins, ctx)?;
                // E-element cochains anchor the generator at the origin; a
                // body producing poles away from the diagonals and the
                // origin violates the declared pole discipline.
                Correlator::certify_poles(&value, &ins, &RatFunc::zero())?;
                // L-properties
                let var_ins: Vec<(GradedVector, Var)> = ins
                    .iter()
                    .zip(vars.iter())
                    .map(|((v, _), z)| (v.clone(), *z))
                    .collect();
                check_l_minus1(corr, wp, &var_ins, ctx)?;
                check_l0(corr, wp, &var_ins, &crate::ratfunc::q(2), ctx)?;
                // 2-argument shuffle antisymmetrization
                if n == 2 {
                    let s = shuffle_sum(corr, 1, wp, &ins, ctx)?;
                    if !s.is_zero() {
                        return Err(Error::Certificate(format!(
                            "2-argument shuffle sum nonzero: {s}"
                        )));
                    }
                }
            }
        }
    }

    // composability certificates at small budgets
    let wp = duals.last().cloned().unwrap_or_else(crate::voa::gv_vacuum);
    let a = gv_basis_state(vec![1]);
    for budget in 1..=co.m.min(2) {
        // I-condition: group `budget` extra currents onto the first slot
        let mut states_i: Vec<GradedVector> = vec![a.clone(); budget + n];
        states_i[0] = states.get(1).cloned().unwrap_or_else(|| a.clone());
        let pts: Vec<RatFunc> = (1..=(budget + n) as u32)
            .map(|i| RatFunc::var(Var::z(i)))
            .collect();
        let mut groups = vec![1usize; n];
        groups[0] = budget + 1;
        let zetas: Vec<RatFunc> = (0..n)
            .map(|i| RatFunc::var(Var::aux(870 + i as u32)))
            .collect();
        let out = composability_i(corr, &wp, &states_i, &pts, &groups, &zetas, ctx)?;
        if !out.ok {
            return Err(Error::Certificate(format!(
                "I-composability at budget {budget}: truncated route disagrees beyond order {}",
                out.guaranteed_order
            )));
        }
        // J-condition: `budget` front operators
        let front: Vec<(GradedVector, RatFunc)> = (0..budget)
            .map(|i| (a.clone(), RatFunc::var(Var::aux(880 + i as u32))))
            .collect();
        let ins: Vec<(GradedVector, RatFunc)> = (0..n)
            .map(|i| (a.clone(), points[i].clone()))
            .collect();
        let out = composability_j(corr, &wp, &front, &ins, ctx)?;
        if !out.ok {
            return Err(Error::Certificate(format!(
                "J-composability at budget {budget}: truncated route disagrees beyond order {}",
                out.guaranteed_order
            )));
        }
    }
    Ok(())
}
