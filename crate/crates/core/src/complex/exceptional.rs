use super::cochain::{Body, Cochain, ExSigns};
use crate::eprod::SlotContent;
use crate::ratfunc::{laurent_expand, ExpansionLocus, RatFunc, Var};
use crate::voa::{gv_max_weight, gv_vacuum, GradedVector, RatVector, VoaContext};
use crate::wspace::Correlator;
use crate::{Error, Result};

/// A bidegree-(2, ·) cochain together with its transversal-connection
/// certificates: the two P_r-resummed connection forms G1, G2 reconstruct to
/// rational functions with the allowed poles and agree with the exceptional
/// coboundary group decomposition.
#[derive(Clone, Debug)]
pub struct ExceptionalCochain {
    pub inner: Cochain,
    pub signs: ExSigns,
}

/// The four coboundary groups of a bidegree-2 cochain at a 3-slot sample,
/// each paired with its weight-cut (P_r projection) route. Groups 0/3 are
/// the module compositions (front/back), groups 1/2 the fused pairs.
pub struct ConnectionForms {
    pub exact: [RatFunc; 4],
    pub trunc: [RatFunc; 4],
    pub signs: ExSigns,
}

impl ConnectionForms {
    pub fn g1_exact(&self) -> RatFunc {
        self.exact[0].clone().add(&self.exact[1])
    }
    pub fn g2_exact(&self) -> RatFunc {
        self.exact[2].clone().add(&self.exact[3])
    }
}

fn fused(slots: &[SlotContent], j: usize) -> Vec<SlotContent> {
    let mut out = Vec::new();
    for (idx, s) in slots.iter().enumerate() {
        if idx == j {
            let mut m = s.clone();
            m.extend(slots[j + 1].iter().cloned());
            out.push(m);
        } else if idx != j + 1 {
            out.push(s.clone());
        }
    }
    out
}

/// Project the value of a two-insertion E-element pair onto weights ≤ N_max.
fn pair_projection(
    ins: [(GradedVector, RatFunc); 2],
    ctx: &VoaContext,
) -> Result<RatVector> {
    let pair = crate::wspace::e_element(gv_vacuum(), 2);
    let mut proj = RatVector::new();
    for r in 0..=ctx.n_max {
        for (p, c) in pair.project(&ins, r, ctx)? {
            crate::voa::rv_add_term(&mut proj, p, c);
        }
    }
    ctx.note_truncation();
    Ok(proj)
}

pub fn connection_forms(
    phi: &Cochain,
    signs: &ExSigns,
    wp: &GradedVector,
    ins: &[(GradedVector, RatFunc)],
    ctx: &VoaContext,
) -> Result<ConnectionForms> {
    if phi.n != 2 || ins.len() != 3 {
        return Err(Error::ArityMismatch {
            expected: 3,
            got: ins.len(),
        });
    }
    let corr = match &phi.body {
        Body::EBased(c) => c,
        _ => {
            return Err(Error::Invalid(
                "connection forms need an E-element-backed cochain".into(),
            ))
        }
    };
    let slots: Vec<SlotContent> = ins
        .iter()
        .map(|(v, p)| crate::eprod::slot(v, p.clone()))
        .collect();
    let s = |i: usize| crate::ratfunc::q(signs.0[i] as i64);
    let zero = RatFunc::zero();

    // exact groups
    let front = phi.eval_plain(wp, &slots[0], &slots[1..], &zero, ctx)?;
    let mid01 = phi.eval_plain(wp, &[], &fused(&slots, 0), &zero, ctx)?;
    let mid12 = phi.eval_plain(wp, &[], &fused(&slots, 1), &zero, ctx)?;
    let back = phi.eval_plain(wp, &slots[2], &slots[..2], &zero, ctx)?;

    // truncated P_r routes. Module-composition groups cut the projection of
    // the cochain's value; fusion groups cut the projection of the pair
    // (with the printed ζ-offset absorbed by the translation property, the
    // pair anchor is the resummation point).
    let zeta = RatFunc::var(Var::aux(860));
    let compose_front = |front_op: &(GradedVector, RatFunc),
                         inner: [(GradedVector, RatFunc); 2]|
     -> Result<RatFunc> {
        let mut acc = RatFunc::zero();
        for r in 0..=ctx.n_max {
            let proj = corr.project(&[inner[0].clone(), inner[1].clone()], r, ctx)?;
            if proj.is_empty() {
                continue;
            }
            let states: Vec<(RatVector, RatFunc)> = vec![
                (crate::voa::rv_from_gv(&front_op.0), front_op.1.clone()),
                (proj, corr.gen_point.clone()),
            ];
            acc = acc.add(&crate::wspace::wick_eval(
                wp,
                &states,
                (&gv_vacuum(), &RatFunc::zero()),
            )?);
        }
        ctx.note_truncation();
        Ok(acc)
    };
    let t_front = compose_front(&ins[0], [ins[1].clone(), ins[2].clone()])?;
    let t_back = compose_front(&ins[2], [ins[0].clone(), ins[1].clone()])?;
    let t_mid01 = {
        let proj = pair_projection(
            [
                (ins[0].0.clone(), ins[0].1.sub(&zeta)),
                (ins[1].0.clone(), ins[1].1.sub(&zeta)),
            ],
            ctx,
        )?;
        let slot0: SlotContent = vec![(proj, zeta.clone())];
        phi.eval_plain(wp, &[], &[slot0, slots[2].clone()], &zero, ctx)?
    };
    let t_mid12 = {
        let proj = pair_projection(
            [
                (ins[1].0.clone(), ins[1].1.sub(&zeta)),
                (ins[2].0.clone(), ins[2].1.sub(&zeta)),
            ],
            ctx,
        )?;
        let slot1: SlotContent = vec![(proj, zeta.clone())];
        phi.eval_plain(wp, &[], &[slots[0].clone(), slot1], &zero, ctx)?
    };
    Ok(ConnectionForms {
        exact: [
            front.scale(&s(0)),
            mid01.scale(&s(1)),
            mid12.scale(&s(2)),
            back.scale(&s(3)),
        ],
        trunc: [
            t_front.scale(&s(0)),
            t_mid01.scale(&s(1)),
            t_mid12.scale(&s(2)),
            t_back.scale(&s(3)),
        ],
        signs: *signs,
    })
}

/// Certify membership in the exceptional space: the connection forms are
/// rational with poles only on the allowed divisors, each truncated P_r
/// route agrees with its exact group to the truncation-guaranteed order in
/// the appropriate gauge, and G1 + G2 reproduces the full exceptional
/// coboundary evaluation.
pub fn check_exceptional(
    phi: &Cochain,
    signs: ExSigns,
    samples: &[(GradedVector, Vec<(GradedVector, RatFunc)>)],
    ctx: &VoaContext,
) -> Result<ExceptionalCochain> {
    if phi.n != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: phi.n,
        });
    }
    let ex = ExceptionalCochain {
        inner: phi.clone(),
        signs,
    };
    let dex = delta_ex(&ex)?;
    for (wp, ins) in samples {
        let forms = connection_forms(phi, &signs, wp, ins, ctx)?;
        for g in [&forms.g1_exact(), &forms.g2_exact()] {
            Correlator::certify_poles(g, ins, &RatFunc::zero())?;
        }
        // dual-path agreement: G1 + G2 = full exceptional coboundary
        let full = dex.eval_r(wp, ins, ctx)?;
        let sum = forms.g1_exact().add(&forms.g2_exact());
        if full != sum {
            return Err(Error::Certificate(format!(
                "connection-form decomposition mismatch: G1+G2 = {sum}, delta_ex = {full}"
            )));
        }
        let tot: i64 = ins.iter().map(|(v, _)| gv_max_weight(v) as i64).sum::<i64>()
            + gv_max_weight(wp) as i64;
        let guaranteed = ctx.n_max as i64 - tot;
        let sgauge = Var::aux(861);
        for group in 0..4usize {
            let diff = forms.exact[group].sub(&forms.trunc[group]);
            if diff.is_zero() {
                continue;
            }
            // gauge per group type: module compositions scale the projected
            // pair toward the generator; fusions move the pair toward the
            // resummation anchor ζ.
            let mut bind = std::collections::BTreeMap::new();
            let scaled: &[usize] = match group {
                0 => &[1, 2], // front: project (v2, v3)
                1 => &[0, 1], // mid01
                2 => &[1, 2], // mid12
                _ => &[0, 1], // back
            };
            for &j in scaled {
                if let Some(v) = single_var(&ins[j].1) {
                    let offset = RatFunc::var(sgauge).scale(&crate::ratfunc::q(j as i64 + 2));
                    let target = if group == 0 || group == 3 {
                        offset // toward the generator at 0
                    } else {
                        RatFunc::var(Var::aux(860)).add(&offset) // toward ζ
                    };
                    bind.insert(v, target);
                }
            }
            let d = diff.substitute(&bind)?;
            let e = laurent_expand(&d, ExpansionLocus::Var(sgauge), guaranteed.max(0))?;
            if !(e.is_empty() || e.lowest > guaranteed) {
                return Err(Error::Certificate(format!(
                    "P_r route for group {group} disagrees at gauge order {} (guaranteed {})",
                    e.lowest, guaranteed
                )));
            }
        }
    }
    Ok(ex)
}

fn single_var(p: &RatFunc) -> Option<Var> {
    let vs = p.vars();
    if vs.len() == 1 && p == &RatFunc::var(vs[0]) {
        Some(vs[0])
    } else {
        None
    }
}

/// δ²_ex on a certified exceptional cochain: the four-group three-point
/// connection, landing in C³₀.
pub fn delta_ex(phi: &ExceptionalCochain) -> Result<Cochain> {
    Ok(Cochain {
        n: 3,
        m: 0,
        boundary: phi.inner.boundary.map(|k| k + 1),
        r: phi.inner.r,
        t: phi.inner.t,
        body: Body::DeltaEx {
            inner: Box::new(phi.inner.clone()),
            signs: phi.signs,
        },
    })
}
