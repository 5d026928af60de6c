use crate::eprod::{ExclusionMap, SlotContent};
use crate::ratfunc::{EpsSeries, RatFunc, Scalar, Var};
use crate::voa::{dual_basis, GradedVector, RatVector, VoaContext};
use crate::wspace::{wick_eval, Correlator};
use crate::{Error, Result};

/// Signs of the three coboundary groups. `back = None` means the standard
/// (-1)^{n+1}; the middle sign is mid_base·(-1)^i.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeltaSigns {
    pub front: i32,
    pub mid_base: i32,
    pub back: Option<i32>,
}

impl Default for DeltaSigns {
    fn default() -> Self {
        DeltaSigns {
            front: 1,
            mid_base: 1,
            back: None,
        }
    }
}

impl DeltaSigns {
    pub fn back_sign(&self, n: usize) -> i32 {
        match self.back {
            Some(s) => s,
            None => {
                if (n + 1) % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

/// Signs of the four groups of the exceptional coboundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExSigns(pub [i32; 4]);

impl Default for ExSigns {
    fn default() -> Self {
        // Hochschild assignment; δ²_ex ∘ δ¹₂ = 0 holds under it
        ExSigns([1, -1, 1, -1])
    }
}

impl ExSigns {
    /// The sign assignment as printed in the defining display of the
    /// exceptional connection (fails the sign audit).
    pub fn printed() -> ExSigns {
        ExSigns([1, -1, 1, 1])
    }
}

/// Body of a cochain: E-element leaves, linear combinations, coboundaries of
/// inner cochains, and ε-products of two plain factors.
#[derive(Clone, Debug)]
pub enum Body {
    EBased(Correlator),
    Sum(Vec<(Scalar, Cochain)>),
    Delta {
        inner: Box<Cochain>,
        signs: DeltaSigns,
    },
    DeltaEx {
        inner: Box<Cochain>,
        signs: ExSigns,
    },
    Product {
        phi: Box<Cochain>,
        psi: Box<Cochain>,
        excl: ExclusionMap,
        zeta1: RatFunc,
        zeta2: RatFunc,
    },
}

/// A double-complex cochain: an evaluable body with bidegree (n, m) and the
/// product bookkeeping (r, t). Product-backed cochains are ε-series-valued
/// and carry the boundary index splitting their slots between the factors.
#[derive(Clone, Debug)]
pub struct Cochain {
    pub n: usize,
    pub m: usize,
    pub body: Body,
    /// number of slots routed to the left factor under coboundary actions
    pub boundary: Option<usize>,
    pub r: usize,
    pub t: usize,
}

impl Cochain {
    pub fn from_e(correlator: Correlator, m: usize) -> Cochain {
        Cochain {
            n: correlator.arity,
            m,
            body: Body::EBased(correlator),
            boundary: None,
            r: 0,
            t: 0,
        }
    }

    pub fn is_series_valued(&self) -> bool {
        match &self.body {
            Body::EBased(_) => false,
            Body::Product { .. } => true,
            Body::Sum(terms) => terms.iter().any(|(_, c)| c.is_series_valued()),
            Body::Delta { inner, .. } | Body::DeltaEx { inner, .. } => inner.is_series_valued(),
        }
    }

    /// Evaluate a plain (rational-valued) cochain.
    pub fn eval_r(
        &self,
        wp: &GradedVector,
        ins: &[(GradedVector, RatFunc)],
        ctx: &VoaContext,
    ) -> Result<RatFunc> {
        let slots: Vec<SlotContent> = ins
            .iter()
            .map(|(v, p)| crate::eprod::slot(v, p.clone()))
            .collect();
        self.eval_plain(wp, &[], &slots, &RatFunc::zero(), ctx)
    }

    /// Evaluate an ε-series-valued cochain on merged slots.
    pub fn eval_s(
        &self,
        wp: &GradedVector,
        slots: &[SlotContent],
        ctx: &VoaContext,
    ) -> Result<EpsSeries> {
        if self.is_series_valued() {
            self.eval_series(wp, &[], &[], slots, ctx)
        } else {
            let r = self.eval_plain(wp, &[], slots, &RatFunc::zero(), ctx)?;
            Ok(EpsSeries::constant(r, ctx.l_max))
        }
    }

    pub(crate) fn eval_plain(
        &self,
        wp: &GradedVector,
        left_ops: &[(RatVector, RatFunc)],
        slots: &[SlotContent],
        gen_shift: &RatFunc,
        ctx: &VoaContext,
    ) -> Result<RatFunc> {
        match &self.body {
            Body::EBased(corr) => {
                if slots.len() != corr.arity {
                    return Err(Error::ArityMismatch {
                        expected: corr.arity,
                        got: slots.len(),
                    });
                }
                let mut states: Vec<(RatVector, RatFunc)> = left_ops.to_vec();
                for (v, p) in &corr.pre {
                    states.push((crate::voa::rv_from_gv(v), p.add(gen_shift)));
                }
                let order: Vec<usize> = match &corr.perm {
                    None => (0..slots.len()).collect(),
                    Some(p) => p.clone(),
                };
                for &i in &order {
                    for (v, p) in &slots[i] {
                        states.push((v.clone(), p.clone()));
                    }
                }
                let gen_pt = corr.gen_point.add(gen_shift);
                wick_eval(wp, &states, (&corr.generator, &gen_pt))
            }
            Body::Sum(terms) => {
                let mut acc = RatFunc::zero();
                for (c, t) in terms {
                    acc = acc.add(&t.eval_plain(wp, left_ops, slots, gen_shift, ctx)?.scale(c));
                }
                Ok(acc)
            }
            Body::Delta { inner, signs } => {
                let n_in = inner.n;
                if slots.len() != n_in + 1 {
                    return Err(Error::ArityMismatch {
                        expected: n_in + 1,
                        got: slots.len(),
                    });
                }
                let mut acc = RatFunc::zero();
                // front: ω_W(slot 0) composed onto the value
                {
                    let mut lo = left_ops.to_vec();
                    lo.extend(slots[0].iter().cloned());
                    let v = inner.eval_plain(wp, &lo, &slots[1..], gen_shift, ctx)?;
                    acc = acc.add(&v.scale(&sgn(signs.front)));
                }
                // middles: fused insertions at consecutive slots
                for j in 0..n_in {
                    let mut fused: Vec<SlotContent> = Vec::with_capacity(n_in);
                    for (idx, s) in slots.iter().enumerate() {
                        if idx == j {
                            let mut merged = s.clone();
                            merged.extend(slots[j + 1].iter().cloned());
                            fused.push(merged);
                        } else if idx != j + 1 {
                            fused.push(s.clone());
                        }
                    }
                    let v = inner.eval_plain(wp, left_ops, &fused, gen_shift, ctx)?;
                    let s_i = signs.mid_base * if (j + 1) % 2 == 0 { 1 } else { -1 };
                    acc = acc.add(&v.scale(&sgn(s_i)));
                }
                // back: composition with the last slot
                {
                    let mut lo = left_ops.to_vec();
                    lo.extend(slots[n_in].iter().cloned());
                    let v = inner.eval_plain(wp, &lo, &slots[..n_in], gen_shift, ctx)?;
                    acc = acc.add(&v.scale(&sgn(signs.back_sign(n_in))));
                }
                Ok(acc)
            }
            Body::DeltaEx { inner, signs } => {
                if slots.len() != 3 || inner.n != 2 {
                    return Err(Error::ArityMismatch {
                        expected: 3,
                        got: slots.len(),
                    });
                }
                let mut acc = RatFunc::zero();
                // front
                {
                    let mut lo = left_ops.to_vec();
                    lo.extend(slots[0].iter().cloned());
                    let v = inner.eval_plain(wp, &lo, &slots[1..], gen_shift, ctx)?;
                    acc = acc.add(&v.scale(&sgn(signs.0[0])));
                }
                // mid (0,1) and mid (1,2)
                for (g, j) in [(1usize, 0usize), (2, 1)] {
                    let mut fused: Vec<SlotContent> = Vec::new();
                    for (idx, s) in slots.iter().enumerate() {
                        if idx == j {
                            let mut merged = s.clone();
                            merged.extend(slots[j + 1].iter().cloned());
                            fused.push(merged);
                        } else if idx != j + 1 {
                            fused.push(s.clone());
                        }
                    }
                    let v = inner.eval_plain(wp, left_ops, &fused, gen_shift, ctx)?;
                    acc = acc.add(&v.scale(&sgn(signs.0[g])));
                }
                // back
                {
                    let mut lo = left_ops.to_vec();
                    lo.extend(slots[2].iter().cloned());
                    let v = inner.eval_plain(wp, &lo, &slots[..2], gen_shift, ctx)?;
                    acc = acc.add(&v.scale(&sgn(signs.0[3])));
                }
                Ok(acc)
            }
            Body::Product { .. } => Err(Error::Invalid(
                "product cochain is ε-series-valued; use eval_s".into(),
            )),
        }
    }

    pub(crate) fn eval_series(
        &self,
        wp: &GradedVector,
        phi_ops: &[(RatVector, RatFunc)],
        psi_ops: &[(RatVector, RatFunc)],
        slots: &[SlotContent],
        ctx: &VoaContext,
    ) -> Result<EpsSeries> {
        match &self.body {
            Body::Product {
                phi,
                psi,
                excl,
                zeta1,
                zeta2,
            } => {
                if slots.len() != excl.merged_len() {
                    return Err(Error::ArityMismatch {
                        expected: excl.merged_len(),
                        got: slots.len(),
                    });
                }
                let phi_slots: Vec<SlotContent> = excl
                    .phi_assignment()
                    .into_iter()
                    .map(|i| shift_slot(&slots[i], zeta1))
                    .collect();
                let psi_slots: Vec<SlotContent> = excl
                    .psi_assignment()
                    .into_iter()
                    .map(|i| shift_slot(&slots[i], zeta2))
                    .collect();
                let mut out = EpsSeries::zero(ctx.l_max);
                for l in 0..=ctx.l_max {
                    let mut coeff = RatFunc::zero();
                    for (u, ubar) in dual_basis(l as u32, ctx)? {
                        let mut lo1: Vec<(RatVector, RatFunc)> =
                            vec![(crate::voa::rv_from_gv(&u), RatFunc::zero())];
                        lo1.extend(phi_ops.iter().map(|(v, p)| (v.clone(), p.add(zeta1))));
                        let a = phi.eval_plain(wp, &lo1, &phi_slots, zeta1, ctx)?;
                        if a.is_zero() {
                            continue;
                        }
                        let mut lo2: Vec<(RatVector, RatFunc)> =
                            vec![(crate::voa::rv_from_gv(&ubar), RatFunc::zero())];
                        lo2.extend(psi_ops.iter().map(|(v, p)| (v.clone(), p.add(zeta2))));
                        let b = psi.eval_plain(wp, &lo2, &psi_slots, zeta2, ctx)?;
                        coeff = coeff.add(&a.mul(&b));
                    }
                    out.add_coeff(l, coeff);
                }
                Ok(out)
            }
            Body::Sum(terms) => {
                let mut acc = EpsSeries::zero(ctx.l_max);
                for (c, t) in terms {
                    let v = if t.is_series_valued() {
                        t.eval_series(wp, phi_ops, psi_ops, slots, ctx)?
                    } else {
                        EpsSeries::constant(
                            t.eval_plain(wp, &[], slots, &RatFunc::zero(), ctx)?,
                            ctx.l_max,
                        )
                    };
                    acc = acc.add(&v.scale(&RatFunc::constant(c.clone())));
                }
                Ok(acc)
            }
            Body::Delta { inner, signs } => {
                // routed coboundary on a product-backed cochain
                let k_b = inner.boundary.ok_or_else(|| {
                    Error::Invalid("series-valued coboundary needs a factor boundary".into())
                })?;
                let n_in = inner.n;
                if slots.len() != n_in + 1 {
                    return Err(Error::ArityMismatch {
                        expected: n_in + 1,
                        got: slots.len(),
                    });
                }
                let _ = k_b;
                let mut acc = EpsSeries::zero(ctx.l_max);
                // front: routed into the φ factor
                {
                    let mut po = phi_ops.to_vec();
                    po.extend(slots[0].iter().cloned());
                    let v = inner.eval_series(wp, &po, psi_ops, &slots[1..], ctx)?;
                    acc = acc.add(&v.scale(&RatFunc::constant(sgn(signs.front))));
                }
                for j in 0..n_in {
                    let mut fused: Vec<SlotContent> = Vec::new();
                    for (idx, s) in slots.iter().enumerate() {
                        if idx == j {
                            let mut merged = s.clone();
                            merged.extend(slots[j + 1].iter().cloned());
                            fused.push(merged);
                        } else if idx != j + 1 {
                            fused.push(s.clone());
                        }
                    }
                    let v = inner.eval_series(wp, phi_ops, psi_ops, &fused, ctx)?;
                    let s_i = signs.mid_base * if (j + 1) % 2 == 0 { 1 } else { -1 };
                    acc = acc.add(&v.scale(&RatFunc::constant(sgn(s_i))));
                }
                // back: routed into the ψ factor
                {
                    let mut po = psi_ops.to_vec();
                    po.extend(slots[n_in].iter().cloned());
                    let v = inner.eval_series(wp, phi_ops, &po, &slots[..n_in], ctx)?;
                    acc = acc.add(&v.scale(&RatFunc::constant(sgn(signs.back_sign(n_in)))));
                }
                Ok(acc)
            }
            Body::DeltaEx { .. } => Err(Error::Invalid(
                "exceptional coboundary acts on plain exceptional cochains".into(),
            )),
            Body::EBased(_) => Err(Error::Invalid(
                "plain cochain evaluated as series; use eval_r".into(),
            )),
        }
    }
}

fn shift_slot(s: &SlotContent, by: &RatFunc) -> SlotContent {
    s.iter().map(|(v, p)| (v.clone(), p.add(by))).collect()
}

fn sgn(s: i32) -> Scalar {
    Scalar::from_integer((s as i64).into())
}

/// δ^n_m: the three-group coboundary, mapping C^n_m to C^{n+1}_{m-1}.
pub fn delta(phi: &Cochain, signs: DeltaSigns) -> Result<Cochain> {
    if phi.m == 0 {
        return Err(Error::NoBudget);
    }
    Ok(Cochain {
        n: phi.n + 1,
        m: phi.m - 1,
        boundary: phi.boundary.map(|k| k + 1),
        r: phi.r,
        t: phi.t,
        body: Body::Delta {
            inner: Box::new(phi.clone()),
            signs,
        },
    })
}

/// Product cochain Φ ·ε Ψ with declared common-operator count t; bidegree
/// (k + n - r, m + m' - t).
pub fn cochain_product(
    phi: &Cochain,
    psi: &Cochain,
    excl: ExclusionMap,
    t: usize,
) -> Result<Cochain> {
    if phi.is_series_valued() || psi.is_series_valued() {
        return Err(Error::Invalid("product factors must be plain cochains".into()));
    }
    if phi.n != excl.k || psi.n != excl.n {
        return Err(Error::ArityMismatch {
            expected: excl.k,
            got: phi.n,
        });
    }
    if t > phi.m.min(psi.m) {
        return Err(Error::Invalid(format!(
            "t = {t} exceeds min(m, m') = {}",
            phi.m.min(psi.m)
        )));
    }
    let r = excl.r();
    Ok(Cochain {
        n: excl.merged_len(),
        m: phi.m + psi.m - t,
        boundary: Some(excl.k),
        r,
        t,
        body: Body::Product {
            phi: Box::new(phi.clone()),
            psi: Box::new(psi.clone()),
            excl,
            zeta1: RatFunc::var(Var::zeta(1)),
            zeta2: RatFunc::var(Var::zeta(2)),
        },
    })
}

/// The commutator product Φ·Ψ = Φ·εΨ − Ψ·εΦ as a cochain.
pub fn commutator_cochain(
    phi: &Cochain,
    psi: &Cochain,
    excl: &ExclusionMap,
    t: usize,
) -> Result<Cochain> {
    let fwd = cochain_product(phi, psi, excl.clone(), t)?;
    let mirrored = crate::eprod::mirror_exclusion(excl);
    // the mirrored product must see its slots in the ψ-first merged order;
    // realize the reorder by remapping the exclusion onto the shared slot
    // list (the merged variable list stays the caller's).
    let mut bwd = cochain_product(psi, phi, mirrored, t)?;
    if let Body::Product { excl: e, .. } = &mut bwd.body {
        // remap: bwd's merged list is a permutation of fwd's; express its
        // assignments in terms of the original slot indices.
        let orig = &excl.merged;
        let perm: Vec<usize> = e
            .merged
            .iter()
            .map(|v| orig.iter().position(|o| o == v).expect("same variables"))
            .collect();
        // fold the permutation into the exclusion map by reordering merged
        // and adjusting assignments: we instead wrap with a permuted slot
        // view at evaluation time via a Sum of one term; simplest is to
        // store the permutation inside the exclusion's merged order.
        let _ = perm;
    }
    // The Sum evaluates both terms on the same slot list: the mirrored
    // product's assignments must be composed with the slot permutation.
    let bwd = permute_product_slots(bwd, excl)?;
    Ok(Cochain {
        n: fwd.n,
        m: fwd.m,
        boundary: fwd.boundary,
        r: fwd.r,
        t: fwd.t,
        body: Body::Sum(vec![
            (Scalar::from_integer(1.into()), fwd),
            (Scalar::from_integer((-1).into()), bwd),
        ]),
    })
}

/// Rewrite the mirrored product's slot assignments so it consumes the
/// original merged slot order.
fn permute_product_slots(mut bwd: Cochain, orig: &ExclusionMap) -> Result<Cochain> {
    if let Body::Product { excl, .. } = &mut bwd.body {
        let perm: Vec<usize> = excl
            .merged
            .iter()
            .map(|v| {
                orig.merged
                    .iter()
                    .position(|o| o == v)
                    .expect("mirror uses the same variables")
            })
            .collect();
        // new assignment arrays in terms of original slot indices
        let phi_assign: Vec<usize> = excl.phi_assignment().iter().map(|&i| perm[i]).collect();
        let psi_assign: Vec<usize> = excl.psi_assignment().iter().map(|&i| perm[i]).collect();
        excl.merged = orig.merged.clone();
        // encode assignments back as pairs: phi slots are positions
        // phi_assign; represent via a custom exclusion with explicit
        // assignment support.
        excl.pairs.clear();
        excl.k = phi_assign.len();
        excl.n = psi_assign.len();
        // Exclusion pairs are recovered from shared indices
        for (j, &pj) in psi_assign.iter().enumerate() {
            if let Some(i) = phi_assign.iter().position(|&pi| pi == pj) {
                excl.pairs.push((i, j));
            }
        }
        // the φ-assignment of a mirrored product is not the identity prefix,
        // so store it explicitly
        excl.explicit = Some((phi_assign, psi_assign));
    }
    Ok(bwd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::q;
    use crate::voa::{gv_basis_state, gv_vacuum};
    use crate::wspace::e_element;

    fn ctx() -> VoaContext {
        VoaContext::standard(6, 3)
    }

    fn zr(i: u32) -> RatFunc {
        RatFunc::var(Var::z(i))
    }

    fn a() -> GradedVector {
        gv_basis_state(vec![1])
    }

    #[test]
    fn plain_evaluation_matches_correlator() {
        let c = ctx();
        let co = Cochain::from_e(e_element(gv_vacuum(), 2), 2);
        let direct = e_element(gv_vacuum(), 2)
            .evaluate(&gv_vacuum(), &[(a(), zr(1)), (a(), zr(2))], &c)
            .unwrap();
        let via = co
            .eval_r(&gv_vacuum(), &[(a(), zr(1)), (a(), zr(2))], &c)
            .unwrap();
        assert_eq!(direct, via);
        let _ = q(0);
    }

    #[test]
    fn delta_consumes_budget() {
        let c0 = Cochain::from_e(e_element(gv_vacuum(), 0), 0);
        assert!(matches!(delta(&c0, DeltaSigns::default()), Err(Error::NoBudget)));
    }
}
