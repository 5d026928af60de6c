use super::exclusion::ExclusionMap;
use crate::ratfunc::{EpsSeries, RatFunc, Var};
use crate::voa::{
    dual_basis, virasoro, GradedVector, RatVector, VoaContext,
};
use crate::wspace::{wick_eval, Correlator};
use crate::{Error, Result};

/// Content of one merged slot: an ordered list of (state, point) operator
/// insertions occupying the slot (a single pair normally; two after a fused
/// coboundary insertion).
pub type SlotContent = Vec<(RatVector, RatFunc)>;

pub fn slot(state: &GradedVector, point: RatFunc) -> SlotContent {
    vec![(crate::voa::rv_from_gv(state), point)]
}

/// How the two factors pair against dual vectors.
#[derive(Clone, Debug)]
pub enum PairingMode {
    /// The printed convention: both factors against the same w′.
    Printed,
    /// Variant behind a flag: independent duals (w′₁, w′₂).
    IndependentDuals(GradedVector),
}

/// The ε-product evaluation. Factors are E-element-backed correlators; each
/// factor is wrapped by the intertwiner form of the proof of the pole-locus
/// proposition: the basis insertion sits at 0, the factor's own content is
/// shifted by the factor's ζ. The coefficient of ε^l is the level-l
/// dual-basis sum of the two wrapped evaluations.
pub struct EpsProduct<'a> {
    pub phi: &'a Correlator,
    pub psi: &'a Correlator,
    pub excl: ExclusionMap,
    pub zeta1: RatFunc,
    pub zeta2: RatFunc,
    /// extra operators routed into a factor by coboundary actions (points in
    /// the merged frame, shifted by ζ at evaluation time)
    pub phi_extra: Vec<(RatVector, RatFunc)>,
    pub psi_extra: Vec<(RatVector, RatFunc)>,
}

impl<'a> EpsProduct<'a> {
    pub fn new(phi: &'a Correlator, psi: &'a Correlator, excl: ExclusionMap) -> EpsProduct<'a> {
        assert_eq!(phi.arity, excl.k, "phi arity must match exclusion map");
        assert_eq!(psi.arity, excl.n, "psi arity must match exclusion map");
        EpsProduct {
            phi,
            psi,
            excl,
            zeta1: RatFunc::var(Var::zeta(1)),
            zeta2: RatFunc::var(Var::zeta(2)),
            phi_extra: vec![],
            psi_extra: vec![],
        }
    }

    /// One wrapped factor: ⟨w′, e^{ζL(-1)} Y_W(u, -ζ) Φ(...)⟩, realized as
    /// the Wick evaluation with u at 0 and every Φ-side point shifted by ζ.
    fn factor(
        corr: &Correlator,
        wp: &GradedVector,
        u: &GradedVector,
        extra: &[(RatVector, RatFunc)],
        slots: &[&SlotContent],
        zeta: &RatFunc,
        ctx: &VoaContext,
    ) -> Result<RatFunc> {
        let _ = ctx;
        let mut states: Vec<(RatVector, RatFunc)> = Vec::new();
        states.push((crate::voa::rv_from_gv(u), RatFunc::zero()));
        for (v, p) in extra {
            states.push((v.clone(), p.add(zeta)));
        }
        for (v, p) in &corr.pre {
            states.push((crate::voa::rv_from_gv(v), p.add(zeta)));
        }
        // factor's own permutation applies to its slot list
        let order: Vec<usize> = match &corr.perm {
            None => (0..slots.len()).collect(),
            Some(p) => p.clone(),
        };
        for &i in &order {
            for (v, p) in slots[i] {
                states.push((v.clone(), p.add(zeta)));
            }
        }
        let gen_pt = corr.gen_point.add(zeta);
        wick_eval(wp, &states, (&corr.generator, &gen_pt))
    }

    /// Evaluate the product against merged slot contents, producing the
    /// truncated ε-series. `basis_fn` supplies the dual pairs per level
    /// (defaults to the diagonal partition duals).
    pub fn eval_with(
        &self,
        wp: &GradedVector,
        mode: &PairingMode,
        slots: &[SlotContent],
        ctx: &VoaContext,
        basis_fn: &dyn Fn(u32) -> Result<Vec<(GradedVector, GradedVector)>>,
    ) -> Result<EpsSeries> {
        if slots.len() != self.excl.merged_len() {
            return Err(Error::ArityMismatch {
                expected: self.excl.merged_len(),
                got: slots.len(),
            });
        }
        let phi_slots: Vec<&SlotContent> = self
            .excl
            .phi_assignment()
            .into_iter()
            .map(|i| &slots[i])
            .collect();
        let psi_slots: Vec<&SlotContent> = self
            .excl
            .psi_assignment()
            .into_iter()
            .map(|i| &slots[i])
            .collect();
        let wp2 = match mode {
            PairingMode::Printed => wp,
            PairingMode::IndependentDuals(w2) => w2,
        };
        let mut out = EpsSeries::zero(ctx.l_max);
        for l in 0..=ctx.l_max {
            let mut coeff = RatFunc::zero();
            for (u, ubar) in basis_fn(l as u32)? {
                let a = Self::factor(self.phi, wp, &u, &self.phi_extra, &phi_slots, &self.zeta1, ctx)?;
                if a.is_zero() {
                    continue;
                }
                let b = Self::factor(
                    self.psi,
                    wp2,
                    &ubar,
                    &self.psi_extra,
                    &psi_slots,
                    &self.zeta2,
                    ctx,
                )?;
                coeff = coeff.add(&a.mul(&b));
            }
            out.add_coeff(l, coeff);
        }
        Ok(out)
    }

    pub fn eval(
        &self,
        wp: &GradedVector,
        slots: &[SlotContent],
        ctx: &VoaContext,
    ) -> Result<EpsSeries> {
        self.eval_with(wp, &PairingMode::Printed, slots, ctx, &|l| {
            dual_basis(l, ctx)
        })
    }
}

/// Σ-action on the product: permute the merged (state, point) pairs and
/// re-form the product positionally (first k to the first factor).
pub fn sigma_on_product(
    prod: &EpsProduct,
    sigma: &[usize],
    wp: &GradedVector,
    slots: &[SlotContent],
    ctx: &VoaContext,
) -> Result<EpsSeries> {
    if sigma.len() != slots.len() {
        return Err(Error::ArityMismatch {
            expected: slots.len(),
            got: sigma.len(),
        });
    }
    let permuted: Vec<SlotContent> = sigma.iter().map(|&i| slots[i].clone()).collect();
    prod.eval(wp, &permuted, ctx)
}

/// ∂_s of the product per the defined routing: the x-side factor is
/// differentiated when slot s belongs to it or is an excluded (shared) slot;
/// otherwise the y-side factor. Realized as the L(-1)-insertion in the
/// owning factor's slot.
pub fn partial_product(
    prod: &EpsProduct,
    s: usize,
    wp: &GradedVector,
    slots: &[SlotContent],
    ctx: &VoaContext,
) -> Result<EpsSeries> {
    if s >= slots.len() {
        return Err(Error::Invalid(format!("slot index {s} out of range")));
    }
    let mut modified = slots.to_vec();
    let content = &mut modified[s];
    let mut new_content = SlotContent::new();
    for (v, p) in content.iter() {
        // L(-1) on a RatVector state
        let mut lvv = RatVector::new();
        for (label, c) in v {
            let mut single = GradedVector::new();
            single.insert(label.clone(), crate::ratfunc::q(1));
            for (q, cc) in virasoro(-1, &single, ctx) {
                crate::voa::rv_add_term(&mut lvv, q, c.scale(&cc));
            }
        }
        new_content.push((lvv, p.clone()));
    }
    *content = new_content;
    prod.eval(wp, &modified, ctx)
}

/// The commutator product Φ·Ψ = Φ·εΨ - Ψ·εΦ evaluated on merged slots.
pub fn commutator_product(
    phi: &Correlator,
    psi: &Correlator,
    excl: &ExclusionMap,
    wp: &GradedVector,
    slots: &[SlotContent],
    ctx: &VoaContext,
) -> Result<EpsSeries> {
    let fwd = EpsProduct::new(phi, psi, excl.clone());
    let mirrored = mirror_exclusion(excl);
    let bwd = EpsProduct::new(psi, phi, mirrored);
    // the reversed product pairs (Ψ first): merged slots reorder so that
    // Ψ's parameters lead
    let reordered = reorder_for_mirror(excl, slots);
    let a = fwd.eval(wp, slots, ctx)?;
    let b = bwd.eval(wp, &reordered, ctx)?;
    Ok(a.sub(&b))
}

/// Exclusion map of Ψ·Φ given the one for Φ·Ψ.
pub fn mirror_exclusion(excl: &ExclusionMap) -> ExclusionMap {
    let mut merged = Vec::new();
    // Ψ's variables first (in their own order), then Φ's unmatched ones
    let psi_assign = excl.psi_assignment();
    for &m in &psi_assign {
        merged.push(excl.merged[m]);
    }
    for i in 0..excl.k {
        if !excl.pairs.iter().any(|&(pi, _)| pi == i) {
            merged.push(excl.merged[i]);
        }
    }
    ExclusionMap {
        k: excl.n,
        n: excl.k,
        pairs: excl.pairs.iter().map(|&(i, j)| (j, i)).collect(),
        merged,
        explicit: None,
    }
}

pub fn reorder_for_mirror(excl: &ExclusionMap, slots: &[SlotContent]) -> Vec<SlotContent> {
    let psi_assign = excl.psi_assignment();
    let mut out: Vec<SlotContent> = psi_assign.iter().map(|&m| slots[m].clone()).collect();
    for i in 0..excl.k {
        if !excl.pairs.iter().any(|&(pi, _)| pi == i) {
            out.push(slots[i].clone());
        }
    }
    out
}

/// Report from comparing two factorization splits of the same merged
/// insertion list.
#[derive(Debug, Clone)]
pub struct SplitReport {
    pub equal: bool,
    /// first ε-order where the two splits disagree, with both coefficients
    pub witness: Option<(i64, RatFunc, RatFunc)>,
}

/// Compare the ε-products obtained by splitting a fixed merged insertion
/// list after `s1` vs after `s2` slots (factors are E-elements over the
/// given generators).
pub fn split_independence_check(
    gen_left: &GradedVector,
    gen_right: &GradedVector,
    wp: &GradedVector,
    merged: &[(GradedVector, RatFunc)],
    vars: &[Var],
    s1: usize,
    s2: usize,
    ctx: &VoaContext,
) -> Result<SplitReport> {
    let eval_split = |s: usize| -> Result<EpsSeries> {
        let phi = crate::wspace::e_element(gen_left.clone(), s);
        let psi = crate::wspace::e_element(gen_right.clone(), merged.len() - s);
        let excl = ExclusionMap::disjoint(s, merged.len() - s, vars.to_vec());
        let prod = EpsProduct::new(&phi, &psi, excl);
        let slots: Vec<SlotContent> = merged
            .iter()
            .map(|(v, p)| slot(v, p.clone()))
            .collect();
        prod.eval(wp, &slots, ctx)
    };
    let a = eval_split(s1)?;
    let b = eval_split(s2)?;
    let diff = a.sub(&b);
    if diff.is_zero() {
        return Ok(SplitReport {
            equal: true,
            witness: None,
        });
    }
    let order = diff.lowest_order().unwrap();
    Ok(SplitReport {
        equal: false,
        witness: Some((order, a.coeff(order)?, b.coeff(order)?)),
    })
}
