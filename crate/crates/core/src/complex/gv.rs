use super::cochain::{cochain_product, commutator_cochain, delta, Cochain, DeltaSigns};
use crate::eprod::{ExclusionMap, SlotContent};
use crate::ratfunc::{EpsSeries, RatFunc, Var};
use crate::voa::{basis, gv_basis_state, GradedVector, VoaContext};
use crate::{Error, Result};

/// Evidence pack for a product-type class representative.
#[derive(Debug, Clone)]
pub struct ClassRep {
    pub representative: Cochain,
    /// per-sample coboundary evaluations (all zero ⇔ closed on the family)
    pub closed_on_family: bool,
    pub closedness_failures: usize,
    /// explicit nonvanishing witness: (dual label, ε-order, value)
    pub witness: Option<(String, i64, RatFunc)>,
}

/// The commutator-product class representative [(δ¹₂Φ)·Φ] for Φ ∈ C¹₂,
/// built with the derived bookkeeping r = 1 (one shared formal parameter)
/// and t = m common composable operators.
pub fn gv_representative(phi: &Cochain, signs: DeltaSigns) -> Result<Cochain> {
    if phi.n != 1 || phi.m < 1 {
        return Err(Error::Invalid(
            "product-type class needs a C^1 cochain with budget".into(),
        ));
    }
    let dphi = delta(phi, signs)?; // bidegree (2, m-1)
    // shared parameter: Φ's slot coincides with the second slot of δΦ
    let excl = ExclusionMap::with_pairs(2, 1, vec![(1, 0)], vec![Var::z(1), Var::z(2)]);
    let t = dphi.m.min(phi.m);
    commutator_cochain(&dphi, phi, &excl, t)
}

/// Search the sample family for closedness of δ(rep) and a nonvanishing
/// coefficient of the representative itself. Insertion states sweep a small
/// weight-≤2 family; configuration points are the caller's rational samples
/// (ζ's and λ stay symbolic).
pub fn gv_class(
    phi: &Cochain,
    signs: DeltaSigns,
    duals: &[(String, GradedVector)],
    points: &[RatFunc],
    ctx: &VoaContext,
) -> Result<ClassRep> {
    if points.len() < 3 {
        return Err(Error::Invalid("need at least 3 sample points".into()));
    }
    let rep = gv_representative(phi, signs)?;
    let family: Vec<GradedVector> = vec![
        gv_basis_state(vec![1]),
        gv_basis_state(vec![1, 1]),
        gv_basis_state(vec![2]),
    ];
    let mut witness = None;
    'outer: for (name, wp) in duals {
        for s1 in &family {
            for s2 in &family {
                let slots: Vec<SlotContent> = vec![
                    crate::eprod::slot(s1, points[0].clone()),
                    crate::eprod::slot(s2, points[1].clone()),
                ];
                let s = rep.eval_s(wp, &slots, ctx)?;
                for (ord, coeff) in s.orders() {
                    if !coeff.is_zero() {
                        witness = Some((name.clone(), ord, coeff.clone()));
                        break 'outer;
                    }
                }
            }
        }
    }
    // closedness of the representative: δ(rep) on the family
    let drep = delta(&rep, signs)?;
    let mut failures = 0usize;
    for (_, wp) in duals {
        for st in &family {
            let dslots: Vec<SlotContent> = vec![
                crate::eprod::slot(st, points[0].clone()),
                crate::eprod::slot(&gv_basis_state(vec![1]), points[1].clone()),
                crate::eprod::slot(&gv_basis_state(vec![1]), points[2].clone()),
            ];
            let s = drep.eval_s(wp, &dslots, ctx)?;
            if !s.is_zero() {
                failures += 1;
            }
        }
    }
    Ok(ClassRep {
        representative: rep,
        closed_on_family: failures == 0,
        closedness_failures: failures,
        witness,
    })
}

/// The middle bracket of the class-invariance computation: for the
/// commutator product, Φ·(δη) + (δη)·Φ = 0 identically. Returns the
/// evaluated sum on a sample (must be zero by antisymmetry).
pub fn invariance_middle_bracket(
    phi: &Cochain,
    eta: &Cochain,
    signs: DeltaSigns,
    wp: &GradedVector,
    ctx: &VoaContext,
) -> Result<EpsSeries> {
    let deta = delta(eta, signs)?;
    let excl = ExclusionMap::with_pairs(1, 2, vec![(0, 0)], vec![Var::z(1), Var::z(2)]);
    let a = commutator_cochain(phi, &deta, &excl, 0)?;
    let excl_rev = ExclusionMap::with_pairs(2, 1, vec![(0, 0)], vec![Var::z(1), Var::z(2)]);
    let b = commutator_cochain(&deta, phi, &excl_rev, 0)?;
    let slots: Vec<SlotContent> = vec![
        crate::eprod::slot(&gv_basis_state(vec![1]), RatFunc::var(Var::z(1))),
        crate::eprod::slot(&gv_basis_state(vec![1]), RatFunc::var(Var::z(2))),
    ];
    let va = a.eval_s(wp, &slots, ctx)?;
    let vb = b.eval_s(wp, &slots, ctx)?;
    Ok(va.add(&vb))
}

/// Orthogonality of Φ against δΨ under the commutator product: true iff
/// every ε-coefficient vanishes on the sample family.
pub fn orthogonality_check(
    phi: &Cochain,
    psi: &Cochain,
    signs: DeltaSigns,
    duals: &[GradedVector],
    ctx: &VoaContext,
) -> Result<bool> {
    let dpsi = delta(psi, signs)?;
    let k = phi.n;
    let n = dpsi.n;
    let vars: Vec<Var> = (1..=(k + n) as u32).map(Var::z).collect();
    let excl = ExclusionMap::disjoint(k, n, vars.clone());
    let comm = commutator_cochain(phi, &dpsi, &excl, 0)?;
    let slots: Vec<SlotContent> = vars
        .iter()
        .map(|v| crate::eprod::slot(&gv_basis_state(vec![1]), RatFunc::var(*v)))
        .collect();
    for wp in duals {
        let s = comm.eval_s(wp, &slots, ctx)?;
        if !s.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Closedness and an exactness search over the small E-element generating
/// family: a decidable small-instance search, not a cohomology computation.
#[derive(Debug, Clone)]
pub struct Predicates {
    pub closed: bool,
    pub exact_witness: Option<String>,
}

pub fn cohomology_predicates(
    phi: &Cochain,
    signs: DeltaSigns,
    gen_weight: u32,
    duals: &[GradedVector],
    ctx: &VoaContext,
) -> Result<Predicates> {
    if phi.is_series_valued() {
        return Err(Error::Invalid("predicates run on plain cochains".into()));
    }
    // closed ⇔ δΦ = 0 on the family
    let dphi = delta(phi, signs)?;
    let ins: Vec<(GradedVector, RatFunc)> = (1..=dphi.n as u32)
        .map(|i| (gv_basis_state(vec![1]), RatFunc::var(Var::z(i))))
        .collect();
    let mut closed = true;
    for wp in duals {
        if !dphi.eval_r(wp, &ins, ctx)?.is_zero() {
            closed = false;
            break;
        }
    }
    // exactness: Φ = δΛ for some Λ in the E-element span with generator
    // weight ≤ gen_weight (only sensible for n ≥ 1)
    let mut exact_witness = None;
    if phi.n >= 1 {
        let phi_ins: Vec<(GradedVector, RatFunc)> = (1..=phi.n as u32)
            .map(|i| (gv_basis_state(vec![1]), RatFunc::var(Var::z(i))))
            .collect();
        'gens: for w in 0..=gen_weight {
            for p in basis(w, ctx.n_max)? {
                let lam = Cochain::from_e(
                    crate::wspace::e_element(gv_basis_state(p.clone()), phi.n - 1),
                    phi.m + 1,
                );
                let dlam = delta(&lam, signs)?;
                let mut agree = true;
                for wp in duals {
                    if dlam.eval_r(wp, &phi_ins, ctx)? != phi.eval_r(wp, &phi_ins, ctx)? {
                        agree = false;
                        break;
                    }
                }
                if agree {
                    exact_witness = Some(format!(
                        "delta of the E-element with generator {}",
                        crate::voa::state_to_string(&gv_basis_state(p))
                    ));
                    break 'gens;
                }
            }
        }
    }
    Ok(Predicates {
        closed,
        exact_witness,
    })
}

/// Fingerprint of a cochain on the sample family (used to compare Φ and
/// Φ + δΛ as classes: same δ-evaluations).
pub fn class_fingerprint(
    phi: &Cochain,
    signs: DeltaSigns,
    duals: &[GradedVector],
    ctx: &VoaContext,
) -> Result<Vec<RatFunc>> {
    let dphi = delta(phi, signs)?;
    let ins: Vec<(GradedVector, RatFunc)> = (1..=dphi.n as u32)
        .map(|i| (gv_basis_state(vec![1]), RatFunc::var(Var::z(i))))
        .collect();
    duals.iter().map(|wp| dphi.eval_r(wp, &ins, ctx)).collect()
}

/// Product of an exceptional-complex element with another cochain (the
/// bidegree bookkeeping of the exceptional product corollary): the product
/// keeps the second factor's budget.
pub fn exceptional_product(
    ex_inner: &Cochain,
    psi: &Cochain,
    excl: ExclusionMap,
) -> Result<Cochain> {
    let mut p = cochain_product(ex_inner, psi, excl, 0)?;
    p.m = psi.m;
    Ok(p)
}
