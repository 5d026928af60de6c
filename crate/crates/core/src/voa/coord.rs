
use num_traits::One;

use super::ctx::VoaContext;
use super::fock::{
    gv_basis_state, partition_weight, rv_add_term, rv_from_gv, GradedVector, RatVector,
};
use super::modes::mode_action;
use super::virasoro::{virasoro, virasoro_rat};
use crate::ratfunc::{factorial, q, RatFunc, Scalar, Var};
use crate::{Error, Result};

/// Coordinate change ρ(z) = Σ_{k≥1} a_k z^k in exponential form
/// exp(Σ_{k≥1} β_k z^{k+1}∂_z) β_0^{z∂_z}·z, carried to a fixed order.
/// Coefficients are rational functions so that local changes ρ_t with a
/// symbolic base point are representable.
#[derive(Clone, Debug)]
pub struct CoordChange {
    /// a[k] is the coefficient a_{k+1} of z^{k+1}.
    pub a: Vec<RatFunc>,
    /// beta[k] is β_k (β_0 = a_1).
    pub beta: Vec<RatFunc>,
}

impl CoordChange {
    pub fn identity(order: usize) -> CoordChange {
        let mut a = vec![RatFunc::zero(); order];
        if order > 0 {
            a[0] = RatFunc::one();
        }
        solve_exp_coeffs(&a).expect("identity is a coordinate change")
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    /// ρ′(z) coefficients: derivative of the polynomial truncation.
    pub fn rho_prime_at(&self, t: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (i, ai) in self.a.iter().enumerate() {
            // d/dz a_{i+1} z^{i+1} = (i+1) a_{i+1} z^i
            let k = (i + 1) as i64;
            acc = acc.add(&ai.scale(&q(k)).mul(&t.pow(i as i64).expect("power")));
        }
        acc
    }

    pub fn rho_at(&self, t: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (i, ai) in self.a.iter().enumerate() {
            acc = acc.add(&ai.mul(&t.pow((i + 1) as i64).expect("power")));
        }
        acc
    }
}

/// Apply the truncated vector field D = Σ_{k≥1} β_k z^{k+1} ∂_z to a
/// polynomial (coefficient vector in z), truncating above `order`.
fn apply_field(beta: &[RatFunc], p: &[RatFunc], order: usize) -> Vec<RatFunc> {
    let mut out = vec![RatFunc::zero(); order + 1];
    for (j, c) in p.iter().enumerate() {
        if c.is_zero() || j == 0 {
            continue;
        }
        // ∂_z z^j = j z^{j-1}; then z^{k+1} shifts to j + k
        for (k, bk) in beta.iter().enumerate().skip(1) {
            if bk.is_zero() {
                continue;
            }
            let target = j + k;
            if target <= order {
                out[target] = out[target].add(&c.scale(&q(j as i64)).mul(bk));
            }
        }
    }
    out
}

fn exp_field(beta: &[RatFunc], p: &[RatFunc], order: usize) -> Vec<RatFunc> {
    let mut acc = p.to_vec();
    acc.resize(order + 1, RatFunc::zero());
    let mut term = acc.clone();
    let mut j = 1i64;
    loop {
        term = apply_field(beta, &term, order);
        if term.iter().all(RatFunc::is_zero) {
            break;
        }
        let inv = RatFunc::one().scale(&(Scalar::one() / factorial(j as u32)));
        // term already accumulates D^j p; divide by j incrementally instead
        // of recomputing factorials: term_j = D(term_{j-1}) so scale by 1/j.
        let _ = inv;
        for c in term.iter_mut() {
            *c = c.scale(&(Scalar::one() / Scalar::from_integer(j.into())));
        }
        for (i, c) in term.iter().enumerate() {
            acc[i] = acc[i].add(c);
        }
        j += 1;
        if j as usize > order + 2 {
            break;
        }
    }
    acc
}

/// Solve ρ(z) = exp(Σ_{k≥1} β_k z^{k+1}∂_z) β_0^{z∂_z}·z for the β_k,
/// recursively order by order. `a[k]` is a_{k+1}; a_1 must be nonzero.
pub fn solve_exp_coeffs(a: &[RatFunc]) -> Result<CoordChange> {
    if a.is_empty() || a[0].is_zero() {
        return Err(Error::NotACoordinateChange);
    }
    let order = a.len();
    let beta0 = a[0].clone();
    let mut beta = vec![RatFunc::zero(); order];
    beta[0] = beta0.clone();
    // base: β_0^{z∂_z}·z = β_0 z
    let mut base = vec![RatFunc::zero(); order + 1];
    base[1] = beta0.clone();
    for k in 1..order {
        // with β_1..β_{k-1} fixed and β_k = 0, the coefficient of z^{k+1}
        // in exp(D)(β_0 z) is still missing exactly β_k β_0.
        let f = exp_field(&beta, &base, k + 1);
        let missing = a[k].sub(&f[k + 1]);
        beta[k] = missing.div(&beta0)?;
    }
    let cc = CoordChange {
        a: a.to_vec(),
        beta,
    };
    // post-condition: re-expanding reproduces the input series
    let f = exp_field(&cc.beta, &{
        let mut b = vec![RatFunc::zero(); order + 1];
        b[1] = beta0;
        b
    }, order);
    for k in 0..order {
        debug_assert!(
            f[k + 1] == cc.a[k],
            "exponential form does not reproduce input at order {}",
            k + 1
        );
    }
    Ok(cc)
}

/// Compositional inverse of the coordinate change as a truncated series:
/// b with b(ρ(z)) = z + O(z^{order+1}).
pub fn invert_series(a: &[RatFunc]) -> Result<Vec<RatFunc>> {
    if a.is_empty() || a[0].is_zero() {
        return Err(Error::NotACoordinateChange);
    }
    let order = a.len();
    let mut b = vec![RatFunc::zero(); order];
    b[0] = RatFunc::one().div(&a[0])?;
    for k in 2..=order {
        // [z^k] b(a(z)) = 0 determines b_k: b_k a_1^k + (lower b's) = 0
        let mut comp = vec![RatFunc::zero(); order + 1];
        // powers of a(z) up to z^order
        let mut apow = vec![RatFunc::zero(); order + 1]; // a(z)^j
        apow[0] = RatFunc::one();
        for (_j, bj) in b.iter().enumerate().take(k) {
            // multiply apow by a(z) once more to get a^{j+1}
            let mut next = vec![RatFunc::zero(); order + 1];
            for (i, x) in apow.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (l, al) in a.iter().enumerate() {
                    if i + l + 1 <= order && !al.is_zero() {
                        next[i + l + 1] = next[i + l + 1].add(&x.mul(al));
                    }
                }
            }
            apow = next;
            if bj.is_zero() {
                continue;
            }
            for (i, x) in apow.iter().enumerate() {
                if i <= order && !x.is_zero() {
                    comp[i] = comp[i].add(&x.mul(bj));
                }
            }
        }
        let a1k = a[0].pow(k as i64).expect("nonzero");
        b[k - 1] = comp[k].neg().div(&a1k)?;
        if k == 1 {
            b[0] = RatFunc::one().div(&a[0])?;
        }
    }
    Ok(b)
}

/// The local change at base point t: ρ_t(s) = ρ(t+s) − ρ(t), as series
/// coefficients in s (same truncation order).
pub fn local_change(cc: &CoordChange, t: &RatFunc) -> Result<CoordChange> {
    let order = cc.order();
    let mut shifted = vec![RatFunc::zero(); order];
    for (i, ai) in cc.a.iter().enumerate() {
        // a_{i+1}(t+s)^{i+1}: expand binomially; drop the s^0 part
        let n = i + 1;
        for j in 1..=n.min(order) {
            let c = crate::ratfunc::binom(n as i64, j as u32);
            let tp = t.pow((n - j) as i64).expect("power");
            shifted[j - 1] = shifted[j - 1].add(&ai.scale(&c).mul(&tp));
        }
    }
    solve_exp_coeffs(&shifted)
}

/// P(f) = β_0^{L(0)} exp(Σ_{m>0} β_m L(m)) acting on a graded vector with
/// rational-function coefficients. Positive Virasoro modes lower the weight,
/// so the exponential terminates. With this normalization f ↦ P(f) is a
/// homomorphism, P(f1 ∘ f2) = P(f1) P(f2), matching the representation
/// property of Aut O it realizes.
pub fn apply_pf_rat(cc: &CoordChange, u: &RatVector, ctx: &VoaContext) -> RatVector {
    // X = Σ_{m>=1} β_m L(m), applied first
    let apply_x = |v: &RatVector| -> RatVector {
        let mut out = RatVector::new();
        for (m, bm) in cc.beta.iter().enumerate().skip(1) {
            if bm.is_zero() {
                continue;
            }
            let lm = virasoro_rat(m as i64, v, ctx);
            for (p, c) in lm {
                rv_add_term(&mut out, p, c.mul(bm));
            }
        }
        out
    };
    let mut acc = u.clone();
    let mut term = u.clone();
    let mut j = 1i64;
    loop {
        term = apply_x(&term);
        if term.is_empty() {
            break;
        }
        for c in term.values_mut() {
            *c = c.scale(&(Scalar::one() / Scalar::from_integer(j.into())));
        }
        for (p, c) in &term {
            rv_add_term(&mut acc, p.clone(), c.clone());
        }
        j += 1;
    }
    // β_0^{L(0)} last
    let mut out = RatVector::new();
    for (p, c) in acc {
        let w = partition_weight(&p) as i64;
        rv_add_term(&mut out, p, c.mul(&cc.beta[0].pow(w).expect("beta0 nonzero")));
    }
    out
}

/// P(f) on a plain graded vector, when the change has constant coefficients.
pub fn apply_pf(cc: &CoordChange, u: &GradedVector, ctx: &VoaContext) -> Result<GradedVector> {
    let r = apply_pf_rat(cc, &rv_from_gv(u), ctx);
    let mut out = GradedVector::new();
    for (p, c) in r {
        let s = c
            .as_constant()
            .ok_or_else(|| Error::Invalid("non-constant coefficient in apply_pf".into()))?;
        super::fock::gv_add_term(&mut out, p, s);
    }
    Ok(out)
}

/// One-point matrix element ⟨w′, Y(v, x) u⟩ as an exact rational function of
/// the insertion point expression x. Finite: one mode contributes per triple
/// of homogeneous components.
pub fn one_point_me(
    wp: &GradedVector,
    v: &GradedVector,
    x: &RatFunc,
    u: &GradedVector,
    ctx: &VoaContext,
) -> RatFunc {
    let mut acc = RatFunc::zero();
    for (pw, cw) in wp {
        for (pv, cv) in v {
            for (pu, cu) in u {
                let n = partition_weight(pv) as i64 + partition_weight(pu) as i64
                    - partition_weight(pw) as i64
                    - 1;
                let comp = mode_action(
                    &gv_basis_state(pv.clone()),
                    n,
                    &gv_basis_state(pu.clone()),
                    ctx,
                );
                if let Some(c) = comp.get(pw) {
                    let powx = x.pow(-n - 1).expect("nonzero point expression");
                    acc = acc.add(&powx.scale(&(c * cw * cv * cu)));
                }
            }
        }
    }
    acc
}

/// Transpose action of L(n) on a coefficient functional: (L(n)ᵀ w′)(X) =
/// w′(L(n) X).
fn virasoro_transpose(n: i64, wp: &GradedVector, ctx: &VoaContext) -> GradedVector {
    let mut out = GradedVector::new();
    for (pw, cw) in wp {
        let src_weight = partition_weight(pw) as i64 + n;
        if src_weight < 0 || src_weight > ctx.n_max as i64 {
            continue;
        }
        for px in super::fock::basis(src_weight as u32, ctx.n_max).expect("within cutoff") {
            let lx = virasoro(n, &gv_basis_state(px.clone()), ctx);
            if let Some(c) = lx.get(pw) {
                super::fock::gv_add_term(&mut out, px, c * cw);
            }
        }
    }
    out
}

/// Check the Virasoro/vertex-operator commutation formula for a polynomial
/// vector field β(z)∂_z = Σ_{n≥-1} β_n z^{n+1} ∂_z, realized by the operator
/// β̂ = Σ β_n L(n):
///   [β̂, Y(v, z)] = Σ_{m≥-1} (1/(m+1)!) (∂^{m+1} β)(z) Y(L(m)v, z).
/// (The sign of β̂ is fixed so that β(z) = 1 reduces to the L(-1)-derivative
/// property and β(z) = z to the L(0)-bracket formula.)
/// Returns Err with the offending sample on mismatch.
pub fn check_commutator_formula(
    beta: &[Scalar], // beta[i] = β_{i-1}, i.e. β(z) = Σ beta[i] z^i
    v: &GradedVector,
    samples: &[(GradedVector, GradedVector)], // (w′, u)
    ctx: &VoaContext,
) -> Result<()> {
    let x = RatFunc::var(Var::z(1));
    for (wp, u) in samples {
        // LHS: ⟨w′, β̂ Y(v,x) u⟩ - ⟨w′, Y(v,x) β̂ u⟩
        let mut lhs = RatFunc::zero();
        for (i, bn) in beta.iter().enumerate() {
            let n = i as i64 - 1;
            // ⟨w′, L(n) Y(v,x) u⟩ = ⟨L(n)ᵀ w′, Y(v,x) u⟩
            let wt = virasoro_transpose(n, wp, ctx);
            lhs = lhs.add(&one_point_me(&wt, v, &x, u, ctx).scale(bn));
            let bu = virasoro(n, u, ctx);
            lhs = lhs.sub(&one_point_me(wp, v, &x, &bu, ctx).scale(bn));
        }
        // RHS: Σ_m (1/(m+1)!) ∂^{m+1}β(x) ⟨w′, Y(L(m)v, x) u⟩
        let mut rhs = RatFunc::zero();
        let deg = beta.len() as i64 - 1;
        for m in -1..=deg.max(0) {
            // ∂^{m+1} β(z) at z = x
            let mut dcoef = RatFunc::zero();
            for (i, bi) in beta.iter().enumerate() {
                let i = i as i64;
                let d = m + 1;
                if i < d {
                    continue;
                }
                let mut fall = Scalar::one();
                for s in 0..d {
                    fall *= Scalar::from_integer((i - s).into());
                }
                dcoef = dcoef.add(&x.pow(i - d).expect("power").scale(&(bi * fall)));
            }
            if dcoef.is_zero() {
                continue;
            }
            let lv = virasoro(m, v, ctx);
            if lv.is_empty() {
                continue;
            }
            let me = one_point_me(wp, &lv, &x, u, ctx);
            rhs = rhs.add(&dcoef.mul(&me).scale(&(Scalar::one() / factorial((m + 1) as u32))));
        }
        if lhs != rhs {
            return Err(Error::Certificate(format!(
                "commutator formula mismatch for w'={:?}, u={:?}: lhs {} vs rhs {}",
                wp.keys().collect::<Vec<_>>(),
                u.keys().collect::<Vec<_>>(),
                lhs,
                rhs
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::fock::gv_vacuum;
    use super::*;
    use crate::ratfunc::qr;

    fn ctx() -> VoaContext {
        VoaContext::standard(8, 3)
    }

    fn rcc(coeffs: &[i64]) -> Vec<RatFunc> {
        coeffs.iter().map(|&c| RatFunc::from_i64(c)).collect()
    }

    #[test]
    fn pure_dilation() {
        // ρ(z) = 2z: β_0 = 2, β_{k≥1} = 0
        let cc = solve_exp_coeffs(&rcc(&[2, 0, 0, 0, 0])).unwrap();
        assert_eq!(cc.beta[0], RatFunc::from_i64(2));
        for b in &cc.beta[1..] {
            assert!(b.is_zero());
        }
        // identity
        let id = CoordChange::identity(5);
        assert_eq!(id.beta[0], RatFunc::one());
        assert!(id.beta[1..].iter().all(RatFunc::is_zero));
    }

    #[test]
    fn quadratic_change_round_trips() {
        // ρ(z) = z + z²: solve and re-expand to order 5 (validated by the
        // term-by-term vector-field exponential inside solve_exp_coeffs's
        // debug post-condition; assert the first couple of β's by hand:
        // exp(β_1 z²∂_z)z = z + β_1 z² + β_1² z³ + ... so β_1 = 1, and the
        // z³ coefficient must be repaired by β_2 = -1.
        let cc = solve_exp_coeffs(&rcc(&[1, 1, 0, 0, 0])).unwrap();
        assert_eq!(cc.beta[1], RatFunc::one());
        assert_eq!(cc.beta[2], RatFunc::from_i64(-1));
        // degenerate: a_1 = 0 rejected
        assert!(matches!(
            solve_exp_coeffs(&rcc(&[0, 1])),
            Err(Error::NotACoordinateChange)
        ));
    }

    #[test]
    fn pf_identity_and_dilation() {
        let c = ctx();
        let u = gv_basis_state(vec![1]);
        let id = CoordChange::identity(6);
        assert_eq!(apply_pf(&id, &u, &c).unwrap(), u);
        // P(2z) a(-1)|0> = 2 a(-1)|0> (β_0^{L(0)} on weight 1)
        let dil = solve_exp_coeffs(&rcc(&[2, 0, 0, 0, 0, 0])).unwrap();
        let got = apply_pf(&dil, &u, &c).unwrap();
        let mut expect = GradedVector::new();
        expect.insert(vec![1], q(2));
        assert_eq!(got, expect);
    }

    #[test]
    fn pf_terminates_and_mixes_down() {
        // P(z + z²) on a(-2)|0>: exp((2)β_1 L(1) + ...) picks up finitely many
        // terms; oracle = explicit nested commutators to nilpotency depth:
        // L(1) a(-2)|0> = 2 a(-1)|0>, L(1)² a(-2)|0> ∝ L(1)a(-1)|0> = 0... so
        // P(f) a(-2)1 = a(-2)1 + 2β_1·2a(-1)... compute by hand:
        // X = 2β_1 L(1) + 3β_2 L(2) + ..., β_1 = 1, β_2 = -1.
        // X a(-2)1 = 2·(2 a(-1)1) + 3·(-1)·L(2)a(-2)1; L(2)a(-2)1 = 2·...
        // L(2) a(-2)|0>: ½Σ a(j)a(2-j): j=1: a(1)a(1)a(-2)=0... compute: = 0?
        // direct: virasoro gives the truth; here just check termination and
        // agreement with the series exp up to depth 3.
        let c = ctx();
        let cc = solve_exp_coeffs(&rcc(&[1, 1, 0, 0, 0, 0])).unwrap();
        let u = gv_basis_state(vec![2]);
        let got = apply_pf(&cc, &u, &c).unwrap();
        // hand expansion (β_0 = 1 so only exp X matters): X u = Σ_m β_m L(m) u
        let apply_x = |v: &GradedVector| -> GradedVector {
            let mut out = GradedVector::new();
            for m in 1..=5i64 {
                let bm = cc.beta[m as usize].as_constant().unwrap();
                for (p, cc2) in virasoro(m, v, &c) {
                    super::super::fock::gv_add_term(&mut out, p, cc2 * &bm);
                }
            }
            out
        };
        let xu = apply_x(&u);
        let xxu = apply_x(&xu);
        let mut expect = u.clone();
        for (p, cc2) in xu {
            super::super::fock::gv_add_term(&mut expect, p, cc2);
        }
        for (p, cc2) in xxu {
            super::super::fock::gv_add_term(&mut expect, p, cc2 * qr(1, 2));
        }
        assert_eq!(got, expect);
    }

    #[test]
    fn pf_is_multiplicative() {
        // P(f1 ∘ f2) = P(f1) P(f2) on states of weight <= 3
        let c = ctx();
        let f1 = rcc(&[1, 1, 0, 0, 0, 0]);
        let f2 = rcc(&[2, 0, 1, 0, 0, 0]);
        // compose: (f1 ∘ f2)(z) = f1(f2(z)) truncated
        let compose = |a: &[RatFunc], b: &[RatFunc]| -> Vec<RatFunc> {
            let order = a.len();
            let mut out = vec![RatFunc::zero(); order];
            // b(z) as poly coeffs (z^1..): power accumulation
            let mut bpow = vec![RatFunc::zero(); order + 1]; // b(z)^1
            for (i, bi) in b.iter().enumerate() {
                bpow[i + 1] = bi.clone();
            }
            let mut cur = bpow.clone();
            for (k, ak) in a.iter().enumerate() {
                if k > 0 {
                    // cur = b^{k+1}
                    let mut next = vec![RatFunc::zero(); order + 1];
                    for (i, x) in cur.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (j, y) in bpow.iter().enumerate() {
                            if i + j <= order && !y.is_zero() {
                                next[i + j] = next[i + j].add(&x.mul(y));
                            }
                        }
                    }
                    cur = next;
                }
                for i in 1..=order {
                    out[i - 1] = out[i - 1].add(&cur[i].mul(ak));
                }
            }
            out
        };
        let cc1 = solve_exp_coeffs(&f1).unwrap();
        let cc2 = solve_exp_coeffs(&f2).unwrap();
        let cc12 = solve_exp_coeffs(&compose(&f1, &f2)).unwrap();
        for w in 0..=3u32 {
            for p in super::super::fock::basis(w, c.n_max).unwrap() {
                let u = gv_basis_state(p.clone());
                let via_compose = apply_pf(&cc12, &u, &c).unwrap();
                let stepwise = apply_pf(&cc1, &apply_pf(&cc2, &u, &c).unwrap(), &c).unwrap();
                assert_eq!(via_compose, stepwise, "multiplicativity at {p:?}");
            }
        }
    }

    #[test]
    fn commutator_formula_reductions() {
        let c = ctx();
        let a1 = gv_basis_state(vec![1]);
        let samples = vec![
            (gv_vacuum(), a1.clone()),
            (gv_basis_state(vec![1]), gv_vacuum()),
            (gv_basis_state(vec![2]), a1.clone()),
            (gv_basis_state(vec![1, 1]), gv_basis_state(vec![2])),
        ];
        // β(z) = 1 -> β̂ = -L(-1): the L(-1)-derivative property
        check_commutator_formula(&[Scalar::one()], &a1, &samples, &c).unwrap();
        // β(z) = z -> β̂ = -L(0): the L(0)-bracket formula
        check_commutator_formula(&[Scalar::from_integer(0.into()), Scalar::one()], &a1, &samples, &c)
            .unwrap();
        // β(z) = z² with v = a(-1)|0>
        check_commutator_formula(
            &[
                Scalar::from_integer(0.into()),
                Scalar::from_integer(0.into()),
                Scalar::one(),
            ],
            &a1,
            &samples,
            &c,
        )
        .unwrap();
        // and a mixed field on a composite state
        check_commutator_formula(
            &[qr(1, 2), q(3), q(-1), q(2)],
            &gv_basis_state(vec![2, 1]),
            &samples,
            &c,
        )
        .unwrap();
    }

    #[test]
    fn local_change_of_quadratic() {
        // ρ = z + a₂ z²: ρ_t(s) = (1 + 2 a₂ t)s + a₂ s²; β_0 = ρ′(t)
        let a2 = qr(1, 3);
        let mut a = rcc(&[1, 0]);
        a[1] = RatFunc::constant(a2.clone());
        let cc = solve_exp_coeffs(&a).unwrap();
        let t = RatFunc::var(Var::aux(1));
        let lc = local_change(&cc, &t).unwrap();
        let expect0 = RatFunc::one().add(&t.scale(&(a2.clone() * q(2))));
        assert_eq!(lc.a[0], expect0);
        assert_eq!(lc.a[1], RatFunc::constant(a2));
        assert_eq!(lc.beta[0], cc.rho_prime_at(&t));
    }
}
