use super::ctx::VoaContext;
use super::fock::{
    gv_add_term, gv_zero, partition_weight, rv_add_term, GradedVector, RatVector,
};
use super::modes::a_mode;
use crate::ratfunc::{qr, Scalar};

/// L(n)u for the conformal vector ω = ½ a(-1)²|0>, c = 1:
/// L(n) = ½ Σ_j :a(j) a(n-j):. L(0) acts by weight. For n ≠ 0 the two factors
/// of each term commute, so no ordering care is needed beyond applying the
/// right factor first.
pub fn virasoro(n: i64, u: &GradedVector, ctx: &VoaContext) -> GradedVector {
    if u.is_empty() {
        return gv_zero();
    }
    if n == 0 {
        let mut out = gv_zero();
        for (p, c) in u {
            let w = partition_weight(p) as i64;
            gv_add_term(&mut out, p.clone(), c * Scalar::from_integer(w.into()));
        }
        return out;
    }
    let half = qr(1, 2);
    let mut out = gv_zero();
    for (p, coeff) in u {
        let target = partition_weight(p) as i64 - n;
        if target < 0 {
            continue;
        }
        if target > ctx.n_max as i64 {
            ctx.note_truncation();
            continue;
        }
        let mut comp = gv_zero();
        gv_add_term(&mut comp, p.clone(), Scalar::from_integer(1.into()));
        // j ranges where both factors can act within the truncation
        let lo = -(ctx.n_max as i64) - n.abs();
        let hi = ctx.n_max as i64 + n.abs();
        for j in lo..=hi {
            let k = n - j;
            // normal order: more-negative index to the left (apply last)
            let (first, second) = if j <= k { (k, j) } else { (j, k) };
            let inner = a_mode(first, &comp, ctx);
            if inner.is_empty() {
                continue;
            }
            let full = a_mode(second, &inner, ctx);
            for (q, c) in full {
                gv_add_term(&mut out, q, c * &half * coeff);
            }
        }
    }
    out
}

pub fn virasoro_rat(n: i64, u: &RatVector, ctx: &VoaContext) -> RatVector {
    let mut out = RatVector::new();
    for (p, coeff) in u {
        let mut single = gv_zero();
        gv_add_term(&mut single, p.clone(), Scalar::from_integer(1.into()));
        for (q, c) in virasoro(n, &single, ctx) {
            rv_add_term(&mut out, q, coeff.scale(&c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::fock::{gv_basis_state, gv_scale, gv_vacuum};
    use super::*;
    use crate::ratfunc::q;

    fn ctx() -> VoaContext {
        VoaContext::standard(10, 4)
    }

    #[test]
    fn l0_grading_and_translation_vacuum() {
        let c = ctx();
        // L(0) a(-2)|0> = 2 a(-2)|0>
        let u = gv_basis_state(vec![2]);
        assert_eq!(virasoro(0, &u, &c), gv_scale(&u, &q(2)));
        // L(-1)|0> = 0
        assert!(virasoro(-1, &gv_vacuum(), &c).is_empty());
    }

    #[test]
    fn l_minus_one_raises_current() {
        let c = ctx();
        // L(-1) a(-1)|0> = a(-2)|0>
        let u = gv_basis_state(vec![1]);
        assert_eq!(virasoro(-1, &u, &c), gv_basis_state(vec![2]));
        // L(-1) a(-2)|0> = 2 a(-3)|0>
        let u2 = gv_basis_state(vec![2]);
        assert_eq!(
            virasoro(-1, &u2, &c),
            gv_scale(&gv_basis_state(vec![3]), &q(2))
        );
    }

    #[test]
    fn central_term_on_vacuum() {
        // [L(2), L(-2)]|0> = (4 L(0) + c/2)|0> = ½|0> for c = 1
        let c = ctx();
        let v = gv_vacuum();
        let lhs = {
            let x = virasoro(-2, &v, &c);
            let a = virasoro(2, &x, &c);
            let y = virasoro(2, &v, &c);
            let b = virasoro(-2, &y, &c);
            let mut out = a.clone();
            for (p, cc) in b {
                gv_add_term(&mut out, p, -cc);
            }
            out
        };
        assert_eq!(lhs, gv_scale(&gv_vacuum(), &qr(1, 2)));
    }

    #[test]
    fn virasoro_bracket_direct_mode_composition() {
        // [L(m), L(n)] = (m-n) L(m+n) + c/12 (m^3 - m) δ_{m+n,0} with c = 1,
        // on all basis states of weight <= 4, |m|, |n| <= 3.
        // N_max = 10 keeps every intermediate exact (max weight 4 + 3 + 3).
        let c = ctx();
        for m in -3..=3i64 {
            for n in -3..=3i64 {
                for w in 0..=4u32 {
                    for p in super::super::fock::basis(w, c.n_max).unwrap() {
                        let u = gv_basis_state(p.clone());
                        let ln_u = virasoro(n, &u, &c);
                        let lm_ln = virasoro(m, &ln_u, &c);
                        let lm_u = virasoro(m, &u, &c);
                        let ln_lm = virasoro(n, &lm_u, &c);
                        let mut lhs = lm_ln.clone();
                        for (pp, cc) in ln_lm {
                            gv_add_term(&mut lhs, pp, -cc);
                        }
                        let mut rhs = gv_scale(&virasoro(m + n, &u, &c), &q(m - n));
                        if m + n == 0 {
                            let central = qr(m * m * m - m, 12);
                            for (pp, cc) in &u {
                                gv_add_term(&mut rhs, pp.clone(), cc * &central);
                            }
                        }
                        assert_eq!(lhs, rhs, "bracket failed at m={m}, n={n}, p={p:?}");
                    }
                }
            }
        }
    }
}
