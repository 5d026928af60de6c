use super::correlator::Correlator;
use crate::ratfunc::RatFunc;
use crate::voa::{GradedVector, VoaContext};
use crate::Result;

/// Enumerate J_{l;s}: permutations preserving the order of the first s and
/// the last l-s positions, returned 0-based together with their signs.
pub fn shuffles(l: usize, s: usize) -> Vec<(Vec<usize>, i32)> {
    assert!(s <= l);
    let mut out = Vec::new();
    // choose the image set of the first block; images assigned increasingly
    let mut subset: Vec<usize> = Vec::new();
    fn rec(start: usize, l: usize, s: usize, subset: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, i32)>) {
        if subset.len() == s {
            let mut sigma = vec![0usize; l];
            for (i, &img) in subset.iter().enumerate() {
                sigma[i] = img;
            }
            let rest: Vec<usize> = (0..l).filter(|i| !subset.contains(i)).collect();
            for (j, &img) in rest.iter().enumerate() {
                sigma[s + j] = img;
            }
            let sign = perm_sign(&sigma);
            out.push((sigma, sign));
            return;
        }
        for v in start..l {
            subset.push(v);
            rec(v + 1, l, s, subset, out);
            subset.pop();
        }
    }
    rec(0, l, s, &mut subset, &mut out);
    out
}

pub fn perm_sign(p: &[usize]) -> i32 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

pub fn invert_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

/// The alternating shuffle sum Σ_{σ ∈ J_{l;s}^{-1}} (-1)^{|σ|} (σΦ)
/// evaluated against (w′, insertions). Vanishing of this sum is the symmetry
/// property W-space elements are asked to satisfy.
pub fn shuffle_sum(
    phi: &Correlator,
    s: usize,
    wp: &GradedVector,
    ins: &[(GradedVector, RatFunc)],
    ctx: &VoaContext,
) -> Result<RatFunc> {
    let l = phi.arity;
    if l <= 1 || s == 0 || s >= l {
        // vacuous split
        return Ok(RatFunc::zero());
    }
    let mut acc = RatFunc::zero();
    for (sigma, sign) in shuffles(l, s) {
        let tau = invert_perm(&sigma);
        let v = phi.permuted(&tau)?.evaluate(wp, ins, ctx)?;
        let signed = if sign >= 0 { v } else { v.neg() };
        acc = acc.add(&signed);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::super::correlator::e_element;
    use super::*;
    use crate::ratfunc::Var;
    use crate::voa::{gv_basis_state, gv_vacuum};

    fn ctx() -> VoaContext {
        VoaContext::standard(8, 3)
    }

    fn zr(i: u32) -> RatFunc {
        RatFunc::var(Var::z(i))
    }

    #[test]
    fn shuffle_enumeration() {
        assert_eq!(shuffles(2, 1).len(), 2);
        assert_eq!(shuffles(3, 1).len(), 3);
        assert_eq!(shuffles(3, 2).len(), 3);
        assert_eq!(shuffles(4, 2).len(), 6);
        // sign sums: l=2,s=1 -> 0; l=3,s=1 -> +1 (the structural obstruction
        // to shuffle vanishing for symmetric maps)
        let sum = |l, s| shuffles(l, s).iter().map(|(_, sg)| sg).sum::<i32>();
        assert_eq!(sum(2, 1), 0);
        assert_eq!(sum(3, 1), 1);
        assert_eq!(sum(3, 2), 1);
    }

    #[test]
    fn antisymmetrization_of_symmetric_two_point_vanishes() {
        let c = ctx();
        let e2 = e_element(gv_vacuum(), 2);
        let a = gv_basis_state(vec![1]);
        let v = shuffle_sum(&e2, 1, &gv_vacuum(), &[(a.clone(), zr(1)), (a, zr(2))], &c).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn vacuous_split_for_single_insertion() {
        let c = ctx();
        let e1 = e_element(gv_vacuum(), 1);
        let a = gv_basis_state(vec![1]);
        let v = shuffle_sum(&e1, 1, &gv_vacuum(), &[(a, zr(1))], &c).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn three_point_shuffle_sum_equals_symmetric_value() {
        // Symmetric maps cannot satisfy the (3,1)-shuffle vanishing: the sign
        // sum over J_{3;1} is +1, so the sum reproduces the correlator. This
        // freezes the honest outcome for the E-element family.
        let c = ctx();
        let e3 = e_element(gv_vacuum(), 3);
        let b = gv_basis_state(vec![1, 1]);
        let a = gv_basis_state(vec![1]);
        let ins = [(a.clone(), zr(1)), (a, zr(2)), (b, zr(3))];
        let direct = e3.evaluate(&gv_vacuum(), &ins, &c).unwrap();
        assert!(!direct.is_zero());
        let sum = shuffle_sum(&e3, 1, &gv_vacuum(), &ins, &c).unwrap();
        assert_eq!(sum, direct);
    }
}
