use super::wick::{pole_bound, wick_eval};
use crate::ratfunc::{MPoly, RatFunc};
use crate::voa::{
    basis, gv_vacuum, rv_from_gv, GradedVector, RatVector, VoaContext,
};
use crate::{Error, Result};

/// Representative of a W_{z_1,...,z_n}-space element: the rational
/// reconstruction of ⟨w′, Y_W(v_1, z_1) ... Y_W(v_n, z_n) w⟩ with the
/// generator w sitting at a point (0 by default), possibly with extra
/// pre-inserted operators from compositions, and an optional argument
/// permutation.
///
/// Each slot carries a weight tag for the dz^{wt(v)} tensor factor of the
/// underlying form; the tags are consumed only by coordinate-change
/// compensation.
#[derive(Clone, Debug)]
pub struct Correlator {
    pub generator: GradedVector,
    pub gen_point: RatFunc,
    pub pre: Vec<(GradedVector, RatFunc)>,
    pub arity: usize,
    pub perm: Option<Vec<usize>>,
}

/// E^{(n)}_W(v_1, z_1; ...; v_n, z_n; w): the canonical generator of W-space
/// representatives.
pub fn e_element(w: GradedVector, arity: usize) -> Correlator {
    Correlator {
        generator: w,
        gen_point: RatFunc::zero(),
        pre: Vec::new(),
        arity,
        perm: None,
    }
}

impl Correlator {
    /// σΦ: permuted-argument correlator, (σΦ)(v_1, z_1; ...) =
    /// Φ(v_{σ(1)}, z_{σ(1)}; ...).
    pub fn permuted(&self, sigma: &[usize]) -> Result<Correlator> {
        if sigma.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: sigma.len(),
            });
        }
        let base: Vec<usize> = match &self.perm {
            None => (0..self.arity).collect(),
            Some(p) => p.clone(),
        };
        // (στ)Φ = σ(τΦ): compose with the existing permutation
        let composed: Vec<usize> = sigma.iter().map(|&i| base[i]).collect();
        let mut c = self.clone();
        c.perm = Some(composed);
        Ok(c)
    }

    /// Evaluate against a dual vector and an insertion list (states with
    /// rational coefficients allowed). Insertion points must be pairwise
    /// distinct expressions.
    pub fn evaluate_rat(
        &self,
        wp: &GradedVector,
        ins: &[(RatVector, RatFunc)],
        _ctx: &VoaContext,
    ) -> Result<RatFunc> {
        if ins.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: ins.len(),
            });
        }
        for i in 0..ins.len() {
            for j in (i + 1)..ins.len() {
                if ins[i].1 == ins[j].1 {
                    return Err(Error::ConfigCollision(
                        ins[i].1.to_string(),
                        ins[j].1.to_string(),
                    ));
                }
            }
        }
        let ordered: Vec<(RatVector, RatFunc)> = match &self.perm {
            None => ins.to_vec(),
            Some(p) => p.iter().map(|&i| ins[i].clone()).collect(),
        };
        let mut states: Vec<(RatVector, RatFunc)> = Vec::new();
        for (v, pt) in &self.pre {
            states.push((rv_from_gv(v), pt.clone()));
        }
        states.extend(ordered);

        wick_eval(wp, &states, (&self.generator, &self.gen_point))
    }

    pub fn evaluate(
        &self,
        wp: &GradedVector,
        ins: &[(GradedVector, RatFunc)],
        ctx: &VoaContext,
    ) -> Result<RatFunc> {
        let rat: Vec<(RatVector, RatFunc)> = ins
            .iter()
            .map(|(v, p)| (rv_from_gv(v), p.clone()))
            .collect();
        self.evaluate_rat(wp, &rat, ctx)
    }

    /// P_q projection of the correlator value: the weight-q component in the
    /// Fock basis, with rational-function coefficients in the points.
    pub fn project(
        &self,
        ins: &[(GradedVector, RatFunc)],
        q: u32,
        ctx: &VoaContext,
    ) -> Result<RatVector> {
        if q > ctx.n_max {
            return Err(Error::BeyondTruncation {
                requested: q as i64,
                cutoff: ctx.n_max as i64,
            });
        }
        let mut out = RatVector::new();
        for b in basis(q, ctx.n_max)? {
            let mut wb = GradedVector::new();
            wb.insert(b.clone(), crate::ratfunc::q(1));
            let coeff = self.evaluate(&wb, ins, ctx)?;
            if !coeff.is_zero() {
                out.insert(b, coeff);
            }
        }
        Ok(out)
    }

    /// Certificate bound for diagonal poles between two insertion states.
    pub fn pole_bound(vi: &GradedVector, vj: &GradedVector) -> u32 {
        pole_bound(vi, vj)
    }

    /// Check that an evaluated value has poles only on the allowed divisors
    /// (differences of insertion points / points themselves), with diagonal
    /// orders within the weight-sum certificates.
    pub fn certify_poles(
        value: &RatFunc,
        ins: &[(GradedVector, RatFunc)],
        gen_point: &RatFunc,
    ) -> Result<()> {
        // allowed divisors: every difference of the point expressions (and
        // the points relative to the generator), as monic polynomials
        let mut allowed: Vec<(MPoly, Option<u32>)> = Vec::new();
        for i in 0..ins.len() {
            for j in (i + 1)..ins.len() {
                let d = ins[i].1.sub(&ins[j].1);
                if let Some(p) = as_poly(&d) {
                    let bound = pole_bound(&ins[i].0, &ins[j].0);
                    allowed.push((p.monic().0, Some(bound)));
                }
            }
            let d = ins[i].1.sub(gen_point);
            if let Some(p) = as_poly(&d) {
                allowed.push((p.monic().0, None));
            }
        }
        for (fac, mult) in value.den_factors() {
            let hit = allowed.iter().find(|(p, _)| p == fac);
            match hit {
                None => {
                    return Err(Error::PoleCertificate {
                        divisor: fac.to_string(),
                        order: mult,
                        bound: 0,
                    })
                }
                Some((_, Some(bound))) => {
                    if mult > *bound {
                        return Err(Error::PoleCertificate {
                            divisor: fac.to_string(),
                            order: mult,
                            bound: *bound,
                        });
                    }
                }
                Some((_, None)) => {}
            }
        }
        Ok(())
    }
}

fn as_poly(f: &RatFunc) -> Option<MPoly> {
    if f.is_polynomial() {
        Some(f.numerator().clone())
    } else {
        None
    }
}

/// Convenience: the vacuum constant correlator ⟨w′, w⟩ with w = |0>.
pub fn vacuum_correlator(arity: usize) -> Correlator {
    e_element(gv_vacuum(), arity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::{q, Var};
    use crate::voa::{gv_basis_state, mode_action};

    fn ctx() -> VoaContext {
        VoaContext::standard(8, 3)
    }

    fn zr(i: u32) -> RatFunc {
        RatFunc::var(Var::z(i))
    }

    fn a() -> GradedVector {
        gv_basis_state(vec![1])
    }

    #[test]
    fn constant_correlator() {
        let c = ctx();
        let e0 = e_element(gv_basis_state(vec![2, 1]), 0);
        let wp = gv_basis_state(vec![2, 1]);
        assert_eq!(e0.evaluate(&wp, &[], &c).unwrap(), RatFunc::one());
        assert_eq!(
            e0.evaluate(&gv_vacuum(), &[], &c).unwrap(),
            RatFunc::zero()
        );
    }

    #[test]
    fn current_two_point() {
        let c = ctx();
        let e2 = e_element(gv_vacuum(), 2);
        let v = e2
            .evaluate(&gv_vacuum(), &[(a(), zr(1)), (a(), zr(2))], &c)
            .unwrap();
        assert_eq!(v, zr(1).sub(&zr(2)).pow(-2).unwrap());
        Correlator::certify_poles(&v, &[(a(), zr(1)), (a(), zr(2))], &RatFunc::zero()).unwrap();
    }

    #[test]
    fn multilinearity_zero_state() {
        let c = ctx();
        let e2 = e_element(gv_vacuum(), 2);
        let v = e2
            .evaluate(&gv_vacuum(), &[(GradedVector::new(), zr(1)), (a(), zr(2))], &c)
            .unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn one_point_against_mode_expansion_oracle() {
        // ⟨w′, Y(v, z1) w⟩ = Σ_n ⟨w′, v(n) w⟩ z1^{-n-1}, a single n per
        // homogeneous triple: exhaustive comparison over small basis states.
        let c = ctx();
        for wv in 0..=2u32 {
            for pv in basis(wv, c.n_max).unwrap() {
                for wu in 0..=2u32 {
                    for pu in basis(wu, c.n_max).unwrap() {
                        for ww in 0..=3u32 {
                            for pw in basis(ww, c.n_max).unwrap() {
                                let e1 = e_element(gv_basis_state(pu.clone()), 1);
                                let wp = gv_basis_state(pw.clone());
                                let v = gv_basis_state(pv.clone());
                                let got = e1.evaluate(&wp, &[(v.clone(), zr(1))], &c).unwrap();
                                let n = wv as i64 + wu as i64 - ww as i64 - 1;
                                let comp =
                                    mode_action(&v, n, &gv_basis_state(pu.clone()), &c);
                                let coeff = comp.get(&pw).cloned().unwrap_or_else(|| q(0));
                                let expect = if coeff == q(0) {
                                    RatFunc::zero()
                                } else {
                                    zr(1).pow(-n - 1).unwrap().scale(&coeff)
                                };
                                assert_eq!(
                                    got, expect,
                                    "1-pt mismatch v={pv:?} u={pu:?} w'={pw:?}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn project_completeness() {
        // Σ_q ⟨w′, P_q Φ⟩ paired against w′ reproduces evaluate
        let c = ctx();
        let e1 = e_element(gv_vacuum(), 1);
        let ins = [(gv_basis_state(vec![2, 1]), zr(1))];
        for wp_label in basis(3, c.n_max).unwrap() {
            let wp = gv_basis_state(wp_label.clone());
            let direct = e1.evaluate(&wp, &ins, &c).unwrap();
            let mut summed = RatFunc::zero();
            for qq in 0..=c.n_max {
                let proj = e1.project(&ins, qq, &c).unwrap();
                if let Some(coeff) = proj.get(&wp_label) {
                    summed = summed.add(coeff);
                }
            }
            assert_eq!(direct, summed);
        }
        // projection of E[1;0] at q=0 is the vacuum itself
        let e0 = e_element(gv_vacuum(), 0);
        let p0 = e0.project(&[], 0, &c).unwrap();
        assert_eq!(p0.get(&vec![]).unwrap(), &RatFunc::one());
        // current insertion at weight 1: coefficient z1^0 on a(-1)|0>
        let p1 = e_element(gv_vacuum(), 1)
            .project(&[(a(), zr(1))], 1, &c)
            .unwrap();
        assert_eq!(p1.get(&vec![1]).unwrap(), &RatFunc::one());
    }

    #[test]
    fn permutation_group_action() {
        let c = ctx();
        let e3 = e_element(gv_vacuum(), 3);
        let ins = [
            (a(), zr(1)),
            (gv_basis_state(vec![2]), zr(2)),
            (a(), zr(3)),
        ];
        let id: Vec<usize> = vec![0, 1, 2];
        assert_eq!(
            e3.permuted(&id).unwrap().evaluate(&gv_vacuum(), &ins, &c).unwrap(),
            e3.evaluate(&gv_vacuum(), &ins, &c).unwrap()
        );
        // (στ)Φ = σ(τΦ)
        let s = vec![1, 2, 0];
        let t = vec![2, 0, 1];
        let st: Vec<usize> = s.iter().map(|&i| t[i]).collect();
        let lhs = e3.permuted(&t).unwrap().permuted(&s).unwrap();
        let rhs = e3.permuted(&st).unwrap();
        assert_eq!(
            lhs.evaluate(&gv_vacuum(), &ins, &c).unwrap(),
            rhs.evaluate(&gv_vacuum(), &ins, &c).unwrap()
        );
        // transposition of the symmetric 2-point correlator is invisible
        let e2 = e_element(gv_vacuum(), 2);
        let swap = vec![1, 0];
        let ins2 = [(a(), zr(1)), (a(), zr(2))];
        assert_eq!(
            e2.permuted(&swap).unwrap().evaluate(&gv_vacuum(), &ins2, &c).unwrap(),
            e2.evaluate(&gv_vacuum(), &ins2, &c).unwrap()
        );
    }

    #[test]
    fn repeated_points_rejected() {
        let c = ctx();
        let e2 = e_element(gv_vacuum(), 2);
        assert!(matches!(
            e2.evaluate(&gv_vacuum(), &[(a(), zr(1)), (a(), zr(1))], &c),
            Err(Error::ConfigCollision(_, _))
        ));
        assert!(matches!(
            e2.evaluate(&gv_vacuum(), &[(a(), zr(1))], &c),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn pole_certificates_on_basis_family() {
        // poles at z_i = z_j bounded by wt(v_i) + wt(v_j) for all basis
        // insertions of weight <= 3, n <= 3 (with vacuum generator).
        let c = ctx();
        let states: Vec<GradedVector> = (0..=3u32)
            .flat_map(|w| basis(w, c.n_max).unwrap())
            .map(gv_basis_state)
            .collect();
        for n in 2..=3usize {
            let e = e_element(gv_vacuum(), n);
            for vi in &states {
                for vj in &states {
                    let mut ins: Vec<(GradedVector, RatFunc)> =
                        vec![(vi.clone(), zr(1)), (vj.clone(), zr(2))];
                    for k in 2..n {
                        ins.push((a(), zr(k as u32 + 1)));
                    }
                    let val = e.evaluate(&gv_vacuum(), &ins, &c).unwrap();
                    Correlator::certify_poles(&val, &ins, &RatFunc::zero()).unwrap();
                }
            }
        }
    }
}
