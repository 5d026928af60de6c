use std::collections::BTreeMap;

use crate::ratfunc::{laurent_expand, EpsSeries, ExpansionLocus, RatFunc, Var};
use crate::{Error, Result};

/// Which annulus coordinate is eliminated by the sewing relation ζ1 ζ2 = ε.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SewDirection {
    /// ζ2 -> ε / ζ1
    EliminateZeta2,
    /// ζ1 -> ε / ζ2
    EliminateZeta1,
}

/// Apply the sewing relation to every coefficient and re-grade the result in
/// ε. Substituted coefficients acquire ε-dependence; each is re-expanded and
/// folded back into the series at the shifted orders (truncation preserved).
pub fn sew_substitute(s: &EpsSeries, dir: SewDirection) -> Result<EpsSeries> {
    let (from, to) = match dir {
        SewDirection::EliminateZeta2 => (
            Var::zeta(2),
            RatFunc::var(Var::Eps)
                .div(&RatFunc::var(Var::zeta(1)))
                .expect("zeta1 nonzero"),
        ),
        SewDirection::EliminateZeta1 => (
            Var::zeta(1),
            RatFunc::var(Var::Eps)
                .div(&RatFunc::var(Var::zeta(2)))
                .expect("zeta2 nonzero"),
        ),
    };
    let mut out = EpsSeries::zero(s.truncation());
    for (l, f) in s.orders() {
        if !f.contains_var(from) {
            out.add_coeff(l, f.clone());
            continue;
        }
        let mut bind = BTreeMap::new();
        bind.insert(from, to.clone());
        let g = f.substitute(&bind)?;
        if !g.contains_var(Var::Eps) {
            out.add_coeff(l, g);
            continue;
        }
        let k = s.truncation() - l;
        if k < 0 {
            continue;
        }
        let e = laurent_expand(&g, ExpansionLocus::Var(Var::Eps), k)?;
        if !e.is_empty() && e.lowest < 0 {
            return Err(Error::Invalid(
                "sewing substitution produced a pole in ε".into(),
            ));
        }
        for ord in e.lowest..=k {
            out.add_coeff(l + ord, e.coeff(ord));
        }
    }
    Ok(out)
}

/// Collapse a series to a single rational function with ε replaced by ζ1 ζ2
/// (the inverse substitution of the sewing relation).
pub fn unsew(s: &EpsSeries) -> RatFunc {
    let zz = RatFunc::var(Var::zeta(1)).mul(&RatFunc::var(Var::zeta(2)));
    let mut acc = RatFunc::zero();
    for (l, f) in s.orders() {
        acc = acc.add(&f.mul(&zz.pow(l).expect("zetas nonzero")));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinch_relation() {
        // series = ζ1 ζ2 at ε⁰ -> ε¹ after substitution and re-grading
        let mut s = EpsSeries::zero(3);
        s.add_coeff(
            0,
            RatFunc::var(Var::zeta(1)).mul(&RatFunc::var(Var::zeta(2))),
        );
        let t = sew_substitute(&s, SewDirection::EliminateZeta2).unwrap();
        assert!(t.coeff(0).unwrap().is_zero());
        assert_eq!(t.coeff(1).unwrap(), RatFunc::one());
    }

    #[test]
    fn zeta_free_series_unchanged() {
        let mut s = EpsSeries::zero(2);
        s.add_coeff(1, RatFunc::var(Var::z(1)));
        let t = sew_substitute(&s, SewDirection::EliminateZeta2).unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn round_trip_through_unsew() {
        // ζ2 -> ε/ζ1 then ε -> ζ1ζ2 recovers the original rational function
        let z1 = RatFunc::var(Var::zeta(1));
        let z2 = RatFunc::var(Var::zeta(2));
        let mut s = EpsSeries::zero(4);
        s.add_coeff(0, z1.mul(&z2).add(&RatFunc::var(Var::z(1))));
        s.add_coeff(1, z2.clone());
        let sewed = sew_substitute(&s, SewDirection::EliminateZeta2).unwrap();
        // sewed coefficients are ζ2-free
        for (_, f) in sewed.orders() {
            assert!(!f.contains_var(Var::zeta(2)));
        }
        assert_eq!(unsew(&sewed), unsew(&s));
    }

    #[test]
    fn eliminating_the_other_coordinate() {
        let z1 = RatFunc::var(Var::zeta(1));
        let mut s = EpsSeries::zero(2);
        s.add_coeff(0, z1.pow(2).unwrap());
        let t = sew_substitute(&s, SewDirection::EliminateZeta1).unwrap();
        // ζ1² -> ε²/ζ2²
        assert_eq!(
            t.coeff(2).unwrap(),
            RatFunc::var(Var::zeta(2)).pow(-2).unwrap()
        );
    }
}
