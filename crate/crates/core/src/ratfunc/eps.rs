use std::collections::BTreeMap;
use std::fmt;

use super::rf::RatFunc;
use super::var::Var;
use crate::{Error, Result};

/// Sentinel truncation for series that are exact (no ε-cutoff applied).
pub const UNTRUNCATED: i64 = i64::MAX / 4;

/// Truncated formal series in ε with RatFunc coefficients. Coefficients are
/// ε-free; orders above the truncation are dropped on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsSeries {
    coeffs: BTreeMap<i64, RatFunc>,
    trunc: i64,
}

impl EpsSeries {
    pub fn zero(trunc: i64) -> EpsSeries {
        EpsSeries {
            coeffs: BTreeMap::new(),
            trunc,
        }
    }

    pub fn constant(f: RatFunc, trunc: i64) -> EpsSeries {
        let mut s = EpsSeries::zero(trunc);
        s.add_coeff(0, f);
        s
    }

    pub fn one(trunc: i64) -> EpsSeries {
        EpsSeries::constant(RatFunc::one(), trunc)
    }

    pub fn truncation(&self) -> i64 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_coeff(&mut self, order: i64, f: RatFunc) {
        if order > self.trunc || f.is_zero() {
            return;
        }
        debug_assert!(!f.contains_var(Var::Eps), "ε-series coefficient contains ε");
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(order) {
            Entry::Vacant(e) => {
                e.insert(f);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().add(&f);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn orders(&self) -> impl Iterator<Item = (i64, &RatFunc)> {
        self.coeffs.iter().map(|(&o, f)| (o, f))
    }

    pub fn lowest_order(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Coefficient extraction; requesting an order above the truncation is an
    /// error (the information was dropped).
    pub fn coeff(&self, order: i64) -> Result<RatFunc> {
        if order > self.trunc {
            return Err(Error::BeyondTruncation {
                requested: order,
                cutoff: self.trunc,
            });
        }
        Ok(self.coeffs.get(&order).cloned().unwrap_or_else(RatFunc::zero))
    }

    pub fn add(&self, other: &EpsSeries) -> EpsSeries {
        let mut out = EpsSeries::zero(self.trunc.min(other.trunc));
        for (&o, f) in &self.coeffs {
            out.add_coeff(o, f.clone());
        }
        for (&o, f) in &other.coeffs {
            out.add_coeff(o, f.clone());
        }
        out
    }

    pub fn sub(&self, other: &EpsSeries) -> EpsSeries {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> EpsSeries {
        EpsSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&o, f)| (o, f.neg()))
                .collect(),
            trunc: self.trunc,
        }
    }

    pub fn mul(&self, other: &EpsSeries) -> EpsSeries {
        let mut out = EpsSeries::zero(self.trunc.min(other.trunc));
        for (&oa, fa) in &self.coeffs {
            for (&ob, fb) in &other.coeffs {
                if oa.saturating_add(ob) > out.trunc {
                    continue;
                }
                out.add_coeff(oa + ob, fa.mul(fb));
            }
        }
        out
    }

    pub fn scale(&self, f: &RatFunc) -> EpsSeries {
        if f.is_zero() {
            return EpsSeries::zero(self.trunc);
        }
        let mut out = EpsSeries::zero(self.trunc);
        for (&o, c) in &self.coeffs {
            out.add_coeff(o, c.mul(f));
        }
        out
    }

    pub fn shift(&self, by: i64) -> EpsSeries {
        let mut out = EpsSeries::zero(self.trunc);
        for (&o, c) in &self.coeffs {
            out.add_coeff(o + by, c.clone());
        }
        out
    }

    pub fn truncate(&self, order: i64) -> EpsSeries {
        let mut out = EpsSeries::zero(order.min(self.trunc));
        for (&o, c) in &self.coeffs {
            out.add_coeff(o, c.clone());
        }
        out
    }

    /// Map every coefficient through `f` (dropping zeros), keeping orders.
    pub fn map_coeffs(&self, f: impl Fn(&RatFunc) -> RatFunc) -> EpsSeries {
        let mut out = EpsSeries::zero(self.trunc);
        for (&o, c) in &self.coeffs {
            out.add_coeff(o, f(c));
        }
        out
    }

    /// Collapse into a single rational function Σ ε^l f_l (for display and
    /// substitution round-trips).
    pub fn to_ratfunc(&self) -> RatFunc {
        let e = RatFunc::var(Var::Eps);
        let mut acc = RatFunc::zero();
        for (&o, c) in &self.coeffs {
            acc = acc.add(&c.mul(&e.pow(o).expect("eps nonzero")));
        }
        acc
    }
}

impl fmt::Display for EpsSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0 + O(eps^{})", self.trunc + 1);
        }
        let mut first = true;
        for (o, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "eps^{o}*{c}")?;
        }
        if self.trunc != UNTRUNCATED {
            write!(f, " + O(eps^{})", self.trunc + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coeff_and_truncation() {
        let mut s = EpsSeries::zero(2);
        s.add_coeff(0, RatFunc::one());
        s.add_coeff(1, RatFunc::from_i64(2));
        assert_eq!(s.coeff(0).unwrap(), RatFunc::one());
        assert_eq!(s.coeff(2).unwrap(), RatFunc::zero());
        assert!(matches!(
            s.coeff(3),
            Err(Error::BeyondTruncation { .. })
        ));
    }

    #[test]
    fn mul_truncates_at_min() {
        // (1 + eps)(1 - eps) truncated at 1 -> 1
        let mut a = EpsSeries::zero(1);
        a.add_coeff(0, RatFunc::one());
        a.add_coeff(1, RatFunc::one());
        let mut b = EpsSeries::zero(1);
        b.add_coeff(0, RatFunc::one());
        b.add_coeff(1, RatFunc::from_i64(-1));
        let p = a.mul(&b);
        assert_eq!(p.truncation(), 1);
        assert_eq!(p.coeff(0).unwrap(), RatFunc::one());
        assert_eq!(p.coeff(1).unwrap(), RatFunc::zero());
    }

    #[test]
    fn square_of_one_plus_eps() {
        // (1+eps)^2 at L_max = 2 -> 1 + 2 eps + eps^2 (direct convolution)
        let mut a = EpsSeries::zero(2);
        a.add_coeff(0, RatFunc::one());
        a.add_coeff(1, RatFunc::one());
        let p = a.mul(&a);
        assert_eq!(p.coeff(0).unwrap(), RatFunc::one());
        assert_eq!(p.coeff(1).unwrap(), RatFunc::from_i64(2));
        assert_eq!(p.coeff(2).unwrap(), RatFunc::one());
    }
}
