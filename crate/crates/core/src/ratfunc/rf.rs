use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::mpoly::MPoly;
use super::var::Var;
use super::Scalar;
use crate::{Error, Result};

/// Rational function over ℚ in canonical form.
///
/// The denominator is stored factored: a map from normalized (grlex-monic,
/// non-constant) polynomial factors to multiplicities. Invariants:
///   * no stored factor exactly divides the numerator,
///   * factors are monic; the overall scalar sits in the numerator,
///   * zero is `0 / 1` (empty factor map).
///
/// Structural equality of canonical forms implies equality of functions; the
/// converse holds for everything the engine itself constructs (denominators
/// are products of linear forms), and `PartialEq` falls back to
/// cross-multiplication so equality is sound for arbitrary inputs too.
#[derive(Clone, Eq, Debug, Default)]
pub struct RatFunc {
    num: MPoly,
    den: BTreeMap<MPoly, u32>,
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc::default()
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(MPoly::one())
    }

    pub fn constant(c: Scalar) -> RatFunc {
        RatFunc::from_poly(MPoly::constant(c))
    }

    pub fn var(v: Var) -> RatFunc {
        RatFunc::from_poly(MPoly::var(v))
    }

    pub fn from_poly(p: MPoly) -> RatFunc {
        RatFunc {
            num: p,
            den: BTreeMap::new(),
        }
    }

    /// Canonicalize an arbitrary numerator/denominator pair. This is the
    /// general entry point: it reduces by the multivariate gcd (content
    /// extraction + subresultant PRS) and then splits the reduced denominator
    /// into linear factors where possible.
    pub fn new(num: MPoly, den: MPoly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let g = MPoly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides"),
                den.exact_div(&g).expect("gcd divides"),
            )
        };
        let (factors, rest) = den.extract_linear_factors();
        let mut out = RatFunc::from_poly(num);
        for (f, m) in factors {
            out = out.div_factor(&f, m)?;
        }
        if let Some(c) = rest.as_constant() {
            out.num = out.num.scale(&(Scalar::one() / c));
        } else {
            let (monic, lc) = rest.monic();
            out.num = out.num.scale(&(Scalar::one() / lc));
            out = out.div_factor(&monic, 1)?;
        }
        Ok(out)
    }

    /// Build from a numerator and a map of monic denominator factors,
    /// reducing factors that divide the numerator.
    pub fn from_num_factors(
        num: MPoly,
        factors: std::collections::BTreeMap<MPoly, u32>,
    ) -> Result<RatFunc> {
        let mut out = RatFunc::from_poly(num);
        for (f, m) in factors {
            out = out.div_factor(&f, m)?;
        }
        Ok(out)
    }

    fn div_factor(&self, f: &MPoly, mult: u32) -> Result<RatFunc> {
        if f.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut out = self.clone();
        if out.num.is_zero() {
            return Ok(out);
        }
        debug_assert!(f.leading_coeff().is_one(), "factor must be monic");
        let mut m = mult + out.den.get(f).copied().unwrap_or(0);
        out.den.remove(f);
        while m > 0 {
            // cheap rejection first: a divisor must vanish wherever the
            // factor does; evaluate the numerator on a point of the factor's
            // zero locus (exact for linear factors, sound in general: a
            // nonzero value certainly rules out divisibility)
            if !may_divide(&out.num, f) {
                break;
            }
            if let Some(q) = out.num.exact_div(f) {
                out.num = q;
                m -= 1;
            } else {
                break;
            }
        }
        if m > 0 {
            out.den.insert(f.clone(), m);
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn den_factors(&self) -> impl Iterator<Item = (&MPoly, u32)> {
        self.den.iter().map(|(f, &m)| (f, m))
    }

    pub fn denominator(&self) -> MPoly {
        let mut d = MPoly::one();
        for (f, &m) in &self.den {
            d = d.mul(&f.pow(m));
        }
        d
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn as_scalar_checked(&self) -> Option<Scalar> {
        self.as_constant()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.keys().any(|f| f.contains_var(v))
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs = self.num.vars();
        for f in self.den.keys() {
            for v in f.vars() {
                if !vs.contains(&v) {
                    vs.push(v);
                }
            }
        }
        vs.sort();
        vs
    }

    // ---- arithmetic ----

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // common denominator: factor-wise max multiplicity
        let mut common: BTreeMap<MPoly, u32> = self.den.clone();
        for (f, &m) in &other.den {
            let e = common.entry(f.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        let mut na = self.num.clone();
        let mut nb = other.num.clone();
        for (f, &m) in &common {
            let ma = self.den.get(f).copied().unwrap_or(0);
            let mb = other.den.get(f).copied().unwrap_or(0);
            if m > ma {
                na = na.mul(&f.pow(m - ma));
            }
            if m > mb {
                nb = nb.mul(&f.pow(m - mb));
            }
        }
        let mut out = RatFunc {
            num: na.add(&nb),
            den: BTreeMap::new(),
        };
        if out.num.is_zero() {
            return RatFunc::zero();
        }
        for (f, m) in common {
            out = out.div_factor(&f, m).expect("nonzero factor");
        }
        out
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        let mut out = RatFunc {
            num: self.num.mul(&other.num),
            den: BTreeMap::new(),
        };
        let mut all = self.den.clone();
        for (f, &m) in &other.den {
            *all.entry(f.clone()).or_insert(0) += m;
        }
        for (f, m) in all {
            out = out.div_factor(&f, m).expect("nonzero factor");
        }
        out
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn recip(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut num = MPoly::one();
        for (f, &m) in &self.den {
            num = num.mul(&f.pow(m));
        }
        let (factors, rest) = self.num.extract_linear_factors();
        let mut out = RatFunc::from_poly(num);
        for (f, m) in factors {
            out = out.div_factor(&f, m)?;
        }
        if let Some(c) = rest.as_constant() {
            out.num = out.num.scale(&(Scalar::one() / c));
        } else {
            let (monic, lc) = rest.monic();
            out.num = out.num.scale(&(Scalar::one() / lc));
            out = out.div_factor(&monic, 1)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: i64) -> Result<RatFunc> {
        if e == 0 {
            return Ok(RatFunc::one());
        }
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut out = RatFunc::one();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    pub fn derivative(&self, v: Var) -> RatFunc {
        // (N / ∏ F_i^{m_i})' = [N' ∏F_i - N Σ m_i F_i' ∏_{j≠i} F_j] / ∏ F_i^{m_i+1}
        if self.den.is_empty() {
            return RatFunc::from_poly(self.num.derivative(v));
        }
        let mut prod_all = MPoly::one();
        for f in self.den.keys() {
            prod_all = prod_all.mul(f);
        }
        let mut num = self.num.derivative(v).mul(&prod_all);
        for (fi, &mi) in &self.den {
            let mut others = MPoly::one();
            for fj in self.den.keys() {
                if fj != fi {
                    others = others.mul(fj);
                }
            }
            let t = self
                .num
                .mul(&fi.derivative(v))
                .mul(&others)
                .scale(&Scalar::from_integer((mi as i64).into()));
            num = num.sub(&t);
        }
        let mut out = RatFunc {
            num,
            den: BTreeMap::new(),
        };
        for (f, &m) in &self.den {
            out = out.div_factor(f, m + 1).expect("nonzero factor");
        }
        out
    }

    /// Pole order at a divisor (a polynomial, typically z_i - z_j or z_i):
    /// multiplicity in the denominator minus multiplicity in the numerator,
    /// floored at 0.
    pub fn pole_order(&self, divisor: &MPoly) -> u32 {
        let (f, _) = divisor.monic();
        let in_den = self.den.get(&f).copied().unwrap_or(0);
        if in_den == 0 {
            return 0;
        }
        let mut in_num = 0;
        let mut n = self.num.clone();
        if !n.is_zero() {
            while let Some(q) = n.exact_div(&f) {
                in_num += 1;
                n = q;
                if in_num >= in_den {
                    break;
                }
            }
        }
        in_den.saturating_sub(in_num)
    }

    /// Substitute rational functions for variables; unbound variables are
    /// kept. Errors if a denominator factor becomes identically zero.
    pub fn substitute(&self, bindings: &BTreeMap<Var, RatFunc>) -> Result<RatFunc> {
        let sub_poly = |p: &MPoly| -> RatFunc {
            let mut acc = RatFunc::zero();
            for (m, c) in p.terms() {
                let mut term = RatFunc::constant(c.clone());
                for (v, e) in m.iter() {
                    let base = bindings.get(&v).cloned().unwrap_or_else(|| RatFunc::var(v));
                    term = term.mul(&base.pow(e as i64).expect("positive power"));
                }
                acc = acc.add(&term);
            }
            acc
        };
        let mut out = sub_poly(&self.num);
        for (f, &m) in &self.den {
            let fs = sub_poly(f);
            if fs.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            out = out.div(&fs.pow(m as i64).expect("positive power"))?;
        }
        Ok(out)
    }

    /// Evaluate at a rational point; None signals a pole.
    pub fn eval(&self, point: &BTreeMap<Var, Scalar>) -> Option<Scalar> {
        let n = self.num.eval_partial(point).as_constant()?;
        let mut d = Scalar::one();
        for (f, &m) in &self.den {
            let fv = f.eval_partial(point).as_constant()?;
            if fv.is_zero() {
                return None;
            }
            for _ in 0..m {
                d *= &fv;
            }
        }
        Some(n / d)
    }

    /// Rename a single variable throughout (used by expansion machinery).
    pub fn rename_var(&self, from: Var, to: Var) -> RatFunc {
        let mut b = BTreeMap::new();
        b.insert(from, RatFunc::var(to));
        self.substitute(&b).expect("renaming cannot vanish")
    }
}

impl RatFunc {
    /// Structural comparison (canonical-form ordering) for use as map keys;
    /// distinct from PartialEq, which is mathematical equality.
    pub fn cmp_structural(&self, other: &Self) -> std::cmp::Ordering {
        self.num
            .cmp(&other.num)
            .then_with(|| self.den.cmp(&other.den))
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        if self.num == other.num && self.den == other.den {
            return true;
        }
        // cross-multiplication fallback
        self.num
            .mul(&other.denominator())
            .sub(&other.num.mul(&self.denominator()))
            .is_zero()
    }
}

impl std::hash::Hash for RatFunc {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "({})", self.num);
        }
        write!(f, "({})/(", self.num)?;
        let mut first = true;
        for (fac, &m) in &self.den {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if m == 1 {
                write!(f, "({fac})")?;
            } else {
                write!(f, "({fac})^{m}")?;
            }
        }
        write!(f, ")")
    }
}

/// Fast divisibility pre-check: evaluate the numerator at a point on the
/// factor's zero locus (constructed exactly for linear factors). A nonzero
/// value proves non-divisibility; zero falls through to exact division.
fn may_divide(num: &MPoly, f: &MPoly) -> bool {
    // only linear factors admit the cheap construction
    if f.total_degree() != 1 {
        return true;
    }
    let vars = f.vars();
    // f = c0 + Σ c_i x_i: pick the leading variable, assign pseudo-random
    // small values to the rest, solve for it.
    let lead = *vars.last().expect("non-constant factor");
    let mut c_lead = Scalar::zero();
    let mut c0 = Scalar::zero();
    let mut rest: Vec<(Var, Scalar)> = Vec::new();
    for (m, c) in f.terms() {
        if m.is_one() {
            c0 = c.clone();
        } else {
            let v = m.vars().next().unwrap();
            if v == lead {
                c_lead = c.clone();
            } else {
                rest.push((v, c.clone()));
            }
        }
    }
    if c_lead.is_zero() {
        return true;
    }
    let mut point: BTreeMap<Var, Scalar> = BTreeMap::new();
    let mut acc = c0;
    let mut seed = 37i64;
    for (v, c) in rest {
        seed = (seed.wrapping_mul(31).wrapping_add(17)) % 1009;
        let val = Scalar::from_integer((seed.abs() + 2).into());
        acc += c * &val;
        point.insert(v, val);
    }
    point.insert(lead, -acc / c_lead);
    // fill any remaining numerator variables with distinct values
    for v in num.vars() {
        seed = (seed.wrapping_mul(31).wrapping_add(17)) % 1009;
        point
            .entry(v)
            .or_insert_with(|| Scalar::from_integer((seed.abs() + 2).into()));
    }
    match num.eval_partial(&point).as_constant() {
        Some(c) => c.is_zero(),
        None => true,
    }
}

// Small helpers used across the engine.
impl RatFunc {
    pub fn from_i64(n: i64) -> RatFunc {
        RatFunc::constant(Scalar::from_integer(n.into()))
    }

    pub fn diff_of(a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.sub(b)
    }

    pub fn is_negative_constant(&self) -> bool {
        self.as_constant().map(|c| c.is_negative()).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::q;

    fn z(i: u32) -> RatFunc {
        RatFunc::var(Var::z(i))
    }

    fn zp(i: u32) -> MPoly {
        MPoly::var(Var::z(i))
    }

    #[test]
    fn normalize_sign_and_zero() {
        // (z1 - z2) / (z2 - z1) -> -1
        let f = RatFunc::new(zp(1).sub(&zp(2)), zp(2).sub(&zp(1))).unwrap();
        assert_eq!(f, RatFunc::from_i64(-1));
        // 0 / z1 -> 0/1
        let g = RatFunc::new(MPoly::zero(), zp(1)).unwrap();
        assert!(g.is_zero() && g.is_polynomial());
        assert!(RatFunc::new(MPoly::one(), MPoly::zero()).is_err());
    }

    #[test]
    fn normalize_cancels_common_factor() {
        // (z1^2 - z2^2) / (z1 - z2) = z1 + z2
        let f = RatFunc::new(
            zp(1).mul(&zp(1)).sub(&zp(2).mul(&zp(2))),
            zp(1).sub(&zp(2)),
        )
        .unwrap();
        assert_eq!(f, z(1).add(&z(2)));
        assert!(f.is_polynomial());
    }

    #[test]
    fn antisymmetry_and_inverse() {
        let d = z(1).sub(&z(2));
        let inv = d.recip().unwrap();
        // 1/(z1-z2) + 1/(z2-z1) = 0
        assert!(inv.add(&d.neg().recip().unwrap()).is_zero());
        // 1/(z1-z2) * (z1-z2) = 1
        assert_eq!(inv.mul(&d), RatFunc::one());
    }

    #[test]
    fn add_with_cross_denominators() {
        // 1/z1 + 1/z2 = (z1 + z2) / (z1 z2)
        let f = z(1).recip().unwrap().add(&z(2).recip().unwrap());
        let expect = RatFunc::new(zp(1).add(&zp(2)), zp(1).mul(&zp(2))).unwrap();
        assert_eq!(f, expect);
        assert_eq!(f.den_factors().count(), 2);
    }

    #[test]
    fn pole_orders() {
        let d = zp(1).sub(&zp(2));
        let f = RatFunc::new(MPoly::one(), d.mul(&d)).unwrap();
        assert_eq!(f.pole_order(&d), 2);
        // (z1 - z2)/(z1 - z2) -> 0
        let g = RatFunc::new(d.clone(), d.clone()).unwrap();
        assert_eq!(g.pole_order(&d), 0);
        // 1/(z1^2 z2 - z1 z2^2) has order 1 at z1 - z2
        let den = zp(1).mul(&zp(1)).mul(&zp(2)).sub(&zp(1).mul(&zp(2)).mul(&zp(2)));
        let h = RatFunc::new(MPoly::one(), den).unwrap();
        assert_eq!(h.pole_order(&d), 1);
        assert_eq!(h.pole_order(&zp(1)), 1);
        assert_eq!(h.pole_order(&zp(2)), 1);
    }

    #[test]
    fn substitution_sewing_and_translation() {
        // f = zeta1*zeta2, bind zeta2 -> eps/zeta1 gives eps
        let f = RatFunc::var(Var::zeta(1)).mul(&RatFunc::var(Var::zeta(2)));
        let mut b = BTreeMap::new();
        b.insert(
            Var::zeta(2),
            RatFunc::var(Var::Eps)
                .div(&RatFunc::var(Var::zeta(1)))
                .unwrap(),
        );
        assert_eq!(f.substitute(&b).unwrap(), RatFunc::var(Var::Eps));
        // identity bindings
        assert_eq!(f.substitute(&BTreeMap::new()).unwrap(), f);
        // translation invariance of 1/(z1 - z2)
        let g = z(1).sub(&z(2)).recip().unwrap();
        let c = RatFunc::from_i64(7);
        let mut tb = BTreeMap::new();
        tb.insert(Var::z(1), z(1).add(&c));
        tb.insert(Var::z(2), z(2).add(&c));
        assert_eq!(g.substitute(&tb).unwrap(), g);
    }

    #[test]
    fn substitution_zero_denominator_detected() {
        let g = z(1).sub(&z(2)).recip().unwrap();
        let mut b = BTreeMap::new();
        b.insert(Var::z(1), z(2));
        assert!(matches!(g.substitute(&b), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn derivative_quotient_rule() {
        // d/dz1 [1/(z1-z2)^2] = -2/(z1-z2)^3
        let d = z(1).sub(&z(2));
        let f = d.pow(-2).unwrap();
        let expect = d.pow(-3).unwrap().scale(&q(-2));
        assert_eq!(f.derivative(Var::z(1)), expect);
    }

    #[test]
    fn eval_detects_pole() {
        let f = z(1).sub(&z(2)).recip().unwrap();
        let mut p = BTreeMap::new();
        p.insert(Var::z(1), q(2));
        p.insert(Var::z(2), q(3));
        assert_eq!(f.eval(&p), Some(q(-1)));
        p.insert(Var::z(2), q(2));
        assert_eq!(f.eval(&p), None);
    }
}
