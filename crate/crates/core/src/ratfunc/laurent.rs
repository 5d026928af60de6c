use std::collections::BTreeMap;
use std::fmt;

use super::mpoly::MPoly;
use super::rf::RatFunc;
use super::var::Var;
use crate::Result;

/// Locus of a Laurent expansion: a single variable about 0, or a difference
/// z_i - z_j about 0.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExpansionLocus {
    Var(Var),
    Diff(Var, Var),
}

impl ExpansionLocus {
    pub fn as_poly(&self) -> MPoly {
        match self {
            ExpansionLocus::Var(v) => MPoly::var(*v),
            ExpansionLocus::Diff(a, b) => MPoly::var(*a).sub(&MPoly::var(*b)),
        }
    }

    pub fn as_ratfunc(&self) -> RatFunc {
        RatFunc::from_poly(self.as_poly())
    }
}

impl fmt::Display for ExpansionLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpansionLocus::Var(v) => write!(f, "{v}"),
            ExpansionLocus::Diff(a, b) => write!(f, "{a} - {b}"),
        }
    }
}

/// Truncated Laurent expansion: coefficients for orders lowest..=k, each a
/// rational function in the remaining variables.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentExpansion {
    pub locus: ExpansionLocus,
    pub lowest: i64,
    pub k: i64,
    /// coeffs[j] is the coefficient of locus^(lowest + j).
    pub coeffs: Vec<RatFunc>,
}

impl LaurentExpansion {
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, order: i64) -> RatFunc {
        if order < self.lowest || order > self.k {
            return RatFunc::zero();
        }
        self.coeffs[(order - self.lowest) as usize].clone()
    }

    /// Sum of the truncated expansion as a rational function.
    pub fn truncated_sum(&self) -> RatFunc {
        let base = self.locus.as_ratfunc();
        let mut acc = RatFunc::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = base.pow(self.lowest + j as i64).expect("locus is nonzero");
            acc = acc.add(&c.mul(&p));
        }
        acc
    }
}

fn fresh_aux(f: &RatFunc) -> Var {
    let mut idx = 900;
    loop {
        let v = Var::aux(idx);
        if !f.contains_var(v) {
            return v;
        }
        idx += 1;
    }
}

/// Truncated power series in one auxiliary variable with RatFunc coefficients.
#[derive(Clone)]
struct Series {
    coeffs: Vec<RatFunc>, // index = power of the auxiliary variable
}

impl Series {
    fn from_coeffs(coeffs: Vec<RatFunc>) -> Series {
        Series { coeffs }
    }

    fn mul_trunc(&self, other: &Series, order: usize) -> Series {
        let mut out = vec![RatFunc::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i > order {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > order {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Series::from_coeffs(out)
    }

    /// 1/self up to the given order; the constant term must be nonzero.
    fn invert(&self, order: usize) -> Result<Series> {
        let g0 = self.coeffs.first().cloned().unwrap_or_else(RatFunc::zero);
        let g0inv = g0.recip()?;
        let mut inv = vec![RatFunc::zero(); order + 1];
        inv[0] = g0inv.clone();
        for n in 1..=order {
            // inv[n] = -g0inv * sum_{j=1..=n} self[j] * inv[n-j]
            let mut s = RatFunc::zero();
            for j in 1..=n {
                if j < self.coeffs.len() && !self.coeffs[j].is_zero() {
                    s = s.add(&self.coeffs[j].mul(&inv[n - j]));
                }
            }
            inv[n] = g0inv.neg().mul(&s);
        }
        Ok(Series::from_coeffs(inv))
    }
}

/// Laurent-expand `f` about the locus, keeping coefficients of orders up to
/// `k`. Coefficients are rational functions of the remaining variables.
pub fn laurent_expand(f: &RatFunc, locus: ExpansionLocus, k: i64) -> Result<LaurentExpansion> {
    if f.is_zero() {
        return Ok(LaurentExpansion {
            locus,
            lowest: 0,
            k,
            coeffs: vec![],
        });
    }
    let u = fresh_aux(f);
    // move the locus onto the single variable u
    let g = match locus {
        ExpansionLocus::Var(v) => f.rename_var(v, u),
        ExpansionLocus::Diff(a, b) => {
            let mut bind = BTreeMap::new();
            bind.insert(a, RatFunc::var(u).add(&RatFunc::var(b)));
            f.substitute(&bind).expect("affine substitution")
        }
    };

    // numerator as a series in u
    let num_coeffs = g.numerator().coeffs_in(u);
    let n0 = *num_coeffs.keys().next().expect("nonzero numerator") as i64;

    // denominator factors: valuation + unit series each
    let mut den_val: i64 = 0;
    let mut units: Vec<(BTreeMap<u32, MPoly>, u32)> = Vec::new();
    for (fac, m) in g.den_factors() {
        let cs = fac.coeffs_in(u);
        let a = *cs.keys().next().expect("nonzero factor") as i64;
        den_val += a * m as i64;
        let shifted: BTreeMap<u32, MPoly> = cs
            .into_iter()
            .map(|(e, p)| (e - a as u32, p))
            .collect();
        units.push((shifted, m));
    }

    let lowest_possible = n0 - den_val;
    if k < lowest_possible {
        return Ok(LaurentExpansion {
            locus,
            lowest: lowest_possible,
            k,
            coeffs: vec![],
        });
    }
    let order = (k - lowest_possible) as usize;

    let series_of = |cs: &BTreeMap<u32, MPoly>, shift: i64| -> Series {
        let mut v = vec![RatFunc::zero(); order + 1];
        for (&e, p) in cs {
            let idx = e as i64 - shift;
            if (0..=order as i64).contains(&idx) {
                v[idx as usize] = RatFunc::from_poly(p.clone());
            }
        }
        Series::from_coeffs(v)
    };

    let mut acc = series_of(&num_coeffs, n0);
    for (unit, m) in &units {
        let inv = series_of(unit, 0).invert(order)?;
        for _ in 0..*m {
            acc = acc.mul_trunc(&inv, order);
        }
    }

    // trim leading zeros so `lowest` is the true lowest order
    let mut start = 0usize;
    while start < acc.coeffs.len() && acc.coeffs[start].is_zero() {
        start += 1;
    }
    if start == acc.coeffs.len() {
        return Ok(LaurentExpansion {
            locus,
            lowest: lowest_possible,
            k,
            coeffs: vec![],
        });
    }
    Ok(LaurentExpansion {
        locus,
        lowest: lowest_possible + start as i64,
        k,
        coeffs: acc.coeffs[start..].to_vec(),
    })
}
