use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::var::Var;
use super::Scalar;

/// Monomial: finite map variable -> positive exponent.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mono(BTreeMap<Var, u32>);

impl Mono {
    pub fn one() -> Mono {
        Mono::default()
    }

    pub fn var(v: Var) -> Mono {
        Mono::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u32) -> Mono {
        let mut m = BTreeMap::new();
        if e > 0 {
            m.insert(v, e);
        }
        Mono(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.values().map(|&e| e as u64).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.get(&v).copied().unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0.iter().map(|(&v, &e)| (v, e))
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut m = self.0.clone();
        for (&v, &e) in &other.0 {
            *m.entry(v).or_insert(0) += e;
        }
        Mono(m)
    }

    /// Componentwise division; None if some exponent would go negative.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let mut m = self.0.clone();
        for (&v, &e) in &other.0 {
            let cur = m.get_mut(&v)?;
            if *cur < e {
                return None;
            }
            *cur -= e;
            if *cur == 0 {
                m.remove(&v);
            }
        }
        Some(Mono(m))
    }

    pub fn without(&self, v: Var) -> Mono {
        let mut m = self.0.clone();
        m.remove(&v);
        Mono(m)
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded lexicographic order: total degree first, then exponents compared
/// variable by variable in increasing Var order (earlier variable with a
/// larger exponent wins).
impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let mut a = self.0.iter();
        let mut b = other.0.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((va, ea)), Some((vb, eb))) => {
                    // Smaller variable present means a nonzero exponent on an
                    // earlier position of the exponent vector.
                    match va.cmp(vb) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => match ea.cmp(eb) {
                            Ordering::Equal => {}
                            o => return o,
                        },
                    }
                }
            }
        }
    }
}

/// Sparse multivariate polynomial over ℚ. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MPoly {
    terms: BTreeMap<Mono, Scalar>,
}

impl PartialOrd for MPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary total order (leading terms first) so polynomials can key maps.
impl Ord for MPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.terms.iter().rev();
        let mut b = other.terms.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ma, ca)), Some((mb, cb))) => match ma.cmp(mb).then_with(|| ca.cmp(cb)) {
                    Ordering::Equal => {}
                    o => return o,
                },
            }
        }
    }
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly::default()
    }

    pub fn one() -> MPoly {
        MPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> MPoly {
        let mut p = MPoly::zero();
        p.add_term(Mono::one(), c);
        p
    }

    pub fn var(v: Var) -> MPoly {
        let mut p = MPoly::zero();
        p.add_term(Mono::var(v), Scalar::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, Scalar)>) -> MPoly {
        let mut p = MPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Mono::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(Mono::is_one)
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.is_constant() {
            return self.terms.get(&Mono::one()).cloned();
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut out = MPoly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = Vec::new();
        for m in self.terms.keys() {
            for v in m.vars() {
                if !vs.contains(&v) {
                    vs.push(v);
                }
            }
        }
        vs.sort();
        vs
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    /// Leading term in the graded-lexicographic order.
    pub fn leading(&self) -> Option<(&Mono, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Scalar::zero)
    }

    /// Divide by the grlex-leading coefficient, returning (monic poly, coeff).
    pub fn monic(&self) -> (MPoly, Scalar) {
        let lc = self.leading_coeff();
        if lc.is_zero() || lc.is_one() {
            return (self.clone(), Scalar::one());
        }
        let inv = Scalar::one() / lc.clone();
        (self.scale(&inv), lc)
    }

    /// Exact division; None if the division leaves a remainder.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if let Some(c) = d.as_constant() {
            let inv = Scalar::one() / c;
            return Some(self.scale(&inv));
        }
        let mut rem = self.clone();
        let mut quo = MPoly::zero();
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
            let qm = rm.div(&dm)?;
            let qc = rc / dc.clone();
            let t = MPoly::from_terms([(qm, qc)]);
            quo = quo.add(&t);
            rem = rem.sub(&t.mul(d));
        }
        Some(quo)
    }

    /// Partial derivative.
    pub fn derivative(&self, v: Var) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let mut nm = m.without(v);
            if e > 1 {
                nm = nm.mul(&Mono::var_pow(v, e - 1));
            }
            out.add_term(nm, c * Scalar::from_integer((e as i64).into()));
        }
        out
    }

    /// View as a univariate polynomial in `v`: exponent -> coefficient poly.
    pub fn coeffs_in(&self, v: Var) -> BTreeMap<u32, MPoly> {
        let mut out: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            out.entry(e)
                .or_insert_with(MPoly::zero)
                .add_term(m.without(v), c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Substitute scalars for variables (missing variables stay untouched).
    pub fn eval_partial(&self, point: &BTreeMap<Var, Scalar>) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut nm = Mono::one();
            for (v, e) in m.iter() {
                if let Some(val) = point.get(&v) {
                    let mut pw = Scalar::one();
                    for _ in 0..e {
                        pw *= val;
                    }
                    coeff *= pw;
                } else {
                    nm = nm.mul(&Mono::var_pow(v, e));
                }
            }
            out.add_term(nm, coeff);
        }
        out
    }

    // ---- gcd (content extraction + subresultant PRS) ----

    /// Multivariate gcd, normalized to grlex-leading coefficient 1.
    pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
        if a.is_zero() {
            return if b.is_zero() { MPoly::zero() } else { b.monic().0 };
        }
        if b.is_zero() {
            return a.monic().0;
        }
        let g = Self::gcd_inner(a, b);
        g.monic().0
    }

    fn gcd_inner(a: &MPoly, b: &MPoly) -> MPoly {
        if a.is_constant() || b.is_constant() {
            return MPoly::one();
        }
        let mut vars = a.vars();
        for v in b.vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let v = *vars.iter().max().unwrap();
        if !a.contains_var(v) || !b.contains_var(v) {
            // v appears in only one of them: gcd divides the other's
            // coefficients in v.
            let (with, without) = if a.contains_var(v) { (a, b) } else { (b, a) };
            let mut g = without.clone();
            for (_, c) in with.coeffs_in(v) {
                g = Self::gcd_inner(&g, &c);
                if g.is_constant() {
                    return MPoly::one();
                }
            }
            return g;
        }

        let ca = a.content_in(v);
        let cb = b.content_in(v);
        let cont = Self::gcd_inner(&ca, &cb);
        let pa = a.exact_div(&ca).expect("content divides");
        let pb = b.exact_div(&cb).expect("content divides");
        let pp = Self::subresultant_prs(&pa, &pb, v);
        cont.mul(&pp)
    }

    /// Content with respect to `v`: gcd of the univariate coefficients.
    fn content_in(&self, v: Var) -> MPoly {
        let coeffs = self.coeffs_in(v);
        let mut g = MPoly::zero();
        for (_, c) in coeffs {
            g = if g.is_zero() { c } else { Self::gcd_inner(&g, &c) };
            if g.is_constant() && !g.is_zero() {
                return MPoly::one();
            }
        }
        g.monic().0
    }

    /// Primitive-part gcd of two polynomials primitive in `v`, by the
    /// subresultant polynomial remainder sequence.
    fn subresultant_prs(a: &MPoly, b: &MPoly, v: Var) -> MPoly {
        let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        loop {
            if g.is_zero() {
                let cf = f.content_in(v);
                return f.exact_div(&cf).expect("content divides");
            }
            let r = Self::pseudo_rem(&f, &g, v);
            if r.is_zero() {
                let cg = g.content_in(v);
                return g.exact_div(&cg).expect("content divides");
            }
            if !r.contains_var(v) {
                return MPoly::one();
            }
            // Keep sizes bounded by stripping content each step (simplified
            // primitive PRS; exactness over ℚ is what matters here).
            let cr = r.content_in(v);
            f = g;
            g = r.exact_div(&cr).expect("content divides");
        }
    }

    /// Pseudo-remainder of f by g with respect to v.
    fn pseudo_rem(f: &MPoly, g: &MPoly, v: Var) -> MPoly {
        let dg = g.degree_in(v);
        let gc = g.coeffs_in(v);
        let glead = gc.get(&dg).cloned().unwrap_or_else(MPoly::zero);
        let mut r = f.clone();
        loop {
            let dr = r.degree_in(v);
            if r.is_zero() || dr < dg {
                return r;
            }
            let rc = r.coeffs_in(v);
            let rlead = rc.get(&dr).cloned().unwrap_or_else(MPoly::zero);
            // r <- glead * r - rlead * v^(dr-dg) * g
            let shift = Mono::var_pow(v, dr - dg);
            let shifted =
                MPoly::from_terms(g.terms.iter().map(|(m, c)| (m.mul(&shift), c.clone())));
            r = glead.mul(&r).sub(&rlead.mul(&shifted));
        }
    }

    /// Split into linear factors occurring in the polynomial plus a remaining
    /// cofactor: attempts trial division by candidate linear forms read off
    /// the polynomial itself. Engine denominators are products of linear
    /// forms, so this recovers the full factorization for them.
    pub fn extract_linear_factors(&self) -> (Vec<(MPoly, u32)>, MPoly) {
        let mut rest = self.clone();
        let mut out: Vec<(MPoly, u32)> = Vec::new();
        if rest.is_zero() || rest.is_constant() {
            return (out, rest);
        }
        loop {
            if rest.is_constant() {
                break;
            }
            let mut found = false;
            for cand in rest.linear_candidates() {
                if let Some(q) = rest.exact_div(&cand) {
                    let mut mult = 1;
                    let mut r2 = q;
                    while let Some(q2) = r2.exact_div(&cand) {
                        mult += 1;
                        r2 = q2;
                    }
                    out.push((cand, mult));
                    rest = r2;
                    found = true;
                    break;
                }
            }
            if !found {
                break;
            }
        }
        out.sort();
        (out, rest)
    }

    /// Candidate monic linear forms for trial division: single variables and
    /// pairwise combinations v ± w, v ± c drawn from the support.
    fn linear_candidates(&self) -> Vec<MPoly> {
        let vars = self.vars();
        let mut cands = Vec::new();
        for (i, &v) in vars.iter().enumerate() {
            cands.push(MPoly::var(v));
            for &w in &vars[i + 1..] {
                cands.push(MPoly::var(v).sub(&MPoly::var(w)));
                cands.push(MPoly::var(v).add(&MPoly::var(w)));
            }
        }
        // v + c for constants appearing relative to a lone variable.
        if vars.len() == 1 {
            let v = vars[0];
            let coeffs = self.coeffs_in(v);
            if let (Some(c0), Some(c1)) = (coeffs.get(&0), coeffs.get(&1)) {
                if let (Some(a0), Some(a1)) = (c0.as_constant(), c1.as_constant()) {
                    if !a1.is_zero() {
                        cands.push(MPoly::var(v).add(&MPoly::constant(a0 / a1)));
                    }
                }
            }
        }
        cands
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut wrote_coeff = false;
            if m.is_one() || !abs.is_one() {
                write!(f, "{abs}")?;
                wrote_coeff = true;
            }
            for (v, e) in m.iter() {
                if wrote_coeff {
                    write!(f, "*")?;
                }
                wrote_coeff = true;
                if e == 1 {
                    write!(f, "{v}")?;
                } else {
                    write!(f, "{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: u32) -> MPoly {
        MPoly::var(Var::z(i))
    }

    #[test]
    fn exact_division_recovers_factor() {
        // (z1^2 - z2^2) / (z1 - z2) = z1 + z2
        let num = z(1).mul(&z(1)).sub(&z(2).mul(&z(2)));
        let den = z(1).sub(&z(2));
        let q = num.exact_div(&den).unwrap();
        assert_eq!(q, z(1).add(&z(2)));
        // remainder case
        assert!(z(1).exact_div(&den).is_none());
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        let a = z(1).mul(&z(1)).sub(&z(2).mul(&z(2)));
        let b = z(1).sub(&z(2));
        let g = MPoly::gcd(&a, &b);
        assert_eq!(g, z(1).sub(&z(2)));
    }

    #[test]
    fn gcd_with_content() {
        // a = (z1 - z2)^2 * z3, b = (z1 - z2) * z3^2 -> gcd = (z1 - z2) z3
        let d = z(1).sub(&z(2));
        let a = d.mul(&d).mul(&z(3));
        let b = d.mul(&z(3)).mul(&z(3));
        let g = MPoly::gcd(&a, &b);
        assert_eq!(g, d.mul(&z(3)));
    }

    #[test]
    fn linear_factor_extraction() {
        let d = z(1).sub(&z(2));
        let s = z(1).add(&z(2));
        let p = d.mul(&d).mul(&s).mul(&z(1));
        let (factors, rest) = p.extract_linear_factors();
        assert!(rest.is_constant());
        let mut mults: Vec<(String, u32)> = factors
            .iter()
            .map(|(f, m)| (f.to_string(), *m))
            .collect();
        mults.sort();
        assert_eq!(
            mults,
            vec![
                ("z1".to_string(), 1),
                ("z1 + z2".to_string(), 1),
                ("z1 - z2".to_string(), 2)
            ]
        );
    }

    #[test]
    fn grlex_leading_term() {
        // z1^2 beats z1*z2 beats z2^2 (same degree, z1 most significant)
        let p = z(1).mul(&z(1)).add(&z(1).mul(&z(2))).add(&z(2).mul(&z(2)));
        let (m, _) = p.leading().unwrap();
        assert_eq!(m, &Mono::var_pow(Var::z(1), 2));
    }
}
