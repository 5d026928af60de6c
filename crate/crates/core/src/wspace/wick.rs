use num_traits::One;

use crate::ratfunc::{factorial, MPoly, RatFunc, Scalar};
use crate::voa::{partition_weight, z_mu, GradedVector, Partition, RatVector};
use crate::{Error, Result};

/// One normal-ordered insertion in a correlator: the vertex operator of a
/// Fock monomial a(-n_1)...a(-n_k)|0> at a point, i.e.
/// ∏ (1/(n_i-1)!) ∂^{n_i-1}a at that point. `legs` stores the derivative
/// orders n_i - 1.
#[derive(Clone, Debug)]
pub struct Insertion {
    pub legs: Vec<u32>,
    pub norm: Scalar,
    pub point: RatFunc,
}

impl Insertion {
    pub fn from_partition(p: &Partition, point: RatFunc) -> Insertion {
        let mut norm = Scalar::one();
        let legs = p
            .iter()
            .map(|&m| {
                norm *= factorial(m - 1);
                m - 1
            })
            .collect();
        Insertion {
            legs,
            norm: Scalar::one() / norm,
            point,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum LegKind {
    /// Dual-side annihilator a(q); kernel against a field leg is polynomial
    /// in the field's point.
    Bra(u32),
    /// Field leg: derivative order of the current at `factor`'s point.
    Field(u32),
}

#[derive(Clone, Debug)]
struct Leg {
    factor: usize, // 0 = bra; >= 1 indexes insertions (generator included)
    kind: LegKind,
}

/// A matching contribution under assembly: polynomial numerator, scalar, and
/// a multiset of monic denominator factors. Keeping the pieces raw lets the
/// full Wick sum be assembled over a single common denominator.
#[derive(Clone)]
struct Contribution {
    scalar: Scalar,
    num: MPoly,
    den: std::collections::BTreeMap<MPoly, u32>,
}

impl Contribution {
    fn one() -> Contribution {
        Contribution {
            scalar: Scalar::one(),
            num: MPoly::one(),
            den: Default::default(),
        }
    }
}

/// Exact value of ⟨w′, X_1(p_1) ... X_k(p_k) · w-at-p_gen⟩ for monomial data:
/// the Wick sum over complete contractions. `bra` is a partition labelling
/// the coefficient functional (normalized by 1/z_μ); each insertion and the
/// generator are partition monomials at rational-function points.
pub fn wick_monomial(
    bra: &Partition,
    insertions: &[Insertion],
    gen: &Insertion,
) -> Result<RatFunc> {
    let key = {
        let mut factors: Vec<(Vec<u32>, RatFunc)> = insertions
            .iter()
            .map(|i| (i.legs.clone(), i.point.clone()))
            .collect();
        factors.push((gen.legs.clone(), gen.point.clone()));
        // the Wick value is insensitive to factor order
        factors.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp_structural(&b.1)));
        MemoKey {
            bra: bra.clone(),
            factors,
        }
    };
    if let Some(hit) = MEMO.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let value = wick_monomial_uncached(bra, insertions, gen)?;
    let mut memo = MEMO.lock().unwrap();
    if memo.len() > 1_000_000 {
        memo.clear();
    }
    memo.insert(key, value.clone());
    Ok(value)
}

#[derive(PartialEq, Eq, Hash)]
struct MemoKey {
    bra: Partition,
    factors: Vec<(Vec<u32>, RatFunc)>,
}

static MEMO: std::sync::LazyLock<std::sync::Mutex<std::collections::HashMap<MemoKey, RatFunc>>> =
    std::sync::LazyLock::new(|| std::sync::Mutex::new(std::collections::HashMap::new()));

fn wick_monomial_uncached(
    bra: &Partition,
    insertions: &[Insertion],
    gen: &Insertion,
) -> Result<RatFunc> {
    let mut legs: Vec<Leg> = Vec::new();
    for &q in bra {
        legs.push(Leg {
            factor: 0,
            kind: LegKind::Bra(q),
        });
    }
    let mut all_factors: Vec<&Insertion> = insertions.iter().collect();
    all_factors.push(gen);
    for (i, ins) in all_factors.iter().enumerate() {
        for &p in &ins.legs {
            legs.push(Leg {
                factor: i + 1,
                kind: LegKind::Field(p),
            });
        }
    }
    if legs.len() % 2 != 0 {
        return Ok(RatFunc::zero());
    }
    // Points entering contractions must be polynomial expressions (they are
    // throughout the engine); fall back to generic arithmetic otherwise.
    let mut used = vec![false; legs.len()];
    let mut contributions: Vec<Contribution> = Vec::new();
    wick_rec(
        &legs,
        &all_factors,
        &mut used,
        &Contribution::one(),
        &mut contributions,
    )?;
    if contributions.is_empty() {
        return Ok(RatFunc::zero());
    }
    let mut norm = Scalar::one() / z_mu(bra);
    for ins in &all_factors {
        norm *= &ins.norm;
    }
    // group contributions sharing a denominator, then assemble over the
    // common denominator
    let mut grouped: std::collections::BTreeMap<std::collections::BTreeMap<MPoly, u32>, MPoly> =
        Default::default();
    for c in contributions {
        let n = c.num.scale(&(c.scalar * &norm));
        grouped
            .entry(c.den)
            .and_modify(|acc| *acc = acc.add(&n))
            .or_insert(n);
    }
    let mut common: std::collections::BTreeMap<MPoly, u32> = Default::default();
    for den in grouped.keys() {
        for (f, &m) in den {
            let e = common.entry(f.clone()).or_insert(0);
            *e = (*e).max(m);
        }
    }
    let mut num_total = MPoly::zero();
    for (den, num) in grouped {
        if num.is_zero() {
            continue;
        }
        let mut n = num;
        for (f, &m) in &common {
            let have = den.get(f).copied().unwrap_or(0);
            if m > have {
                n = n.mul(&f.pow(m - have));
            }
        }
        num_total = num_total.add(&n);
    }
    RatFunc::from_num_factors(num_total, common)
}

fn wick_rec(
    legs: &[Leg],
    factors: &[&Insertion],
    used: &mut Vec<bool>,
    acc: &Contribution,
    total: &mut Vec<Contribution>,
) -> Result<()> {
    let first = match used.iter().position(|u| !u) {
        None => {
            total.push(acc.clone());
            return Ok(());
        }
        Some(i) => i,
    };
    used[first] = true;
    for j in (first + 1)..legs.len() {
        if used[j] || legs[j].factor == legs[first].factor {
            continue;
        }
        if let Some(next) = kernel_into(&legs[first], &legs[j], factors, acc)? {
            used[j] = true;
            wick_rec(legs, factors, used, &next, total)?;
            used[j] = false;
        }
    }
    used[first] = false;
    Ok(())
}

fn point_poly(f: &RatFunc) -> MPoly {
    debug_assert!(f.is_polynomial(), "insertion points must be polynomial");
    f.numerator().clone()
}

/// Multiply the kernel of a contraction into a contribution; None when the
/// kernel vanishes.
fn kernel_into(
    a: &Leg,
    b: &Leg,
    factors: &[&Insertion],
    acc: &Contribution,
) -> Result<Option<Contribution>> {
    match (a.kind, b.kind) {
        (LegKind::Bra(_), LegKind::Bra(_)) => Ok(None),
        (LegKind::Bra(q), LegKind::Field(p)) | (LegKind::Field(p), LegKind::Bra(q)) => {
            // contraction of a(q) with ∂^p a(x): q·(q-1)···(q-p)·x^{q-1-p}
            if p >= q {
                return Ok(None);
            }
            let field = if matches!(a.kind, LegKind::Field(_)) { a } else { b };
            let x = point_poly(&factors[field.factor - 1].point);
            let e = q - 1 - p;
            if x.is_zero() && e > 0 {
                return Ok(None);
            }
            let mut c = Scalar::one();
            for s in 0..=p {
                c *= Scalar::from_integer(((q - s) as i64).into());
            }
            let mut out = acc.clone();
            out.scalar *= c;
            if e > 0 {
                out.num = out.num.mul(&x.pow(e));
            }
            Ok(Some(out))
        }
        (LegKind::Field(p), LegKind::Field(q)) => {
            // ∂_x^p ∂_y^q (x-y)^{-2} = (-1)^p (p+q+1)! (x-y)^{-(p+q+2)}
            let x = &factors[a.factor - 1].point;
            let y = &factors[b.factor - 1].point;
            let d = point_poly(x).sub(&point_poly(y));
            if d.is_zero() {
                return Err(Error::ConfigCollision(x.to_string(), y.to_string()));
            }
            let sign = if p % 2 == 0 { Scalar::one() } else { -Scalar::one() };
            let (monic, lc) = d.monic();
            let e = p + q + 2;
            let mut out = acc.clone();
            out.scalar *= sign * factorial(p + q + 1);
            let mut lcp = Scalar::one();
            for _ in 0..e {
                lcp *= &lc;
            }
            out.scalar /= lcp;
            *out.den.entry(monic).or_insert(0) += e;
            Ok(Some(out))
        }
    }
}

/// Multilinear Wick evaluation: dual vector (coefficient functional), states
/// with rational-function coefficients at rational-function points, and a
/// generator state at its point.
pub fn wick_eval(
    bra: &GradedVector,
    states: &[(RatVector, RatFunc)],
    gen: (&GradedVector, &RatFunc),
) -> Result<RatFunc> {
    let mut total = RatFunc::zero();
    // expand multilinearly over all basis monomials
    fn rec(
        bra_label: &Partition,
        bra_coeff: &Scalar,
        states: &[(RatVector, RatFunc)],
        chosen: &mut Vec<Insertion>,
        coeff: &RatFunc,
        gen: (&GradedVector, &RatFunc),
        total: &mut RatFunc,
    ) -> Result<()> {
        if let Some((st, pt)) = states.first() {
            for (p, c) in st {
                chosen.push(Insertion::from_partition(p, pt.clone()));
                let nc = coeff.mul(c);
                if !nc.is_zero() {
                    rec(bra_label, bra_coeff, &states[1..], chosen, &nc, gen, total)?;
                }
                chosen.pop();
            }
            return Ok(());
        }
        for (pg, cg) in gen.0 {
            let g = Insertion::from_partition(pg, gen.1.clone());
            let w = wick_monomial(bra_label, chosen, &g)?;
            if !w.is_zero() {
                *total = total.add(&w.mul(coeff).scale(&(bra_coeff * cg)));
            }
        }
        Ok(())
    }
    for (pb, cb) in bra {
        let mut chosen = Vec::new();
        rec(pb, cb, states, &mut chosen, &RatFunc::one(), gen, &mut total)?;
    }
    Ok(total)
}

/// Weight check used by certificates: the largest pole order the pair of
/// states can produce on a diagonal, wt(v_i) + wt(v_j).
pub fn pole_bound(vi: &GradedVector, vj: &GradedVector) -> u32 {
    let wi = vi.keys().map(partition_weight).max().unwrap_or(0);
    let wj = vj.keys().map(partition_weight).max().unwrap_or(0);
    wi + wj
}
