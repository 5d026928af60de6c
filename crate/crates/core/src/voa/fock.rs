use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::ratfunc::{RatFunc, Scalar};
use crate::{Error, Result};

/// Fock basis label: weakly decreasing list of positive mode numbers,
/// a(-n_1)...a(-n_k)|0> with n_1 >= ... >= n_k. The empty partition is the
/// vacuum.
pub type Partition = Vec<u32>;

/// Element of the truncated graded space: sparse rational coefficients on the
/// partition basis.
pub type GradedVector = BTreeMap<Partition, Scalar>;

/// Graded vector with rational-function coefficients (weight projections of
/// correlators, coordinate-compensated states).
pub type RatVector = BTreeMap<Partition, RatFunc>;

pub fn partition_weight(p: &Partition) -> u32 {
    p.iter().sum()
}

/// All partitions of `level`, deterministic order (descending lexicographic).
pub fn basis(level: u32, n_max: u32) -> Result<Vec<Partition>> {
    if level > n_max {
        return Err(Error::BeyondTruncation {
            requested: level as i64,
            cutoff: n_max as i64,
        });
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(remaining: u32, max_part: u32, cur: &mut Partition, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        let hi = remaining.min(max_part);
        for part in (1..=hi).rev() {
            cur.push(part);
            rec(remaining - part, part, cur, out);
            cur.pop();
        }
    }
    rec(level, level.max(1), &mut cur, &mut out);
    Ok(out)
}

/// Symmetry factor z_mu = prod over distinct parts m of (m^k_m * k_m!), the
/// squared norm of the partition monomial under the standard Fock pairing.
pub fn z_mu(p: &Partition) -> Scalar {
    let mut acc = Scalar::one();
    let mut i = 0;
    while i < p.len() {
        let m = p[i];
        let mut k = 0i64;
        while i < p.len() && p[i] == m {
            k += 1;
            i += 1;
        }
        for j in 1..=k {
            acc *= Scalar::from_integer((m as i64).into());
            acc *= Scalar::from_integer(j.into());
        }
    }
    acc
}

// helpers on graded vectors

pub fn gv_zero() -> GradedVector {
    GradedVector::new()
}

pub fn gv_vacuum() -> GradedVector {
    let mut v = GradedVector::new();
    v.insert(vec![], Scalar::one());
    v
}

pub fn gv_basis_state(p: Partition) -> GradedVector {
    let mut v = GradedVector::new();
    v.insert(p, Scalar::one());
    v
}

pub fn gv_add_term(v: &mut GradedVector, p: Partition, c: Scalar) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match v.entry(p) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let s = e.get().clone() + c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

pub fn gv_add(a: &GradedVector, b: &GradedVector) -> GradedVector {
    let mut out = a.clone();
    for (p, c) in b {
        gv_add_term(&mut out, p.clone(), c.clone());
    }
    out
}

pub fn gv_scale(a: &GradedVector, c: &Scalar) -> GradedVector {
    if c.is_zero() {
        return gv_zero();
    }
    a.iter().map(|(p, k)| (p.clone(), k * c)).collect()
}

pub fn gv_weight_component(a: &GradedVector, q: u32) -> GradedVector {
    a.iter()
        .filter(|(p, _)| partition_weight(p) == q)
        .map(|(p, c)| (p.clone(), c.clone()))
        .collect()
}

pub fn gv_max_weight(a: &GradedVector) -> u32 {
    a.keys().map(|p| partition_weight(p)).max().unwrap_or(0)
}

pub fn rv_add_term(v: &mut RatVector, p: Partition, c: RatFunc) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match v.entry(p) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let s = e.get().add(&c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

pub fn rv_from_gv(a: &GradedVector) -> RatVector {
    a.iter()
        .map(|(p, c)| (p.clone(), RatFunc::constant(c.clone())))
        .collect()
}

// ---- state literal syntax: `3/2*a(-1)a(-1)|0> - a(-2)|0>` ----

/// Print a graded vector in the state-literal syntax.
pub fn state_to_string(v: &GradedVector) -> String {
    if v.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut first = true;
    for (p, c) in v.iter().rev() {
        let neg = c.is_negative();
        let abs = if neg { -c.clone() } else { c.clone() };
        if first {
            if neg {
                out.push('-');
            }
            first = false;
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() || p.is_empty() {
            out.push_str(&abs.to_string());
            if !p.is_empty() {
                out.push('*');
            }
        }
        for m in p {
            out.push_str(&format!("a(-{m})"));
        }
        if !p.is_empty() || abs.is_one() {
            out.push_str("|0>");
        } else {
            // constant written as c*|0>
            out.push_str("|0>");
        }
    }
    out
}

/// Parse the state-literal syntax. Exact round trip with
/// [`state_to_string`].
pub fn parse_state(input: &str) -> Result<GradedVector> {
    let bytes = input.as_bytes();
    let mut pos = 0usize;
    let err = |pos: usize, msg: &str| Error::Parse {
        at: pos,
        msg: msg.to_string(),
    };
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let mut out = gv_zero();
    skip_ws(&mut pos);
    if pos < bytes.len() && bytes[pos] == b'0' && pos + 1 == bytes.len() {
        return Ok(out);
    }
    let mut first = true;
    while pos < bytes.len() {
        skip_ws(&mut pos);
        let mut sign = Scalar::one();
        if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
            if bytes[pos] == b'-' {
                sign = -sign;
            }
            pos += 1;
        } else if !first {
            return Err(err(pos, "expected '+' or '-'"));
        }
        first = false;
        skip_ws(&mut pos);
        // optional rational coefficient n or n/d followed by '*'
        let mut coeff = Scalar::one();
        if pos < bytes.len() && bytes[pos].is_ascii_digit() {
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let n: i64 = std::str::from_utf8(&bytes[start..pos])
                .unwrap()
                .parse()
                .map_err(|_| err(start, "number out of range"))?;
            let mut d: i64 = 1;
            if pos < bytes.len() && bytes[pos] == b'/' {
                pos += 1;
                let ds = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                d = std::str::from_utf8(&bytes[ds..pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| err(ds, "number out of range"))?;
                if d == 0 {
                    return Err(Error::DivisionByZero);
                }
            }
            coeff = Scalar::new(n.into(), d.into());
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
            }
        }
        // sequence of a(-m) factors, then |0>
        let mut parts: Partition = vec![];
        loop {
            skip_ws(&mut pos);
            if pos + 1 < bytes.len() && bytes[pos] == b'a' && bytes[pos + 1] == b'(' {
                pos += 2;
                skip_ws(&mut pos);
                if pos >= bytes.len() || bytes[pos] != b'-' {
                    return Err(err(pos, "only creation modes a(-m) appear in states"));
                }
                pos += 1;
                let ds = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let m: u32 = std::str::from_utf8(&bytes[ds..pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| err(ds, "mode out of range"))?;
                if m == 0 {
                    return Err(err(ds, "mode must be positive"));
                }
                skip_ws(&mut pos);
                if pos >= bytes.len() || bytes[pos] != b')' {
                    return Err(err(pos, "expected ')'"));
                }
                pos += 1;
                parts.push(m);
            } else {
                break;
            }
        }
        skip_ws(&mut pos);
        if pos + 2 < bytes.len() && &bytes[pos..pos + 3] == b"|0>" {
            pos += 3;
        } else {
            return Err(err(pos, "expected |0>"));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        gv_add_term(&mut out, parts, sign * coeff);
        skip_ws(&mut pos);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_enumeration() {
        assert_eq!(basis(0, 6).unwrap(), vec![Vec::<u32>::new()]);
        assert_eq!(basis(1, 6).unwrap(), vec![vec![1]]);
        // brute-force partition count oracle for level 4: 5 partitions
        let b4 = basis(4, 6).unwrap();
        assert_eq!(b4.len(), 5);
        assert_eq!(
            b4,
            vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]
        );
        assert!(basis(7, 6).is_err());
    }

    #[test]
    fn partition_count_against_generating_function() {
        // p(n) for n = 0..8: 1 1 2 3 5 7 11 15 22 (Euler oracle)
        let expect = [1usize, 1, 2, 3, 5, 7, 11, 15, 22];
        for (n, &e) in expect.iter().enumerate() {
            assert_eq!(basis(n as u32, 8).unwrap().len(), e);
        }
    }

    #[test]
    fn z_mu_symmetry_factors() {
        use crate::ratfunc::q;
        assert_eq!(z_mu(&vec![]), q(1));
        assert_eq!(z_mu(&vec![1]), q(1));
        assert_eq!(z_mu(&vec![1, 1]), q(2));
        assert_eq!(z_mu(&vec![2]), q(2));
        assert_eq!(z_mu(&vec![2, 1, 1]), q(4));
        assert_eq!(z_mu(&vec![3, 3, 2]), q(36));
    }

    #[test]
    fn state_literal_round_trip() {
        let cases = [
            "3/2*a(-1)a(-1)|0> - a(-2)|0>",
            "|0>",
            "a(-3)a(-1)|0>",
            "0",
            "-5*|0> + a(-1)|0>",
        ];
        for c in cases {
            let v = parse_state(c).unwrap();
            let s = state_to_string(&v);
            let v2 = parse_state(&s).unwrap();
            assert_eq!(v, v2, "round trip failed for {c}: printed {s}");
        }
    }

    #[test]
    fn state_literal_rejects_garbage() {
        assert!(parse_state("a(1)|0>").is_err());
        assert!(parse_state("a(-1)").is_err());
        assert!(parse_state("2**a(-1)|0>").is_err());
    }
}
