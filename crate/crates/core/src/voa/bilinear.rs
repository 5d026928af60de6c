use num_traits::{One, Zero};

use super::ctx::VoaContext;
use super::fock::{basis, partition_weight, z_mu, GradedVector, Partition};
use crate::ratfunc::{RatFunc, Scalar, Var};
use crate::{Error, Result};

/// Invariant bilinear form ⟨.,.⟩_λ, normalized by ⟨1,1⟩ = 1.
///
/// The adjoint of a mode under the form is a†(n) = (-1)^{n+1} λ^{2n} a(-n)
/// (the expansion of T_λ Y(a,z) T_λ^{-1} for the weight-one primary current),
/// which gives the recursion ⟨a(-q)x, y⟩ = (-1)^{q+1} λ^{-2q} ⟨x, a(q)y⟩.
pub fn bilinear_form(a: &GradedVector, b: &GradedVector, ctx: &VoaContext) -> Scalar {
    let mut acc = Scalar::zero();
    for (pa, ca) in a {
        for (pb, cb) in b {
            let g = gram_entry(pa, pb, &ctx.lambda);
            if !g.is_zero() {
                acc += ca * cb * g;
            }
        }
    }
    acc
}

/// ⟨b_μ, b_ν⟩_λ on partition labels. Vanishes unless μ = ν (the monomial
/// basis is orthogonal for the rank-one Heisenberg algebra); the diagonal
/// entry is (-1)^{|μ|+ℓ(μ)} λ^{-2|μ|} z_μ.
pub fn gram_entry(pa: &Partition, pb: &Partition, lambda: &Scalar) -> Scalar {
    // recursion on the left argument; equivalent to the closed form above,
    // and exactly the invariance property ⟨u(n)a, b⟩ = ⟨a, u†(n)b⟩ applied to
    // the current modes.
    if pa.is_empty() {
        return if pb.is_empty() {
            Scalar::one()
        } else {
            Scalar::zero()
        };
    }
    let q = pa[0];
    let rest = pa[1..].to_vec();
    // a(q) acting on pb
    if let Some(pos) = pb.iter().position(|&x| x == q) {
        let mult = pb.iter().filter(|&&x| x == q).count() as i64;
        let mut nb = pb.clone();
        nb.remove(pos);
        let sign = if q % 2 == 0 { -Scalar::one() } else { Scalar::one() };
        let mut lam_pow = Scalar::one();
        for _ in 0..2 * q {
            lam_pow *= lambda;
        }
        sign / lam_pow
            * Scalar::from_integer((q as i64).into())
            * Scalar::from_integer(mult.into())
            * gram_entry(&rest, &nb, lambda)
    } else {
        Scalar::zero()
    }
}

/// Symbolic variant: the form value as a rational function of the λ variable.
pub fn bilinear_form_symbolic(a: &GradedVector, b: &GradedVector) -> RatFunc {
    let lam = RatFunc::var(Var::Lambda);
    let mut acc = RatFunc::zero();
    for (pa, ca) in a {
        for (pb, cb) in b {
            if pa != pb {
                continue;
            }
            let w = partition_weight(pa);
            let len = pa.len() as u32;
            let sign = if (w + len) % 2 == 0 { 1 } else { -1 };
            let entry = lam
                .pow(-2 * w as i64)
                .expect("lambda nonzero")
                .scale(&(z_mu(pa) * Scalar::from_integer((sign as i64).into())));
            acc = acc.add(&entry.scale(&(ca * cb)));
        }
    }
    acc
}

/// Dual basis pairs at a level: (u_α, ū_α) with ⟨u_α, ū_β⟩ = δ_{αβ}. The
/// partition basis is orthogonal, so duals are rescalings.
pub fn dual_basis(level: u32, ctx: &VoaContext) -> Result<Vec<(GradedVector, GradedVector)>> {
    let mut out = Vec::new();
    for p in basis(level, ctx.n_max)? {
        let mut u = GradedVector::new();
        u.insert(p.clone(), Scalar::one());
        let g = gram_entry(&p, &p, &ctx.lambda);
        if g.is_zero() {
            return Err(Error::DegenerateGram(level));
        }
        let mut dual = GradedVector::new();
        dual.insert(p, Scalar::one() / g);
        out.push((u, dual));
    }
    Ok(out)
}

/// Dual family for an arbitrary basis of a level: solves the Gram system
/// exactly. Errors if the family is not a basis (singular Gram matrix).
pub fn dual_basis_for(
    vectors: &[GradedVector],
    ctx: &VoaContext,
) -> Result<Vec<GradedVector>> {
    let n = vectors.len();
    let mut gram = vec![vec![Scalar::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            gram[i][j] = bilinear_form(&vectors[i], &vectors[j], ctx);
        }
    }
    let inv = invert(gram).ok_or_else(|| {
        let level = vectors
            .first()
            .and_then(|v| v.keys().next())
            .map(|p| partition_weight(p))
            .unwrap_or(0);
        Error::DegenerateGram(level)
    })?;
    // dual_j = Σ_i (G^{-1})_{ij} v_i satisfies ⟨v_k, dual_j⟩ = δ_{kj}
    let mut duals = Vec::with_capacity(n);
    for j in 0..n {
        let mut d = GradedVector::new();
        for i in 0..n {
            if inv[i][j].is_zero() {
                continue;
            }
            for (p, c) in &vectors[i] {
                super::fock::gv_add_term(&mut d, p.clone(), c * &inv[i][j]);
            }
        }
        duals.push(d);
    }
    Ok(duals)
}

/// Exact Gauss-Jordan inversion over ℚ.
fn invert(mut m: Vec<Vec<Scalar>>) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut inv = vec![vec![Scalar::zero(); n]; n];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= &p;
        }
        for x in inv[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in 0..n {
                let t = &m[col][c] * &f;
                m[r][c] -= t;
                let t = &inv[col][c] * &f;
                inv[r][c] -= t;
            }
        }
    }
    Some(inv)
}
