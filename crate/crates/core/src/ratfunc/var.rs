use std::fmt;

/// Formal variable of the engine. The ordering (z's, then ζ's, then ε, then
/// λ, then auxiliary gauges) fixes the graded-lexicographic monomial order
/// used for canonical forms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    /// Insertion-point variable z1, z2, ... (1-based index).
    Z(u32),
    /// Sewing annulus coordinate ζ1 or ζ2.
    Zeta(u8),
    /// Sewing parameter ε.
    Eps,
    /// Bilinear-form parameter λ.
    Lambda,
    /// Auxiliary gauge variable t1, t2, ... (internal expansions and
    /// coordinate-change checks).
    Aux(u32),
}

impl Var {
    pub fn z(i: u32) -> Var {
        assert!(i >= 1);
        Var::Z(i)
    }

    pub fn zeta(a: u8) -> Var {
        assert!(a == 1 || a == 2);
        Var::Zeta(a)
    }

    pub fn aux(i: u32) -> Var {
        assert!(i >= 1);
        Var::Aux(i)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z(i) => write!(f, "z{i}"),
            Var::Zeta(a) => write!(f, "zeta{a}"),
            Var::Eps => write!(f, "eps"),
            Var::Lambda => write!(f, "lambda"),
            Var::Aux(i) => write!(f, "t{i}"),
        }
    }
}
