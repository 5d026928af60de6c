//! Exact multivariate rational functions over ℚ.
//!
//! Denominators are kept factored into normalized irreducible-by-construction
//! factors (the engine only ever produces powers of linear forms), so the
//! canonical form is cheap to maintain. Laurent expansion about a variable or
//! a difference of variables, truncated ε-series, and substitution are built
//! on top of the same representation.

mod eps;
mod laurent;
mod mpoly;
mod parse;
mod rf;
mod var;

pub use eps::EpsSeries;
pub use laurent::{laurent_expand, ExpansionLocus, LaurentExpansion};
pub use mpoly::{MPoly, Mono};
pub use parse::parse_ratfunc;
pub use rf::RatFunc;
pub use var::Var;

pub type Scalar = num_rational::BigRational;

use num_traits::{One, Zero};

pub fn q(n: i64) -> Scalar {
    Scalar::from_integer(n.into())
}

pub fn qr(n: i64, d: i64) -> Scalar {
    assert!(d != 0);
    Scalar::new(n.into(), d.into())
}

/// n! as an exact rational.
pub fn factorial(n: u32) -> Scalar {
    let mut acc = Scalar::one();
    for k in 2..=n as i64 {
        acc *= q(k);
    }
    acc
}

/// Binomial coefficient with arbitrary integer top, polynomial definition
/// x(x-1)...(x-r+1)/r!.
pub fn binom(top: i64, r: u32) -> Scalar {
    let mut num = Scalar::one();
    for j in 0..r as i64 {
        num *= q(top - j);
    }
    if num.is_zero() {
        return Scalar::zero();
    }
    num / factorial(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binom_matches_pascal_for_small_values() {
        assert_eq!(binom(5, 2), q(10));
        assert_eq!(binom(3, 0), q(1));
        assert_eq!(binom(2, 3), q(0));
        // negative top: binom(-1, k) = (-1)^k
        assert_eq!(binom(-1, 3), q(-1));
        assert_eq!(binom(-2, 2), q(3));
    }
}
