//! Exact arithmetic: rationals, number fields, multivariate polynomials and linear algebra.

pub mod field;
pub mod linalg;
pub mod poly;
pub mod rationalize;

pub use field::{q, qi, qz8, z8, Field, NFElem, NumberField};
pub use linalg::Matrix;
pub use poly::{su2_normal_form, Mono, MultiPoly, SPHERE_VARS};
pub use rationalize::rationalize;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different number fields")]
    FieldMismatch,
    #[error("variable {0} is not allowed here")]
    BadVariable(String),
    #[error("bad input: {0}")]
    BadInput(String),
}

/// `n` as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `n/d` as a rational.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Binomial coefficient as an integer rational; zero outside `0 <= k <= n`.
pub fn binom(n: i64, k: i64) -> Rational {
    if k < 0 || n < 0 || k > n {
        return rat(0);
    }
    let k = k.min(n - k);
    let mut acc = num_bigint::BigInt::from(1);
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    Rational::from_integer(acc)
}

/// `n!` as a rational.
pub fn factorial(n: u64) -> Rational {
    let mut acc = num_bigint::BigInt::from(1);
    for j in 2..=n {
        acc *= j;
    }
    Rational::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(6, 2), rat(15));
        assert_eq!(binom(0, 0), rat(1));
        assert_eq!(binom(3, 5), rat(0));
        assert_eq!(binom(3, -1), rat(0));
        assert_eq!(factorial(5), rat(120));
    }
}
