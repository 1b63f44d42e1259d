//! Exact scalars, stochastic matrices and the LP feasibility solver.
//!
//! Joint alphabets are flattened with the leftmost factor most significant:
//! the tuple `(i_0, i_1, ..., i_{n-1})` over sizes `(s_0, ..., s_{n-1})` maps
//! to `((i_0 * s_1 + i_1) * s_2 + i_2) ...`. Every module uses this
//! convention through [`MixedRadix`].

mod lp;
mod matrix;

pub use lp::{lp_feasible, Constraint, Feasibility, LinearSystem, Relation};
pub use matrix::{
    enumerate_deterministic_ops, tensor, DeterministicOp, RationalMatrix, StochasticMatrix,
    StochasticVector,
};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::{Error, Result};

/// Exact, reduced, arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Shorthand for `numer/denom`. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses the literal syntax `p/q` or `p` (optionally signed).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Invalid(format!("malformed rational '{s}'"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Invalid(format!("zero denominator in '{s}'")));
    }
    Ok(Rational::new(num, den))
}

/// Renders `p/q`, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn sum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().fold(Rational::zero(), |acc, v| acc + v)
}

/// Flattening of tuples over a product alphabet, leftmost factor most
/// significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedRadix {
    sizes: Vec<usize>,
    len: usize,
}

impl MixedRadix {
    pub fn new(sizes: &[usize]) -> Self {
        let len = sizes.iter().product();
        Self { sizes: sizes.to_vec(), len }
    }

    /// Number of tuples (the product of the sizes; 1 for an empty product).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn flatten(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.sizes.len());
        digits
            .iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&d, &s)| {
                debug_assert!(d < s);
                acc * s + d
            })
    }

    pub fn unflatten(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.sizes.len()];
        for (slot, &s) in digits.iter_mut().zip(&self.sizes).rev() {
            *slot = index % s;
            index /= s;
        }
        digits
    }

    /// All tuples in flattening order.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len).map(move |k| self.unflatten(k))
    }
}

/// `base^exp` as u128, `None` on overflow.
pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u128)?;
    }
    Some(acc)
}

pub(crate) fn checked_product(factors: impl IntoIterator<Item = Option<u128>>) -> Option<u128> {
    factors
        .into_iter()
        .try_fold(1u128, |acc, f| acc.checked_mul(f?))
}

pub(crate) fn ensure_within_cap(count: Option<u128>, cap: u64) -> Result<u64> {
    match count {
        Some(c) if c <= cap as u128 => Ok(c as u64),
        Some(c) => Err(Error::too_large(c, cap)),
        None => Err(Error::too_large("more than 2^128", cap)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational(" 2/4 ").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(51, 50)), "51/50");
        assert_eq!(format_rational(&int(1)), "1");
        assert_eq!(format_rational(&rat(-1, 4)), "-1/4");
    }

    #[test]
    fn radix_is_leftmost_significant() {
        let r = MixedRadix::new(&[2, 3, 2]);
        assert_eq!(r.len(), 12);
        assert_eq!(r.flatten(&[1, 0, 0]), 6);
        assert_eq!(r.flatten(&[0, 2, 1]), 5);
        for k in 0..r.len() {
            assert_eq!(r.flatten(&r.unflatten(k)), k);
        }
        assert_eq!(MixedRadix::new(&[]).len(), 1);
    }
}
