//! Minimal representations as sums of at most four squares.
//!
//! The number of squares needed is decided arithmetically (a square; a sum
//! of two squares iff every prime `= 3 mod 4` divides to an even power; a
//! sum of three iff not of the form `4^a (8b + 7)`), and the parts are then
//! found by a descending search that picks the largest admissible leading
//! square at each step. The result is the lexicographically largest
//! minimal representation, with parts in non-increasing order.
//!
//! The search runs on `u128` and uses trial division, which is plenty for
//! the pivots of small trace matrices. Larger inputs are rejected with
//! [`FourSquareError::TooLarge`].

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FourSquareError {
    #[error("{0} is not positive")]
    NonPositive(String),
    #[error("{0} is too large for the four-square search")]
    TooLarge(String),
}

/// `target = sum(parts[i]^2)` with `1 <= parts.len() <= 4`, parts non-increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareDecomposition<T> {
    pub parts: Vec<T>,
    pub target: T,
}

impl<T> SquareDecomposition<T> {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

impl fmt::Display for SquareDecomposition<BigInt> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| format!("{p}^2")).collect();
        write!(f, "{} = {}", self.target, parts.join(" + "))
    }
}

impl fmt::Display for SquareDecomposition<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|p| if p.is_integer() { format!("{p}^2") } else { format!("({p})^2") })
            .collect();
        write!(f, "{} = {}", self.target, parts.join(" + "))
    }
}

pub fn four_square_int(n: &BigInt) -> Result<SquareDecomposition<BigInt>, FourSquareError> {
    if !n.is_positive() {
        return Err(FourSquareError::NonPositive(n.to_string()));
    }
    let v = n.to_u128().ok_or_else(|| FourSquareError::TooLarge(n.to_string()))?;
    let parts = decompose(v).into_iter().map(BigInt::from).collect();
    Ok(SquareDecomposition { parts, target: n.clone() })
}

/// Writes `c = a/b` (lowest terms) as `sum (s_j / b)^2` where
/// `a * b = sum s_j^2` is minimal.
pub fn rational_square_sum(c: &Rational) -> Result<SquareDecomposition<Rational>, FourSquareError> {
    if !c.is_positive() {
        return Err(FourSquareError::NonPositive(c.to_string()));
    }
    let n = c.numer() * c.denom();
    let ints = four_square_int(&n).map_err(|e| match e {
        FourSquareError::TooLarge(_) => FourSquareError::TooLarge(c.to_string()),
        other => other,
    })?;
    let parts = ints.parts.into_iter().map(|s| Rational::new(s, c.denom().clone())).collect();
    Ok(SquareDecomposition { parts, target: c.clone() })
}

/// Smallest `k` such that `n` is a sum of `k` squares (0 for `n = 0`).
pub fn min_squares(n: u128) -> usize {
    if n == 0 {
        0
    } else if is_square(n) {
        1
    } else if is_sum_of_two_squares(n) {
        2
    } else if !is_excluded_from_three(n) {
        3
    } else {
        4
    }
}

fn decompose(n: u128) -> Vec<u128> {
    let k = min_squares(n);
    let mut parts = Vec::with_capacity(k);
    let mut rest = n;
    for remaining in (1..=k).rev() {
        let a = largest_leading(rest, remaining);
        parts.push(a);
        rest -= a * a;
    }
    debug_assert_eq!(rest, 0);
    parts
}

/// Largest `a` such that `n - a^2` is a sum of `k - 1` squares, given that
/// `k` squares are needed for `n`.
fn largest_leading(n: u128, k: usize) -> u128 {
    let top = n.isqrt();
    if k == 1 {
        return top;
    }
    let fits = |rest: u128| match k - 1 {
        1 => is_square(rest),
        2 => is_sum_of_two_squares(rest),
        _ => !is_excluded_from_three(rest),
    };
    (1..=top)
        .rev()
        .find(|&a| fits(n - a * a))
        .expect("Lagrange: every positive integer is a sum of four squares")
}

fn is_square(n: u128) -> bool {
    let s = n.isqrt();
    s * s == n
}

/// Legendre: `n` is not a sum of three squares iff `n = 4^a (8b + 7)`.
fn is_excluded_from_three(mut n: u128) -> bool {
    if n == 0 {
        return false;
    }
    while n.is_multiple_of(4) {
        n /= 4;
    }
    n % 8 == 7
}

/// Fermat: every prime `= 3 mod 4` must occur to an even power.
fn is_sum_of_two_squares(mut n: u128) -> bool {
    if n == 0 {
        return true;
    }
    while n.is_multiple_of(2) {
        n /= 2;
    }
    let mut p: u128 = 3;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            if p % 4 == 3 && e % 2 == 1 {
                return false;
            }
        }
        p += 2;
    }
    n % 4 != 3
}
