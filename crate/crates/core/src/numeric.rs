//! Exact scalars.
//!
//! Every quantity in the solver is a [`Rational`] (an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator). The only
//! irrational value the algorithm needs is the square root of the scaling
//! constant; it is never materialized. Instead, expressions of the form
//! `a + b·√s` are compared against zero exactly by sign analysis and squaring.

use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub use num_rational::BigRational as Rational;

use crate::error::NumericError;

/// Builds the integer rational `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds `num / den`, canonicalized.
///
/// Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Sign of `a + b·√s` for `s ≥ 0`.
pub fn compare_affine_sqrt(
    a: &Rational,
    b: &Rational,
    s: &Rational,
) -> Result<Ordering, NumericError> {
    if s.is_negative() {
        return Err(NumericError::NegativeRadicand);
    }
    let a_sign = a.cmp(&Rational::zero());
    let b_sign = if s.is_zero() {
        Ordering::Equal
    } else {
        b.cmp(&Rational::zero())
    };
    Ok(match (a_sign, b_sign) {
        (Ordering::Equal, x) | (x, Ordering::Equal) => x,
        (x, y) if x == y => x,
        // Opposite signs: the term with the larger square wins.
        (a_sign, _) => {
            let a_sq = a * a;
            let b_sq_s = b * b * s;
            match a_sq.cmp(&b_sq_s) {
                Ordering::Greater => a_sign,
                Ordering::Less => a_sign.reverse(),
                Ordering::Equal => Ordering::Equal,
            }
        }
    })
}

/// Smallest integer `z` with `z ≥ v / √s`, for `s > 0`.
pub fn ceil_div_by_sqrt(v: &Rational, s: &Rational) -> Result<BigInt, NumericError> {
    if !s.is_positive() {
        return Err(NumericError::NonPositiveRadicand);
    }
    let neg_v = -v;
    let satisfies =
        |z: &BigInt| -> bool {
            compare_affine_sqrt(&neg_v, &Rational::from_integer(z.clone()), s)
                .map(|o| o != Ordering::Less)
                .unwrap_or(false)
        };

    // |v|/√s = √(v²/s); floor of the square root of the floor is exact.
    let w = (v * v) / s;
    let t = w.floor().to_integer().sqrt();
    let mut z = if v.is_negative() { -t } else { t };
    while !satisfies(&z) {
        z += 1;
    }
    loop {
        let below = &z - 1;
        if satisfies(&below) {
            z = below;
        } else {
            break;
        }
    }
    Ok(z)
}

/// `‖v‖∞` as a rational.
pub fn max_abs(v: &[Rational]) -> Rational {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
}

/// Squared Euclidean norm.
pub fn norm2_squared(v: &[Rational]) -> Rational {
    v.iter().fold(Rational::zero(), |acc, x| acc + x * x)
}
