//! Continued-fraction reconstruction of rationals from high-precision
//! approximations. This is the numeric oracle the symbolic verdicts are
//! tested against; it never feeds back into the decision procedures.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::fixed::{pow10, Fixed};
use crate::error::{Error, Result};

/// A rational approximation of a real number together with the number of
/// trustworthy decimal digits: `|value - true| <= 10^-digits`.
#[derive(Clone, Debug, PartialEq)]
pub struct HighPrecision {
    pub value: BigRational,
    pub digits: u32,
}

impl HighPrecision {
    pub fn new(value: BigRational, digits: u32) -> Self {
        Self { value, digits }
    }

    /// Wraps a fixed-point value, discounting two digits for its rounding.
    pub fn from_fixed(f: &Fixed, digits_claimed: u32) -> Self {
        debug_assert!(digits_claimed + 2 <= f.scale());
        Self {
            value: f.to_ratio(),
            digits: digits_claimed,
        }
    }
}

fn decimal_digits(n: &BigInt) -> u32 {
    let s = n.abs().to_string();
    s.len() as u32
}

/// Finds `p/q` with `q <= max_den` and `|x - p/q| < 10^-(digits-5)` by
/// walking the continued-fraction convergents of `x`, or returns `None`.
///
/// Refuses to guess when `x` carries fewer than `2·log10(max_den) + 10`
/// digits: below that, distinct rationals with admissible denominators are
/// not separated by the approximation.
pub fn rational_reconstruct(
    x: &HighPrecision,
    max_den: &BigInt,
) -> Result<Option<BigRational>> {
    if max_den < &BigInt::from(1) {
        return Err(Error::Domain("max_den must be at least 1".into()));
    }
    let required = 2 * decimal_digits(max_den) + 10;
    if x.digits < required {
        return Err(Error::InsufficientPrecision(format!(
            "need {} digits for max_den {}, have {}",
            required, max_den, x.digits
        )));
    }
    if x.digits < 6 {
        return Err(Error::InsufficientPrecision(
            "fewer than 6 digits leaves no acceptance margin".into(),
        ));
    }
    let tolerance = BigRational::new(BigInt::from(1), pow10(x.digits - 5));

    // Convergents p_k/q_k of the continued fraction of x.value.
    let mut remainder = x.value.clone();
    let (mut p_prev, mut q_prev) = (BigInt::from(1), BigInt::zero());
    let (mut p, mut q): (BigInt, BigInt) = {
        let a0 = remainder.floor().to_integer();
        remainder -= BigRational::from_integer(a0.clone());
        (a0, BigInt::from(1))
    };

    loop {
        if &q <= max_den {
            let candidate = BigRational::new(p.clone(), q.clone());
            if (&x.value - &candidate).abs() < tolerance {
                return Ok(Some(candidate));
            }
        } else {
            return Ok(None);
        }
        if remainder.is_zero() {
            return Ok(None);
        }
        let inv = remainder.recip();
        let a = inv.floor().to_integer();
        remainder = inv - BigRational::from_integer(a.clone());
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
}
