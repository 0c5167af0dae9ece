//! Decimal fixed-point arithmetic on `BigInt` mantissas.
//!
//! This is the numeric side of the crate: a self-contained engine good for a
//! hundred decimal digits, enough to drive the continued-fraction
//! reconstruction oracle at 50-digit precision. Values are
//! `mantissa / 10^scale`; multiplication and division round to nearest, so
//! every operation costs at most one unit in the last place.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// 128 decimal digits of pi (mantissa of the leading `3.…`).
const PI_DIGITS: &str =
    "31415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679821480865132823066470938446";

/// Highest supported working scale (digits after the decimal point).
pub const MAX_SCALE: u32 = 120;

/// A decimal fixed-point number `mantissa / 10^scale`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed {
    mantissa: BigInt,
    scale: u32,
}

pub fn pow10(scale: u32) -> BigInt {
    BigInt::from(10u8).pow(scale)
}

fn div_round_nearest(n: &BigInt, d: &BigInt) -> BigInt {
    debug_assert!(d.is_positive());
    let (q, r) = n.div_mod_floor(d);
    if &(r * 2) >= d {
        q + 1
    } else {
        q
    }
}

impl Fixed {
    pub fn new(mantissa: BigInt, scale: u32) -> Self {
        assert!(scale <= MAX_SCALE, "scale {scale} beyond supported range");
        Self { mantissa, scale }
    }

    pub fn zero(scale: u32) -> Self {
        Self::new(BigInt::zero(), scale)
    }

    pub fn one(scale: u32) -> Self {
        Self::new(pow10(scale), scale)
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    /// Nearest fixed-point value to an exact rational.
    pub fn from_ratio(r: &BigRational, scale: u32) -> Self {
        let scaled = r * BigRational::from_integer(pow10(scale));
        let mantissa = div_round_nearest(scaled.numer(), scaled.denom());
        Self::new(mantissa, scale)
    }

    /// The exact rational this fixed-point value denotes.
    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), pow10(self.scale))
    }

    pub fn to_f64(&self) -> f64 {
        let n: f64 = self.mantissa.to_string().parse().unwrap_or(f64::NAN);
        n / 10f64.powi(self.scale as i32)
    }

    /// Pi at the requested scale (at most [`MAX_SCALE`] fractional digits).
    pub fn pi(scale: u32) -> Self {
        assert!(
            (scale as usize) < PI_DIGITS.len(),
            "pi requested beyond stored digits"
        );
        let digits = &PI_DIGITS[..=scale as usize];
        Self::new(digits.parse().expect("pi digits parse"), scale)
    }

    fn assert_same_scale(&self, other: &Self) {
        assert_eq!(self.scale, other.scale, "mixed fixed-point scales");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_scale(other);
        Self::new(&self.mantissa + &other.mantissa, self.scale)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_scale(other);
        Self::new(&self.mantissa - &other.mantissa, self.scale)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.mantissa, self.scale)
    }

    pub fn abs(&self) -> Self {
        Self::new(self.mantissa.abs(), self.scale)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_scale(other);
        let wide = &self.mantissa * &other.mantissa;
        Self::new(div_round_nearest(&wide, &pow10(self.scale)), self.scale)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.assert_same_scale(other);
        if other.mantissa.is_zero() {
            return Err(Error::Domain("fixed-point division by zero".into()));
        }
        let wide = &self.mantissa * pow10(self.scale);
        let q = if other.mantissa.is_negative() {
            div_round_nearest(&-&wide, &-&other.mantissa)
        } else {
            div_round_nearest(&wide, &other.mantissa)
        };
        Ok(Self::new(q, self.scale))
    }

    /// Integer-scaled square root (floor in the last place); requires a
    /// non-negative value.
    pub fn sqrt(&self) -> Result<Self> {
        if self.mantissa.is_negative() {
            return Err(Error::Domain("fixed-point sqrt of negative value".into()));
        }
        let wide = &self.mantissa * pow10(self.scale);
        Ok(Self::new(wide.sqrt(), self.scale))
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn cmp_value(&self, other: &Self) -> std::cmp::Ordering {
        self.assert_same_scale(other);
        self.mantissa.cmp(&other.mantissa)
    }
}

/// Rounds an exact rational to the nearest integer, ties to even.
pub fn round_half_even(x: &BigRational) -> BigInt {
    let floor = x.floor().to_integer();
    let rem = x - BigRational::from_integer(floor.clone());
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    match rem.cmp(&half) {
        std::cmp::Ordering::Less => floor,
        std::cmp::Ordering::Greater => floor + 1,
        std::cmp::Ordering::Equal => {
            if floor.is_even() {
                floor
            } else {
                floor + 1
            }
        }
    }
}

/// `cos(2π t)` for an exact rational number of turns `t`, to `scale`
/// fractional digits.
///
/// The turn is reduced by the cosine symmetries to `[0, 1/4]` exactly, then
/// summed as the alternating Taylor series in `θ = 2π t ∈ [0, π/2]` with ten
/// guard digits.
pub fn cos_turns(turns: &BigRational, scale: u32) -> Fixed {
    let guard = 10u32;
    let ws = scale + guard;
    assert!(ws <= MAX_SCALE, "cos_turns scale too large");

    let mut t = turns - turns.floor();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
    if t > half {
        t = BigRational::from_integer(BigInt::from(1)) - t;
    }
    let mut sign = 1i8;
    if t > quarter {
        t = half - t;
        sign = -1;
    }

    let theta = Fixed::pi(ws)
        .mul(&Fixed::from_ratio(&(&t * BigInt::from(2)), ws));
    let theta_sq = theta.mul(&theta);

    let mut total = Fixed::one(ws);
    let mut term = Fixed::one(ws);
    let mut k: u64 = 0;
    loop {
        k += 1;
        let denom = Fixed::new(BigInt::from((2 * k - 1) * (2 * k)) * pow10(ws), ws);
        term = term.mul(&theta_sq).div(&denom).expect("nonzero factorial");
        term = term.neg();
        if term.mantissa.is_zero() {
            break;
        }
        total = total.add(&term);
        if k > 200 {
            break;
        }
    }

    let rounded = Fixed::from_ratio(&total.to_ratio(), scale);
    if sign < 0 {
        rounded.neg()
    } else {
        rounded
    }
}
