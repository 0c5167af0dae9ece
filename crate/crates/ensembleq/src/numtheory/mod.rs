//! Rationality decision procedures.
//!
//! Niven's theorem — a rational number of turns has a rational cosine only
//! at `cos φ ∈ {0, ±1/2, ±1}` — is the single number-theoretic fact behind
//! every verdict here. Angles are stored as exact fractions of a full turn
//! so the theorem reduces to a denominator test.
//!
//! The triangle verdict decides the chain used for sequential-measurement
//! arguments: on a nondegenerate spherical triangle with both adjacent side
//! cosines rational, assuming the third side cosine rational forces
//! `cos 2φ_b` rational at the included vertex, which Niven's theorem rules
//! out away from its exceptional angles. The quadruple verdict extends the
//! same contradiction to a fourth side via two cosine-rule expressions for
//! the diagonal. Irrationality is always decided symbolically; the numeric
//! machinery in [`fixed`] and [`reconstruct`] exists to *test* these
//! verdicts, never to produce them.

pub mod fixed;
mod reconstruct;

pub use reconstruct::{rational_reconstruct, HighPrecision};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::{format_ratio, RatScalar};

/// An exact rational angle measured in turns (`angle = 2π · turns`),
/// normalized to `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalAngle<T: RatScalar = i64> {
    turns: Ratio<T>,
}

impl<T: RatScalar> RationalAngle<T> {
    pub fn new(turns: Ratio<T>) -> Self {
        let floor = turns.floor();
        Self {
            turns: turns - floor,
        }
    }

    pub fn from_fraction(numer: T, denom: T) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::Domain("angle denominator must be nonzero".into()));
        }
        Ok(Self::new(Ratio::new(numer, denom)))
    }

    pub fn turns(&self) -> &Ratio<T> {
        &self.turns
    }

    /// Reduced denominator of the turn fraction.
    pub fn denominator(&self) -> T {
        self.turns.denom().clone()
    }

    /// The angle `2 · self` (turns doubled modulo one).
    pub fn doubled(&self) -> Self {
        Self::new(self.turns.clone() + self.turns.clone())
    }

    pub fn is_zero_turn(&self) -> bool {
        self.turns.is_zero()
    }

    pub fn is_half_turn(&self) -> bool {
        self.turns == Ratio::new(T::one(), T::from_u8(2).unwrap())
    }

    pub fn as_f64_radians(&self) -> f64 {
        2.0 * std::f64::consts::PI * crate::bits::ratio_to_f64(&self.turns)
    }
}

impl<T: RatScalar> std::fmt::Display for RationalAngle<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", format_ratio(&self.turns))
    }
}

impl<T: RatScalar> Serialize for RationalAngle<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_ratio(&self.turns))
    }
}

impl<'de, T: RatScalar> Deserialize<'de> for RationalAngle<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(Self::new(crate::parse_ratio(&s).map_err(D::Error::custom)?))
    }
}

/// An exact rational in `[-1, 1]` standing for the cosine of some angle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalCosine<T: RatScalar = i64> {
    value: Ratio<T>,
}

impl<T: RatScalar> RationalCosine<T> {
    pub fn new(value: Ratio<T>) -> Result<Self> {
        let one = Ratio::from_integer(T::one());
        if value > one || value < -one {
            return Err(Error::Domain(format!(
                "cosine {} outside [-1, 1]",
                format_ratio(&value)
            )));
        }
        Ok(Self { value })
    }

    pub fn value(&self) -> &Ratio<T> {
        &self.value
    }

    /// `|value| = 1`, i.e. the two directions coincide or are antipodal.
    pub fn is_degenerate(&self) -> bool {
        self.value.numer().abs() == *self.value.denom()
    }
}

impl<T: RatScalar> std::fmt::Display for RationalCosine<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", format_ratio(&self.value))
    }
}

impl<T: RatScalar> Serialize for RationalCosine<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_ratio(&self.value))
    }
}

impl<'de, T: RatScalar> Deserialize<'de> for RationalCosine<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Self::new(crate::parse_ratio(&s).map_err(D::Error::custom)?).map_err(D::Error::custom)
    }
}

/// Outcome of a rationality decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<T: RatScalar = i64> {
    /// The queried cosine is rational, with its exact value.
    Rational(Ratio<T>),
    /// The queried cosine is provably irrational.
    Irrational,
    /// A Niven exception fired: `exception` is the exceptional rational
    /// cosine encountered in the proof chain, and `completion`, when the
    /// geometry pins it down, the exact completed side cosine.
    Exception {
        exception: Ratio<T>,
        completion: Option<Ratio<T>>,
    },
    /// A precondition failed; no verdict about rationality is implied.
    Degenerate,
}

impl<T: RatScalar> Verdict<T> {
    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Rational(_) => "RATIONAL",
            Verdict::Irrational => "IRRATIONAL",
            Verdict::Exception { .. } => "EXCEPTION",
            Verdict::Degenerate => "DEGENERATE",
        }
    }
}

impl<T: RatScalar> Serialize for Verdict<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            status: &'static str,
            #[serde(skip_serializing_if = "Option::is_none")]
            value: Option<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            exception: Option<String>,
        }
        let repr = match self {
            Verdict::Rational(v) => Repr {
                status: "RATIONAL",
                value: Some(format_ratio(v)),
                exception: None,
            },
            Verdict::Irrational => Repr {
                status: "IRRATIONAL",
                value: None,
                exception: None,
            },
            Verdict::Exception {
                exception,
                completion,
            } => Repr {
                status: "EXCEPTION",
                value: completion.as_ref().map(format_ratio),
                exception: Some(format_ratio(exception)),
            },
            Verdict::Degenerate => Repr {
                status: "DEGENERATE",
                value: None,
                exception: None,
            },
        };
        repr.serialize(serializer)
    }
}

impl<'de, T: RatScalar> Deserialize<'de> for Verdict<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            status: String,
            value: Option<String>,
            exception: Option<String>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let parse = |s: &str| crate::parse_ratio::<T>(s).map_err(D::Error::custom);
        Ok(match repr.status.as_str() {
            "RATIONAL" => Verdict::Rational(parse(
                repr.value
                    .as_deref()
                    .ok_or_else(|| D::Error::custom("RATIONAL verdict without value"))?,
            )?),
            "IRRATIONAL" => Verdict::Irrational,
            "EXCEPTION" => Verdict::Exception {
                exception: parse(
                    repr.exception
                        .as_deref()
                        .ok_or_else(|| D::Error::custom("EXCEPTION verdict without exception"))?,
                )?,
                completion: repr.value.as_deref().map(parse).transpose()?,
            },
            "DEGENERATE" => Verdict::Degenerate,
            other => return Err(D::Error::custom(format!("unknown verdict status {other}"))),
        })
    }
}

/// Classifies the cosine of a rational angle: rational exactly when the
/// reduced turn denominator lies in `{1, 2, 3, 4, 6}`, in which case the
/// exact value is returned.
pub fn niven_classify<T: RatScalar>(angle: &RationalAngle<T>) -> Verdict<T> {
    let denom = angle.denominator();
    let of = |n: i8, d: i8| -> Ratio<T> {
        Ratio::new(T::from_i8(n).unwrap(), T::from_i8(d).unwrap())
    };
    let d = denom.to_string();
    match d.as_str() {
        "1" => Verdict::Rational(of(1, 1)),
        "2" => Verdict::Rational(of(-1, 1)),
        "3" => Verdict::Rational(of(-1, 2)),
        "4" => Verdict::Rational(of(0, 1)),
        "6" => Verdict::Rational(of(1, 2)),
        _ => Verdict::Irrational,
    }
}

/// True exactly for the rational cosines a rational angle can have:
/// `{0, ±1/2, ±1}`.
pub fn cosine_is_exception<T: RatScalar>(r: &RationalCosine<T>) -> bool {
    let v = r.value();
    let half = Ratio::new(T::one(), T::from_u8(2).unwrap());
    v.is_zero() || v.clone().abs() == half || v.clone().abs() == Ratio::one()
}

/// A spherical triangle given by the two side cosines adjacent to vertex `b`
/// and the included vertex angle.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangleInstance<T: RatScalar = i64> {
    pub r_ab: RationalCosine<T>,
    pub r_bc: RationalCosine<T>,
    pub phi_b: RationalAngle<T>,
}

impl<T: RatScalar> TriangleInstance<T> {
    pub fn nondegenerate(&self) -> bool {
        !self.r_ab.is_degenerate()
            && !self.r_bc.is_degenerate()
            && !self.phi_b.is_zero_turn()
            && !self.phi_b.is_half_turn()
    }
}

/// Decides the rationality of the closing side cosine `cos θ_ac`.
///
/// The chain: if `cos θ_ac` were rational, the cosine rule makes
/// `sin θ_ab · sin θ_bc · cos φ_b` rational; squaring makes `cos² φ_b` and
/// hence `cos 2φ_b` rational, which Niven's theorem forbids for a
/// non-exceptional rational vertex angle. Exceptional vertex angles (those
/// with `cos 2φ_b` rational) are reported as [`Verdict::Exception`]; when
/// `cos φ_b = 0` the closing cosine is determined exactly and is returned as
/// the completion.
pub fn triangle_verdict<T: RatScalar>(t: &TriangleInstance<T>) -> Verdict<T> {
    if !t.nondegenerate() {
        return Verdict::Degenerate;
    }
    match niven_classify(&t.phi_b.doubled()) {
        Verdict::Rational(cos_double) => {
            // cos φ_b = 0 exactly when cos 2φ_b = -1; then
            // cos θ_ac = r_ab · r_bc with no sine term.
            let completion = if cos_double == -Ratio::one() {
                Some(t.r_ab.value().clone() * t.r_bc.value().clone())
            } else {
                None
            };
            Verdict::Exception {
                exception: cos_double,
                completion,
            }
        }
        _ => Verdict::Irrational,
    }
}

/// Four directions with three pairwise-rational side cosines, plus the two
/// vertex angles entering the two cosine-rule expansions of the diagonal.
/// `independent` is the caller's assertion that the two vertex angles are
/// free parameters (not tied by the configuration).
#[derive(Clone, Debug, PartialEq)]
pub struct QuadrupleInstance<T: RatScalar = i64> {
    pub r_x0y0: RationalCosine<T>,
    pub r_x0y1: RationalCosine<T>,
    pub r_x1y0: RationalCosine<T>,
    pub phi_x0: RationalAngle<T>,
    pub phi_x1: RationalAngle<T>,
    pub independent: bool,
}

impl<T: RatScalar> QuadrupleInstance<T> {
    pub fn nondegenerate(&self) -> bool {
        self.independent
            && self.phi_x0 != self.phi_x1
            && !self.r_x0y0.is_degenerate()
            && !self.r_x0y1.is_degenerate()
            && !self.r_x1y0.is_degenerate()
            && !self.phi_x0.is_zero_turn()
            && !self.phi_x0.is_half_turn()
            && !self.phi_x1.is_zero_turn()
            && !self.phi_x1.is_half_turn()
    }
}

/// Decides the rationality of the fourth side cosine `cos θ_{x1 y1}`.
///
/// Equating the two cosine-rule expressions for the diagonal `cos θ_{y0 y1}`
/// and assuming all four side cosines rational forces each summand — and
/// after squaring, both `cos 2φ_x0` and `cos 2φ_x1` — to be rational, which
/// contradicts Niven's theorem for independent non-exceptional vertex
/// angles.
pub fn quadruple_verdict<T: RatScalar>(q: &QuadrupleInstance<T>) -> Verdict<T> {
    if !q.nondegenerate() {
        return Verdict::Degenerate;
    }
    for phi in [&q.phi_x0, &q.phi_x1] {
        if let Verdict::Rational(cos_double) = niven_classify(&phi.doubled()) {
            return Verdict::Exception {
                exception: cos_double,
                completion: None,
            };
        }
    }
    Verdict::Irrational
}
