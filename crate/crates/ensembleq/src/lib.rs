//! Exact bit-string qubit ensembles.
//!
//! This crate represents qubit states as finite strings over `{+1, -1, X}`
//! together with exact rational bookkeeping for amplitudes (`cos θ = 1 - m/N`)
//! and phases (`φ = 2π n/4N`). Everything that the theory states as an exact
//! identity is computed with arbitrary-precision rationals; floating point
//! only appears where a quantity is genuinely real-valued (standard
//! deviations, continuum reference values).
//!
//! The crate is organized around six layers:
//!
//! * [`bits`] — the packed bit-string algebra: quarter assembly, the
//!   quaternionic operators `i1`/`i2`/`i3`, partial concatenation,
//!   interpolation, cyclic shifts, and exact ensemble statistics.
//! * [`numtheory`] — rationality decision procedures: Niven classification
//!   of rational-turn cosines, the spherical-triangle and CHSH-quadruple
//!   irrationality verdicts, and a continued-fraction reconstruction oracle
//!   backed by a decimal fixed-point engine.
//! * [`states`] — constructors for lattice points on the discretized sphere,
//!   single- and multi-qubit states, entangled pairs, and the seeded
//!   exact-setting sampler.
//! * [`dynamics`] — step-program evolution and its exact inverse,
//!   measurement as seeded disorder, membership testing for ordered states,
//!   and the ultrametric label distance.
//! * [`experiments`] — seeded, record-emitting harnesses for the
//!   interferometer, sequential-analyzer, uncertainty, CHSH, setting-census,
//!   polarization-conflict, and scale-arithmetic experiments.
//! * [`cli`] — the `ensembleq` command-line front end.
//!
//! Exact scalars are `num_rational::Ratio` values. The core functions are
//! generic over the integer type backing the ratio so the same code runs on
//! machine-word rationals ([`Rat`]) for desk-scale work and on
//! arbitrary-precision rationals ([`BigRat`]) where magnitudes are unbounded.

pub mod bits;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod numtheory;
pub mod rng;
pub mod states;

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed};

pub use error::{Error, Result};

/// Exact rational backed by `i64`. Sufficient for every desk-scale quantity
/// in the crate (counts fit comfortably below `2^40`).
pub type Rat = num_rational::Rational64;

/// Exact rational backed by `num_bigint::BigInt`, for unbounded magnitudes
/// (reconstruction oracle, cosmological string lengths).
pub type BigRat = num_rational::BigRational;

/// Integer scalar usable behind an exact `Ratio`.
///
/// Blanket-implemented for everything with the right `num-traits` surface;
/// in practice the crate instantiates `i64` and `BigInt`.
pub trait RatScalar:
    Clone + Integer + Signed + FromPrimitive + fmt::Display + fmt::Debug + FromStr
{
}

impl<T> RatScalar for T where
    T: Clone + Integer + Signed + FromPrimitive + fmt::Display + fmt::Debug + FromStr
{
}

pub use bits::{
    assemble, correlation, cyc_shift, ensemble_stats, interp_i1, interp_i1_inv, partial_concat,
    quaternion_apply, Bit, BitString, EnsembleParams, EnsembleStats, QuaternionOp,
};
pub use numtheory::{
    cosine_is_exception, niven_classify, quadruple_verdict, rational_reconstruct,
    triangle_verdict, HighPrecision, QuadrupleInstance, RationalAngle, RationalCosine,
    TriangleInstance, Verdict,
};
pub use states::{
    bell_pair, bloch_state, kqubit_build, sample_exact_setting, BellPair, EpsilonDisk,
    MultiQubitState, SettingConstraint, SkeletonPoint,
};
pub use dynamics::{
    evolve, invert, is_unitary_image, measure_cluster, padic_distance, ClusterOutcome,
    PAdicLabel, PadicDistance, UnitaryProgram,
};
pub use experiments::ExperimentRecord;

/// Serde adapter serializing an exact ratio as an `n/d` string.
pub mod rat_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::RatScalar;

    pub fn serialize<T: RatScalar, S: Serializer>(
        r: &num_rational::Ratio<T>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&crate::format_ratio(r))
    }

    pub fn deserialize<'de, T: RatScalar, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<num_rational::Ratio<T>, D::Error> {
        let s = String::deserialize(deserializer)?;
        crate::parse_ratio(&s).map_err(serde::de::Error::custom)
    }
}

/// Formats a ratio as `n/d` (or bare `n` when the denominator is 1).
pub fn format_ratio<T: RatScalar>(r: &num_rational::Ratio<T>) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `n`, `n/d`, or a plain decimal like `0.25` into an exact ratio.
pub fn parse_ratio<T: RatScalar>(s: &str) -> Result<num_rational::Ratio<T>> {
    let s = s.trim();
    let bad = || Error::Parse(format!("expected a rational like `3/5`, got `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n = T::from_str(n.trim()).map_err(|_| bad())?;
        let d = T::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(num_rational::Ratio::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let int = if int.is_empty() { "0" } else { int };
        let neg = int.starts_with('-');
        let whole = T::from_str(int).map_err(|_| bad())?;
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let num = T::from_str(frac).map_err(|_| bad())?;
        let mut den = T::one();
        let ten = T::from_u8(10).ok_or_else(bad)?;
        for _ in 0..frac.len() {
            den = den * ten.clone();
        }
        let frac_part = num_rational::Ratio::new(num, den);
        let whole = num_rational::Ratio::from_integer(whole);
        return Ok(if neg { whole - frac_part } else { whole + frac_part });
    }
    let n = T::from_str(s).map_err(|_| bad())?;
    Ok(num_rational::Ratio::from_integer(n))
}
