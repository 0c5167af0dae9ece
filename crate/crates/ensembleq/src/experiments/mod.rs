//! Seeded, record-emitting experiment harnesses.
//!
//! Each harness takes an explicit configuration (including the seed), runs a
//! fully deterministic computation, and returns an [`ExperimentRecord`]
//! whose JSON form is reproducible byte for byte. Exact quantities are
//! reported as `n/d` strings, real-valued ones as numbers.

mod census;
mod chsh;
mod ghz;
mod mz;
mod record;
mod scale;
mod sg;
mod uncertainty;

pub use census::{si_census, CensusMode, SiCensusConfig, VertexPool};
pub use chsh::{chsh_run, ChshConfig};
pub use ghz::{ghz_conflict, GhzConfig, PhiSpec};
pub use mz::{mz_complementarity, MzConfig, MzMode};
pub use record::ExperimentRecord;
pub use scale::{scale_estimates, ScaleConfig, ScaleInput, INFRARED_PHOTON_ENERGY_RATIO};
pub use sg::{sg_noncommutativity, SgConfig};
pub use uncertainty::{uncertainty_harness, UncertaintyConfig};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::numtheory::fixed::cos_turns;
use crate::numtheory::{niven_classify, RationalAngle, Verdict};
use crate::Rat;

/// Serde adapter for a pair of turn positions as `n/d` strings.
pub(crate) mod rat_pair_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::Rat;

    pub fn serialize<S: Serializer>(v: &[Rat; 2], s: S) -> Result<S::Ok, S::Error> {
        [crate::format_ratio(&v[0]), crate::format_ratio(&v[1])].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Rat; 2], D::Error> {
        let raw = <[String; 2]>::deserialize(d)?;
        Ok([
            crate::parse_ratio(&raw[0]).map_err(serde::de::Error::custom)?,
            crate::parse_ratio(&raw[1]).map_err(serde::de::Error::custom)?,
        ])
    }
}

/// Denominator used when projecting fixed-point band edges onto `i64`
/// rationals.
const BAND_DENOMINATOR: i64 = 1_000_000_000;

/// Folds a turn difference onto `[0, 1/2]`, the separation range of two
/// directions.
pub(crate) fn fold_separation(a: &Rat, b: &Rat) -> Rat {
    let mut d = (*a - *b).fract();
    if d < Rat::new(0, 1) {
        d += Rat::new(1, 1);
    }
    if d > Rat::new(1, 2) {
        d = Rat::new(1, 1) - d;
    }
    d
}

/// Exact cosine of a rational turn when a Niven exception applies, else a
/// 40-digit fixed-point approximation.
pub(crate) fn cosine_of_turn(turn: &Rat) -> BigRational {
    let angle = RationalAngle::new(*turn);
    match niven_classify(&angle) {
        Verdict::Rational(v) => {
            BigRational::new(BigInt::from(*v.numer()), BigInt::from(*v.denom()))
        }
        _ => cos_turns(
            &BigRational::new(BigInt::from(*turn.numer()), BigInt::from(*turn.denom())),
            40,
        )
        .to_ratio(),
    }
}

pub(crate) fn project_band_edge(x: &BigRational, round_up: bool) -> Result<Rat> {
    let scaled = x * BigRational::from_integer(BigInt::from(BAND_DENOMINATOR));
    let int = if round_up {
        scaled.ceil().to_integer()
    } else {
        scaled.floor().to_integer()
    };
    let n: i64 = int
        .try_into()
        .map_err(|_| Error::Domain("band edge out of i64 range".into()))?;
    Ok(Rat::new(n, BAND_DENOMINATOR))
}

/// Cosine band for separations in `[sep - slack, sep + slack]` (turns),
/// clamped to `[0, 1/2]`. Edges are projected outward onto the `1/10^9`
/// rational grid, so every admissible lattice cosine stays inside.
pub(crate) fn separation_cos_band(sep: &Rat, slack: &Rat) -> Result<(Rat, Rat)> {
    let lo_turn = (*sep - *slack).max(Rat::new(0, 1));
    let hi_turn = (*sep + *slack).min(Rat::new(1, 2));
    // cos decreases over [0, 1/2] turns.
    let cos_lo = cosine_of_turn(&hi_turn);
    let cos_hi = cosine_of_turn(&lo_turn);
    Ok((
        project_band_edge(&cos_lo, false).map(|r| r.max(Rat::new(-1, 1)))?,
        project_band_edge(&cos_hi, true).map(|r| r.min(Rat::new(1, 1)))?,
    ))
}
