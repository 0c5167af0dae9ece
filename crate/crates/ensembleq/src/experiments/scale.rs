//! Scale arithmetic: lattice resolution from energy, the classical limit,
//! and the qubit ceiling imposed by a maximum string length.
//!
//! The resolution scales inversely with the system's energy,
//! `N ~ E_ref/E` against the reference energy scale; at or above that scale
//! (`N ≤ 1`) the lattice degenerates and the system behaves classically.
//! The mass threshold for that limit is the reference mass, about 22 µg. A
//! maximum available string length `L` caps the qubit count at
//! `K_max = max{K : 2^K · N ≤ L}`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ExperimentRecord;
use crate::error::{Error, Result};

/// Reference mass of the classical threshold in micrograms (2.176434e-8 kg).
pub const REFERENCE_MASS_MICROGRAMS: f64 = 21.76434;

/// Energy ratio `E/E_ref` pinned for a far-infrared photon; gives
/// `N ~ 10^26`.
pub const INFRARED_PHOTON_ENERGY_RATIO: f64 = 1e-26;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleInput {
    /// Dimensionless `E/E_ref`.
    EnergyRatio(f64),
    /// System mass in micrograms (energy scales linearly with mass).
    MassMicrograms(f64),
    /// Maximum string length as a decimal like `1e62`, with the working
    /// resolution `N`.
    MaxLength { length: String, n: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleConfig {
    pub input: ScaleInput,
}

/// Parses `123`, `1e62`, or `2.5e10` into an exact integer.
pub fn parse_big_decimal(text: &str) -> Result<BigInt> {
    let t = text.trim().to_lowercase();
    let bad = || Error::Parse(format!("expected an integer like 1e62, got `{text}`"));
    let (mantissa, exponent) = match t.split_once('e') {
        Some((m, e)) => (m.to_string(), e.parse::<u32>().map_err(|_| bad())?),
        None => (t.clone(), 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i.to_string(), f.to_string()),
        None => (mantissa, String::new()),
    };
    if frac_part.len() as u32 > exponent {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let value: BigInt = digits.parse().map_err(|_| bad())?;
    Ok(value * BigInt::from(10u8).pow(exponent - frac_part.len() as u32))
}

/// `max{K >= 0 : 2^K · n <= length}`, exactly.
pub fn max_qubits(length: &BigInt, n: u64) -> Result<u64> {
    if length <= &BigInt::zero() || n == 0 {
        return Err(Error::Domain("length and N must be positive".into()));
    }
    let quotient = length / BigInt::from(n);
    if quotient < BigInt::one() {
        return Err(Error::Domain(
            "maximum length is below a single string of resolution N".into(),
        ));
    }
    Ok(quotient.bits() - 1)
}

pub fn scale_estimates(cfg: &ScaleConfig) -> Result<ExperimentRecord> {
    let mut record = ExperimentRecord::new("scale", cfg, 0)?;
    match &cfg.input {
        ScaleInput::EnergyRatio(ratio) => energy_branch(&mut record, *ratio)?,
        ScaleInput::MassMicrograms(mass) => {
            if *mass <= 0.0 || !mass.is_finite() {
                return Err(Error::Domain("mass must be positive".into()));
            }
            record.stat_f64("mass_micrograms", *mass);
            record.stat_f64("classical_threshold_micrograms", REFERENCE_MASS_MICROGRAMS);
            energy_branch(&mut record, mass / REFERENCE_MASS_MICROGRAMS)?;
        }
        ScaleInput::MaxLength { length, n } => {
            let length = parse_big_decimal(length)?;
            let k_max = max_qubits(&length, *n)?;
            record.stat_str("max_length", &length.to_string());
            record.stat_int("n", *n as i64);
            record.stat_int("k_max", k_max as i64);
        }
    }
    Ok(record)
}

fn energy_branch(record: &mut ExperimentRecord, ratio: f64) -> Result<()> {
    if ratio <= 0.0 || !ratio.is_finite() {
        return Err(Error::Domain("energy ratio must be positive".into()));
    }
    let n_estimate = 1.0 / ratio;
    let classical = n_estimate <= 1.0;
    record.stat_f64("energy_ratio", ratio);
    record.stat_f64("n_estimate", n_estimate);
    record.stat_int("n_order_of_magnitude", n_estimate.log10().round() as i64);
    record.stat_bool("classical_limit", classical);
    record.verdict_status("regime", if classical { "CLASSICAL" } else { "QUANTUM" });
    Ok(())
}
