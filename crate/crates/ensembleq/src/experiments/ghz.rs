//! Polarization-basis conflict harness.
//!
//! A linear-polarization measurement at angle `φ` to the reference axis is
//! admissible only when `cos 2φ` is rational (the outcome fractions are
//! `cos² φ`); a circular-polarization measurement is admissible only when
//! `φ` is a rational turn (the composed transform's entries are the phases
//! `e^{±iφ}`, `e^{±i(φ-π/2)}`, which must land on the phase lattice). The
//! two demands meet only at the Niven exceptions, so for a generic exact
//! angle the joint measurement is in conflict.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ExperimentRecord;
use crate::error::Result;
use crate::numtheory::{cosine_is_exception, niven_classify, RationalAngle, RationalCosine, Verdict};
use crate::{format_ratio, Rat};

/// The exact setting, given either as the angle itself (a rational turn) or
/// as its rational `cos 2φ` value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhiSpec {
    Angle(RationalAngle),
    Cosine(#[serde(with = "crate::rat_serde")] Rat),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GhzConfig {
    pub phi: PhiSpec,
}

pub fn ghz_conflict(cfg: &GhzConfig) -> Result<ExperimentRecord> {
    let mut record = ExperimentRecord::new("ghz-conflict", cfg, 0)?;

    let phi_radians = match &cfg.phi {
        PhiSpec::Angle(angle) => {
            record.verdict_status("circular_admissible", "ADMISSIBLE");
            match niven_classify(&angle.doubled()) {
                Verdict::Rational(value) => {
                    record.verdict_value(
                        "joint",
                        serde_json::json!({
                            "status": "EXCEPTION",
                            "exception": format_ratio(&value),
                        }),
                    );
                    record.verdict_status("linear_admissible", "ADMISSIBLE");
                }
                _ => {
                    record.verdict_status("linear_admissible", "INADMISSIBLE");
                    record.verdict_status("joint", "CONFLICT");
                }
            }
            angle.as_f64_radians()
        }
        PhiSpec::Cosine(cos_2phi) => {
            let cos = RationalCosine::new(*cos_2phi)?;
            record.verdict_status("linear_admissible", "ADMISSIBLE");
            if cosine_is_exception(&cos) {
                record.verdict_value(
                    "joint",
                    serde_json::json!({
                        "status": "EXCEPTION",
                        "exception": format_ratio(cos.value()),
                    }),
                );
                record.verdict_status("circular_admissible", "ADMISSIBLE");
            } else {
                record.verdict_status("circular_admissible", "INADMISSIBLE");
                record.verdict_status("joint", "CONFLICT");
            }
            let c = crate::bits::ratio_to_f64(cos.value());
            c.acos() / 2.0
        }
    };

    // Composed basis change: circular readout after rotating the linear
    // frame by φ. The product has pure-phase entries e^{iφ}, e^{i(φ-π/2)},
    // e^{-iφ}, e^{-i(φ-π/2)}.
    let i = Complex64::new(0.0, 1.0);
    let circ = [
        [Complex64::new(1.0, 0.0), -i],
        [Complex64::new(1.0, 0.0), i],
    ];
    let (sin, cos) = phi_radians.sin_cos();
    let rot = [
        [Complex64::new(cos, 0.0), Complex64::new(sin, 0.0)],
        [Complex64::new(-sin, 0.0), Complex64::new(cos, 0.0)],
    ];
    let mut product = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            product[r][c] = circ[r][0] * rot[0][c] + circ[r][1] * rot[1][c];
        }
    }
    let expected = [
        [(i * phi_radians).exp(), (i * (phi_radians - std::f64::consts::FRAC_PI_2)).exp()],
        [(-i * phi_radians).exp(), (-i * (phi_radians - std::f64::consts::FRAC_PI_2)).exp()],
    ];
    let mut max_modulus_error: f64 = 0.0;
    let mut max_phase_form_error: f64 = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            max_modulus_error = max_modulus_error.max((product[r][c].norm() - 1.0).abs());
            max_phase_form_error =
                max_phase_form_error.max((product[r][c] - expected[r][c]).norm());
            record.stat_f64(&format!("transform_{r}{c}_re"), product[r][c].re);
            record.stat_f64(&format!("transform_{r}{c}_im"), product[r][c].im);
        }
    }
    record.stat_f64("max_modulus_error", max_modulus_error);
    record.stat_f64("max_phase_form_error", max_phase_form_error);
    record.verdict_status(
        "unit_modulus",
        if max_modulus_error < 1e-12 { "HOLDS" } else { "VIOLATED" },
    );
    Ok(record)
}
