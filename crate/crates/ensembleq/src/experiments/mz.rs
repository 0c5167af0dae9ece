//! Interferometer complementarity harness.
//!
//! The two modes of the instrument put incompatible rationality demands on
//! the same exact phase: the interference configuration needs a rational
//! cosine (the outcome fractions are `cos² φ/2 = 1 - m/2N`), the which-way
//! configuration needs the phase itself to be a rational turn. An exact
//! setting sampled for one mode is therefore inadmissible for the other
//! unless a Niven exception fires — and odd null padding removes the
//! exceptions.

use serde::{Deserialize, Serialize};

use super::{cosine_of_turn, project_band_edge, ExperimentRecord};
use crate::bits::{ensemble_stats, EnsembleParams, EnsembleStats};
use crate::error::Result;
use crate::numtheory::{cosine_is_exception, niven_classify, RationalAngle, RationalCosine, Verdict};
use crate::rng::SeededRng;
use crate::states::{bloch_state, sample_exact_setting, EpsilonDisk, SettingConstraint};
use crate::{format_ratio, Rat};

/// Which configuration physically ran; the other is the counterfactual.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MzMode {
    /// Phase realized on the rational-cosine lattice.
    InterferenceFirst,
    /// Phase realized on the rational-turn lattice.
    WhichWayFirst,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MzConfig {
    pub params: EnsembleParams,
    /// Nominal phase as a fraction of a turn.
    pub nominal_phi: RationalAngle,
    /// Half-width of the experimenter's control band: cosine units for the
    /// interference lattice, turns for the which-way lattice.
    #[serde(with = "crate::rat_serde")]
    pub epsilon: Rat,
    pub mode: MzMode,
    pub seed: u64,
}

pub fn mz_complementarity(cfg: &MzConfig) -> Result<ExperimentRecord> {
    let mut record = ExperimentRecord::new("mz-complementarity", cfg, cfg.seed)?;
    let mut rng = SeededRng::new(cfg.seed);
    let removed = cfg.params.niven_exceptions_removed();
    record.stat_bool("niven_exceptions_removed_by_nulls", removed);

    match cfg.mode {
        MzMode::InterferenceFirst => {
            // Sample an exact phase with rational cosine near the nominal.
            let center = cosine_of_turn(cfg.nominal_phi.turns());
            let cos_lo = (project_band_edge(&center, false)? - cfg.epsilon).max(Rat::new(-1, 1));
            let cos_hi = (project_band_edge(&center, true)? + cfg.epsilon).min(Rat::new(1, 1));
            let disk = EpsilonDisk::from_bands(cos_lo, cos_hi, Rat::new(0, 1), Rat::new(0, 1))?;
            let pt = sample_exact_setting(
                &disk,
                SettingConstraint::RationalCosineWrtPole,
                cfg.params,
                &mut rng,
            )?;

            let state = bloch_state(&pt);
            let stats: EnsembleStats<i64> = ensemble_stats(&state)?;
            record.stat_int("m_star", pt.m() as i64);
            record.stat_ratio("cos_phi_star", &pt.cos_colatitude());
            record.stat_ratio("minus_fraction", &stats.minus_fraction);
            record.stat_ratio("mean", &stats.mean);
            record.stat_f64("stddev", stats.stddev);

            // Counterfactual which-way run at the same exact phase: needs
            // the phase to be a rational turn, i.e. a Niven exception.
            let cos = RationalCosine::new(pt.cos_colatitude())?;
            if cosine_is_exception(&cos) {
                record.verdict_value(
                    "whichway_counterfactual",
                    serde_json::json!({
                        "status": "EXCEPTION",
                        "exception": format_ratio(cos.value()),
                        "removed_by_nulls": removed,
                    }),
                );
            } else {
                record.verdict_status("whichway_counterfactual", "INADMISSIBLE");
            }
        }
        MzMode::WhichWayFirst => {
            // Sample an exact rational-turn phase near the nominal; the
            // realized state sits on the equator lattice circle.
            let disk = EpsilonDisk::from_bands(
                Rat::new(0, 1),
                Rat::new(0, 1),
                *cfg.nominal_phi.turns(),
                cfg.epsilon,
            )?;
            let pt = sample_exact_setting(
                &disk,
                SettingConstraint::RationalAngle,
                cfg.params,
                &mut rng,
            )?;

            let state = bloch_state(&pt);
            let stats: EnsembleStats<i64> = ensemble_stats(&state)?;
            record.stat_int("n_star", pt.n() as i64);
            record.stat_str("phi_star_turns", &pt.turn().to_string());
            record.stat_ratio("minus_fraction", &stats.minus_fraction);
            record.stat_f64("stddev", stats.stddev);

            // Counterfactual interference run: needs cos φ* rational.
            match niven_classify(&pt.turn()) {
                Verdict::Rational(value) => {
                    record.verdict_value(
                        "interference_counterfactual",
                        serde_json::json!({
                            "status": "EXCEPTION",
                            "exception": format_ratio(&value),
                            "removed_by_nulls": removed,
                        }),
                    );
                }
                _ => record.verdict_status("interference_counterfactual", "INADMISSIBLE"),
            }
        }
    }
    Ok(record)
}
