//! Uncertainty-relation harness.
//!
//! For a lattice point `q` on the pole-`z` skeleton, the mean of the
//! realized string is exactly `cos θ_qz` and its standard deviation is
//! `|sin θ_qz|`. Measured against the nominally orthogonal equator
//! directions `x` and `y`, the product of standard deviations dominates the
//! `z` mean: `ΔSx · ΔSy ≥ |S̄z|`, with exact equality at the poles. The
//! companion triangle verdict expresses contextuality: relative to the
//! exact pair `(z*, x*)`, the point cannot also have a rational cosine
//! toward `x*`.

use serde::{Deserialize, Serialize};

use super::ExperimentRecord;
use crate::bits::{ensemble_stats, EnsembleParams, EnsembleStats};
use crate::error::Result;
use crate::numtheory::{triangle_verdict, RationalCosine, TriangleInstance};
use crate::states::{bloch_state, SkeletonPoint};
use crate::Rat;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UncertaintyConfig {
    pub params: EnsembleParams,
    /// Amplitude index of the probed point.
    pub m: u32,
    /// Phase index of the probed point.
    pub n: u32,
}

/// Slack absorbing `f64` rounding in the x/y statistics; the underlying
/// inequality is strict.
const F64_SLACK: f64 = 1e-9;

pub fn uncertainty_harness(cfg: &UncertaintyConfig) -> Result<ExperimentRecord> {
    let mut record = ExperimentRecord::new("uncertainty", cfg, 0)?;
    let q = SkeletonPoint::new(cfg.m, cfg.n, cfg.params)?;

    // Exact statistics along the skeleton pole, cross-checked against the
    // realized string.
    let state = bloch_state(&q);
    let stats: EnsembleStats<i64> = ensemble_stats(&state)?;
    let mean_z = q.cos_colatitude();
    debug_assert_eq!(stats.mean, mean_z);
    record.stat_ratio("mean_z", &mean_z);
    record.stat_f64("stddev_z", stats.stddev);

    // Geometry of the same point against the equator directions.
    let theta = crate::bits::ratio_to_f64(&mean_z).acos();
    let phi = q.turn().as_f64_radians();
    let cos_qx = theta.sin() * phi.cos();
    let cos_qy = theta.sin() * phi.sin();
    let delta_x = (1.0 - cos_qx * cos_qx).max(0.0).sqrt();
    let delta_y = (1.0 - cos_qy * cos_qy).max(0.0).sqrt();
    let bound = crate::bits::ratio_to_f64(&mean_z).abs();
    let margin = delta_x * delta_y - bound;
    record.stat_f64("delta_x", delta_x);
    record.stat_f64("delta_y", delta_y);
    record.stat_f64("uncertainty_margin", margin);
    record.verdict_status(
        "uncertainty_inequality",
        if margin >= -F64_SLACK { "HOLDS" } else { "VIOLATED" },
    );

    // Contextuality: the chain q–z*–x* has rational cosines on (q, z*) and
    // (z*, x*) (the nominal orthogonal pair), so the closing cosine toward
    // x* cannot also be rational away from exceptions.
    let instance = TriangleInstance {
        r_ab: RationalCosine::new(mean_z)?,
        r_bc: RationalCosine::new(Rat::new(0, 1))?,
        phi_b: q.turn(),
    };
    record.verdict("contextuality_cos_qx", &triangle_verdict(&instance))?;
    Ok(record)
}
