//! Four-setting correlation harness.
//!
//! Sign convention, recorded in every output: `E(x, y)` is the exact
//! correlation of the anticorrelated pair, `E = |Δm|/N - 1 = -cos θ_xy`,
//! and the headline statistic is `S = |E00 + E01 + E10 - E11|`.
//!
//! The four nominal settings are points on one great circle given as
//! rational turns. Each relative cosine is independently rounded (ties to
//! even) onto the `1/N` lattice, which caps the per-term discretization
//! error at `1/2N` and hence `|S - S_cont| ≤ 2/N` against the continuum
//! reference computed from exact cosines.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{cosine_of_turn, fold_separation, ExperimentRecord};
use crate::bits::EnsembleParams;
use crate::error::{Error, Result};
use crate::states::{bell_pair, SkeletonPoint};
use crate::Rat;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChshConfig {
    pub params: EnsembleParams,
    /// Alice's two settings as turn positions on the circle.
    #[serde(with = "super::rat_pair_serde")]
    pub alice: [Rat; 2],
    /// Bob's two settings as turn positions on the circle.
    #[serde(with = "super::rat_pair_serde")]
    pub bob: [Rat; 2],
    pub seed: u64,
}

impl ChshConfig {
    /// The quadrature geometry maximizing the continuum `S` at `2√2`.
    pub fn optimal(n: u32, seed: u64) -> Result<Self> {
        Ok(Self {
            params: EnsembleParams::new(n, 0)?,
            alice: [Rat::new(0, 1), Rat::new(1, 4)],
            bob: [Rat::new(1, 8), Rat::new(7, 8)],
            seed,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.params.quarter_len() < 8 {
            return Err(Error::Config("the lattice needs N >= 8".into()));
        }
        if self.params.null_count() != 0 {
            return Err(Error::Config("pair construction needs n_X = 0".into()));
        }
        let norm = |r: &Rat| {
            let mut t = r.fract();
            if t < Rat::new(0, 1) {
                t += Rat::new(1, 1);
            }
            t
        };
        let positions = [
            norm(&self.alice[0]),
            norm(&self.alice[1]),
            norm(&self.bob[0]),
            norm(&self.bob[1]),
        ];
        for i in 0..4 {
            for j in i + 1..4 {
                if positions[i] == positions[j] {
                    return Err(Error::Config(format!(
                        "settings must be pairwise distinct; positions {i} and {j} coincide at {}",
                        positions[i]
                    )));
                }
            }
        }
        Ok(())
    }
}

pub fn chsh_run(cfg: &ChshConfig) -> Result<ExperimentRecord> {
    cfg.validate()?;
    let mut record = ExperimentRecord::new("chsh", cfg, cfg.seed)?;
    record.stat_str(
        "convention",
        "E = correlation(B_a, B_b) = -cos(theta_xy); S = |E00 + E01 + E10 - E11|",
    );
    let n = cfg.params.quarter_len();

    let mut exact = Vec::with_capacity(4);
    let mut continuum = Vec::with_capacity(4);
    for (x, alice) in cfg.alice.iter().enumerate() {
        for (y, bob) in cfg.bob.iter().enumerate() {
            let separation = fold_separation(alice, bob);
            let target = cosine_of_turn(&separation);
            let point = SkeletonPoint::nearest_to_cosine(&target, 0, cfg.params)?;
            let pair = bell_pair(0, point.m(), cfg.params)?;
            let e = pair.correlation();
            debug_assert_eq!(e, Rat::new(point.m() as i64, n as i64) - 1);
            record.stat_ratio(&format!("e{x}{y}"), &e);
            record.stat_int(&format!("delta_m{x}{y}"), point.m() as i64);
            exact.push(e);
            let c: f64 = {
                let nf: f64 = target.numer().to_string().parse().unwrap_or(f64::NAN);
                let df: f64 = target.denom().to_string().parse().unwrap_or(f64::NAN);
                nf / df
            };
            continuum.push(-c);
        }
    }

    let s_exact = (exact[0] + exact[1] + exact[2] - exact[3]).abs();
    let s_cont = (continuum[0] + continuum[1] + continuum[2] - continuum[3]).abs();
    let s_f64 = crate::bits::ratio_to_f64(&s_exact);
    record.stat_ratio("s", &s_exact);
    record.stat_f64("s_value", s_f64);
    record.stat_f64("s_continuum", s_cont);
    record.stat_f64("s_discretization_error", (s_f64 - s_cont).abs());
    record.stat_int("n", n as i64);
    Ok(record)
}
