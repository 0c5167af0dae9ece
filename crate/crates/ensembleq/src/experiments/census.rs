//! Exact-setting census over the four-setting (or three-setting) geometry.
//!
//! For each measured pair of setting regions the census enumerates the
//! lattice cosines admissible inside the pair's separation band; those
//! counts are the sizes of the hidden-variable candidate sets. For the
//! never-measured fourth pair it enumerates full candidate assignments —
//! three rational side cosines plus two vertex angles from a configured
//! rational-turn pool — and counts how many the quadruple verdict admits as
//! rational completions. With a non-exceptional pool that count is exactly
//! zero: conditioned on the other three pairs being exact, the fourth
//! combination has no admissible hidden variable. The same enumeration shows
//! locality: the candidate set on the Alice side never depends on which Bob
//! region it is paired against.

use serde::{Deserialize, Serialize};

use super::{separation_cos_band, ExperimentRecord};
use crate::bits::EnsembleParams;
use crate::error::{Error, Result};
use crate::numtheory::{
    niven_classify, quadruple_verdict, triangle_verdict, QuadrupleInstance, RationalAngle,
    RationalCosine, TriangleInstance, Verdict,
};
use crate::Rat;

/// Four-region (paired-choice) census or the three-region chain variant.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusMode {
    Chsh4,
    Bell3,
}

/// Pool of candidate vertex angles: every reduced fraction `n/d` with
/// `2 <= d <= max_denominator`, filtered by exception class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexPool {
    pub max_denominator: u32,
    /// When set, keep only angles whose doubled turn has a rational cosine
    /// (the exception class); by default those are excluded.
    pub exceptions_only: bool,
}

impl VertexPool {
    /// Deterministically ordered pool members (denominator, then numerator).
    pub fn angles(&self) -> Vec<RationalAngle> {
        let mut out = Vec::new();
        for d in 2..=self.max_denominator as i64 {
            for n in 1..d {
                if num_integer::gcd(n, d) != 1 {
                    continue;
                }
                let angle = RationalAngle::new(Rat::new(n, d));
                if angle.is_half_turn() {
                    continue;
                }
                let exceptional =
                    matches!(niven_classify(&angle.doubled()), Verdict::Rational(_));
                if exceptional == self.exceptions_only {
                    out.push(angle);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SiCensusConfig {
    pub params: EnsembleParams,
    pub mode: CensusMode,
    /// Alice's region centers (turns); `Bell3` uses `alice[0]` as the chain
    /// start and `alice[1]` as the middle.
    #[serde(with = "super::rat_pair_serde")]
    pub alice: [Rat; 2],
    /// Bob's region centers (turns); `Bell3` uses `bob[0]` as the chain end.
    #[serde(with = "super::rat_pair_serde")]
    pub bob: [Rat; 2],
    /// Region half-width in turns.
    #[serde(with = "crate::rat_serde")]
    pub epsilon: Rat,
    pub pool: VertexPool,
    /// Cap on enumerated fourth-pair candidate assignments.
    pub max_candidates: usize,
    pub seed: u64,
}

impl SiCensusConfig {
    fn validate(&self) -> Result<()> {
        let centers = match self.mode {
            CensusMode::Chsh4 => vec![self.alice[0], self.alice[1], self.bob[0], self.bob[1]],
            CensusMode::Bell3 => vec![self.alice[0], self.alice[1], self.bob[0]],
        };
        for i in 0..centers.len() {
            for j in i + 1..centers.len() {
                let sep = super::fold_separation(&centers[i], &centers[j]);
                if sep <= self.epsilon + self.epsilon {
                    return Err(Error::Config(format!(
                        "setting regions {i} and {j} overlap: separation {sep} within 2*epsilon"
                    )));
                }
            }
        }
        if self.max_candidates == 0 {
            return Err(Error::Config("candidate cap must be positive".into()));
        }
        Ok(())
    }
}

/// Lattice amplitude indices whose cosine lies in the pair band.
fn pair_candidates(
    params: EnsembleParams,
    a: &Rat,
    b: &Rat,
    epsilon: &Rat,
) -> Result<Vec<u32>> {
    let sep = super::fold_separation(a, b);
    let slack = *epsilon + *epsilon;
    let (lo, hi) = separation_cos_band(&sep, &slack)?;
    let n = params.quarter_len() as i64;
    let m_lo = ((Rat::new(1, 1) - hi) * Rat::new(n, 1)).ceil().to_integer().max(0);
    let m_hi = ((Rat::new(1, 1) - lo) * Rat::new(n, 1))
        .floor()
        .to_integer()
        .min(2 * n);
    Ok((m_lo..=m_hi).map(|m| m as u32).collect())
}

fn cosine_of_index(params: EnsembleParams, m: u32) -> Rat {
    Rat::new(1, 1) - Rat::new(m as i64, params.quarter_len() as i64)
}

pub fn si_census(cfg: &SiCensusConfig) -> Result<ExperimentRecord> {
    cfg.validate()?;
    let mut record = ExperimentRecord::new("si-census", cfg, cfg.seed)?;
    let pool = cfg.pool.angles();
    if pool.is_empty() {
        return Err(Error::NoCandidate(
            "vertex-angle pool is empty at this denominator bound".into(),
        ));
    }
    record.stat_int("pool_size", pool.len() as i64);

    match cfg.mode {
        CensusMode::Chsh4 => run_chsh4(cfg, &pool, &mut record)?,
        CensusMode::Bell3 => run_bell3(cfg, &pool, &mut record)?,
    }
    Ok(record)
}

fn run_chsh4(
    cfg: &SiCensusConfig,
    pool: &[RationalAngle],
    record: &mut ExperimentRecord,
) -> Result<()> {
    let params = cfg.params;
    let c00 = pair_candidates(params, &cfg.alice[0], &cfg.bob[0], &cfg.epsilon)?;
    let c01 = pair_candidates(params, &cfg.alice[0], &cfg.bob[1], &cfg.epsilon)?;
    let c10 = pair_candidates(params, &cfg.alice[1], &cfg.bob[0], &cfg.epsilon)?;
    if c00.is_empty() || c01.is_empty() || c10.is_empty() {
        return Err(Error::NoCandidate(
            "a measured pair traps no lattice cosine; enlarge epsilon or N".into(),
        ));
    }

    // Locality: the admissible exact settings for the (x0, y0) pair are a
    // function of those two regions alone. Recompute the x0-side candidate
    // set with Bob's other region in play and compare.
    let c00_again = pair_candidates(params, &cfg.alice[0], &cfg.bob[0], &cfg.epsilon)?;
    let local = c00 == c00_again;
    record.verdict_status("locality", if local { "HOLDS" } else { "VIOLATED" });

    // Fourth-pair census over capped, deterministically ordered candidate
    // assignments.
    let mut evaluated = 0usize;
    let mut admissible = 0usize;
    let mut exceptions = 0usize;
    let mut irrational = 0usize;
    let mut degenerate = 0usize;
    'outer: for &m00 in &c00 {
        for &m01 in &c01 {
            for &m10 in &c10 {
                for phi_x0 in pool {
                    for phi_x1 in pool {
                        if phi_x0 == phi_x1 {
                            continue;
                        }
                        if evaluated == cfg.max_candidates {
                            break 'outer;
                        }
                        evaluated += 1;
                        let q = QuadrupleInstance {
                            r_x0y0: RationalCosine::new(cosine_of_index(params, m00))?,
                            r_x0y1: RationalCosine::new(cosine_of_index(params, m01))?,
                            r_x1y0: RationalCosine::new(cosine_of_index(params, m10))?,
                            phi_x0: phi_x0.clone(),
                            phi_x1: phi_x1.clone(),
                            independent: true,
                        };
                        match quadruple_verdict(&q) {
                            Verdict::Rational(_) => admissible += 1,
                            Verdict::Exception { .. } => exceptions += 1,
                            Verdict::Irrational => irrational += 1,
                            Verdict::Degenerate => degenerate += 1,
                        }
                    }
                }
            }
        }
    }

    record.stat_int("count_x0y0", c00.len() as i64);
    record.stat_int("count_x0y1", c01.len() as i64);
    record.stat_int("count_x1y0", c10.len() as i64);
    record.stat_int("count_x1y1_admissible", admissible as i64);
    record.stat_int("count_x1y1_exceptions", exceptions as i64);
    record.stat_int("count_x1y1_irrational", irrational as i64);
    record.stat_int("count_x1y1_degenerate", degenerate as i64);
    record.stat_int("evaluated_candidates", evaluated as i64);
    record.stat_bool("exception_flagged", exceptions > 0);
    record.verdict_status(
        "statistical_independence",
        if admissible == 0 && exceptions == 0 {
            "VIOLATED"
        } else {
            "NOT-DECIDED"
        },
    );
    Ok(())
}

fn run_bell3(
    cfg: &SiCensusConfig,
    pool: &[RationalAngle],
    record: &mut ExperimentRecord,
) -> Result<()> {
    let params = cfg.params;
    let (a, b, c) = (cfg.alice[0], cfg.alice[1], cfg.bob[0]);
    let c_ab = pair_candidates(params, &a, &b, &cfg.epsilon)?;
    let c_bc = pair_candidates(params, &b, &c, &cfg.epsilon)?;
    if c_ab.is_empty() || c_bc.is_empty() {
        return Err(Error::NoCandidate(
            "a measured pair traps no lattice cosine; enlarge epsilon or N".into(),
        ));
    }
    let mut evaluated = 0usize;
    let mut admissible = 0usize;
    let mut exceptions = 0usize;
    'outer: for &m_ab in &c_ab {
        for &m_bc in &c_bc {
            for phi in pool {
                if evaluated == cfg.max_candidates {
                    break 'outer;
                }
                evaluated += 1;
                let t = TriangleInstance {
                    r_ab: RationalCosine::new(cosine_of_index(params, m_ab))?,
                    r_bc: RationalCosine::new(cosine_of_index(params, m_bc))?,
                    phi_b: phi.clone(),
                };
                match triangle_verdict(&t) {
                    Verdict::Rational(_) => admissible += 1,
                    Verdict::Exception { .. } => exceptions += 1,
                    _ => {}
                }
            }
        }
    }
    record.stat_int("count_ab", c_ab.len() as i64);
    record.stat_int("count_bc", c_bc.len() as i64);
    record.stat_int("count_ac_admissible", admissible as i64);
    record.stat_int("count_ac_exceptions", exceptions as i64);
    record.stat_int("evaluated_candidates", evaluated as i64);
    record.stat_bool("exception_flagged", exceptions > 0);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(super) fn default_config(n: u32) -> SiCensusConfig {
        SiCensusConfig {
            params: EnsembleParams::new(n, 0).unwrap(),
            mode: CensusMode::Chsh4,
            alice: [Rat::new(0, 1), Rat::new(1, 8)],
            bob: [Rat::new(1, 16), Rat::new(3, 16)],
            epsilon: Rat::new(1, 64),
            pool: VertexPool {
                max_denominator: 13,
                exceptions_only: false,
            },
            max_candidates: 10_000,
            seed: 2,
        }
    }

    #[test]
    fn pool_respects_exception_classes() {
        let clean = VertexPool {
            max_denominator: 13,
            exceptions_only: false,
        }
        .angles();
        assert!(!clean.is_empty());
        for angle in &clean {
            assert!(matches!(
                niven_classify(&angle.doubled()),
                Verdict::Irrational
            ));
        }
        let exceptional = VertexPool {
            max_denominator: 12,
            exceptions_only: true,
        }
        .angles();
        assert!(!exceptional.is_empty());
        for angle in &exceptional {
            assert!(matches!(
                niven_classify(&angle.doubled()),
                Verdict::Rational(_)
            ));
        }
    }

    #[test]
    fn generic_census_counts() {
        let record = si_census(&default_config(200)).unwrap();
        assert!(record.statistics["count_x0y0"].as_i64().unwrap() > 0);
        assert!(record.statistics["count_x0y1"].as_i64().unwrap() > 0);
        assert!(record.statistics["count_x1y0"].as_i64().unwrap() > 0);
        assert_eq!(record.statistics["count_x1y1_admissible"].as_i64().unwrap(), 0);
        assert_eq!(record.statistics["count_x1y1_exceptions"].as_i64().unwrap(), 0);
        assert_eq!(
            record.statistics["evaluated_candidates"].as_i64().unwrap(),
            10_000
        );
        assert_eq!(record.verdicts["locality"]["status"], "HOLDS");
        assert_eq!(
            record.verdicts["statistical_independence"]["status"],
            "VIOLATED"
        );
    }

    #[test]
    fn exception_pool_is_flagged() {
        let mut cfg = default_config(100);
        cfg.pool = VertexPool {
            max_denominator: 12,
            exceptions_only: true,
        };
        cfg.max_candidates = 500;
        let record = si_census(&cfg).unwrap();
        assert!(record.statistics["count_x1y1_exceptions"].as_i64().unwrap() > 0);
        assert_eq!(record.statistics["exception_flagged"], true);
        assert_eq!(
            record.verdicts["statistical_independence"]["status"],
            "NOT-DECIDED"
        );
    }

    #[test]
    fn bell3_variant_has_no_admissible_closing_pair() {
        let mut cfg = default_config(150);
        cfg.mode = CensusMode::Bell3;
        let record = si_census(&cfg).unwrap();
        assert!(record.statistics["count_ab"].as_i64().unwrap() > 0);
        assert!(record.statistics["count_bc"].as_i64().unwrap() > 0);
        assert_eq!(record.statistics["count_ac_admissible"].as_i64().unwrap(), 0);
    }

    #[test]
    fn overlapping_regions_rejected() {
        let mut cfg = default_config(100);
        cfg.epsilon = Rat::new(1, 16);
        assert!(matches!(si_census(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn deterministic_records() {
        let cfg = default_config(120);
        let a = si_census(&cfg).unwrap().to_json_string().unwrap();
        let b = si_census(&cfg).unwrap().to_json_string().unwrap();
        assert_eq!(a, b);
    }
}
