//! Measurement as seeded disorder: a uniform shuffle of positions followed
//! by reading the clusters off the symbol values. Symbol counts are
//! conserved; the helical ordering is not.

use serde::{Deserialize, Serialize};

use crate::bits::{Bit, BitString};
use crate::rng::{splitmix64, SeededRng};

/// Result of one measurement-as-clustering step.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterOutcome {
    seed: u64,
    permutation_digest: u64,
    clustered: BitString,
}

/// The JSON face of an outcome: seed, permutation digest, per-cluster
/// counts.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ClusterSummary {
    pub seed: u64,
    pub permutation_digest: String,
    pub plus_count: u64,
    pub minus_count: u64,
    pub null_count: u64,
}

impl ClusterOutcome {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The disordered string; position `i` carries the symbol of the source
    /// position the shuffle assigned to it.
    pub fn clustered(&self) -> &BitString {
        &self.clustered
    }

    /// Per-position cluster assignment.
    pub fn labels(&self) -> impl Iterator<Item = Bit> + '_ {
        self.clustered.iter()
    }

    pub fn summary(&self) -> ClusterSummary {
        ClusterSummary {
            seed: self.seed,
            permutation_digest: format!("{:016x}", self.permutation_digest),
            plus_count: self.clustered.count_plus(),
            minus_count: self.clustered.count_minus(),
            null_count: self.clustered.count_null(),
        }
    }
}

/// Shuffles the positions of `s` uniformly under `seed`.
pub fn measure_cluster(s: &BitString, seed: u64) -> ClusterOutcome {
    let mut perm: Vec<u32> = (0..s.len() as u32).collect();
    SeededRng::new(seed).shuffle(&mut perm);

    let mut digest = 0xcbf2_9ce4_8422_2325u64;
    for &p in &perm {
        digest = splitmix64(digest ^ p as u64);
    }

    let mut out = BitString::zeroed(s.params());
    for (i, &p) in perm.iter().enumerate() {
        out.set(i, s.get(p as usize));
    }
    ClusterOutcome {
        seed,
        permutation_digest: digest,
        clustered: out,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::EnsembleParams;
    use crate::rng::SeededRng;
    use crate::states::{bloch_state, SkeletonPoint};

    fn params(n: u32) -> EnsembleParams {
        EnsembleParams::new(n, 0).unwrap()
    }

    #[test]
    fn all_plus_is_fixed_by_any_seed() {
        let one = BitString::ones(params(3));
        for seed in [0u64, 1, 99] {
            assert_eq!(measure_cluster(&one, seed).clustered(), &one);
        }
    }

    #[test]
    fn counts_are_conserved() {
        let mut rng = SeededRng::new(13);
        for n in 1u32..=4 {
            let pt = SkeletonPoint::new(rng.below(2 * n as u64 + 1) as u32, 0, params(n)).unwrap();
            let s = bloch_state(&pt);
            for _ in 0..10 {
                let out = measure_cluster(&s, rng.next_u64());
                assert_eq!(out.clustered().count_plus(), s.count_plus());
                assert_eq!(out.clustered().count_minus(), s.count_minus());
                assert_eq!(out.clustered().count_null(), s.count_null());
            }
        }
    }

    #[test]
    fn deterministic_per_seed_and_distinct_across_seeds() {
        let pt = SkeletonPoint::new(4, 0, params(4)).unwrap();
        let s = bloch_state(&pt);
        let a = measure_cluster(&s, 7);
        let b = measure_cluster(&s, 7);
        assert_eq!(a, b);
        // Different seeds give different permutations with overwhelming
        // probability; check a batch of digests are pairwise distinct.
        let digests: std::collections::HashSet<String> = (0..50)
            .map(|seed| measure_cluster(&s, seed).summary().permutation_digest)
            .collect();
        assert_eq!(digests.len(), 50);
    }

    #[test]
    fn summary_serializes() {
        let s = bloch_state(&SkeletonPoint::new(2, 1, params(2)).unwrap());
        let summary = measure_cluster(&s, 5).summary();
        let json = serde_json::to_string(&summary).unwrap();
        assert!(json.contains("\"seed\":5"));
        assert!(json.contains("permutation_digest"));
        let back: ClusterSummary = serde_json::from_str(&json).unwrap();
        assert_eq!(back, summary);
    }
}
