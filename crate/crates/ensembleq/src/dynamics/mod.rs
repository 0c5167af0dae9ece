//! Step-program evolution, measurement as disorder, and the ultrametric
//! label distance.
//!
//! Evolution composes lattice steps: each step applies `interp_i1(·, m)`
//! then a cyclic shift by `n`. Every step is a signed permutation of
//! positions, so programs invert exactly — [`invert`] undoes the steps in
//! reverse order with no tolerance. Measurement, by contrast, is a seeded
//! uniform shuffle: it conserves symbol counts but destroys the ordering
//! that [`is_unitary_image`] detects.

mod measure;
mod padic;

pub use measure::{measure_cluster, ClusterOutcome};
pub use padic::{padic_distance, PAdicLabel, PadicDistance};

use serde::{Deserialize, Serialize};

use crate::bits::{cyc_shift, interp_i1, interp_i1_inv, BitString};
use crate::error::{Error, Result};

/// An ordered list of `(m, n)` lattice steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct UnitaryProgram {
    pub steps: Vec<(u32, u32)>,
}

impl UnitaryProgram {
    pub fn new(steps: Vec<(u32, u32)>) -> Self {
        Self { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Parses the compact CLI form `m:n,m:n,...` (empty string = empty
    /// program).
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::default());
        }
        let mut steps = Vec::new();
        for part in text.split(',') {
            let (m, n) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("step `{part}` is not of the form m:n")))?;
            let m = m
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad amplitude index in `{part}`")))?;
            let n = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad phase index in `{part}`")))?;
            steps.push((m, n));
        }
        Ok(Self { steps })
    }
}

impl std::fmt::Display for UnitaryProgram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|(m, n)| format!("{m}:{n}"))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Left-fold of the program's steps over `start`.
pub fn evolve(program: &UnitaryProgram, start: &BitString) -> Result<BitString> {
    let mut state = start.clone();
    for &(m, n) in &program.steps {
        state = cyc_shift(&interp_i1(&state, m)?, n as u64);
    }
    Ok(state)
}

/// Applies the inverse steps in reverse order: exact round trip
/// `invert(p, evolve(p, s)) = s`.
pub fn invert(program: &UnitaryProgram, end: &BitString) -> Result<BitString> {
    let mut state = end.clone();
    for &(m, n) in program.steps.iter().rev() {
        let len = state.len() as u64;
        let back = len - (n as u64 % len);
        state = interp_i1_inv(&cyc_shift(&state, back), m)?;
    }
    Ok(state)
}

/// Membership test for the ordered states: returns `(m, n)` with
/// `s = cyc_shift(interp_i1(𝟙, m), n)` if such parameters exist.
///
/// The minus count pins `m` (an interpolated all-plus string has exactly
/// `2m` minus symbols, and shifts conserve counts), so the scan runs over
/// shifts only; an odd minus count short-circuits to `None`.
pub fn is_unitary_image(s: &BitString) -> Option<(u32, u64)> {
    let params = s.params();
    if s.count_null() != params.null_count() as u64 {
        return None;
    }
    let minus = s.count_minus();
    if minus % 2 != 0 {
        return None;
    }
    let m = (minus / 2) as u32;
    if m > 2 * params.quarter_len() {
        return None;
    }
    let base = interp_i1(&BitString::ones(params), m).expect("m in range");
    let len = s.len() as u64;
    for n in 0..len {
        if cyc_shift(&base, n) == *s {
            return Some((m, n));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{quaternion_apply, EnsembleParams, QuaternionOp};
    use crate::rng::SeededRng;
    use crate::states::{bloch_state, SkeletonPoint};

    fn params(n: u32) -> EnsembleParams {
        EnsembleParams::new(n, 0).unwrap()
    }

    fn random_program(rng: &mut SeededRng, n: u32, len: usize) -> UnitaryProgram {
        UnitaryProgram::new(
            (0..len)
                .map(|_| {
                    (
                        rng.below(2 * n as u64 + 1) as u32,
                        rng.below(4 * n as u64) as u32,
                    )
                })
                .collect(),
        )
    }

    #[test]
    fn empty_program_is_identity() {
        let s = BitString::ones(params(3));
        assert_eq!(evolve(&UnitaryProgram::default(), &s).unwrap(), s);
        assert_eq!(invert(&UnitaryProgram::default(), &s).unwrap(), s);
    }

    #[test]
    fn single_step_reaches_i1() {
        for n in [1u32, 2, 5] {
            let one = BitString::ones(params(n));
            let program = UnitaryProgram::new(vec![(n, 0)]);
            assert_eq!(
                evolve(&program, &one).unwrap(),
                quaternion_apply(QuaternionOp::I1, &one).unwrap()
            );
        }
    }

    #[test]
    fn single_step_reaches_lattice_point() {
        for n in [1u32, 3] {
            let one = BitString::ones(params(n));
            let program = UnitaryProgram::new(vec![(n, n)]);
            let pt = SkeletonPoint::new(n, n, params(n)).unwrap();
            assert_eq!(evolve(&program, &one).unwrap(), bloch_state(&pt));
        }
        // At N = 1 the result is the hand value ++--.
        let got = evolve(
            &UnitaryProgram::new(vec![(1, 1)]),
            &BitString::ones(params(1)),
        )
        .unwrap();
        let symbols: String = got.iter().map(|b| b.symbol()).collect();
        assert_eq!(symbols, "++--");
    }

    #[test]
    fn round_trips_exactly() {
        let mut rng = SeededRng::new(31);
        for n in 1u32..=4 {
            let one = BitString::ones(params(n));
            for _ in 0..50 {
                let len = rng.below(12) as usize;
                let program = random_program(&mut rng, n, len);
                let end = evolve(&program, &one).unwrap();
                assert_eq!(invert(&program, &end).unwrap(), one, "N={n} p={program}");
            }
        }
    }

    #[test]
    fn single_step_inverse_composition() {
        // invert of one step is shift back then the interpolation inverse;
        // exhaustive over small lattices.
        for n in 1u32..=4 {
            let one = BitString::ones(params(n));
            for m in 0..=2 * n {
                for ph in 0..4 * n {
                    let program = UnitaryProgram::new(vec![(m, ph)]);
                    let end = evolve(&program, &one).unwrap();
                    assert_eq!(invert(&program, &end).unwrap(), one);
                }
            }
        }
    }

    #[test]
    fn membership_finds_constructed_points() {
        let p = params(4);
        let pt = SkeletonPoint::new(3, 5, p).unwrap();
        assert_eq!(is_unitary_image(&bloch_state(&pt)), Some((3, 5)));
        assert_eq!(is_unitary_image(&BitString::ones(p)), Some((0, 0)));
    }

    #[test]
    fn membership_matches_full_scan_small_n() {
        // The count-pruned scan agrees with the unpruned scan over every
        // parameter pair and a batch of disordered strings.
        let full_scan = |s: &BitString| -> Option<(u32, u64)> {
            let p = s.params();
            for m in 0..=2 * p.quarter_len() {
                let base = interp_i1(&BitString::ones(p), m).unwrap();
                for n in 0..s.len() as u64 {
                    if cyc_shift(&base, n) == *s {
                        return Some((m, n));
                    }
                }
            }
            None
        };
        let mut rng = SeededRng::new(77);
        for n in 1u32..=3 {
            let p = params(n);
            for m in 0..=2 * n {
                for ph in 0..4 * n {
                    let s = bloch_state(&SkeletonPoint::new(m, ph, p).unwrap());
                    assert_eq!(is_unitary_image(&s), full_scan(&s));
                }
            }
            for _ in 0..20 {
                let outcome = measure_cluster(
                    &bloch_state(&SkeletonPoint::new(n, 1, p).unwrap()),
                    rng.next_u64(),
                );
                let s = outcome.clustered();
                assert_eq!(is_unitary_image(s), full_scan(s));
            }
        }
    }

    #[test]
    fn distinct_image_count_small_n() {
        // All (m, n) pairs, minus the collapsed orbits at m = 0 and m = 2N:
        // (2N+1)·4N - 2·(4N-1) distinct strings.
        for n in 1u32..=8 {
            let p = params(n);
            let mut seen = std::collections::HashSet::new();
            for m in 0..=2 * n {
                let base = interp_i1(&BitString::ones(p), m).unwrap();
                for ph in 0..4 * n as u64 {
                    seen.insert(cyc_shift(&base, ph));
                }
            }
            let expect = (2 * n as usize + 1) * 4 * n as usize - 2 * (4 * n as usize - 1);
            assert_eq!(seen.len(), expect, "N = {n}");
        }
    }

    #[test]
    fn program_parse_and_display() {
        let p = UnitaryProgram::parse("1:2,3:0").unwrap();
        assert_eq!(p.steps, vec![(1, 2), (3, 0)]);
        assert_eq!(p.to_string(), "1:2,3:0");
        assert_eq!(UnitaryProgram::parse("").unwrap(), UnitaryProgram::default());
        assert!(UnitaryProgram::parse("1-2").is_err());
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "[[1,2],[3,0]]");
        assert_eq!(serde_json::from_str::<UnitaryProgram>(&json).unwrap(), p);
    }
}
