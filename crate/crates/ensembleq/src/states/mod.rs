//! Constructors for lattice states on the discretized sphere.
//!
//! A [`SkeletonPoint`] is a point of the amplitude/phase lattice relative to
//! a pole: colatitude with `cos θ = 1 - m/N` and longitude `φ = 2π n/4N`.
//! [`bloch_state`] realizes it as a bit string by interpolating the all-plus
//! string and rotating: `B(θ, φ) = cyc_shift(interp_i1(𝟙, m), n)`, giving a
//! minus fraction of exactly `m/2N` and correlation `1 - m/N` against the
//! all-plus string.

mod bell;
mod kqubit;

pub use bell::{bell_pair, BellPair};
pub use kqubit::{kqubit_build, read_kqubit_binary, write_kqubit_binary, KqubitSidecar, MultiQubitState};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::bits::{cyc_shift, interp_i1, BitString, EnsembleParams};
use crate::error::{Error, Result};
use crate::numtheory::fixed::round_half_even;
use crate::numtheory::RationalAngle;
use crate::rng::SeededRng;
use crate::Rat;

/// A lattice point `(m, n)` at resolution `N`: `cos θ = 1 - m/N`,
/// `φ = 2π n/4N`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SkeletonPoint {
    m: u32,
    n: u32,
    params: EnsembleParams,
}

impl SkeletonPoint {
    pub fn new(m: u32, n: u32, params: EnsembleParams) -> Result<Self> {
        let big_n = params.quarter_len();
        if m > 2 * big_n {
            return Err(Error::Domain(format!(
                "amplitude index m = {m} exceeds 2N = {}",
                2 * big_n
            )));
        }
        if n >= 4 * big_n {
            return Err(Error::Domain(format!(
                "phase index n = {n} must be below 4N = {}",
                4 * big_n
            )));
        }
        Ok(Self { m, n, params })
    }

    /// Rounds a target cosine onto the `1/N` grid (ties to even) and pairs it
    /// with the given phase index.
    pub fn nearest_to_cosine(
        target: &BigRational,
        n: u32,
        params: EnsembleParams,
    ) -> Result<Self> {
        let big_n = params.quarter_len();
        let exact = BigRational::from_integer(BigInt::from(big_n))
            * (BigRational::from_integer(1.into()) - target.clone());
        let m = round_half_even(&exact);
        let m: i64 = m
            .try_into()
            .map_err(|_| Error::Domain("target cosine rounds far outside the lattice".into()))?;
        let m = m.clamp(0, 2 * big_n as i64) as u32;
        Self::new(m, n, params)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn params(&self) -> EnsembleParams {
        self.params
    }

    /// `cos θ = 1 - m/N`, exact.
    pub fn cos_colatitude(&self) -> Rat {
        Rat::new(1, 1) - Rat::new(self.m as i64, self.params.quarter_len() as i64)
    }

    /// Longitude as an exact fraction of a turn, `n/4N`.
    pub fn turn(&self) -> RationalAngle {
        RationalAngle::new(Rat::new(self.n as i64, 4 * self.params.quarter_len() as i64))
    }

    /// Fraction of `-1` symbols in the realized string, `m/2N`.
    pub fn minus_fraction(&self) -> Rat {
        Rat::new(self.m as i64, 2 * self.params.quarter_len() as i64)
    }
}

/// Realizes a lattice point as a bit string.
pub fn bloch_state(pt: &SkeletonPoint) -> BitString {
    let one = BitString::ones(pt.params());
    let interpolated = interp_i1(&one, pt.m()).expect("lattice point is in range");
    cyc_shift(&interpolated, pt.n() as u64)
}

/// The region of setting space an experimenter can nominally fix: a box with
/// exact rational bounds on `cos θ` and on the longitude turn. Membership is
/// decided exactly; no floating point enters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonDisk {
    #[serde(with = "crate::rat_serde")]
    pub cos_lo: Rat,
    #[serde(with = "crate::rat_serde")]
    pub cos_hi: Rat,
    #[serde(with = "crate::rat_serde")]
    pub turn_center: Rat,
    #[serde(with = "crate::rat_serde")]
    pub turn_radius: Rat,
}

impl EpsilonDisk {
    /// A box centered on a lattice point with the given half-widths.
    pub fn around(pt: &SkeletonPoint, cos_radius: Rat, turn_radius: Rat) -> Self {
        let c = pt.cos_colatitude();
        Self {
            cos_lo: (c - cos_radius).max(Rat::new(-1, 1)),
            cos_hi: (c + cos_radius).min(Rat::new(1, 1)),
            turn_center: *pt.turn().turns(),
            turn_radius,
        }
    }

    pub fn from_bands(
        cos_lo: Rat,
        cos_hi: Rat,
        turn_center: Rat,
        turn_radius: Rat,
    ) -> Result<Self> {
        if cos_lo > cos_hi {
            return Err(Error::Config("empty cosine band".into()));
        }
        Ok(Self {
            cos_lo,
            cos_hi,
            turn_center,
            turn_radius,
        })
    }

    fn contains_turn(&self, turn: Rat) -> bool {
        // Distance on the circle of turns.
        let mut d = (turn - self.turn_center).fract();
        if d < Rat::new(0, 1) {
            d += Rat::new(1, 1);
        }
        d <= self.turn_radius || Rat::new(1, 1) - d <= self.turn_radius
    }

    pub fn contains(&self, pt: &SkeletonPoint) -> bool {
        let c = pt.cos_colatitude();
        c >= self.cos_lo && c <= self.cos_hi && self.contains_turn(*pt.turn().turns())
    }
}

/// Which lattice family the sampled exact setting must come from.
///
/// Both coordinates of the returned point land on the lattice either way;
/// the constraint states which rationality the experiment relies on, and
/// therefore which empty candidate set is a genuine no-candidate failure.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SettingConstraint {
    /// The setting's cosine against the skeleton pole must sit on the `1/N`
    /// grid.
    RationalCosineWrtPole,
    /// The setting's longitude must be an exact rational turn on the `1/4N`
    /// grid.
    RationalAngle,
}

fn ceil_ratio(r: &Rat) -> i64 {
    r.ceil().to_integer()
}

fn floor_ratio(r: &Rat) -> i64 {
    r.floor().to_integer()
}

/// Uniformly samples a lattice point inside the disk, deterministically in
/// the seeded source. Fails with a no-candidate error when the disk traps no
/// lattice value on either axis; it never falls back silently.
pub fn sample_exact_setting(
    disk: &EpsilonDisk,
    constraint: SettingConstraint,
    params: EnsembleParams,
    rng: &mut SeededRng,
) -> Result<SkeletonPoint> {
    let big_n = params.quarter_len() as i64;

    // Amplitude candidates: m with 1 - m/N inside the cosine band.
    let m_lo = ceil_ratio(&((Rat::new(1, 1) - disk.cos_hi) * Rat::new(big_n, 1))).max(0);
    let m_hi = floor_ratio(&((Rat::new(1, 1) - disk.cos_lo) * Rat::new(big_n, 1))).min(2 * big_n);
    if m_lo > m_hi {
        return Err(Error::NoCandidate(format!(
            "no cosine-grid point in [{}, {}] at N = {}",
            disk.cos_lo, disk.cos_hi, big_n
        )));
    }

    // Longitude candidates: n/4N within the turn interval (wrapping).
    let four_n = 4 * big_n;
    let lo = (disk.turn_center - disk.turn_radius) * Rat::new(four_n, 1);
    let hi = (disk.turn_center + disk.turn_radius) * Rat::new(four_n, 1);
    let n_lo = ceil_ratio(&lo);
    let n_hi = floor_ratio(&hi);
    if n_lo > n_hi {
        return Err(Error::NoCandidate(format!(
            "no angle-grid point within {} turns of {} at N = {}",
            disk.turn_radius, disk.turn_center, big_n
        )));
    }
    // A radius of a half turn or more must not duplicate candidates.
    let n_count = (n_hi - n_lo + 1).min(four_n);

    let _ = constraint; // both axes are enumerated; see the type docs
    let m = m_lo + rng.below((m_hi - m_lo + 1) as u64) as i64;
    let n = (n_lo + rng.below(n_count as u64) as i64).rem_euclid(four_n);
    SkeletonPoint::new(m as u32, n as u32, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{correlation, ensemble_stats, quaternion_apply, EnsembleStats, QuaternionOp};
    use crate::Rat;

    fn params(n: u32) -> EnsembleParams {
        EnsembleParams::new(n, 0).unwrap()
    }

    #[test]
    fn skeleton_point_ranges() {
        assert!(SkeletonPoint::new(0, 0, params(3)).is_ok());
        assert!(SkeletonPoint::new(6, 11, params(3)).is_ok());
        assert!(SkeletonPoint::new(7, 0, params(3)).is_err());
        assert!(SkeletonPoint::new(0, 12, params(3)).is_err());
    }

    #[test]
    fn bloch_hand_case_n1() {
        let pt = SkeletonPoint::new(1, 1, params(1)).unwrap();
        let s = bloch_state(&pt);
        let symbols: String = s.iter().map(|b| b.symbol()).collect();
        assert_eq!(symbols, "++--");
    }

    #[test]
    fn bloch_identity_point() {
        let pt = SkeletonPoint::new(0, 0, params(5)).unwrap();
        assert_eq!(bloch_state(&pt), BitString::ones(params(5)));
    }

    #[test]
    fn bloch_statistics_laws() {
        for n in [1u32, 2, 3, 5, 8] {
            let one = BitString::ones(params(n));
            for m in 0..=2 * n {
                for phase in (0..4 * n).step_by((n as usize).max(1)) {
                    let pt = SkeletonPoint::new(m, phase, params(n)).unwrap();
                    let s = bloch_state(&pt);
                    let st: EnsembleStats<i64> = ensemble_stats(&s).unwrap();
                    assert_eq!(st.minus_fraction, pt.minus_fraction());
                    let c: Rat = correlation(&s, &one).unwrap();
                    assert_eq!(c, pt.cos_colatitude());
                }
            }
        }
    }

    #[test]
    fn complex_structure_rotation() {
        // Applying i3 at the equator advances the longitude by a quarter
        // turn: i3(B(m=N, n=0)) = B(m=N, n=N).
        for n in 1u32..=64 {
            let equator = SkeletonPoint::new(n, 0, params(n)).unwrap();
            let rotated = SkeletonPoint::new(n, n, params(n)).unwrap();
            let lhs = quaternion_apply(QuaternionOp::I3, &bloch_state(&equator)).unwrap();
            assert_eq!(lhs, bloch_state(&rotated), "N = {n}");
        }
    }

    #[test]
    fn nearest_cosine_rounding() {
        let p = params(10);
        // target 0.649: N(1-c) = 3.51 -> m = 4
        let t = BigRational::new(649.into(), 1000.into());
        assert_eq!(SkeletonPoint::nearest_to_cosine(&t, 0, p).unwrap().m(), 4);
        // tie at m = 3.5 -> even -> 4
        let t = BigRational::new(65.into(), 100.into());
        assert_eq!(SkeletonPoint::nearest_to_cosine(&t, 0, p).unwrap().m(), 4);
        // tie at m = 4.5 -> even -> 4
        let t = BigRational::new(55.into(), 100.into());
        assert_eq!(SkeletonPoint::nearest_to_cosine(&t, 0, p).unwrap().m(), 4);
        // clamps targets outside [-1, 1]
        let t = BigRational::new(3.into(), 1.into());
        assert_eq!(SkeletonPoint::nearest_to_cosine(&t, 0, p).unwrap().m(), 0);
    }

    #[test]
    fn sampler_is_deterministic_and_in_disk() {
        let p = params(100);
        let nominal = SkeletonPoint::new(100, 0, p).unwrap(); // equator
        let disk = EpsilonDisk::around(&nominal, Rat::new(1, 10), Rat::new(1, 50));
        let mut rng = SeededRng::new(9);
        let pt = sample_exact_setting(&disk, SettingConstraint::RationalCosineWrtPole, p, &mut rng)
            .unwrap();
        assert!(disk.contains(&pt));

        let mut rng2 = SeededRng::new(9);
        let pt2 =
            sample_exact_setting(&disk, SettingConstraint::RationalCosineWrtPole, p, &mut rng2)
                .unwrap();
        assert_eq!(pt, pt2);

        let mut rng3 = SeededRng::new(10);
        let pt3 =
            sample_exact_setting(&disk, SettingConstraint::RationalCosineWrtPole, p, &mut rng3)
                .unwrap();
        assert!(disk.contains(&pt3));
    }

    #[test]
    fn sampler_no_candidate_when_band_misses_grid() {
        // Band strictly between two cosine grid points at N = 10.
        let p = params(10);
        let disk = EpsilonDisk::from_bands(
            Rat::new(71, 100) + Rat::new(1, 1000),
            Rat::new(80, 100) - Rat::new(1, 1000),
            Rat::new(0, 1),
            Rat::new(1, 8),
        )
        .unwrap();
        let mut rng = SeededRng::new(1);
        let err =
            sample_exact_setting(&disk, SettingConstraint::RationalCosineWrtPole, p, &mut rng);
        assert!(matches!(err, Err(Error::NoCandidate(_))));
    }

    #[test]
    fn sampler_wraps_longitude() {
        let p = params(5);
        let nominal = SkeletonPoint::new(5, 0, p).unwrap();
        let disk = EpsilonDisk::around(&nominal, Rat::new(1, 5), Rat::new(1, 20));
        let mut rng = SeededRng::new(2);
        for _ in 0..50 {
            let pt =
                sample_exact_setting(&disk, SettingConstraint::RationalAngle, p, &mut rng).unwrap();
            assert!(disk.contains(&pt), "{pt:?}");
        }
    }
}
