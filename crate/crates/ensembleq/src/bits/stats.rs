//! Exact ensemble statistics and correlation over packed planes.

use num_rational::Ratio;

use super::pack;
use super::BitString;
use crate::error::{Error, Result};
use crate::RatScalar;

fn scalar_from_i64<T: RatScalar>(v: i64) -> T {
    T::from_i64(v).expect("count fits any rational scalar")
}

/// Correlation of two equal-length strings: `(matches - mismatches) / count`
/// over the positions where both bits are non-null. Exact, symmetric, and
/// `1` on identical sign patterns.
pub fn correlation<T: RatScalar>(a: &BitString, b: &BitString) -> Result<Ratio<T>> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!(
            "correlation needs equal lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let (av, an) = a.planes();
    let (bv, bn) = b.planes();
    let mut valid = 0u64;
    let mut agree = 0u64;
    for w in 0..pack::words_for(a.len()) {
        let ok = !an[w] & !bn[w] & pack::word_mask(a.len(), w);
        valid += ok.count_ones() as u64;
        agree += (!(av[w] ^ bv[w]) & ok).count_ones() as u64;
    }
    if valid == 0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok(Ratio::new(
        scalar_from_i64(2 * agree as i64 - valid as i64),
        scalar_from_i64(valid as i64),
    ))
}

/// Exact fractions plus the (real-valued) standard deviation of a string's
/// non-null symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleStats<T: RatScalar> {
    /// Fraction of `-1` among non-null symbols.
    pub minus_fraction: Ratio<T>,
    /// Mean of the `±1` values, `1 - 2 * minus_fraction`.
    pub mean: Ratio<T>,
    /// Standard deviation `sqrt(1 - mean²)` of `±1`-valued data.
    pub stddev: f64,
}

/// Computes [`EnsembleStats`] over the non-null symbols.
pub fn ensemble_stats<T: RatScalar>(s: &BitString) -> Result<EnsembleStats<T>> {
    let total = s.len() as u64;
    let nulls = s.count_null();
    if nulls == total {
        return Err(Error::UndefinedStatistics);
    }
    let count = total - nulls;
    let minus = s.count_minus();
    let minus_fraction = Ratio::new(scalar_from_i64(minus as i64), scalar_from_i64(count as i64));
    let mean: Ratio<T> = Ratio::from_integer(T::one())
        - Ratio::new(scalar_from_i64(2), T::one()) * minus_fraction.clone();
    let mean_f = to_f64(&mean);
    let stddev = (1.0 - mean_f * mean_f).max(0.0).sqrt();
    Ok(EnsembleStats {
        minus_fraction,
        mean,
        stddev,
    })
}

/// Lossy conversion of an exact ratio to `f64` (for reporting only).
pub(crate) fn to_f64<T: RatScalar>(r: &Ratio<T>) -> f64 {
    // Round-trip through strings to stay scalar-generic; values this crate
    // reports are well within f64 range.
    let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

#[cfg(test)]
mod tests {
    use super::super::test_model as model;
    use super::super::{cyc_shift, interp_i1, Bit, EnsembleParams};
    use super::*;
    use crate::rng::SeededRng;
    use crate::{BigRat, Rat};

    fn string_of(v: &[i8]) -> BitString {
        let params = EnsembleParams::new((v.len() / 4) as u32, 0).unwrap();
        BitString::from_bits(params, &model::to_bits(v)).unwrap()
    }

    #[test]
    fn correlation_law_exhaustive_small_n() {
        let mut rng = SeededRng::new(11);
        for n in 1u32..=4 {
            for _ in 0..60 {
                let v: Vec<i8> = (0..4 * n)
                    .map(|_| if rng.below(2) == 1 { 1 } else { -1 })
                    .collect();
                let s = string_of(&v);
                for m in 0..=2 * n {
                    let c: Rat = correlation(&interp_i1(&s, m).unwrap(), &s).unwrap();
                    assert_eq!(c, Rat::new(1, 1) - Rat::new(m as i64, n as i64));
                }
            }
        }
    }

    #[test]
    fn interp_one_against_ones_n3() {
        let one = BitString::ones(EnsembleParams::new(3, 0).unwrap());
        let c: Rat = correlation(&interp_i1(&one, 1).unwrap(), &one).unwrap();
        assert_eq!(c, Rat::new(2, 3));
    }

    #[test]
    fn self_and_negation_correlation() {
        let s = string_of(&[1, -1, 1, 1, -1, -1, 1, -1]);
        let c: Rat = correlation(&s, &s).unwrap();
        assert_eq!(c, Rat::new(1, 1));
        let c: BigRat = correlation(&s, &s.negated()).unwrap();
        assert_eq!(c, BigRat::from_integer((-1).into()));
    }

    #[test]
    fn correlation_skips_null_pairs() {
        let params = EnsembleParams::new(1, 2).unwrap();
        let a = BitString::from_bits(
            params,
            &[Bit::Plus, Bit::Minus, Bit::Plus, Bit::Plus, Bit::Null, Bit::Null],
        )
        .unwrap();
        let b = cyc_shift(&a, 1);
        // Valid positions are those non-null in both: a has nulls at 4,5;
        // b at 5,0 -> positions 1,2,3 compared.
        let c: Rat = correlation(&a, &b).unwrap();
        let expect = {
            let av = model::from_string(&a);
            let bv = model::from_string(&b);
            let mut num = 0i64;
            let mut den = 0i64;
            for (x, y) in av.iter().zip(&bv) {
                if *x != 0 && *y != 0 {
                    den += 1;
                    num += if x == y { 1 } else { -1 };
                }
            }
            Rat::new(num, den)
        };
        assert_eq!(c, expect);
    }

    #[test]
    fn correlation_error_paths() {
        let a = string_of(&[1, 1, 1, 1]);
        let b = string_of(&[1, 1, 1, 1, 1, 1, 1, 1]);
        assert!(matches!(
            correlation::<i64>(&a, &b),
            Err(Error::Shape(_))
        ));

        let params = EnsembleParams::new(1, 4).unwrap();
        let all_null_overlap_a = BitString::from_bits(
            params,
            &[
                Bit::Plus,
                Bit::Plus,
                Bit::Plus,
                Bit::Plus,
                Bit::Null,
                Bit::Null,
                Bit::Null,
                Bit::Null,
            ],
        )
        .unwrap();
        let b = cyc_shift(&all_null_overlap_a, 4);
        assert!(matches!(
            correlation::<i64>(&all_null_overlap_a, &b),
            Err(Error::UndefinedCorrelation)
        ));
    }

    #[test]
    fn stats_examples() {
        let one = BitString::ones(EnsembleParams::new(5, 0).unwrap());
        let st: EnsembleStats<i64> = ensemble_stats(&one).unwrap();
        assert_eq!(st.minus_fraction, Rat::new(0, 1));
        assert_eq!(st.mean, Rat::new(1, 1));
        assert_eq!(st.stddev, 0.0);

        let balanced = string_of(&[1, 1, -1, -1]);
        let st: EnsembleStats<i64> = ensemble_stats(&balanced).unwrap();
        assert_eq!(st.mean, Rat::new(0, 1));
        assert_eq!(st.stddev, 1.0);

        // Interpolated string: minus fraction m / 2N.
        let one = BitString::ones(EnsembleParams::new(3, 0).unwrap());
        let st: EnsembleStats<i64> = ensemble_stats(&interp_i1(&one, 1).unwrap()).unwrap();
        assert_eq!(st.minus_fraction, Rat::new(1, 6));
    }

    #[test]
    fn stats_exclude_nulls_and_reject_all_null() {
        let params = EnsembleParams::new(1, 1).unwrap();
        let s = BitString::from_bits(
            params,
            &[Bit::Plus, Bit::Minus, Bit::Minus, Bit::Plus, Bit::Null],
        )
        .unwrap();
        let st: EnsembleStats<i64> = ensemble_stats(&s).unwrap();
        assert_eq!(st.minus_fraction, Rat::new(1, 2));
        assert_eq!(st.mean, Rat::new(0, 1));
    }

    #[test]
    fn global_permutation_preserves_stats_and_correlation() {
        let mut rng = SeededRng::new(17);
        for _ in 0..20 {
            let n = 3u32;
            let len = 4 * n as usize;
            let va: Vec<i8> = (0..len)
                .map(|_| if rng.below(2) == 1 { 1 } else { -1 })
                .collect();
            let vb: Vec<i8> = (0..len)
                .map(|_| if rng.below(2) == 1 { 1 } else { -1 })
                .collect();
            let mut perm: Vec<usize> = (0..len).collect();
            rng.shuffle(&mut perm);
            let permute = |v: &[i8]| -> Vec<i8> { perm.iter().map(|&i| v[i]).collect() };

            let a = string_of(&va);
            let b = string_of(&vb);
            let pa = string_of(&permute(&va));
            let pb = string_of(&permute(&vb));

            let c: Rat = correlation(&a, &b).unwrap();
            let pc: Rat = correlation(&pa, &pb).unwrap();
            assert_eq!(c, pc);

            let st: EnsembleStats<i64> = ensemble_stats(&a).unwrap();
            let pst: EnsembleStats<i64> = ensemble_stats(&pa).unwrap();
            assert_eq!(st, pst);
        }
    }
}
