//! Word-level kernels for LSB-first bit planes.
//!
//! A plane is a `Vec<u64>` holding `len` bits, index `i` at word `i / 64`,
//! bit `i % 64`. Bits past `len` in the final word are kept at zero; every
//! kernel that reads whole words masks the tail.

/// Number of words needed for `len` bits.
pub fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

/// Mask of valid bits in word `w` of a plane holding `len` bits.
pub fn word_mask(len: usize, w: usize) -> u64 {
    let full_words = len / 64;
    if w < full_words {
        u64::MAX
    } else if w == full_words {
        let rem = len % 64;
        if rem == 0 {
            0
        } else {
            (1u64 << rem) - 1
        }
    } else {
        0
    }
}

pub fn get_bit(plane: &[u64], i: usize) -> bool {
    plane[i / 64] >> (i % 64) & 1 == 1
}

pub fn set_bit(plane: &mut [u64], i: usize, value: bool) {
    let mask = 1u64 << (i % 64);
    if value {
        plane[i / 64] |= mask;
    } else {
        plane[i / 64] &= !mask;
    }
}

/// Reads 64 bits starting at bit offset `off` (plane must extend far enough
/// that out-of-range reads only touch allocated words; callers guarantee the
/// logical range).
fn read64(plane: &[u64], off: usize) -> u64 {
    let w = off / 64;
    let b = off % 64;
    if b == 0 {
        plane.get(w).copied().unwrap_or(0)
    } else {
        let lo = plane.get(w).copied().unwrap_or(0) >> b;
        let hi = plane.get(w + 1).copied().unwrap_or(0) << (64 - b);
        lo | hi
    }
}

/// Copies `n` bits from `src` starting at `src_off` into `dst` starting at
/// `dst_off`. Ranges may not overlap (all callers copy between distinct
/// buffers).
pub fn copy_bits(dst: &mut [u64], dst_off: usize, src: &[u64], src_off: usize, n: usize) {
    if n == 0 {
        return;
    }
    let mut remaining = n;
    let mut s = src_off;
    let mut d = dst_off;
    while remaining > 0 {
        let db = d % 64;
        let chunk = (64 - db).min(remaining);
        let bits = read64(src, s) & mask_low(chunk);
        let w = d / 64;
        dst[w] = (dst[w] & !(mask_low(chunk) << db)) | (bits << db);
        remaining -= chunk;
        s += chunk;
        d += chunk;
    }
}

fn mask_low(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Flips every bit in `[start, end)`.
pub fn flip_range(plane: &mut [u64], start: usize, end: usize) {
    if start >= end {
        return;
    }
    let first = start / 64;
    let last = (end - 1) / 64;
    for w in first..=last {
        let mut m = u64::MAX;
        if w == first {
            m &= u64::MAX << (start % 64);
        }
        if w == last {
            let rem = end - w * 64;
            m &= mask_low(rem);
        }
        plane[w] ^= m;
    }
}

/// Sets every bit in `[start, end)` to `value`.
pub fn fill_range(plane: &mut [u64], start: usize, end: usize, value: bool) {
    if start >= end {
        return;
    }
    let first = start / 64;
    let last = (end - 1) / 64;
    for w in first..=last {
        let mut m = u64::MAX;
        if w == first {
            m &= u64::MAX << (start % 64);
        }
        if w == last {
            let rem = end - w * 64;
            m &= mask_low(rem);
        }
        if value {
            plane[w] |= m;
        } else {
            plane[w] &= !m;
        }
    }
}

/// Population count of the first `len` bits.
pub fn popcount(plane: &[u64], len: usize) -> u64 {
    let mut total = 0u64;
    for (w, &word) in plane.iter().enumerate().take(words_for(len)) {
        total += (word & word_mask(len, w)).count_ones() as u64;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn to_bits(plane: &[u64], len: usize) -> Vec<bool> {
        (0..len).map(|i| get_bit(plane, i)).collect()
    }

    proptest! {
        #[test]
        fn copy_bits_matches_per_bit(
            src_bits in proptest::collection::vec(any::<bool>(), 1..300),
            dst_len in 1usize..300,
            seed in any::<u64>(),
        ) {
            let mut rng = crate::rng::SeededRng::new(seed);
            let mut src = vec![0u64; words_for(src_bits.len())];
            for (i, &b) in src_bits.iter().enumerate() {
                set_bit(&mut src, i, b);
            }
            let n = rng.below(src_bits.len().min(dst_len) as u64) as usize;
            let src_off = rng.below((src_bits.len() - n + 1) as u64) as usize;
            let dst_off = rng.below((dst_len - n + 1) as u64) as usize;

            let mut dst = vec![0u64; words_for(dst_len)];
            for i in 0..dst_len {
                set_bit(&mut dst, i, rng.below(2) == 1);
            }
            let mut expect = to_bits(&dst, dst_len);
            copy_bits(&mut dst, dst_off, &src, src_off, n);
            for k in 0..n {
                expect[dst_off + k] = src_bits[src_off + k];
            }
            prop_assert_eq!(to_bits(&dst, dst_len), expect);
        }

        #[test]
        fn fill_and_popcount_agree(
            len in 1usize..300,
            a in 0usize..300,
            b in 0usize..300,
        ) {
            let (a, b) = (a.min(len), b.min(len));
            let (start, end) = (a.min(b), a.max(b));
            let mut plane = vec![0u64; words_for(len)];
            fill_range(&mut plane, start, end, true);
            prop_assert_eq!(popcount(&plane, len), (end - start) as u64);
            fill_range(&mut plane, start, end, false);
            prop_assert_eq!(popcount(&plane, len), 0);
        }
    }

    #[test]
    fn flip_range_flips_exactly_the_range() {
        let len = 130;
        let mut plane = vec![0u64; words_for(len)];
        flip_range(&mut plane, 10, 100);
        for i in 0..len {
            assert_eq!(get_bit(&plane, i), (10..100).contains(&i), "bit {i}");
        }
        flip_range(&mut plane, 10, 100);
        assert_eq!(popcount(&plane, len), 0);
    }
}
