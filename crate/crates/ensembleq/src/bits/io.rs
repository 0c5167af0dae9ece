//! Serialized forms of a [`BitString`].
//!
//! Text: `"{N}:{n_X}:{runs}"` where runs concatenate a symbol (`+`, `-`,
//! `x`) with its repeat count, e.g. the all-plus string at `N = 3` with one
//! null is `3:1:+12x1`.
//!
//! Binary: an 8-byte header — magic `b"EQ"`, `N` as `u32` LE, `n_X` as
//! `u16` LE — followed by the value plane and the null plane, each stored as
//! little-endian 64-bit words covering `4N + n_X` bits.

use std::io::{Read, Write};

use super::{Bit, BitString, EnsembleParams};
use crate::error::{Error, Result};

pub(super) fn to_rle(s: &BitString) -> String {
    let mut out = format!(
        "{}:{}:",
        s.params().quarter_len(),
        s.params().null_count()
    );
    let mut iter = s.iter();
    let mut current = iter.next().expect("strings are non-empty");
    let mut run = 1u64;
    for b in iter {
        if b == current {
            run += 1;
        } else {
            out.push(current.symbol());
            out.push_str(&run.to_string());
            current = b;
            run = 1;
        }
    }
    out.push(current.symbol());
    out.push_str(&run.to_string());
    out
}

pub(super) fn from_rle(text: &str) -> Result<BitString> {
    let mut parts = text.splitn(3, ':');
    let bad = |what: &str| Error::Parse(format!("bad run-length string ({what}): `{text}`"));
    let n: u32 = parts
        .next()
        .and_then(|p| p.trim().parse().ok())
        .ok_or_else(|| bad("N"))?;
    let n_x: u32 = parts
        .next()
        .and_then(|p| p.trim().parse().ok())
        .ok_or_else(|| bad("n_X"))?;
    let runs = parts.next().ok_or_else(|| bad("runs"))?.trim();
    let params = EnsembleParams::new(n, n_x)?;

    let mut bits = Vec::with_capacity(params.total_len());
    let mut chars = runs.chars().peekable();
    while let Some(sym) = chars.next() {
        let bit = Bit::from_symbol(sym)?;
        let mut digits = String::new();
        while let Some(c) = chars.peek() {
            if c.is_ascii_digit() {
                digits.push(*c);
                chars.next();
            } else {
                break;
            }
        }
        let count: u64 = digits.parse().map_err(|_| bad("run count"))?;
        for _ in 0..count {
            bits.push(bit);
        }
    }
    BitString::from_bits(params, &bits)
}

const MAGIC: [u8; 2] = *b"EQ";

/// Writes the binary form. `n_X` must fit in a `u16` (the header allots two
/// bytes for it).
pub fn write_binary<W: Write>(s: &BitString, mut w: W) -> Result<()> {
    let n_x = s.params().null_count();
    if n_x > u16::MAX as u32 {
        return Err(Error::Domain(format!(
            "binary header stores n_X as u16; {n_x} does not fit"
        )));
    }
    w.write_all(&MAGIC)?;
    w.write_all(&s.params().quarter_len().to_le_bytes())?;
    w.write_all(&(n_x as u16).to_le_bytes())?;
    let (value, null) = s.planes();
    for plane in [value, null] {
        for word in plane {
            w.write_all(&word.to_le_bytes())?;
        }
    }
    Ok(())
}

/// Reads the binary form back.
pub fn read_binary<R: Read>(mut r: R) -> Result<BitString> {
    let mut header = [0u8; 8];
    r.read_exact(&mut header)?;
    if header[0..2] != MAGIC {
        return Err(Error::Parse("bad magic in binary bit string".into()));
    }
    let n = u32::from_le_bytes(header[2..6].try_into().unwrap());
    let n_x = u16::from_le_bytes(header[6..8].try_into().unwrap()) as u32;
    let params = EnsembleParams::new(n, n_x)?;
    let words = super::pack::words_for(params.total_len());
    let mut out = BitString::zeroed(params);
    {
        let (value, null) = out.planes_mut();
        for plane in [value, null] {
            for word in plane.iter_mut().take(words) {
                let mut buf = [0u8; 8];
                r.read_exact(&mut buf)?;
                *word = u64::from_le_bytes(buf);
            }
        }
    }
    // Reject non-canonical payloads (value bits under nulls, tail garbage,
    // wrong null count).
    let nulls = out.count_null();
    if nulls != params.null_count() as u64 {
        return Err(Error::Parse(format!(
            "null plane has {nulls} bits set but header says n_X = {}",
            params.null_count()
        )));
    }
    let (value, null) = out.planes();
    for w in 0..words {
        let mask = super::pack::word_mask(params.total_len(), w);
        if value[w] & null[w] != 0 || value[w] & !mask != 0 || null[w] & !mask != 0 {
            return Err(Error::Parse("non-canonical bit planes".into()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::cyc_shift;
    use super::*;
    use crate::rng::SeededRng;

    fn random_string(rng: &mut SeededRng, n: u32, n_x: u32) -> BitString {
        let params = EnsembleParams::new(n, n_x).unwrap();
        let mut bits = Vec::new();
        for _ in 0..params.structured_len() {
            bits.push(if rng.below(2) == 1 { Bit::Plus } else { Bit::Minus });
        }
        bits.extend(std::iter::repeat(Bit::Null).take(n_x as usize));
        let s = BitString::from_bits(params, &bits).unwrap();
        // Scatter the nulls so the tail is not special.
        cyc_shift(&s, rng.below(params.total_len() as u64))
    }

    #[test]
    fn rle_examples() {
        let one = BitString::ones(EnsembleParams::new(3, 1).unwrap());
        assert_eq!(one.to_rle(), "3:1:+12x1");
        assert_eq!(BitString::from_rle("3:1:+12x1").unwrap(), one);
    }

    #[test]
    fn rle_round_trip_randomized() {
        let mut rng = SeededRng::new(3);
        for case in 0..60 {
            let n = 1 + (case % 7) as u32;
            let n_x = (case % 3) as u32;
            let s = random_string(&mut rng, n, n_x);
            let text = s.to_rle();
            assert_eq!(BitString::from_rle(&text).unwrap(), s, "case {case}: {text}");
        }
    }

    #[test]
    fn rle_rejects_malformed() {
        assert!(BitString::from_rle("oops").is_err());
        assert!(BitString::from_rle("3:0:+11").is_err()); // wrong length
        assert!(BitString::from_rle("3:0:*12").is_err()); // bad symbol
        assert!(BitString::from_rle("3:2:+12x1").is_err()); // null count mismatch
    }

    #[test]
    fn binary_round_trip_randomized() {
        let mut rng = SeededRng::new(4);
        for case in 0..40 {
            let n = 1 + (case % 9) as u32;
            let n_x = (case % 4) as u32;
            let s = random_string(&mut rng, n, n_x);
            let mut buf = Vec::new();
            write_binary(&s, &mut buf).unwrap();
            assert_eq!(buf.len(), 8 + 2 * 8 * super::super::pack::words_for(s.len()));
            let back = read_binary(buf.as_slice()).unwrap();
            assert_eq!(back, s, "case {case}");
        }
    }

    #[test]
    fn binary_rejects_corruption() {
        let s = BitString::ones(EnsembleParams::new(2, 0).unwrap());
        let mut buf = Vec::new();
        write_binary(&s, &mut buf).unwrap();

        let mut bad_magic = buf.clone();
        bad_magic[0] = b'Z';
        assert!(read_binary(bad_magic.as_slice()).is_err());

        let mut truncated = buf.clone();
        truncated.pop();
        assert!(read_binary(truncated.as_slice()).is_err());

        // Set a value bit beyond the logical length.
        let mut tail_garbage = buf.clone();
        let last = tail_garbage.len() - 9;
        let _ = last;
        tail_garbage[8 + 7] |= 0x80; // bit 63 of the first value word, len is 8
        assert!(read_binary(tail_garbage.as_slice()).is_err());
    }
}
