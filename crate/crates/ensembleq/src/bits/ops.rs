//! Structured operators on the `4N` prefix, plus cyclic shifts on the full
//! string.
//!
//! With quarters `E = A || B || C || D`, the three quaternionic operators are
//!
//! ```text
//! i1(E) = B || -A || -D ||  C
//! i2(E) = C ||  D || -A || -B
//! i3(E) = D || -C ||  B || -A
//! ```
//!
//! and satisfy `i1² = i2² = i3² = -1` together with `i1 ∘ i2 = i3` (apply
//! `i2` first, then `i1` — the product `i1·i2` in the quaternion algebra).
//!
//! The interpolation family `i1^(m)` walks from the identity (`m = 0`)
//! through `i1` (`m = N`) to global negation (`m = 2N`) by partial
//! concatenation; each increment of `m` moves exactly two bits, which is what
//! makes `corr(i1^(m)(E), E) = 1 - m/N` exact for every `E`.

use super::pack;
use super::{Bit, BitString, EnsembleParams};
use crate::error::{Error, Result};

/// One of the three quaternionic operators.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum QuaternionOp {
    I1,
    I2,
    I3,
}

impl QuaternionOp {
    pub fn name(self) -> &'static str {
        match self {
            QuaternionOp::I1 => "i1",
            QuaternionOp::I2 => "i2",
            QuaternionOp::I3 => "i3",
        }
    }
}

/// Concatenates four equal-length null-free quarters into a `4N` string.
pub fn assemble(a: &[Bit], b: &[Bit], c: &[Bit], d: &[Bit]) -> Result<BitString> {
    let n = a.len();
    if n == 0 || b.len() != n || c.len() != n || d.len() != n {
        return Err(Error::Shape(format!(
            "quarters must share one positive length, got {}/{}/{}/{}",
            a.len(),
            b.len(),
            c.len(),
            d.len()
        )));
    }
    for q in [a, b, c, d] {
        if q.contains(&Bit::Null) {
            return Err(Error::NullSymbol(
                "quarters may not contain X; nulls are appended afterwards".into(),
            ));
        }
    }
    let params = EnsembleParams::new(n as u32, 0)?;
    let mut out = BitString::zeroed(params);
    for (qi, q) in [a, b, c, d].into_iter().enumerate() {
        for (i, &bit) in q.iter().enumerate() {
            out.set(qi * n + i, bit);
        }
    }
    Ok(out)
}

/// First `N - m` symbols of `b` followed by the last `m` of `c`.
pub fn partial_concat(b: &[Bit], c: &[Bit], m: usize) -> Result<Vec<Bit>> {
    let n = b.len();
    if c.len() != n {
        return Err(Error::Shape(format!(
            "partial concatenation needs equal lengths, got {} and {}",
            n,
            c.len()
        )));
    }
    if m > n {
        return Err(Error::Domain(format!("m = {m} exceeds quarter length {n}")));
    }
    let mut out = b[..n - m].to_vec();
    out.extend_from_slice(&c[n - m..]);
    Ok(out)
}

fn require_prefix_null_free(s: &BitString, op: &str) -> Result<()> {
    if !s.prefix_null_free() {
        return Err(Error::NullSymbol(format!(
            "{op} is undefined on strings with X inside the structured prefix"
        )));
    }
    Ok(())
}

/// A segment of an output quarter: bits copied from `src_start` with an
/// optional sign flip.
struct Segment {
    src_start: usize,
    len: usize,
    flip: bool,
}

/// Builds the structured prefix of `out` from segments of `s`, then carries
/// the tail (positions `4N..`) through unchanged.
fn rebuild_prefix(s: &BitString, segments: &[Segment]) -> BitString {
    let mut out = BitString::zeroed(s.params());
    let structured = s.params().structured_len();
    let (src_value, src_null) = s.planes();
    let len = s.len();
    {
        let (value, null) = out.planes_mut();
        let mut pos = 0usize;
        for seg in segments {
            pack::copy_bits(value, pos, src_value, seg.src_start, seg.len);
            if seg.flip {
                pack::flip_range(value, pos, pos + seg.len);
            }
            pos += seg.len;
        }
        debug_assert_eq!(pos, structured);
        pack::copy_bits(value, structured, src_value, structured, len - structured);
        pack::copy_bits(null, structured, src_null, structured, len - structured);
    }
    out
}

/// Applies `i1`, `i2`, or `i3` to the structured prefix.
pub fn quaternion_apply(op: QuaternionOp, s: &BitString) -> Result<BitString> {
    require_prefix_null_free(s, op.name())?;
    let n = s.params().quarter_len() as usize;
    let q = |idx: usize| idx * n;
    let seg = |quarter: usize, flip: bool| Segment {
        src_start: q(quarter),
        len: n,
        flip,
    };
    let segments = match op {
        QuaternionOp::I1 => [seg(1, false), seg(0, true), seg(3, true), seg(2, false)],
        QuaternionOp::I2 => [seg(2, false), seg(3, false), seg(0, true), seg(1, true)],
        QuaternionOp::I3 => [seg(3, false), seg(2, true), seg(1, false), seg(0, true)],
    };
    Ok(rebuild_prefix(s, &segments))
}

fn check_interp_range(s: &BitString, m: u32, op: &str) -> Result<usize> {
    require_prefix_null_free(s, op)?;
    let n = s.params().quarter_len();
    if m > 2 * n {
        return Err(Error::Domain(format!(
            "interpolation index m = {m} exceeds 2N = {}",
            2 * n
        )));
    }
    Ok(n as usize)
}

/// The interpolation operator `i1^(m)` for `0 <= m <= 2N`.
pub fn interp_i1(s: &BitString, m: u32) -> Result<BitString> {
    let n = check_interp_range(s, m, "interp_i1")?;
    let m = m as usize;
    let q = |idx: usize| idx * n;
    // Head takes `N - k` bits of one quarter, tail the last `k` of another.
    let segs = |k: usize, head: usize, hf: bool, tail: usize, tf: bool| {
        [
            Segment {
                src_start: q(head),
                len: n - k,
                flip: hf,
            },
            Segment {
                src_start: q(tail) + (n - k),
                len: k,
                flip: tf,
            },
        ]
    };
    let segments: Vec<Segment> = if m <= n {
        [
            segs(m, 0, false, 1, false), // A ||  B
            segs(m, 1, false, 0, true),  // B || -A
            segs(m, 2, false, 3, true),  // C || -D
            segs(m, 3, false, 2, false), // D ||  C
        ]
        .into_iter()
        .flatten()
        .collect()
    } else {
        let mp = m - n;
        [
            segs(mp, 1, false, 0, true), //  B || -A
            segs(mp, 0, true, 1, true),  // -A || -B
            segs(mp, 3, true, 2, true),  // -D || -C
            segs(mp, 2, false, 3, true), //  C || -D
        ]
        .into_iter()
        .flatten()
        .collect()
    };
    Ok(rebuild_prefix(s, &segments))
}

/// Exact inverse of [`interp_i1`]: `interp_i1_inv(interp_i1(s, m), m) = s`.
///
/// `i1^(m)` is a signed permutation of positions, so the inverse is obtained
/// by reading each input quarter back out of the output segments; it is again
/// a partial-concatenation pattern, but not `i1^(2N-m)` under any global
/// sign.
pub fn interp_i1_inv(s: &BitString, m: u32) -> Result<BitString> {
    let n = check_interp_range(s, m, "interp_i1_inv")?;
    let m = m as usize;
    let q = |idx: usize| idx * n;
    let segs = |k: usize, head: usize, hf: bool, tail: usize, tf: bool| {
        [
            Segment {
                src_start: q(head),
                len: n - k,
                flip: hf,
            },
            Segment {
                src_start: q(tail) + (n - k),
                len: k,
                flip: tf,
            },
        ]
    };
    let segments: Vec<Segment> = if m <= n {
        [
            segs(m, 0, false, 1, true),  // A = O1 || -O2
            segs(m, 1, false, 0, false), // B = O2 ||  O1
            segs(m, 2, false, 3, false), // C = O3 ||  O4
            segs(m, 3, false, 2, true),  // D = O4 || -O3
        ]
        .into_iter()
        .flatten()
        .collect()
    } else {
        let mp = m - n;
        [
            segs(mp, 1, true, 0, true),  // A = -O2 || -O1
            segs(mp, 0, false, 1, true), // B =  O1 || -O2
            segs(mp, 3, false, 2, true), // C =  O4 || -O3
            segs(mp, 2, true, 3, true),  // D = -O3 || -O4
        ]
        .into_iter()
        .flatten()
        .collect()
    };
    Ok(rebuild_prefix(s, &segments))
}

/// Concatenates null-free strings into one string whose quarter length is a
/// quarter of the total. The total length must be divisible by four.
pub fn concat(parts: &[&BitString]) -> Result<BitString> {
    let total: usize = parts.iter().map(|p| p.len()).sum();
    if total == 0 || total % 4 != 0 {
        return Err(Error::Shape(format!(
            "concatenation length {total} is not a positive multiple of 4"
        )));
    }
    for p in parts {
        if p.count_null() != 0 {
            return Err(Error::NullSymbol(
                "concatenation is defined on null-free strings".into(),
            ));
        }
    }
    let params = EnsembleParams::new((total / 4) as u32, 0)?;
    let mut out = BitString::zeroed(params);
    let mut pos = 0usize;
    {
        let (value, _) = out.planes_mut();
        for p in parts {
            let (pv, _) = p.planes();
            pack::copy_bits(value, pos, pv, 0, p.len());
            pos += p.len();
        }
    }
    Ok(out)
}

/// Rotates the full string right by `n` positions (position `j` maps to
/// `j + 1` per single step), reducing `n` modulo the string length.
pub fn cyc_shift(s: &BitString, n: u64) -> BitString {
    let len = s.len();
    let shift = (n % len as u64) as usize;
    if shift == 0 {
        return s.clone();
    }
    let mut out = BitString::zeroed(s.params());
    let (src_value, src_null) = s.planes();
    {
        let (value, null) = out.planes_mut();
        pack::copy_bits(value, shift, src_value, 0, len - shift);
        pack::copy_bits(value, 0, src_value, len - shift, shift);
        pack::copy_bits(null, shift, src_null, 0, len - shift);
        pack::copy_bits(null, 0, src_null, len - shift, shift);
    }
    out
}
