//! Exact bit-string algebra over the symbols `{+1, -1, X}`.
//!
//! A [`BitString`] holds `4N` structured bits plus `n_X` null symbols in two
//! packed planes (value and null mask), so the statistics kernels run at one
//! machine word per 64 symbols. The structured operators (`i1`, `i2`, `i3`,
//! interpolation) act on the `4N` prefix and refuse nulls there; cyclic
//! shifts act on the full string, so the shift group has order `4N + n_X`.

mod io;
mod ops;
pub(crate) mod pack;
mod stats;

pub use io::{read_binary, write_binary};
pub use ops::{
    assemble, concat, cyc_shift, interp_i1, interp_i1_inv, partial_concat, quaternion_apply,
    QuaternionOp,
};
pub use stats::{correlation, ensemble_stats, EnsembleStats};
pub(crate) use stats::to_f64 as ratio_to_f64;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One symbol of an ensemble string.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bit {
    /// `+1`
    Plus,
    /// `-1`
    Minus,
    /// `X`, the null outcome (registered by no detector).
    Null,
}

impl Bit {
    pub fn symbol(self) -> char {
        match self {
            Bit::Plus => '+',
            Bit::Minus => '-',
            Bit::Null => 'x',
        }
    }

    pub fn from_symbol(c: char) -> Result<Self> {
        match c {
            '+' => Ok(Bit::Plus),
            '-' => Ok(Bit::Minus),
            'x' | 'X' => Ok(Bit::Null),
            other => Err(Error::Parse(format!("unknown bit symbol `{other}`"))),
        }
    }

    /// Sign negation; `X` has no sign and is fixed.
    pub fn negate(self) -> Self {
        match self {
            Bit::Plus => Bit::Minus,
            Bit::Minus => Bit::Plus,
            Bit::Null => Bit::Null,
        }
    }
}

/// Shape parameters of an ensemble string: `N` (quarter length) and `n_X`
/// (null count), with total length `p = 4N + n_X`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnsembleParams {
    n: u32,
    n_x: u32,
}

impl EnsembleParams {
    pub fn new(n: u32, n_x: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("N must be at least 1".into()));
        }
        Ok(Self { n, n_x })
    }

    /// Like [`EnsembleParams::new`] but additionally requires `p = 4N + n_X`
    /// to be prime.
    pub fn new_prime(n: u32, n_x: u32) -> Result<Self> {
        let params = Self::new(n, n_x)?;
        let p = params.p();
        if !is_prime(p) {
            return Err(Error::Domain(format!("p = 4N + n_X = {p} is not prime")));
        }
        Ok(params)
    }

    pub fn quarter_len(&self) -> u32 {
        self.n
    }

    pub fn null_count(&self) -> u32 {
        self.n_x
    }

    /// Total string length `p = 4N + n_X`.
    pub fn p(&self) -> u64 {
        4 * self.n as u64 + self.n_x as u64
    }

    /// Length of the structured prefix, `4N`.
    pub fn structured_len(&self) -> usize {
        4 * self.n as usize
    }

    pub fn total_len(&self) -> usize {
        self.structured_len() + self.n_x as usize
    }

    /// Whether the Niven exceptions `cos φ ∈ {0, ±1/2, -1}` are unreachable
    /// on this string's phase lattice: true when `n_X` is odd (so `p` is odd)
    /// and `p` is not divisible by 3.
    pub fn niven_exceptions_removed(&self) -> bool {
        self.n_x % 2 == 1 && self.p() % 3 != 0
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A packed ensemble string of length `4N + n_X` over `{+1, -1, X}`.
///
/// Plane layout: bit `i` of `value` is 1 for `+1`, 0 for `-1`; bit `i` of
/// `null` is 1 for `X`. Value bits are kept at 0 wherever the null bit is
/// set, so equal strings have equal planes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    params: EnsembleParams,
    len: usize,
    value: Vec<u64>,
    null: Vec<u64>,
}

impl BitString {
    /// The all-`+1` string (with `n_X` nulls appended when the parameters
    /// call for them).
    pub fn ones(params: EnsembleParams) -> Self {
        let len = params.total_len();
        let words = pack::words_for(len);
        let mut value = vec![0u64; words];
        let mut null = vec![0u64; words];
        pack::fill_range(&mut value, 0, params.structured_len(), true);
        pack::fill_range(&mut null, params.structured_len(), len, true);
        Self {
            params,
            len,
            value,
            null,
        }
    }

    /// Builds a string from explicit symbols. The slice length must be
    /// `4N + n_X` and the number of `X` symbols must equal `n_X`.
    pub fn from_bits(params: EnsembleParams, bits: &[Bit]) -> Result<Self> {
        if bits.len() != params.total_len() {
            return Err(Error::Shape(format!(
                "expected {} symbols for N={}, n_X={}, got {}",
                params.total_len(),
                params.quarter_len(),
                params.null_count(),
                bits.len()
            )));
        }
        let nulls = bits.iter().filter(|b| **b == Bit::Null).count();
        if nulls != params.null_count() as usize {
            return Err(Error::Shape(format!(
                "string contains {nulls} null symbols but n_X = {}",
                params.null_count()
            )));
        }
        let mut out = Self::zeroed(params);
        for (i, &b) in bits.iter().enumerate() {
            out.set(i, b);
        }
        Ok(out)
    }

    pub(crate) fn zeroed(params: EnsembleParams) -> Self {
        let len = params.total_len();
        let words = pack::words_for(len);
        Self {
            params,
            len,
            value: vec![0u64; words],
            null: vec![0u64; words],
        }
    }

    pub fn params(&self) -> EnsembleParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> Bit {
        debug_assert!(i < self.len);
        if pack::get_bit(&self.null, i) {
            Bit::Null
        } else if pack::get_bit(&self.value, i) {
            Bit::Plus
        } else {
            Bit::Minus
        }
    }

    pub(crate) fn set(&mut self, i: usize, b: Bit) {
        debug_assert!(i < self.len);
        match b {
            Bit::Plus => {
                pack::set_bit(&mut self.value, i, true);
                pack::set_bit(&mut self.null, i, false);
            }
            Bit::Minus => {
                pack::set_bit(&mut self.value, i, false);
                pack::set_bit(&mut self.null, i, false);
            }
            Bit::Null => {
                pack::set_bit(&mut self.value, i, false);
                pack::set_bit(&mut self.null, i, true);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Bit> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<Bit> {
        self.iter().collect()
    }

    /// Negates every bit (nulls are unaffected).
    pub fn negated(&self) -> Self {
        let mut out = self.clone();
        for w in 0..out.value.len() {
            out.value[w] ^= !out.null[w] & pack::word_mask(out.len, w);
        }
        out
    }

    /// True when no null symbol occurs in the structured `4N` prefix.
    pub fn prefix_null_free(&self) -> bool {
        pack::popcount(&self.null, self.params.structured_len()) == 0
    }

    pub fn count_plus(&self) -> u64 {
        pack::popcount(&self.value, self.len)
    }

    pub fn count_null(&self) -> u64 {
        pack::popcount(&self.null, self.len)
    }

    pub fn count_minus(&self) -> u64 {
        self.len as u64 - self.count_plus() - self.count_null()
    }

    pub(crate) fn planes(&self) -> (&[u64], &[u64]) {
        (&self.value, &self.null)
    }

    pub(crate) fn planes_mut(&mut self) -> (&mut Vec<u64>, &mut Vec<u64>) {
        (&mut self.value, &mut self.null)
    }

    /// Compact run-length text form, e.g. `3:1:+8-4x1`.
    pub fn to_rle(&self) -> String {
        io::to_rle(self)
    }

    /// Parses the run-length text form.
    pub fn from_rle(text: &str) -> Result<Self> {
        io::from_rle(text)
    }
}

impl std::fmt::Debug for BitString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "BitString(N={}, n_X={}, ",
            self.params.quarter_len(),
            self.params.null_count()
        )?;
        if self.len <= 64 {
            for b in self.iter() {
                write!(f, "{}", b.symbol())?;
            }
        } else {
            write!(f, "{}", self.to_rle())?;
        }
        write!(f, ")")
    }
}

impl std::ops::Neg for &BitString {
    type Output = BitString;
    fn neg(self) -> BitString {
        self.negated()
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(EnsembleParams::new(0, 0).is_err());
        let p = EnsembleParams::new(3, 1).unwrap();
        assert_eq!(p.p(), 13);
        assert!(EnsembleParams::new_prime(3, 1).is_ok());
        assert!(EnsembleParams::new_prime(3, 0).is_err());
        assert!(p.niven_exceptions_removed());
        assert!(!EnsembleParams::new(3, 0).unwrap().niven_exceptions_removed());
        // p = 4*3+3 = 15 divisible by 3: exceptions not removed.
        assert!(!EnsembleParams::new(3, 3).unwrap().niven_exceptions_removed());
    }

    #[test]
    fn ones_layout() {
        let s = BitString::ones(EnsembleParams::new(3, 2).unwrap());
        assert_eq!(s.len(), 14);
        assert_eq!(s.count_plus(), 12);
        assert_eq!(s.count_null(), 2);
        assert_eq!(s.get(11), Bit::Plus);
        assert_eq!(s.get(12), Bit::Null);
        assert!(s.prefix_null_free());
    }

    #[test]
    fn negation_is_involution_and_fixes_nulls() {
        let params = EnsembleParams::new(2, 1).unwrap();
        let bits = vec![
            Bit::Plus,
            Bit::Minus,
            Bit::Minus,
            Bit::Plus,
            Bit::Plus,
            Bit::Plus,
            Bit::Minus,
            Bit::Plus,
            Bit::Null,
        ];
        let s = BitString::from_bits(params, &bits).unwrap();
        let n = s.negated();
        assert_eq!(n.get(0), Bit::Minus);
        assert_eq!(n.get(8), Bit::Null);
        assert_eq!(n.negated(), s);
    }

    #[test]
    fn from_bits_enforces_shape_and_null_count() {
        let params = EnsembleParams::new(1, 0).unwrap();
        assert!(matches!(
            BitString::from_bits(params, &[Bit::Plus; 3]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            BitString::from_bits(params, &[Bit::Plus, Bit::Plus, Bit::Plus, Bit::Null]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn large_string_counts() {
        let params = EnsembleParams::new(1_000_000, 0).unwrap();
        let s = BitString::ones(params);
        assert_eq!(s.count_plus(), 4_000_000);
        assert_eq!(s.negated().count_minus(), 4_000_000);
    }
}
