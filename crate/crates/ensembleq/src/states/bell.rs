//! The entangled pair construction.
//!
//! For amplitude indices `m_a`, `m_b` the two parties hold the length-`8N`
//! strings
//!
//! ```text
//! B_a = i1^(m_a)(𝟙) || i1^(m_a)(-𝟙)
//! B_b = i1^(m_b)(-𝟙) || i1^(m_b)(𝟙)
//! ```
//!
//! Both contain equal numbers of `+1` and `-1` for every parameter choice,
//! and their correlation is exactly `|m_b - m_a|/N - 1`.

use crate::bits::{concat, correlation, interp_i1, BitString, EnsembleParams};
use crate::error::{Error, Result};
use crate::Rat;

#[derive(Clone, Debug, PartialEq)]
pub struct BellPair {
    b_a: BitString,
    b_b: BitString,
    m_a: u32,
    m_b: u32,
    params: EnsembleParams,
}

impl BellPair {
    pub fn alice(&self) -> &BitString {
        &self.b_a
    }

    pub fn bob(&self) -> &BitString {
        &self.b_b
    }

    pub fn m_a(&self) -> u32 {
        self.m_a
    }

    pub fn m_b(&self) -> u32 {
        self.m_b
    }

    /// Exact correlation between the two strings, `|m_b - m_a|/N - 1`.
    pub fn correlation(&self) -> Rat {
        correlation(&self.b_a, &self.b_b).expect("equal lengths, no nulls")
    }
}

/// Builds the pair at resolution `N` (null-free; parameters must carry
/// `n_X = 0`).
pub fn bell_pair(m_a: u32, m_b: u32, params: EnsembleParams) -> Result<BellPair> {
    if params.null_count() != 0 {
        return Err(Error::Config(
            "entangled pairs are defined on null-free parameters".into(),
        ));
    }
    let two_n = 2 * params.quarter_len();
    for (label, m) in [("m_a", m_a), ("m_b", m_b)] {
        if m > two_n {
            return Err(Error::Domain(format!("{label} = {m} exceeds 2N = {two_n}")));
        }
    }
    let one = BitString::ones(params);
    let s_a = interp_i1(&one, m_a)?;
    let s_b = interp_i1(&one, m_b)?;
    let b_a = concat(&[&s_a, &s_a.negated()])?;
    let b_b = concat(&[&s_b.negated(), &s_b])?;
    Ok(BellPair {
        b_a,
        b_b,
        m_a,
        m_b,
        params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn params(n: u32) -> EnsembleParams {
        EnsembleParams::new(n, 0).unwrap()
    }

    #[test]
    fn correlation_law_example() {
        let pair = bell_pair(0, 1, params(2)).unwrap();
        assert_eq!(pair.correlation(), Rat::new(-1, 2));
    }

    #[test]
    fn equal_indices_anticorrelate() {
        for m in 0..=6 {
            let pair = bell_pair(m, m, params(3)).unwrap();
            assert_eq!(pair.correlation(), Rat::new(-1, 1));
        }
    }

    #[test]
    fn exhaustive_law_small_n() {
        for n in 1u32..=8 {
            for m_a in 0..=2 * n {
                for m_b in 0..=2 * n {
                    let pair = bell_pair(m_a, m_b, params(n)).unwrap();
                    let expect = Rat::new((m_b as i64 - m_a as i64).abs(), n as i64) - 1;
                    assert_eq!(pair.correlation(), expect, "N={n} m_a={m_a} m_b={m_b}");
                    assert_eq!(pair.alice().count_plus(), 4 * n as u64);
                    assert_eq!(pair.alice().count_minus(), 4 * n as u64);
                    assert_eq!(pair.bob().count_plus(), 4 * n as u64);
                    assert_eq!(pair.bob().count_minus(), 4 * n as u64);
                }
            }
        }
    }

    #[test]
    fn range_and_param_errors() {
        assert!(matches!(bell_pair(5, 0, params(2)), Err(Error::Domain(_))));
        let with_nulls = EnsembleParams::new(2, 1).unwrap();
        assert!(matches!(bell_pair(0, 0, with_nulls), Err(Error::Config(_))));
    }

    #[test]
    fn strings_have_pair_resolution() {
        let pair = bell_pair(1, 2, params(4)).unwrap();
        assert_eq!(pair.alice().len(), 32);
        assert_eq!(pair.alice().params().quarter_len(), 8);
    }
}
