//! Inductive multi-qubit construction.
//!
//! A `K`-qubit state is `K` strings of `2^(K+1) N` bits driven by a binary
//! parameter tree of `2^K - 1` amplitude/phase pairs in preorder: the root
//! pair fills the bottom row with `2^(K-1)` copies of its single-qubit
//! string, and the two subtrees build the `K-1` rows above as the row-wise
//! concatenation of two `(K-1)`-states. Degrees of freedom: `2 (2^K - 1)`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::bits::{concat, BitString, EnsembleParams};
use crate::error::{Error, Result};
use crate::states::{bloch_state, SkeletonPoint};

#[derive(Clone, Debug, PartialEq)]
pub struct MultiQubitState {
    k: u32,
    params: EnsembleParams,
    /// `tree[0]` is the root (bottom row); subtrees follow in preorder.
    tree: Vec<(u32, u32)>,
    /// Row 0 is the top row; row `K-1` the bottom.
    strings: Vec<BitString>,
}

/// JSON sidecar stored next to the binary planes.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct KqubitSidecar {
    pub k: u32,
    pub n: u32,
    pub tree: Vec<(u32, u32)>,
}

impl MultiQubitState {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn params(&self) -> EnsembleParams {
        self.params
    }

    pub fn strings(&self) -> &[BitString] {
        &self.strings
    }

    pub fn tree(&self) -> &[(u32, u32)] {
        &self.tree
    }

    /// `2 (2^K - 1)`.
    pub fn degrees_of_freedom(&self) -> u64 {
        2 * ((1u64 << self.k) - 1)
    }

    /// Expected length of every row, `2^(K+1) N`.
    pub fn row_len(&self) -> usize {
        (1usize << (self.k + 1)) * self.params.quarter_len() as usize
    }

    pub fn sidecar(&self) -> KqubitSidecar {
        KqubitSidecar {
            k: self.k,
            n: self.params.quarter_len(),
            tree: self.tree.clone(),
        }
    }
}

fn build_rows(k: u32, tree: &[(u32, u32)], params: EnsembleParams) -> Result<Vec<BitString>> {
    let (m, n) = tree[0];
    let point = SkeletonPoint::new(m, n, params)?;
    let piece = bloch_state(&point);
    if k == 1 {
        return Ok(vec![piece]);
    }
    let half = tree.len() / 2; // 2^(K-1) - 1 per subtree after the root
    let left = build_rows(k - 1, &tree[1..1 + half], params)?;
    let right = build_rows(k - 1, &tree[1 + half..], params)?;
    let mut rows = Vec::with_capacity(k as usize);
    for (l, r) in left.iter().zip(&right) {
        rows.push(concat(&[l, r])?);
    }
    let copies: Vec<&BitString> = std::iter::repeat(&piece)
        .take(1 << (k - 1))
        .collect();
    rows.push(concat(&copies)?);
    Ok(rows)
}

/// Builds the `K`-qubit state from `2^K - 1` preorder parameter pairs.
pub fn kqubit_build(k: u32, tree: &[(u32, u32)], params: EnsembleParams) -> Result<MultiQubitState> {
    if k == 0 || k > 24 {
        return Err(Error::Domain(format!("qubit count K = {k} out of range")));
    }
    if params.null_count() != 0 {
        return Err(Error::Config(
            "multi-qubit states are defined on null-free parameters".into(),
        ));
    }
    let expected = (1usize << k) - 1;
    if tree.len() != expected {
        return Err(Error::Shape(format!(
            "K = {k} needs {expected} parameter pairs, got {}",
            tree.len()
        )));
    }
    let strings = build_rows(k, tree, params)?;
    let state = MultiQubitState {
        k,
        params,
        tree: tree.to_vec(),
        strings,
    };
    debug_assert!(state.strings.iter().all(|s| s.len() == state.row_len()));
    Ok(state)
}

const MAGIC: [u8; 4] = *b"EQKB";

/// Binary layout: magic `EQKB`, version byte, `K` byte, `N` as `u32` LE,
/// then the value plane of each row (top row first) as LE 64-bit words. The
/// parameter tree travels in the JSON sidecar.
pub fn write_kqubit_binary<W: Write>(state: &MultiQubitState, mut w: W) -> Result<()> {
    w.write_all(&MAGIC)?;
    w.write_all(&[1u8, state.k() as u8])?;
    w.write_all(&state.params().quarter_len().to_le_bytes())?;
    for row in state.strings() {
        let (value, _) = row.planes();
        for word in value {
            w.write_all(&word.to_le_bytes())?;
        }
    }
    Ok(())
}

/// Reads the binary planes back, checking them against the sidecar's
/// reconstruction.
pub fn read_kqubit_binary<R: Read>(mut r: R, sidecar: &KqubitSidecar) -> Result<MultiQubitState> {
    let mut header = [0u8; 10];
    r.read_exact(&mut header)?;
    if header[0..4] != MAGIC || header[4] != 1 {
        return Err(Error::Parse("bad multi-qubit binary header".into()));
    }
    let k = header[5] as u32;
    let n = u32::from_le_bytes(header[6..10].try_into().unwrap());
    if k != sidecar.k || n != sidecar.n {
        return Err(Error::Parse(format!(
            "binary header (K={k}, N={n}) disagrees with sidecar (K={}, N={})",
            sidecar.k, sidecar.n
        )));
    }
    let params = EnsembleParams::new(n, 0)?;
    let state = kqubit_build(k, &sidecar.tree, params)?;
    // The payload must match the reconstruction bit for bit.
    for row in state.strings() {
        let (value, _) = row.planes();
        for expect in value {
            let mut buf = [0u8; 8];
            r.read_exact(&mut buf)?;
            if u64::from_le_bytes(buf) != *expect {
                return Err(Error::Parse(
                    "multi-qubit planes disagree with the sidecar parameters".into(),
                ));
            }
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::cyc_shift;
    use crate::bits::interp_i1;

    fn params(n: u32) -> EnsembleParams {
        EnsembleParams::new(n, 0).unwrap()
    }

    #[test]
    fn k1_reduces_to_single_qubit() {
        let state = kqubit_build(1, &[(1, 1)], params(2)).unwrap();
        let point = SkeletonPoint::new(1, 1, params(2)).unwrap();
        assert_eq!(state.strings(), &[bloch_state(&point)]);
        assert_eq!(state.degrees_of_freedom(), 2);
    }

    #[test]
    fn k2_shape() {
        let state = kqubit_build(2, &[(0, 0), (1, 0), (2, 0)], params(3)).unwrap();
        assert_eq!(state.strings().len(), 2);
        assert_eq!(state.row_len(), 24);
        assert!(state.strings().iter().all(|s| s.len() == 24));
        assert_eq!(state.degrees_of_freedom(), 6);
    }

    #[test]
    fn k3_layout_matches_hand_construction() {
        let n = 2u32;
        let tree: Vec<(u32, u32)> = (0..7).map(|i| (i % 5, (i * 3) % 8)).collect();
        let state = kqubit_build(3, &tree, params(n)).unwrap();
        assert_eq!(state.strings().len(), 3);
        assert_eq!(state.row_len(), 32);
        assert_eq!(state.degrees_of_freedom(), 14);

        let piece = |idx: usize| {
            let (m, ph) = tree[idx];
            cyc_shift(
                &interp_i1(&BitString::ones(params(n)), m).unwrap(),
                ph as u64,
            )
        };
        // Preorder: root 0, left subtree (1; 2, 3), right subtree (4; 5, 6).
        let top = concat(&[&piece(2), &piece(3), &piece(5), &piece(6)]).unwrap();
        let middle = concat(&[&piece(1), &piece(1), &piece(4), &piece(4)]).unwrap();
        let bottom = concat(&[&piece(0), &piece(0), &piece(0), &piece(0)]).unwrap();
        assert_eq!(state.strings()[0], top);
        assert_eq!(state.strings()[1], middle);
        assert_eq!(state.strings()[2], bottom);
    }

    #[test]
    fn shape_scaling_up_to_k8() {
        let n = 2u32;
        for k in 1u32..=8 {
            let tree: Vec<(u32, u32)> = (0..(1usize << k) - 1)
                .map(|i| ((i % 5) as u32, (i % 7) as u32))
                .collect();
            let state = kqubit_build(k, &tree, params(n)).unwrap();
            assert_eq!(state.strings().len(), k as usize);
            assert_eq!(state.row_len(), (1usize << (k + 1)) * n as usize);
            assert!(state.strings().iter().all(|s| s.len() == state.row_len()));
            assert_eq!(state.degrees_of_freedom(), 2 * ((1u64 << k) - 1));
        }
    }

    #[test]
    fn wrong_tree_size_is_shape_error() {
        assert!(matches!(
            kqubit_build(2, &[(0, 0)], params(2)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn binary_round_trip() {
        let tree: Vec<(u32, u32)> = (0..7).map(|i| (i % 4, i % 6)).collect();
        let state = kqubit_build(3, &tree, params(2)).unwrap();
        let mut buf = Vec::new();
        write_kqubit_binary(&state, &mut buf).unwrap();
        let back = read_kqubit_binary(buf.as_slice(), &state.sidecar()).unwrap();
        assert_eq!(back, state);

        let mut wrong = state.sidecar();
        wrong.tree[0] = (3, 3);
        assert!(read_kqubit_binary(buf.as_slice(), &wrong).is_err());
    }
}
