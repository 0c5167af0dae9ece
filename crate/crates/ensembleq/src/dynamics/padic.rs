//! Ultrametric distance on base-`p` digit labels.
//!
//! Two trajectory labels that agree on their first `k` digits sit at
//! distance `p^-k`; identical labels are at distance zero. The natural base
//! is the governing string length `p = 4N + n_X`.

use serde::{Deserialize, Serialize};

use crate::bits::EnsembleParams;
use crate::error::{Error, Result};

/// A finite base-`p` digit sequence labelling a trajectory bundle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PAdicLabel {
    base: u64,
    digits: Vec<u32>,
}

impl PAdicLabel {
    pub fn new(base: u64, digits: Vec<u32>) -> Result<Self> {
        if base < 2 {
            return Err(Error::Domain(format!("base {base} must be at least 2")));
        }
        if digits.is_empty() {
            return Err(Error::Domain("labels need at least one digit".into()));
        }
        if let Some(bad) = digits.iter().find(|&&d| d as u64 >= base) {
            return Err(Error::Domain(format!(
                "digit {bad} out of range for base {base}"
            )));
        }
        Ok(Self { base, digits })
    }

    /// Uses the governing ensemble length `p = 4N + n_X` as the base.
    pub fn with_params_base(params: EnsembleParams, digits: Vec<u32>) -> Result<Self> {
        Self::new(params.p(), digits)
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }
}

/// Distance `p^-k` as the exact pair `(p, k)`; `prefix = None` means the
/// labels are identical and the distance is zero.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicDistance {
    pub base: u64,
    /// Length of the longest common prefix, when the labels differ.
    pub prefix: Option<usize>,
}

impl PadicDistance {
    pub fn is_zero(&self) -> bool {
        self.prefix.is_none()
    }

    pub fn as_f64(&self) -> f64 {
        match self.prefix {
            None => 0.0,
            Some(k) => (self.base as f64).powi(-(k as i32)),
        }
    }
}

impl PartialOrd for PadicDistance {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        if self.base != other.base {
            return None;
        }
        Some(match (self.prefix, other.prefix) {
            (None, None) => std::cmp::Ordering::Equal,
            (None, Some(_)) => std::cmp::Ordering::Less,
            (Some(_), None) => std::cmp::Ordering::Greater,
            // Longer common prefix = smaller distance.
            (Some(a), Some(b)) => b.cmp(&a),
        })
    }
}

/// The ultrametric distance between two labels of equal base and length.
pub fn padic_distance(u: &PAdicLabel, v: &PAdicLabel) -> Result<PadicDistance> {
    if u.base != v.base {
        return Err(Error::Shape(format!(
            "bases differ: {} vs {}",
            u.base, v.base
        )));
    }
    if u.digits.len() != v.digits.len() {
        return Err(Error::Shape(format!(
            "digit counts differ: {} vs {}",
            u.digits.len(),
            v.digits.len()
        )));
    }
    let prefix = u
        .digits
        .iter()
        .zip(&v.digits)
        .position(|(a, b)| a != b);
    Ok(PadicDistance {
        base: u.base,
        prefix,
    })
}
