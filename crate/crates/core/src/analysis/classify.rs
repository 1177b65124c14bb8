//! Block labels under the optimal matching into an alternating string.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::align::{advantage_periodic, alternating_symbol, qary_advantage_periodic, LcsKernel};
use crate::error::{invalid, Result};
use crate::rational::{self, int, Rational};
use crate::seq::Seq;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockLabel {
    /// Every matched position lies in one run of symbol `j`.
    Run(u32),
    /// The matched positions straddle a run border.
    Crossing,
    /// No position of the block is matched.
    Unmatched,
}

impl fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockLabel::Run(j) => write!(f, "U_{j}"),
            BlockLabel::Crossing => f.write_str("U_e"),
            BlockLabel::Unmatched => f.write_str("U_none"),
        }
    }
}

impl Serialize for BlockLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BlockLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        match raw.as_str() {
            "U_e" => Ok(BlockLabel::Crossing),
            "U_none" => Ok(BlockLabel::Unmatched),
            other => other
                .strip_prefix("U_")
                .and_then(|j| j.parse().ok())
                .map(BlockLabel::Run)
                .ok_or_else(|| serde::de::Error::custom(format!("unknown block label {raw:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub period: usize,
    pub block_len: usize,
    pub labels: Vec<BlockLabel>,
    pub counts: BTreeMap<String, usize>,
    pub crossing: usize,
    /// Length of the matched substring of `A^q_r`.
    pub span: usize,
    /// `(span - 1)/r + 1`, the most blocks that can cross a border.
    #[serde(with = "rational::serde_str")]
    pub crossing_bound: Rational,
}

/// Labels the length-`l` blocks of `v` using an advantage-optimal matching
/// into `A^q_r` (order `z` of the functional, 1 for binary).
pub fn classify_blocks(v: &Seq, r: usize, l: usize, z: u32) -> Result<Classification> {
    if l == 0 || r == 0 {
        return Err(invalid("period and block length must be positive"));
    }
    if v.len() % l != 0 {
        return Err(invalid(format!("block length {l} does not divide |v| = {}", v.len())));
    }
    let q = v.q();
    let best = if q == 2 && z == 1 {
        advantage_periodic(v, r, q)?
    } else {
        qary_advantage_periodic(v, r, q, z)?
    };
    let witness: Vec<u32> = (best.witness_start..best.witness_start + best.witness_len)
        .map(|p| alternating_symbol(p, r, q))
        .collect();
    let pairs = LcsKernel::new(v.symbols()).traceback(v.symbols(), &witness);

    let blocks = v.len() / l;
    let mut span: Vec<Option<(usize, usize)>> = vec![None; blocks];
    for (i, j) in pairs {
        let pos = best.witness_start + j;
        let slot = &mut span[i / l];
        *slot = Some(match *slot {
            None => (pos, pos),
            Some((lo, hi)) => (lo.min(pos), hi.max(pos)),
        });
    }
    let labels: Vec<BlockLabel> = span
        .iter()
        .map(|s| match *s {
            None => BlockLabel::Unmatched,
            Some((lo, hi)) if lo / r == hi / r => BlockLabel::Run(alternating_symbol(lo, r, q)),
            Some(_) => BlockLabel::Crossing,
        })
        .collect();
    let mut counts = BTreeMap::new();
    for label in &labels {
        *counts.entry(label.to_string()).or_insert(0) += 1;
    }
    let crossing = labels.iter().filter(|l| **l == BlockLabel::Crossing).count();
    let crossing_bound = int(best.witness_len.saturating_sub(1) as i128) / int(r as i128) + int(1);
    Ok(Classification {
        period: r,
        block_len: l,
        labels,
        counts,
        crossing,
        span: best.witness_len,
        crossing_bound,
    })
}
