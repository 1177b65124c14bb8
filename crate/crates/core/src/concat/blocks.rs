//! Per-block bookkeeping of a corruption transcript.

use serde::{Deserialize, Serialize};

use crate::channel::{EditOp, EditScript};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockErrors {
    pub deletions: usize,
    pub insertions: usize,
}

impl BlockErrors {
    /// `I + 2z·D`.
    pub fn error_count(&self, z: u32) -> u64 {
        self.insertions as u64 + 2 * z as u64 * self.deletions as u64
    }
}

/// Attributes every op of `script`, applied to a string of `n_out` blocks of
/// length `n_in`, to one block. A deletion belongs to the block that owns the
/// deleted symbol; an insertion belongs to the block owning its left
/// neighbour, or the first block when inserted at the very front.
pub fn block_error_counts(n_in: usize, n_out: usize, script: &EditScript) -> Result<Vec<BlockErrors>> {
    let mut owner: Vec<usize> = (0..n_in * n_out).map(|p| p / n_in).collect();
    let mut counts = vec![BlockErrors::default(); n_out];
    for (op_index, op) in script.ops.iter().enumerate() {
        match *op {
            EditOp::Delete { pos } => {
                if pos >= owner.len() {
                    return Err(Error::ScriptPosition {
                        op_index,
                        position: pos,
                        len: owner.len(),
                    });
                }
                counts[owner.remove(pos)].deletions += 1;
            }
            EditOp::Insert { pos, .. } => {
                if pos > owner.len() {
                    return Err(Error::ScriptPosition {
                        op_index,
                        position: pos,
                        len: owner.len(),
                    });
                }
                let block = if pos == 0 {
                    owner.first().copied().unwrap_or(0)
                } else {
                    owner[pos - 1]
                };
                counts[block].insertions += 1;
                owner.insert(pos, block);
            }
        }
    }
    Ok(counts)
}

/// The round `i` whose deletion bucket
/// `[n_in·(eps/(16·s))·(i-1), n_in·(eps/(16·s))·i)` holds `deletions`, where
/// `s = 1` for binary codes and `s = q` otherwise.
pub fn deletion_bucket(deletions: usize, n_in: usize, eps: &Rational, q: u32) -> u32 {
    let scale = if q == 2 { 16 } else { 16 * q as i128 };
    let width = eps * int(n_in as i128) / int(scale);
    (int(deletions as i128) / width).floor().to_integer() as u32 + 1
}
