//! Edit scripts and the insertion/deletion channel.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::seq::Seq;

/// One edit; positions refer to the string as it stands when the op runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum EditOp {
    #[serde(rename = "del")]
    Delete { pos: usize },
    #[serde(rename = "ins")]
    Insert { pos: usize, sym: u32 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EditScript {
    pub ops: Vec<EditOp>,
}

impl EditScript {
    pub fn new(ops: Vec<EditOp>) -> Self {
        EditScript { ops }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn extend(&mut self, other: EditScript) {
        self.ops.extend(other.ops);
    }

    /// The same script applied to a string embedded at `offset`.
    pub fn shifted(&self, offset: usize) -> EditScript {
        EditScript::new(
            self.ops
                .iter()
                .map(|op| match *op {
                    EditOp::Delete { pos } => EditOp::Delete { pos: pos + offset },
                    EditOp::Insert { pos, sym } => EditOp::Insert {
                        pos: pos + offset,
                        sym,
                    },
                })
                .collect(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptCost {
    pub deletions: usize,
    pub insertions: usize,
    pub weighted: u64,
}

pub fn apply_script(x: &Seq, s: &EditScript) -> Result<Seq> {
    let mut out = x.symbols().to_vec();
    for (op_index, op) in s.ops.iter().enumerate() {
        match *op {
            EditOp::Delete { pos } => {
                if pos >= out.len() {
                    return Err(Error::ScriptPosition {
                        op_index,
                        position: pos,
                        len: out.len(),
                    });
                }
                out.remove(pos);
            }
            EditOp::Insert { pos, sym } => {
                if pos > out.len() {
                    return Err(Error::ScriptPosition {
                        op_index,
                        position: pos,
                        len: out.len(),
                    });
                }
                if sym >= x.q() {
                    return Err(Error::SymbolOutOfRange { symbol: sym, q: x.q() });
                }
                out.insert(pos, sym);
            }
        }
    }
    Ok(Seq::from_parts(x.q(), out))
}

/// `D` uniformly placed deletions followed by `I` uniformly placed insertions
/// of uniform symbols.
pub fn random_script_with<R: Rng + ?Sized>(
    x: &Seq,
    deletions: usize,
    insertions: usize,
    rng: &mut R,
) -> Result<EditScript> {
    if deletions > x.len() {
        return Err(invalid(format!(
            "cannot delete {deletions} symbols from a string of length {}",
            x.len()
        )));
    }
    let mut len = x.len();
    let mut ops = Vec::with_capacity(deletions + insertions);
    for _ in 0..deletions {
        ops.push(EditOp::Delete {
            pos: rng.gen_range(0..len),
        });
        len -= 1;
    }
    for _ in 0..insertions {
        ops.push(EditOp::Insert {
            pos: rng.gen_range(0..=len),
            sym: rng.gen_range(0..x.q()),
        });
        len += 1;
    }
    Ok(EditScript::new(ops))
}

pub fn random_script(x: &Seq, deletions: usize, insertions: usize, seed: u64) -> Result<EditScript> {
    random_script_with(x, deletions, insertions, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn script_cost(s: &EditScript, z: u32) -> ScriptCost {
    let deletions = s
        .ops
        .iter()
        .filter(|op| matches!(op, EditOp::Delete { .. }))
        .count();
    let insertions = s.len() - deletions;
    ScriptCost {
        deletions,
        insertions,
        weighted: insertions as u64 + 2 * z as u64 * deletions as u64,
    }
}

/// Per-trial generator derived from a base seed.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}
