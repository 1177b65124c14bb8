//! Matchings, LCS, advantage functionals and weighted edit budgets.

mod bitlcs;
mod periodic;

use serde::{Deserialize, Serialize};

pub use bitlcs::{LcsKernel, Scanner};
pub use periodic::{
    advantage_periodic, alternating_symbol, periodic_advantage_with, qary_advantage_periodic,
    PeriodicAdvantage,
};

use crate::error::{invalid, Error, Result};
use crate::rational::{int, Rational};
use crate::seq::{ensure_same_alphabet, Seq};

/// A monotone alignment of equal symbols, as `(index in a, index in b)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        Matching { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn validate(&self, a: &Seq, b: &Seq) -> Result<()> {
        ensure_same_alphabet(a, b)?;
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            if i >= a.len() || j >= b.len() {
                return Err(Error::InvalidMatching(format!(
                    "pair #{k} ({i}, {j}) is out of bounds for lengths {} and {}",
                    a.len(),
                    b.len()
                )));
            }
            if a.symbols()[i] != b.symbols()[j] {
                return Err(Error::InvalidMatching(format!(
                    "pair #{k} ({i}, {j}) joins different symbols"
                )));
            }
            if k > 0 {
                let (pi, pj) = self.pairs[k - 1];
                if pi >= i || pj >= j {
                    return Err(Error::InvalidMatching(format!(
                        "pair #{k} ({i}, {j}) is not strictly after ({pi}, {pj})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A maximum matching between `a` and `b`.
pub fn lcs(a: &Seq, b: &Seq) -> Result<Matching> {
    ensure_same_alphabet(a, b)?;
    let kernel = LcsKernel::new(a.symbols());
    Ok(Matching::new(kernel.traceback(a.symbols(), b.symbols())))
}

pub fn lcs_len(a: &Seq, b: &Seq) -> Result<usize> {
    ensure_same_alphabet(a, b)?;
    Ok(LcsKernel::new(a.symbols()).lcs_len(b.symbols()))
}

/// Coefficients of the functional `(alpha|M| - |a| - beta|b|) / |a|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Functional {
    pub q: u32,
    pub order: u32,
}

impl Functional {
    pub const BINARY: Functional = Functional { q: 2, order: 1 };

    pub fn new(q: u32, order: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        if order == 0 || order >= q {
            return Err(invalid(format!(
                "advantage order must lie in 1..{}, got {order}",
                q - 1
            )));
        }
        Ok(Functional { q, order })
    }

    pub fn alpha(&self) -> i128 {
        2 * self.order as i128 + 1
    }

    pub fn beta(&self) -> Rational {
        let i = self.order as i128;
        Rational::new(i + i * i, self.q as i128)
    }

    pub fn value(&self, matched: usize, a_len: usize, b_len: usize) -> Rational {
        debug_assert!(a_len > 0);
        let raw = int(self.alpha() * matched as i128 - a_len as i128)
            - self.beta() * int(b_len as i128);
        raw / int(a_len as i128)
    }
}

fn nonempty(a: &Seq, what: &'static str) -> Result<()> {
    if a.is_empty() {
        return Err(Error::EmptySequence(what));
    }
    Ok(())
}

/// `(3|M| - |a| - |b|) / |a|`.
pub fn adv_of_matching(m: &Matching, a: &Seq, b: &Seq) -> Result<Rational> {
    nonempty(a, "adv_of_matching")?;
    m.validate(a, b)?;
    Ok(Functional::BINARY.value(m.len(), a.len(), b.len()))
}

pub fn advantage(a: &Seq, b: &Seq) -> Result<Rational> {
    nonempty(a, "advantage")?;
    Ok(Functional::BINARY.value(lcs_len(a, b)?, a.len(), b.len()))
}

/// `((2i+1)|M| - |a| - ((i+i^2)/q)|b|) / |a|`.
pub fn qary_adv_of_matching(m: &Matching, a: &Seq, b: &Seq, q: u32, i: u32) -> Result<Rational> {
    let f = Functional::new(q, i)?;
    nonempty(a, "qary_adv_of_matching")?;
    m.validate(a, b)?;
    Ok(f.value(m.len(), a.len(), b.len()))
}

pub fn qary_advantage(a: &Seq, b: &Seq, q: u32, i: u32) -> Result<Rational> {
    let f = Functional::new(q, i)?;
    nonempty(a, "qary_advantage")?;
    Ok(f.value(lcs_len(a, b)?, a.len(), b.len()))
}

/// Edit weights `I + 2z·D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetWeights {
    pub deletion_weight: u64,
    pub insertion_weight: u64,
    pub z: u32,
}

impl BudgetWeights {
    pub fn new(z: u32, q: u32) -> Result<Self> {
        if z == 0 || z >= q {
            return Err(invalid(format!("z must lie in 1..{}, got {z}", q.saturating_sub(1))));
        }
        Ok(Self::unchecked(z))
    }

    pub fn binary() -> Self {
        Self::unchecked(1)
    }

    fn unchecked(z: u32) -> Self {
        BudgetWeights {
            deletion_weight: 2 * z as u64,
            insertion_weight: 1,
            z,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditBudget {
    pub deletions: usize,
    pub insertions: usize,
    pub cost: u64,
}

impl EditBudget {
    pub fn from_lcs(x_len: usize, w_len: usize, matched: usize, weights: BudgetWeights) -> Self {
        let deletions = x_len - matched;
        let insertions = w_len - matched;
        EditBudget {
            deletions,
            insertions,
            cost: insertions as u64 * weights.insertion_weight
                + deletions as u64 * weights.deletion_weight,
        }
    }
}

/// Cheapest way to turn `x` into `w` with the given weights.
pub fn min_edit_budget(x: &Seq, w: &Seq, weights: BudgetWeights) -> Result<EditBudget> {
    let matched = lcs_len(x, w)?;
    Ok(EditBudget::from_lcs(x.len(), w.len(), matched, weights))
}
