//! Advantage against the infinite alternating string `A^q_r`.

use serde::{Deserialize, Serialize};

use super::{nonempty, Functional, LcsKernel};
use crate::error::{invalid, Error, Result};
use crate::rational::{self, int, Rational};
use crate::seq::Seq;

/// Symbol at position `pos` of `A^q_r = (0^r 1^r ... (q-1)^r)^∞`.
#[inline]
pub fn alternating_symbol(pos: usize, r: usize, q: u32) -> u32 {
    ((pos / r) % q as usize) as u32
}

/// Best substring `A^q_r[start, start + len)` and its advantage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicAdvantage {
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    pub witness_start: usize,
    pub witness_len: usize,
    pub matched: usize,
}

impl PeriodicAdvantage {
    pub fn witness(&self, r: usize, q: u32) -> Seq {
        Seq::from_parts(
            q,
            (self.witness_start..self.witness_start + self.witness_len)
                .map(|p| alternating_symbol(p, r, q))
                .collect(),
        )
    }
}

/// Maximum of the functional over all non-empty substrings of `A^q_r`.
///
/// Every start offset inside one period `q·r` is scanned. A start stops
/// growing once `len >= |a|` and even a perfect match of `a` could no longer
/// beat the best value seen, which makes the search exact. Ties keep the
/// earliest start, then the shortest length.
pub fn periodic_advantage_with(a: &[u32], r: usize, f: Functional) -> Result<PeriodicAdvantage> {
    if a.is_empty() {
        return Err(Error::EmptySequence("advantage_periodic"));
    }
    if r == 0 {
        return Err(invalid("period r must be at least 1"));
    }
    let m = a.len();
    let kernel = LcsKernel::new(a);
    let alpha = f.alpha();
    let beta = f.beta();
    let full = int(alpha * m as i128 - m as i128);
    let mut best: Option<PeriodicAdvantage> = None;
    for start in 0..f.q as usize * r {
        let mut scan = kernel.scanner();
        let mut len = 0usize;
        loop {
            let matched = scan.push(alternating_symbol(start + len, r, f.q));
            len += 1;
            let value = f.value(matched, m, len);
            if best.as_ref().map_or(true, |b| value > b.value) {
                best = Some(PeriodicAdvantage {
                    value,
                    witness_start: start,
                    witness_len: len,
                    matched,
                });
            }
            if len >= m {
                let ceiling = (full - beta * int(len as i128)) / int(m as i128);
                if ceiling <= best.as_ref().expect("set above").value {
                    break;
                }
            }
        }
    }
    Ok(best.expect("at least one start offset"))
}

fn check_q(a: &Seq, q: u32) -> Result<()> {
    if a.q() != q {
        return Err(Error::AlphabetMismatch {
            left: a.q(),
            right: q,
        });
    }
    Ok(())
}

/// `max` over substrings `b'` of `A_r` of `advantage(a, b')`.
pub fn advantage_periodic(a: &Seq, r: usize, q: u32) -> Result<PeriodicAdvantage> {
    check_q(a, q)?;
    nonempty(a, "advantage_periodic")?;
    periodic_advantage_with(a.symbols(), r, Functional::new(q, 1)?)
}

pub fn qary_advantage_periodic(a: &Seq, r: usize, q: u32, i: u32) -> Result<PeriodicAdvantage> {
    check_q(a, q)?;
    nonempty(a, "qary_advantage_periodic")?;
    periodic_advantage_with(a.symbols(), r, Functional::new(q, i)?)
}
