//! Outer code contract and the seeded random substitute.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::align::LcsKernel;
use crate::error::{invalid, Error, Result};
use crate::rational::{self, int, is_nonneg, Rational};

/// Parameters promised by an outer list-decodable code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OuterCodeContract {
    pub sigma_out: usize,
    pub n_out: usize,
    #[serde(with = "rational::serde_str")]
    pub delta_out: Rational,
    #[serde(with = "rational::serde_str")]
    pub gamma_out: Rational,
    pub list_cap: usize,
}

impl OuterCodeContract {
    /// Whether `received` can come from a codeword of length `n_out` with
    /// `matched` symbols kept, within both tolerances.
    pub fn within_budget(&self, matched: usize, received_len: usize) -> bool {
        let n = int(self.n_out as i128);
        let deletions = int((self.n_out - matched) as i128);
        let insertions = int((received_len - matched) as i128);
        deletions <= self.delta_out * n && insertions <= self.gamma_out * n
    }
}

/// The capabilities the concatenated decoder relies on.
pub trait OuterCode {
    fn contract(&self) -> &OuterCodeContract;

    fn message_count(&self) -> usize;

    fn encode(&self, message: usize) -> Result<Vec<u32>>;

    /// Every message whose codeword is within the contract budgets of
    /// `received`, in ascending order.
    fn list_decode(&self, received: &[u32]) -> Result<Vec<usize>>;
}

/// A seeded random code of distinct codewords with brute-force list decoding.
#[derive(Clone, Debug)]
pub struct SubstituteOuterCode {
    contract: OuterCodeContract,
    seed: u64,
    codebook: Vec<Vec<u32>>,
    kernels: Vec<LcsKernel>,
}

/// Serializable recipe for a [`SubstituteOuterCode`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstituteSpec {
    #[serde(flatten)]
    pub contract: OuterCodeContract,
    pub message_count: usize,
    pub seed: u64,
}

impl SubstituteOuterCode {
    pub fn new(contract: OuterCodeContract, message_count: usize, seed: u64) -> Result<Self> {
        let (sigma, n) = (contract.sigma_out, contract.n_out);
        if sigma < 2 {
            return Err(invalid("outer alphabet needs at least 2 symbols"));
        }
        if n == 0 {
            return Err(invalid("outer block length must be positive"));
        }
        if !is_nonneg(&contract.delta_out) || !is_nonneg(&contract.gamma_out) {
            return Err(invalid("outer tolerances must be non-negative"));
        }
        let total = (sigma as f64).powi(n as i32);
        if (message_count as f64) > total {
            return Err(invalid(format!(
                "cannot draw {message_count} distinct words of length {n} over {sigma} symbols"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let codebook = if total <= 65536.0 && message_count as f64 * 2.0 > total {
            let mut all: Vec<Vec<u32>> = (0..total as usize).map(|k| digits(k, sigma, n)).collect();
            all.shuffle(&mut rng);
            all.truncate(message_count);
            all
        } else {
            let mut seen = HashSet::new();
            let mut book = Vec::with_capacity(message_count);
            while book.len() < message_count {
                let word: Vec<u32> = (0..n).map(|_| rng.gen_range(0..sigma as u32)).collect();
                if seen.insert(word.clone()) {
                    book.push(word);
                }
            }
            book
        };
        let kernels = codebook.iter().map(|w| LcsKernel::new(w)).collect();
        Ok(SubstituteOuterCode {
            contract,
            seed,
            codebook,
            kernels,
        })
    }

    pub fn from_spec(spec: &SubstituteSpec) -> Result<Self> {
        Self::new(spec.contract.clone(), spec.message_count, spec.seed)
    }

    pub fn spec(&self) -> SubstituteSpec {
        SubstituteSpec {
            contract: self.contract.clone(),
            message_count: self.codebook.len(),
            seed: self.seed,
        }
    }

    pub fn codebook(&self) -> &[Vec<u32>] {
        &self.codebook
    }

    /// `LCS(codeword(message), received)`.
    pub fn agreement(&self, message: usize, received: &[u32]) -> usize {
        self.kernels[message].lcs_len(received)
    }
}

fn digits(mut k: usize, base: usize, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for slot in out.iter_mut().rev() {
        *slot = (k % base) as u32;
        k /= base;
    }
    out
}

/// Substitute outer code for `sigma_out`, `n_out` with the given tolerances.
pub fn substitute_outer(
    sigma_out: usize,
    n_out: usize,
    message_count: usize,
    seed: u64,
    delta_out: Rational,
    gamma_out: Rational,
) -> Result<SubstituteOuterCode> {
    SubstituteOuterCode::new(
        OuterCodeContract {
            sigma_out,
            n_out,
            delta_out,
            gamma_out,
            list_cap: message_count,
        },
        message_count,
        seed,
    )
}

impl OuterCode for SubstituteOuterCode {
    fn contract(&self) -> &OuterCodeContract {
        &self.contract
    }

    fn message_count(&self) -> usize {
        self.codebook.len()
    }

    fn encode(&self, message: usize) -> Result<Vec<u32>> {
        self.codebook.get(message).cloned().ok_or_else(|| {
            invalid(format!(
                "message {message} out of range for {} messages",
                self.codebook.len()
            ))
        })
    }

    fn list_decode(&self, received: &[u32]) -> Result<Vec<usize>> {
        let hits: Vec<usize> = crate::par::map_indexed(self.kernels.len(), |m| {
            let matched = self.kernels[m].lcs_len(received);
            self.contract.within_budget(matched, received.len())
        })
        .into_iter()
        .enumerate()
        .filter_map(|(m, ok)| ok.then_some(m))
        .collect();
        if hits.len() > self.contract.list_cap {
            return Err(Error::ListOverflow {
                cap: self.contract.list_cap,
                found: hits.len(),
            });
        }
        Ok(hits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn code(count: usize) -> SubstituteOuterCode {
        substitute_outer(8, 12, count, 5, rat(1, 2), int(4)).unwrap()
    }

    #[test]
    fn distinct_and_reproducible() {
        let c = code(40);
        let set: HashSet<_> = c.codebook().iter().collect();
        assert_eq!(set.len(), 40);
        assert_eq!(c.codebook(), code(40).codebook());
        let tiny = substitute_outer(2, 3, 8, 1, rat(1, 2), int(1)).unwrap();
        assert_eq!(tiny.codebook().iter().collect::<HashSet<_>>().len(), 8);
        assert!(substitute_outer(2, 3, 9, 1, rat(1, 2), int(1)).is_err());
    }

    #[test]
    fn decode_examples() {
        let c = code(40);
        for m in [0usize, 17, 39] {
            let word = c.encode(m).unwrap();
            assert!(c.list_decode(&word).unwrap().contains(&m));
            let mut cut = word.clone();
            for _ in 0..6 {
                cut.remove(cut.len() / 2);
            }
            assert!(c.list_decode(&cut).unwrap().contains(&m));
        }
        assert!(c.list_decode(&[]).unwrap().is_empty());
        assert!(c.encode(40).is_err());
    }

    #[test]
    fn overflow_is_loud() {
        let mut contract = code(40).contract().clone();
        contract.list_cap = 1;
        contract.delta_out = int(1);
        contract.gamma_out = int(10);
        let c = SubstituteOuterCode::new(contract, 40, 5).unwrap();
        assert!(matches!(c.list_decode(&[0, 1, 2]), Err(Error::ListOverflow { cap: 1, .. })));
    }

    #[test]
    fn insertion_budget_is_enforced() {
        let c = substitute_outer(8, 12, 10, 5, rat(1, 2), rat(1, 4)).unwrap();
        let mut word = c.encode(3).unwrap();
        word.extend(std::iter::repeat(0).take(4));
        assert!(!c.list_decode(&word).unwrap().contains(&3));
        word.truncate(15);
        assert!(c.list_decode(&word).unwrap().contains(&3));
    }
}
