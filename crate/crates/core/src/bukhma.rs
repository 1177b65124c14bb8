//! Alternating strings, Bukh-Ma codes and the brute-force inner list decoder.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::align::{alternating_symbol, LcsKernel};
use crate::error::{invalid, Error, Result};
use crate::rational::{self, is_open_unit, Rational};
use crate::seq::Seq;

/// Prefix of length `l` of `A^q_r`.
pub fn alternating_prefix(r: usize, l: usize, q: u32) -> Result<Seq> {
    if r == 0 {
        return Err(invalid("period r must be at least 1"));
    }
    if q < 2 {
        return Err(Error::AlphabetTooSmall(q));
    }
    Ok(Seq::from_parts(
        q,
        (0..l).map(|p| alternating_symbol(p, r, q)).collect(),
    ))
}

/// A Bukh-Ma code: codeword `k` is the length-`n` prefix of `A^q_{periods[k]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BukhMaCode {
    pub n: usize,
    #[serde(with = "rational::serde_str")]
    pub eps: Rational,
    pub q: u32,
    pub periods: Vec<usize>,
}

#[derive(Deserialize)]
struct RawCode {
    n: usize,
    #[serde(with = "rational::serde_str")]
    eps: Rational,
    q: u32,
    periods: Vec<usize>,
}

impl<'de> Deserialize<'de> for BukhMaCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawCode::deserialize(d)?;
        let code = BukhMaCode {
            n: raw.n,
            eps: raw.eps,
            q: raw.q,
            periods: raw.periods,
        };
        code.validate().map_err(serde::de::Error::custom)?;
        Ok(code)
    }
}

fn big(r: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Builds the code with periods `round((1/eps^4)^k)` for every `k` with
/// `(1/eps^4)^k < n`, dropping any period that would break the ratio ladder.
pub fn build_code(n: usize, eps: Rational, q: u32) -> Result<BukhMaCode> {
    if q < 2 {
        return Err(Error::AlphabetTooSmall(q));
    }
    if !is_open_unit(&eps) {
        return Err(invalid(format!(
            "eps must lie in (0, 1), got {}",
            rational::format_rational(&eps)
        )));
    }
    if n == 0 {
        return Err(invalid("block length n must be at least 1"));
    }
    let ratio = big(&ladder_ratio(&eps));
    let limit = BigRational::from_integer(BigInt::from(n));
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut periods: Vec<usize> = Vec::new();
    let mut power = BigRational::one();
    while power < limit {
        let r = (&power + &half).floor().to_integer();
        let keep = match periods.last() {
            None => true,
            Some(&prev) => {
                BigRational::from_integer(r.clone()) >= &ratio * BigInt::from(prev)
            }
        };
        if keep {
            periods.push(r.to_usize().expect("period below n"));
        }
        power *= &ratio;
    }
    if periods.len() < 2 {
        log::warn!(
            "Bukh-Ma code with n = {n} and eps = {} has a single codeword",
            rational::format_rational(&eps)
        );
    }
    Ok(BukhMaCode { n, eps, q, periods })
}

fn ladder_ratio(eps: &Rational) -> Rational {
    let e2 = eps * eps;
    (e2 * e2).recip()
}

impl BukhMaCode {
    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    pub fn codeword(&self, index: usize) -> Result<Seq> {
        let r = *self.periods.get(index).ok_or_else(|| {
            invalid(format!(
                "codeword index {index} out of range for a code of size {}",
                self.len()
            ))
        })?;
        alternating_prefix(r, self.n, self.q)
    }

    pub fn codewords(&self) -> Vec<Seq> {
        (0..self.len())
            .map(|k| self.codeword(k).expect("index in range"))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.q < 2 {
            return Err(Error::AlphabetTooSmall(self.q));
        }
        if !is_open_unit(&self.eps) {
            return Err(invalid("eps must lie in (0, 1)"));
        }
        if self.periods.first() != Some(&1) {
            return Err(invalid("the first period must be 1"));
        }
        let ratio = big(&ladder_ratio(&self.eps));
        for pair in self.periods.windows(2) {
            if BigRational::from_integer(BigInt::from(pair[1])) < &ratio * BigInt::from(pair[0]) {
                return Err(invalid(format!(
                    "periods {} and {} violate the 1/eps^4 ratio",
                    pair[0], pair[1]
                )));
            }
        }
        if self.periods.iter().any(|&r| r > self.n) {
            return Err(invalid("every period must be at most n"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Survivor {
    pub index: usize,
    pub period: usize,
    pub deletions: usize,
    pub insertions: usize,
    pub z: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InnerDecodeReport {
    pub survivors: Vec<Survivor>,
    pub list_size: usize,
}

/// `((2q-1)z - z^2)`, the numerator of the `z`-th boundary constant times `q`.
pub(crate) fn boundary_numerator(q: u32, z: u32) -> i128 {
    let (q, z) = (q as i128, z as i128);
    (2 * q - 1) * z - z * z
}

/// Smallest `z` in `1..q` with `I + 2zD <= (1 - eps)·n·((2q-1)z - z^2)/q`.
///
/// For `q = 2` this is the binary test `I + 2D <= (1 - eps)·n`.
pub fn budget_witness(n: usize, q: u32, eps: &Rational, deletions: usize, insertions: usize) -> Option<u32> {
    let (num, den) = (*eps.numer(), *eps.denom());
    let (d, i, n) = (deletions as i128, insertions as i128, n as i128);
    (1..q).find(|&z| {
        let lhs = q as i128 * (i + 2 * z as i128 * d) * den;
        lhs <= (den - num) * n * boundary_numerator(q, z)
    })
}

/// Inner decoder with one prepared LCS kernel per codeword.
#[derive(Clone, Debug)]
pub struct InnerDecoder {
    code: BukhMaCode,
    eps: Rational,
    kernels: Vec<LcsKernel>,
}

impl InnerDecoder {
    pub fn new(code: &BukhMaCode, eps: Rational) -> Result<Self> {
        if !is_open_unit(&eps) && !eps.is_zero() {
            return Err(invalid("decoding eps must lie in [0, 1)"));
        }
        let kernels = code
            .codewords()
            .iter()
            .map(|x| LcsKernel::new(x.symbols()))
            .collect();
        Ok(InnerDecoder {
            code: code.clone(),
            eps,
            kernels,
        })
    }

    pub fn code(&self) -> &BukhMaCode {
        &self.code
    }

    pub fn eps(&self) -> &Rational {
        &self.eps
    }

    pub(crate) fn kernels(&self) -> &[LcsKernel] {
        &self.kernels
    }

    /// Survivor record for codeword `index` given `LCS(x, w)` and `|w|`.
    pub fn judge(&self, index: usize, matched: usize, w_len: usize) -> Option<Survivor> {
        let deletions = self.code.n - matched;
        let insertions = w_len - matched;
        budget_witness(self.code.n, self.code.q, &self.eps, deletions, insertions).map(|z| Survivor {
            index,
            period: self.code.periods[index],
            deletions,
            insertions,
            z,
        })
    }

    pub fn decode_symbols(&self, w: &[u32]) -> InnerDecodeReport {
        let survivors: Vec<Survivor> = crate::par::map_indexed(self.kernels.len(), |k| {
            let matched = self.kernels[k].lcs_len(w);
            self.judge(k, matched, w.len())
        })
        .into_iter()
        .flatten()
        .collect();
        InnerDecodeReport {
            list_size: survivors.len(),
            survivors,
        }
    }

    pub fn decode(&self, w: &Seq) -> Result<InnerDecodeReport> {
        if w.q() != self.code.q {
            return Err(Error::AlphabetMismatch {
                left: w.q(),
                right: self.code.q,
            });
        }
        Ok(self.decode_symbols(w.symbols()))
    }
}

/// Lists every codeword whose minimal edit budget to `w` fits `eps`.
pub fn inner_list_decode(w: &Seq, code: &BukhMaCode, eps: Rational) -> Result<InnerDecodeReport> {
    InnerDecoder::new(code, eps)?.decode(w)
}
