//! Concatenation of an outer code with a Bukh-Ma inner code, and the
//! sliding-window list decoder.

mod blocks;
mod decoder;
mod outer;

use serde::{Deserialize, Serialize};

pub use blocks::{block_error_counts, deletion_bucket, BlockErrors};
pub use decoder::{
    concat_decode, concat_decode_report, plan_rounds, qary_window_width, round_strings,
    window_width, ConcatDecodeReport, RoundPlan, RoundReport,
};
pub use outer::{
    substitute_outer, OuterCode, OuterCodeContract, SubstituteOuterCode, SubstituteSpec,
};

use crate::bukhma::BukhMaCode;
use crate::error::{invalid, Result};
use crate::rational::{self, int, is_open_unit, rat, Rational};
use crate::seq::Seq;

/// Parameters of a concatenated code.
#[derive(Clone, Debug)]
pub struct ConcatParams<O> {
    pub eps: Rational,
    pub q: u32,
    pub n_in: usize,
    pub inner: BukhMaCode,
    pub outer: O,
    pub eps_in: Rational,
}

impl<O: OuterCode> ConcatParams<O> {
    pub fn new(eps: Rational, inner: BukhMaCode, outer: O, eps_in: Rational) -> Result<Self> {
        let params = ConcatParams {
            eps,
            q: inner.q,
            n_in: inner.n,
            inner,
            outer,
            eps_in,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_open_unit(&self.eps) {
            return Err(invalid("eps must lie in (0, 1)"));
        }
        if !is_open_unit(&self.eps_in) {
            return Err(invalid("eps_in must lie in (0, 1)"));
        }
        let cap = eps_in_cap(&self.eps, self.q);
        if self.eps_in > cap {
            return Err(invalid(format!(
                "eps_in = {} exceeds {}",
                rational::format_rational(&self.eps_in),
                rational::format_rational(&cap)
            )));
        }
        if self.inner.q != self.q || self.inner.n != self.n_in {
            return Err(invalid("inner code does not match q and n_in"));
        }
        let sigma = self.outer.contract().sigma_out;
        if self.inner.len() < sigma {
            return Err(invalid(format!(
                "inner code has {} codewords but the outer alphabet has {sigma} symbols",
                self.inner.len()
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n_in * self.outer.contract().n_out
    }
}

/// `3·eps/16` for binary codes, `eps/16` otherwise.
pub fn eps_in_cap(eps: &Rational, q: u32) -> Rational {
    if q == 2 {
        eps * rat(3, 16)
    } else {
        eps * rat(1, 16)
    }
}

/// `1 - 3·eps^2/128` for binary codes, `1 - 3·eps^2/(128 q^2)` otherwise.
pub fn default_delta_out(eps: &Rational, q: u32) -> Rational {
    let scale = if q == 2 { 1 } else { (q as i128).pow(2) };
    int(1) - eps * eps * rat(3, 128 * scale)
}

/// `32·L_in/eps`.
pub fn default_gamma_out(eps: &Rational, list_in: usize) -> Rational {
    int(32 * list_in as i128) / eps
}

/// Replaces every outer symbol by its inner codeword.
pub fn concat_encode<O: OuterCode>(params: &ConcatParams<O>, message: usize) -> Result<Seq> {
    let word = params.outer.encode(message)?;
    let codewords = params.inner.codewords();
    let mut out = Vec::with_capacity(params.n());
    for sym in word {
        out.extend_from_slice(codewords[sym as usize].symbols());
    }
    Seq::new(params.q, out)
}

/// Serializable form of a concatenated code with a substitute outer code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcatDescriptor {
    #[serde(with = "rational::serde_str")]
    pub eps: Rational,
    #[serde(with = "rational::serde_str")]
    pub eps_in: Rational,
    pub inner: BukhMaCode,
    pub outer: SubstituteSpec,
}

impl ConcatDescriptor {
    pub fn build(&self) -> Result<ConcatParams<SubstituteOuterCode>> {
        ConcatParams::new(
            self.eps,
            self.inner.clone(),
            SubstituteOuterCode::from_spec(&self.outer)?,
            self.eps_in,
        )
    }
}
