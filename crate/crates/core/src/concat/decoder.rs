//! The round-based sliding-window decoder.

use serde::{Deserialize, Serialize};

use super::{ConcatParams, OuterCode};
use crate::bukhma::{boundary_numerator, InnerDecoder};
use crate::error::{invalid, Result};
use crate::rational::{int, rat, Rational};
use crate::seq::Seq;

fn ceil_div(num: &Rational) -> i128 {
    num.ceil().to_integer()
}

fn round_count(eps: &Rational, q: u32) -> u32 {
    let base = if q == 2 { int(8) } else { int(16 * q as i128) };
    ceil_div(&(base / eps)) as u32
}

/// `floor((2 - eps/4 - 3·eps·(i-1)/16) / (eps/16)) + 1`.
pub fn window_width(eps: &Rational, i: u32) -> Result<i64> {
    let rounds = round_count(eps, 2);
    if i == 0 || i > rounds {
        return Err(invalid(format!("round {i} outside 1..={rounds}")));
    }
    let span = int(2) - eps / int(4) - rat(3, 16) * eps * int(i as i128 - 1);
    Ok((span / (eps / int(16))).floor().to_integer() as i64 + 1)
}

/// `floor([1 + (1 - eps/4)·c_z/q - (eps/(16q))·(i-1)·(2z+1)] / (eps/16)) + 1`
/// with `c_z = (2q-1)z - z^2`. The value can be zero or negative for late
/// rounds, in which case the round has no window.
pub fn qary_window_width(eps: &Rational, i: u32, q: u32, z: u32) -> Result<i64> {
    let rounds = ceil_div(&(int(16 * q as i128) / eps)) as u32;
    if i == 0 || i > rounds {
        return Err(invalid(format!("round {i} outside 1..={rounds}")));
    }
    if z == 0 || z >= q {
        return Err(invalid(format!("z must lie in 1..{q}, got {z}")));
    }
    let qq = q as i128;
    let span = int(1) + (int(1) - eps / int(4)) * rat(boundary_numerator(q, z), qq)
        - eps / int(16 * qq) * int(i as i128 - 1) * int(2 * z as i128 + 1);
    Ok((span / (eps / int(16))).floor().to_integer() as i64 + 1)
}

/// One decoding round: its `z`, index, width in steps and window length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundPlan {
    pub z: u32,
    pub round: u32,
    pub width: i64,
    pub window_len: usize,
}

/// Window stride and every round for the given parameters.
pub fn plan_rounds(eps: &Rational, q: u32, n_in: usize) -> Result<(usize, Vec<RoundPlan>)> {
    let unit = eps * int(n_in as i128) / int(16);
    let stride_exact = if q == 2 { unit } else { unit / int(q as i128) };
    let stride = (stride_exact.floor().to_integer() as usize).max(1);
    let mut plans = Vec::new();
    let zs = if q == 2 { 1..2 } else { 1..q };
    for z in zs {
        for round in 1..=round_count(eps, q) {
            let width = if q == 2 {
                window_width(eps, round)?
            } else {
                qary_window_width(eps, round, q, z)?
            };
            let window_len = if width > 0 {
                ceil_div(&(unit * int(width as i128))) as usize
            } else {
                0
            };
            plans.push(RoundPlan {
                z,
                round,
                width,
                window_len,
            });
        }
    }
    Ok((stride, plans))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundReport {
    #[serde(flatten)]
    pub plan: RoundPlan,
    pub windows: usize,
    pub t_len: usize,
    pub list: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcatDecodeReport {
    pub stride: usize,
    pub rounds: Vec<RoundReport>,
    pub messages: Vec<usize>,
}

/// Number of stride-aligned starts for windows of length `len` over `n`
/// symbols: starts run until the first window that reaches the end.
fn window_count(n: usize, stride: usize, len: usize) -> usize {
    if n == 0 || len == 0 {
        0
    } else if len >= n {
        1
    } else {
        (n - len).div_ceil(stride) + 1
    }
}

/// The outer-symbol string `T` of every round, with its window count.
pub fn round_strings<O: OuterCode + Sync>(
    received: &Seq,
    params: &ConcatParams<O>,
) -> Result<(usize, Vec<(RoundPlan, usize, Vec<u32>)>)> {
    params.validate()?;
    if received.q() != params.q {
        return Err(crate::error::Error::AlphabetMismatch {
            left: received.q(),
            right: params.q,
        });
    }
    let (stride, plans) = plan_rounds(&params.eps, params.q, params.n_in)?;
    let decoder = InnerDecoder::new(&params.inner, params.eps_in)?;
    let sigma = params.outer.contract().sigma_out;
    let text = received.symbols();
    let n = text.len();
    let counts: Vec<usize> = plans
        .iter()
        .map(|p| window_count(n, stride, p.window_len))
        .collect();
    let starts = counts.iter().copied().max().unwrap_or(0);
    let longest = plans.iter().map(|p| p.window_len).max().unwrap_or(0);

    // survivors[start][plan] lists outer symbols surviving that window
    let survivors: Vec<Vec<Vec<u32>>> = crate::par::map_indexed(starts, |k| {
        let s = k * stride;
        let end = n.min(s + longest);
        let mut per_plan = vec![Vec::new(); plans.len()];
        for (idx, kernel) in decoder.kernels().iter().enumerate().take(sigma) {
            let prefix = kernel.prefix_lcs(&text[s..end]);
            for (p, plan) in plans.iter().enumerate() {
                if k >= counts[p] {
                    continue;
                }
                let len = plan.window_len.min(n - s);
                if decoder.judge(idx, prefix[len], len).is_some() {
                    per_plan[p].push(idx as u32);
                }
            }
        }
        per_plan
    });

    let out = plans
        .iter()
        .enumerate()
        .map(|(p, plan)| {
            let t: Vec<u32> = survivors[..counts[p]]
                .iter()
                .flat_map(|row| row[p].iter().copied())
                .collect();
            (*plan, counts[p], t)
        })
        .collect();
    Ok((stride, out))
}

pub fn concat_decode_report<O: OuterCode + Sync>(
    received: &Seq,
    params: &ConcatParams<O>,
) -> Result<ConcatDecodeReport> {
    let (stride, strings) = round_strings(received, params)?;
    let mut messages = Vec::new();
    let mut rounds = Vec::with_capacity(strings.len());
    for (plan, windows, t) in strings {
        let list = if t.is_empty() {
            Vec::new()
        } else {
            params.outer.list_decode(&t)?
        };
        messages.extend_from_slice(&list);
        rounds.push(RoundReport {
            plan,
            windows,
            t_len: t.len(),
            list,
        });
    }
    messages.sort_unstable();
    messages.dedup();
    Ok(ConcatDecodeReport {
        stride,
        rounds,
        messages,
    })
}

/// Union over all rounds of the outer lists.
pub fn concat_decode<O: OuterCode + Sync>(received: &Seq, params: &ConcatParams<O>) -> Result<Vec<usize>> {
    Ok(concat_decode_report(received, params)?.messages)
}
