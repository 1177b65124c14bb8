//! Exhaustive version of the nested-substring process.
//!
//! Level `i` splits `v` into blocks of length `l_i = round(r_i·eps^2)`.
//! Every parent block splits into the same number of children, so picking a
//! child of a uniformly random parent is the uniform distribution over all
//! level-`i` blocks, and expectations are exact averages.

use serde::{Deserialize, Serialize};

use crate::align::{periodic_advantage_with, alternating_symbol, Functional, LcsKernel};
use crate::error::{invalid, Error, Result};
use crate::rational::{self, int, rat, Rational};
use crate::seq::{Seq, SymbolStats};

/// How to reconcile `|v|` with the first block length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Padding {
    /// Fail unless `l_1` divides `|v|`.
    Exact,
    /// Drop the tail beyond the largest multiple of `l_1`.
    Truncate,
    /// Extend `v` as a prefix of `A^q_r`.
    ContinueAlternating { r: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MartingaleConfig {
    #[serde(with = "rational::serde_str")]
    pub eps: Rational,
    /// Descending period ladder `r_1 > r_2 > ...`.
    pub periods: Vec<usize>,
    /// Order of the advantage functional; 1 gives the binary advantage.
    pub z: u32,
    pub padding: Padding,
}

impl MartingaleConfig {
    pub fn new(eps: Rational, periods: Vec<usize>) -> Self {
        MartingaleConfig {
            eps,
            periods,
            z: 1,
            padding: Padding::Exact,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockStat {
    pub counts: Vec<usize>,
    #[serde(with = "rational::serde_str")]
    pub advantage: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    pub level: usize,
    pub period: usize,
    pub block_len: usize,
    pub block_count: usize,
    #[serde(with = "rational::serde_str_vec")]
    pub mean_freq: Vec<Rational>,
    /// `sum_p Var(F^p_i)`.
    #[serde(with = "rational::serde_str")]
    pub freq_variance: Rational,
    /// `E[B_i]` and `Var(B_i)`, binary only.
    #[serde(with = "opt_rational", default)]
    pub mean_bias: Option<Rational>,
    #[serde(with = "opt_rational", default)]
    pub var_bias: Option<Rational>,
    /// `E[A_i]`; absent at level 0.
    #[serde(with = "opt_rational", default)]
    pub mean_advantage: Option<Rational>,
    /// `adv(v, A_{r_i, |v|})`, the lower bound for `E[A_i]`.
    #[serde(with = "opt_rational", default)]
    pub advantage_floor: Option<Rational>,
    pub blocks: Vec<BlockStat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MartingaleTrace {
    pub q: u32,
    pub config: MartingaleConfig,
    pub original_len: usize,
    pub used_len: usize,
    pub levels: Vec<LevelStats>,
}

mod opt_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_some(&rational::format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        let raw = Option::<String>::deserialize(d)?;
        raw.map(|s| rational::parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// `round(r·eps^2)`, at least 1.
pub fn block_length(r: usize, eps: &Rational) -> usize {
    let exact = eps * eps * int(r as i128);
    let rounded = (exact + rat(1, 2)).floor().to_integer();
    (rounded as usize).max(1)
}

fn level_stats(
    symbols: &[u32],
    q: u32,
    level: usize,
    period: usize,
    block_len: usize,
    functional: Option<Functional>,
) -> Result<LevelStats> {
    let n = symbols.len();
    let block_count = n / block_len;
    let blocks: Vec<BlockStat> = crate::par::map_indexed(block_count, |b| {
        let chunk = &symbols[b * block_len..(b + 1) * block_len];
        let counts = SymbolStats::of_slice(q, chunk).counts;
        let advantage = match functional {
            Some(f) => periodic_advantage_with(chunk, period, f).map(|a| a.value),
            None => Ok(int(0)),
        };
        advantage.map(|advantage| BlockStat { counts, advantage })
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let m = block_count as i128;
    let l = block_len as i128;
    let mut mean_freq = Vec::with_capacity(q as usize);
    let mut freq_variance = int(0);
    for p in 0..q as usize {
        let s1: i128 = blocks.iter().map(|b| b.counts[p] as i128).sum();
        let s2: i128 = blocks.iter().map(|b| (b.counts[p] as i128).pow(2)).sum();
        let mean = Rational::new(s1, m * l);
        freq_variance += Rational::new(s2, m * l * l) - mean * mean;
        mean_freq.push(mean);
    }
    let (mean_bias, var_bias) = if q == 2 {
        let signed = |b: &BlockStat| 2 * b.counts[1] as i128 - l;
        let s1: i128 = blocks.iter().map(signed).sum();
        let s2: i128 = blocks.iter().map(|b| signed(b).pow(2)).sum();
        let mean = Rational::new(s1, m * l);
        (Some(mean), Some(Rational::new(s2, m * l * l) - mean * mean))
    } else {
        (None, None)
    };
    let (mean_advantage, advantage_floor) = match functional {
        Some(f) => {
            let total = blocks.iter().fold(int(0), |acc, b| acc + b.advantage);
            let prefix: Vec<u32> = (0..n).map(|p| alternating_symbol(p, period, q)).collect();
            let matched = LcsKernel::new(symbols).lcs_len(&prefix);
            (Some(total / int(m)), Some(f.value(matched, n, n)))
        }
        None => (None, None),
    };
    Ok(LevelStats {
        level,
        period,
        block_len,
        block_count,
        mean_freq,
        freq_variance,
        mean_bias,
        var_bias,
        mean_advantage,
        advantage_floor,
        blocks,
    })
}

/// Full distribution of bias, frequencies and advantage at every level.
pub fn martingale_trace(v: &Seq, config: &MartingaleConfig) -> Result<MartingaleTrace> {
    let q = v.q();
    if v.is_empty() {
        return Err(Error::EmptySequence("martingale_trace"));
    }
    if config.periods.is_empty() {
        return Err(invalid("the period ladder is empty"));
    }
    if config.periods.windows(2).any(|w| w[0] <= w[1]) || config.periods.contains(&0) {
        return Err(invalid("periods must be positive and strictly descending"));
    }
    let functional = Functional::new(q, config.z)?;
    let lens: Vec<usize> = config
        .periods
        .iter()
        .map(|&r| block_length(r, &config.eps))
        .collect();

    let mut symbols = v.symbols().to_vec();
    let first = lens[0];
    if symbols.len() % first != 0 {
        match config.padding {
            Padding::Exact => {
                return Err(Error::Divisibility {
                    level: 1,
                    block_len: first,
                    parent_len: symbols.len(),
                })
            }
            Padding::Truncate => {
                let keep = symbols.len() / first * first;
                if keep == 0 {
                    return Err(invalid("truncation leaves an empty string"));
                }
                symbols.truncate(keep);
            }
            Padding::ContinueAlternating { r } => {
                if r == 0 {
                    return Err(invalid("padding period must be positive"));
                }
                let target = symbols.len().div_ceil(first) * first;
                let start = symbols.len();
                symbols.extend((start..target).map(|p| alternating_symbol(p, r, q)));
            }
        }
    }
    let mut parent = symbols.len();
    for (k, &l) in lens.iter().enumerate() {
        if parent % l != 0 {
            return Err(Error::Divisibility {
                level: k + 1,
                block_len: l,
                parent_len: parent,
            });
        }
        parent = l;
    }

    let mut levels = vec![level_stats(&symbols, q, 0, 0, symbols.len(), None)?];
    levels[0].blocks.clear();
    for (k, (&r, &l)) in config.periods.iter().zip(&lens).enumerate() {
        levels.push(level_stats(&symbols, q, k + 1, r, l, Some(functional))?);
    }
    Ok(MartingaleTrace {
        q,
        config: config.clone(),
        original_len: v.len(),
        used_len: symbols.len(),
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{bias, freq_vector};
    use proptest::prelude::*;

    #[test]
    fn two_block_example() {
        let v = Seq::parse(2, &format!("{}{}", "0".repeat(16), "1".repeat(16))).unwrap();
        let trace = martingale_trace(&v, &MartingaleConfig::new(rat(1, 2), vec![16])).unwrap();
        let level = &trace.levels[1];
        assert_eq!(level.block_len, 4);
        assert_eq!(level.block_count, 8);
        assert_eq!(level.mean_bias, Some(int(0)));
        assert_eq!(level.var_bias, Some(int(1)));
        assert_eq!(trace.levels[0].var_bias, Some(int(0)));
    }

    #[test]
    fn padding_modes() {
        let v = Seq::parse(2, "0101010101").unwrap();
        let mut cfg = MartingaleConfig::new(rat(1, 2), vec![16]);
        assert!(matches!(martingale_trace(&v, &cfg), Err(Error::Divisibility { level: 1, .. })));
        cfg.padding = Padding::Truncate;
        assert_eq!(martingale_trace(&v, &cfg).unwrap().used_len, 8);
        cfg.padding = Padding::ContinueAlternating { r: 1 };
        let trace = martingale_trace(&v, &cfg).unwrap();
        assert_eq!(trace.used_len, 12);
        assert_eq!(trace.levels[0].mean_bias, Some(int(0)));
    }

    #[test]
    fn inner_divisibility_is_reported() {
        let v = Seq::new(2, vec![0; 48]).unwrap();
        let cfg = MartingaleConfig::new(rat(1, 2), vec![48, 20]);
        assert!(matches!(
            martingale_trace(&v, &cfg),
            Err(Error::Divisibility { level: 2, block_len: 5, parent_len: 12 })
        ));
        assert_eq!(block_length(3, &rat(1, 2)), 1);
        assert_eq!(block_length(1, &rat(1, 4)), 1);
        assert_eq!(block_length(10, &rat(1, 2)), 3);
    }

    fn arb_case() -> impl Strategy<Value = (Seq, Vec<usize>)> {
        (2u32..4, 0usize..3, any::<u64>()).prop_map(|(q, ladder, seed)| {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let periods = [vec![64, 16, 4], vec![32, 8], vec![128, 32, 8, 4]][ladder].clone();
            let blocks = rng.gen_range(1..4) * periods[0] / 4;
            let run = rng.gen_range(1..9);
            let s: Vec<u32> = (0..blocks)
                .map(|p| if rng.gen_bool(0.2) { rng.gen_range(0..q) } else { ((p / run) % q as usize) as u32 })
                .collect();
            (Seq::new(q, s).unwrap(), periods)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn exact_identities((v, periods) in arb_case()) {
            let trace = martingale_trace(&v, &MartingaleConfig::new(rat(1, 2), periods)).unwrap();
            let f0 = freq_vector(&v).unwrap();
            for w in trace.levels.windows(2) {
                prop_assert_eq!(&w[1].mean_freq, &w[0].mean_freq);
            }
            prop_assert_eq!(&trace.levels[0].mean_freq, &f0);
            for level in &trace.levels[1..] {
                prop_assert!(level.mean_advantage.unwrap() >= level.advantage_floor.unwrap());
                if v.q() == 2 {
                    prop_assert_eq!(level.mean_bias.unwrap(), bias(&v).unwrap());
                }
            }
        }
    }
}
