//! Alphabet-generic sequences and their elementary statistics.

use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

const BASE36: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// A finite string over the alphabet `{0, .., q-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Seq {
    q: u32,
    symbols: Vec<u32>,
}

impl Seq {
    pub fn new(q: u32, symbols: Vec<u32>) -> Result<Self> {
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s >= q) {
            return Err(Error::SymbolOutOfRange { symbol: bad, q });
        }
        Ok(Seq { q, symbols })
    }

    pub fn empty(q: u32) -> Result<Self> {
        Seq::new(q, Vec::new())
    }

    /// Parses a base-36 rendering such as `"0011"`. Only valid for `q <= 36`.
    pub fn parse(q: u32, text: &str) -> Result<Self> {
        if q > 36 {
            return Err(Error::InvalidParameter(format!(
                "text form needs q <= 36, got q = {q}"
            )));
        }
        let symbols = text
            .chars()
            .map(|c| {
                c.to_digit(36).ok_or_else(|| Error::Parse {
                    what: "base-36 symbol",
                    input: c.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Seq::new(q, symbols)
    }

    /// Callers guarantee every symbol is below `q` and `q >= 2`.
    pub(crate) fn from_parts(q: u32, symbols: Vec<u32>) -> Self {
        debug_assert!(q >= 2 && symbols.iter().all(|&s| s < q));
        Seq { q, symbols }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u32> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Copies `self[start..end]`.
    pub fn slice(&self, start: usize, end: usize) -> Seq {
        Seq::from_parts(self.q, self.symbols[start..end].to_vec())
    }

    pub fn concat(&self, other: &Seq) -> Result<Seq> {
        ensure_same_alphabet(self, other)?;
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Ok(Seq::from_parts(self.q, symbols))
    }

    /// Base-36 text, available when `q <= 36`.
    pub fn to_text(&self) -> Option<String> {
        (self.q <= 36).then(|| {
            self.symbols
                .iter()
                .map(|&s| BASE36[s as usize] as char)
                .collect()
        })
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_text() {
            Some(text) => f.write_str(&text),
            None => {
                f.write_str("[")?;
                for (k, s) in self.symbols.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{s}")?;
                }
                f.write_str("]")
            }
        }
    }
}

pub(crate) fn ensure_same_alphabet(a: &Seq, b: &Seq) -> Result<()> {
    if a.q != b.q {
        return Err(Error::AlphabetMismatch {
            left: a.q,
            right: b.q,
        });
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SymbolsRepr {
    Text(String),
    List(Vec<u32>),
}

#[derive(Serialize, Deserialize)]
struct SeqRepr {
    q: u32,
    symbols: SymbolsRepr,
}

impl Serialize for Seq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let symbols = match self.to_text() {
            Some(text) => SymbolsRepr::Text(text),
            None => SymbolsRepr::List(self.symbols.clone()),
        };
        SeqRepr { q: self.q, symbols }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Seq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SeqRepr::deserialize(d)?;
        match repr.symbols {
            SymbolsRepr::Text(text) => Seq::parse(repr.q, &text),
            SymbolsRepr::List(list) => Seq::new(repr.q, list),
        }
        .map_err(de::Error::custom)
    }
}

/// Per-symbol counts of a sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolStats {
    pub counts: Vec<usize>,
    pub length: usize,
}

impl SymbolStats {
    pub fn of(w: &Seq) -> Self {
        Self::of_slice(w.q, &w.symbols)
    }

    pub(crate) fn of_slice(q: u32, symbols: &[u32]) -> Self {
        let mut counts = vec![0usize; q as usize];
        for &s in symbols {
            counts[s as usize] += 1;
        }
        SymbolStats {
            counts,
            length: symbols.len(),
        }
    }
}

pub fn count(w: &Seq, a: u32) -> Result<usize> {
    if a >= w.q {
        return Err(Error::SymbolOutOfRange { symbol: a, q: w.q });
    }
    Ok(w.symbols.iter().filter(|&&s| s == a).count())
}

/// `(count_1(w) - count_0(w)) / |w|` for a binary string.
pub fn bias(w: &Seq) -> Result<Rational> {
    if w.q != 2 {
        return Err(Error::InvalidParameter(format!(
            "bias is defined for binary strings, got q = {}",
            w.q
        )));
    }
    if w.is_empty() {
        return Err(Error::EmptySequence("bias"));
    }
    Ok(bias_of_slice(&w.symbols))
}

pub(crate) fn bias_of_slice(symbols: &[u32]) -> Rational {
    let ones = symbols.iter().filter(|&&s| s == 1).count() as i128;
    let len = symbols.len() as i128;
    Rational::new(2 * ones - len, len)
}

/// Entry `p` is `count_p(w) / |w|`.
pub fn freq_vector(w: &Seq) -> Result<Vec<Rational>> {
    if w.is_empty() {
        return Err(Error::EmptySequence("freq_vector"));
    }
    let stats = SymbolStats::of(w);
    let len = stats.length as i128;
    Ok(stats
        .counts
        .iter()
        .map(|&c| Rational::new(c as i128, len))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn s(q: u32, t: &str) -> Seq {
        Seq::parse(q, t).unwrap()
    }

    #[test]
    fn count_examples() {
        assert_eq!(count(&s(2, "0011"), 1).unwrap(), 2);
        assert_eq!(count(&s(2, ""), 0).unwrap(), 0);
        assert_eq!(count(&s(2, "0001"), 1).unwrap(), 1);
        assert!(matches!(
            count(&s(2, "01"), 2),
            Err(Error::SymbolOutOfRange { symbol: 2, q: 2 })
        ));
    }

    #[test]
    fn bias_examples() {
        assert_eq!(bias(&s(2, "0011")).unwrap(), Rational::zero());
        assert_eq!(bias(&s(2, "1111")).unwrap(), Rational::one());
        assert_eq!(bias(&s(2, "0001")).unwrap(), rat(-1, 2));
        assert!(matches!(bias(&s(2, "")), Err(Error::EmptySequence(_))));
        assert!(bias(&s(3, "012")).is_err());
    }

    #[test]
    fn freq_examples() {
        assert_eq!(freq_vector(&s(3, "012")).unwrap(), vec![rat(1, 3); 3]);
        assert_eq!(freq_vector(&s(2, "0011")).unwrap(), vec![rat(1, 2); 2]);
        assert_eq!(
            freq_vector(&s(4, "001122")).unwrap(),
            vec![rat(1, 3), rat(1, 3), rat(1, 3), int(0)]
        );
        assert!(freq_vector(&s(4, "")).is_err());
    }

    #[test]
    fn rejects_bad_symbols() {
        assert!(Seq::new(2, vec![0, 2]).is_err());
        assert!(Seq::new(1, vec![]).is_err());
        assert!(Seq::parse(2, "01x").is_err());
    }

    #[test]
    fn json_forms() {
        let w = s(2, "0011");
        let text = serde_json::to_string(&w).unwrap();
        assert_eq!(text, r#"{"q":2,"symbols":"0011"}"#);
        let back: Seq = serde_json::from_str(r#"{"q":2,"symbols":[0,0,1,1]}"#).unwrap();
        assert_eq!(back, w);

        let big = Seq::new(40, vec![39, 0, 37]).unwrap();
        let text = serde_json::to_string(&big).unwrap();
        assert_eq!(text, r#"{"q":40,"symbols":[39,0,37]}"#);
        assert!(serde_json::from_str::<Seq>(r#"{"q":2,"symbols":"012"}"#).is_err());
    }

    proptest! {
        #[test]
        fn binary_counts_and_bias_agree(bits in proptest::collection::vec(0u32..2, 1..200)) {
            let w = Seq::new(2, bits).unwrap();
            let c0 = count(&w, 0).unwrap() as i128;
            let c1 = count(&w, 1).unwrap() as i128;
            let n = w.len() as i128;
            prop_assert_eq!(c0 + c1, n);
            let b = bias(&w).unwrap();
            prop_assert_eq!(b * int(n), int(c1 - c0));
            prop_assert_eq!((int(1) - b) / int(2) * int(n), int(c0));
            prop_assert!(b >= int(-1) && b <= int(1));
        }

        #[test]
        fn frequencies_sum_to_one(q in 2u32..8, raw in proptest::collection::vec(0u32..1000, 1..100)) {
            let w = Seq::new(q, raw.into_iter().map(|x| x % q).collect()).unwrap();
            let f = freq_vector(&w).unwrap();
            prop_assert!(f.iter().all(|x| *x >= int(0)));
            prop_assert_eq!(f.iter().fold(int(0), |acc, x| acc + x), int(1));
        }

        #[test]
        fn balanced_strings_have_zero_bias(half in 1usize..50, seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut bits = vec![0u32; half];
            bits.extend(std::iter::repeat(1).take(half));
            bits.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(bias(&Seq::new(2, bits).unwrap()).unwrap(), int(0));
        }
    }
}
