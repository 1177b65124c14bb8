//! Bit-parallel longest common subsequence.
//!
//! Row `V_j` holds one bit per pattern position. After scanning `text[..j]`
//! the number of zero bits among the low `i` bits of `V_j` equals
//! `LCS(pattern[..i], text[..j])`.

/// Precomputed match masks for a fixed pattern.
#[derive(Clone, Debug)]
pub struct LcsKernel {
    len: usize,
    words: usize,
    last_mask: u64,
    // symbol -> slot + 1, zero when the symbol is absent from the pattern
    slots: Vec<u32>,
    masks: Vec<u64>,
}

impl LcsKernel {
    pub fn new(pattern: &[u32]) -> Self {
        let len = pattern.len();
        let words = len.div_ceil(64).max(1);
        let last_mask = match len % 64 {
            0 if len > 0 => u64::MAX,
            0 => 0,
            rem => (1u64 << rem) - 1,
        };
        let top = pattern.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut slots = vec![0u32; top];
        let mut masks = Vec::new();
        for (pos, &sym) in pattern.iter().enumerate() {
            let slot = &mut slots[sym as usize];
            if *slot == 0 {
                masks.extend(std::iter::repeat(0).take(words));
                *slot = (masks.len() / words) as u32;
            }
            let base = (*slot as usize - 1) * words;
            masks[base + pos / 64] |= 1u64 << (pos % 64);
        }
        LcsKernel {
            len,
            words,
            last_mask,
            slots,
            masks,
        }
    }

    pub fn pattern_len(&self) -> usize {
        self.len
    }

    fn initial_row(&self) -> Vec<u64> {
        let mut v = vec![u64::MAX; self.words];
        v[self.words - 1] = self.last_mask;
        v
    }

    fn mask(&self, sym: u32) -> Option<&[u64]> {
        match self.slots.get(sym as usize) {
            Some(&slot) if slot > 0 => {
                let base = (slot as usize - 1) * self.words;
                Some(&self.masks[base..base + self.words])
            }
            _ => None,
        }
    }

    #[inline]
    fn step(&self, v: &mut [u64], sym: u32) {
        let Some(pm) = self.mask(sym) else {
            return;
        };
        let mut carry = 0u64;
        for (vk, &pk) in v.iter_mut().zip(pm) {
            let u = *vk & pk;
            let diff = *vk - u;
            let (s1, c1) = vk.overflowing_add(u);
            let (s2, c2) = s1.overflowing_add(carry);
            carry = (c1 | c2) as u64;
            *vk = s2 | diff;
        }
        let last = v.len() - 1;
        v[last] &= self.last_mask;
    }

    fn zeros(&self, v: &[u64]) -> usize {
        self.len - v.iter().map(|w| w.count_ones() as usize).sum::<usize>()
    }

    pub fn lcs_len(&self, text: &[u32]) -> usize {
        let mut v = self.initial_row();
        for &sym in text {
            self.step(&mut v, sym);
        }
        self.zeros(&v)
    }

    /// Entry `j` is `LCS(pattern, text[..j])`, for `j = 0..=text.len()`.
    pub fn prefix_lcs(&self, text: &[u32]) -> Vec<usize> {
        let mut scan = self.scanner();
        let mut out = Vec::with_capacity(text.len() + 1);
        out.push(0);
        for &sym in text {
            out.push(scan.push(sym));
        }
        out
    }

    pub fn scanner(&self) -> Scanner<'_> {
        Scanner {
            kernel: self,
            row: self.initial_row(),
        }
    }

    /// Maximum matching as `(pattern index, text index)` pairs.
    ///
    /// Walking back from the corner, a step that drops a pattern symbol is
    /// taken whenever it keeps the score, then a diagonal match, then a step
    /// that drops a text symbol.
    pub fn traceback(&self, pattern: &[u32], text: &[u32]) -> Vec<(usize, usize)> {
        debug_assert_eq!(pattern.len(), self.len);
        let w = self.words;
        let mut rows = Vec::with_capacity((text.len() + 1) * w);
        let mut v = self.initial_row();
        rows.extend_from_slice(&v);
        for &sym in text {
            self.step(&mut v, sym);
            rows.extend_from_slice(&v);
        }
        let bit = |j: usize, i: usize| (rows[j * w + i / 64] >> (i % 64)) & 1 == 1;
        let (mut i, mut j) = (pattern.len(), text.len());
        let mut pairs = Vec::new();
        while i > 0 && j > 0 {
            if bit(j, i - 1) {
                i -= 1;
            } else if pattern[i - 1] == text[j - 1] {
                pairs.push((i - 1, j - 1));
                i -= 1;
                j -= 1;
            } else {
                j -= 1;
            }
        }
        pairs.reverse();
        pairs
    }
}

/// Incremental LCS against a growing text.
#[derive(Clone, Debug)]
pub struct Scanner<'a> {
    kernel: &'a LcsKernel,
    row: Vec<u64>,
}

impl Scanner<'_> {
    /// Appends one text symbol and returns the updated LCS length.
    pub fn push(&mut self, sym: u32) -> usize {
        self.kernel.step(&mut self.row, sym);
        self.lcs()
    }

    pub fn lcs(&self) -> usize {
        self.kernel.zeros(&self.row)
    }
}
