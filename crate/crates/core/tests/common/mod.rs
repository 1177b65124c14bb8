//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;

/// Quadratic-table LCS length.
pub fn lcs_dp(a: &[u32], b: &[u32]) -> usize {
    let mut row = vec![0usize; b.len() + 1];
    for &x in a {
        let mut diag = 0;
        for (j, &y) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if x == y { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[b.len()]
}

fn is_subsequence(needle: &[u32], hay: &[u32]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|c| it.any(|h| h == c))
}

/// Largest subset of the shorter string that is a subsequence of the longer.
pub fn lcs_brute(a: &[u32], b: &[u32]) -> usize {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut best = 0;
    for mask in 0u32..(1 << short.len()) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let pick: Vec<u32> = (0..short.len()).filter(|i| mask >> i & 1 == 1).map(|i| short[i]).collect();
        if is_subsequence(&pick, long) {
            best = size;
        }
    }
    best
}

/// `((s / r) mod q)` for every position of `[start, start + len)`.
pub fn alternating(start: usize, len: usize, r: usize, q: u32) -> Vec<u32> {
    (start..start + len).map(|p| ((p / r) % q as usize) as u32).collect()
}

pub fn random_word<R: Rng>(rng: &mut R, q: u32, len: usize) -> Vec<u32> {
    (0..len).map(|_| rng.gen_range(0..q)).collect()
}

/// Best `sum f_i p_i` for a fixed `f`: fill `p` greedily from the largest
/// `f_i`, each capped at `m / f_i`. `None` when the caps cannot absorb `P`.
fn lp_value(f: &[f64], big_p: f64, m: f64) -> Option<f64> {
    let mut idx: Vec<usize> = (0..f.len()).collect();
    idx.sort_by(|&a, &b| f[b].total_cmp(&f[a]));
    let (mut rest, mut value) = (big_p, 0.0);
    for i in idx {
        let take = (m / f[i]).min(rest);
        value += f[i] * take;
        rest -= take;
    }
    (rest <= 1e-12 * big_p.max(1.0)).then_some(value)
}

/// Numeric search over `f` (with the inner problem solved exactly) for the
/// maximum of `sum f_i p_i` subject to the f_max constraints.
pub fn f_max_search(big_f: f64, big_p: f64, m: f64, q: usize, seed: u64) -> f64 {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let score = |f: &[f64]| lp_value(f, big_p, m).unwrap_or(f64::NEG_INFINITY);
    let mut starts: Vec<Vec<f64>> = vec![vec![1.0; q]];
    for k in 1..q {
        let mut s = vec![1e-4; q];
        for v in s.iter_mut().take(k) {
            *v = 1.0;
        }
        starts.push(s);
    }
    for _ in 0..40 {
        let e: f64 = rng.gen_range(0.2..6.0);
        starts.push((0..q).map(|_| rng.gen::<f64>().powf(e) + 1e-9).collect());
    }
    let mut best = f64::NEG_INFINITY;
    for mut f in starts {
        let total: f64 = f.iter().sum();
        f.iter_mut().for_each(|v| *v *= big_f / total);
        let mut cur = score(&f);
        let mut step = 0.5;
        while step > 1e-9 {
            let mut improved = false;
            for i in 0..q {
                for j in 0..q {
                    if i == j {
                        continue;
                    }
                    let t = f[i] * step;
                    let mut g = f.clone();
                    g[i] -= t;
                    g[j] += t;
                    let s = score(&g);
                    if s > cur + 1e-15 {
                        f = g;
                        cur = s;
                        improved = true;
                    }
                }
            }
            if !improved {
                step /= 2.0;
            }
        }
        best = best.max(cur);
    }
    best
}
