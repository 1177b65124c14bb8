//! Closed forms from the appendix lemmas.

use num_traits::{Num, Zero};

use crate::error::{invalid, Result};
use crate::rational::{int, is_nonneg, Rational};

/// Largest `sum f_i p_i` over positive `f, p` of length `q` with
/// `sum f = F`, `sum p = P` and every `f_i p_i <= m`.
pub fn f_max(big_f: f64, big_p: f64, m: f64, q: u32) -> Result<f64> {
    if !(big_f > 0.0 && big_p > 0.0 && m > 0.0) || !big_f.is_finite() || !big_p.is_finite() {
        return Err(invalid("f_max needs F, P, m > 0"));
    }
    if q < 2 {
        return Err(invalid("f_max needs q >= 2"));
    }
    let fp = big_f * big_p;
    if fp <= m {
        return Ok(fp);
    }
    for u in 1..q {
        let u = u as f64;
        if fp / ((u + 1.0) * (u + 1.0)) <= m && m < fp / (u * u) {
            return Ok(u * m + (fp.sqrt() - u * m.sqrt()).powi(2));
        }
    }
    Ok(m * q as f64)
}

/// Arithmetic needed by [`nonpositivity_lhs`].
pub trait Scalar: Num + Clone + PartialOrd {
    fn from_u32(v: u32) -> Self;
    /// Slack allowed in the unit-sum and ordering checks.
    fn slack() -> Self;
}

impl Scalar for f64 {
    fn from_u32(v: u32) -> Self {
        v as f64
    }
    fn slack() -> Self {
        1e-9
    }
}

impl Scalar for Rational {
    fn from_u32(v: u32) -> Self {
        int(v as i128)
    }
    fn slack() -> Self {
        Rational::zero()
    }
}

/// Left side of the non-positivity inequality for order `z`, with
/// `w = floor(z/2) + 1`.
pub fn nonpositivity_lhs<T: Scalar>(fstar: &[T], p: &[T], q: u32, z: u32) -> Result<T> {
    let qn = q as usize;
    if fstar.len() != qn || p.len() != qn {
        return Err(invalid(format!("vectors must have length q = {q}")));
    }
    if z < 1 || z >= q {
        return Err(invalid(format!("z = {z} must lie in 1..{q}")));
    }
    let zero = T::zero();
    let one = T::one();
    for v in [fstar, p] {
        if v.iter().any(|x| *x < zero) {
            return Err(invalid("vectors must be non-negative"));
        }
        let total = v.iter().cloned().fold(T::zero(), |a, b| a + b);
        let gap = if total > one.clone() { total - one.clone() } else { one.clone() - total };
        if gap > T::slack() {
            return Err(invalid("vectors must sum to 1"));
        }
    }
    let prod: Vec<T> = fstar.iter().zip(p).map(|(a, b)| a.clone() * b.clone()).collect();
    if prod.windows(2).any(|w| w[1].clone() > w[0].clone() + T::slack()) {
        return Err(invalid("products f*_j p_j must be non-increasing"));
    }
    let w = (z / 2 + 1) as usize;
    let two = T::from_u32(2);
    let head = if z % 2 == 0 {
        T::from_u32(3 * z + 2) / two
    } else {
        T::from_u32(z + 1) / two
    };
    let tail = prod[w..].iter().cloned().fold(T::zero(), |a, b| a + b);
    Ok(head * prod[w - 1].clone() + T::from_u32(2 * z + 1) * tail)
}

/// Exact `Var(X)` of a three-valued variable and the bound
/// `(xi/2)(a_0 - a_1)^2`.
pub fn three_valued_var_bound(a: [Rational; 3], probs: [Rational; 3], xi: Rational) -> Result<(Rational, Rational)> {
    if probs.iter().any(|p| !is_nonneg(p)) || probs.iter().sum::<Rational>() != int(1) {
        return Err(invalid("probabilities must be non-negative and sum to 1"));
    }
    if !is_nonneg(&xi) || probs[0] < xi || probs[1] < xi {
        return Err(invalid("P(a_0) and P(a_1) must be at least xi >= 0"));
    }
    let mean: Rational = a.iter().zip(&probs).map(|(x, p)| x * p).sum();
    let variance: Rational = a.iter().zip(&probs).map(|(x, p)| (x - mean) * (x - mean) * p).sum();
    let gap = a[0] - a[1];
    Ok((variance, xi / int(2) * gap * gap))
}
