//! Legendre polynomials, rising factorials and the product-linearization
//! coefficients `A(j, k, l)`.
//!
//! The product of two Legendre polynomials expands as
//!
//! ```text
//! P_{k-l}(x) P_l(x) = sum_{j=0}^{min(k-l, l)} A(j, k, l) P_{k-2j}(x)
//! ```
//!
//! with
//!
//! ```text
//!              (1/2)_j (1/2)_{k-l-j} (1/2)_{l-j} (k-j)!
//! A(j,k,l) = ------------------------------------------- (2(k-2j) + 1)
//!              j! (k-l-j)! (l-j)! (3/2)_{k-j}
//! ```
//!
//! Every factor is positive and `0 < A <= 1`. Small cases are evaluated as a
//! ratio of two products; larger ones as the exponential of a sum of
//! logarithms, since direct factorials overflow for `k` around 170.

use crate::error::{Error, Result};

/// Rising factorials with at most this many factors are evaluated as a
/// running product; longer ones go through `ln Γ`.
pub const RISING_PRODUCT_CUTOFF: usize = 64;

/// Evaluates `P_n(x)` with the three-term recurrence
/// `(k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}`.
pub fn legendre_eval(n: usize, x: f64) -> Result<f64> {
    check_unit_interval(x)?;
    Ok(legendre_unchecked(n, x))
}

/// Returns `[P_0(x), ..., P_{n_max}(x)]`.
pub fn legendre_eval_all(n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_unit_interval(x)?;
    let mut out = Vec::with_capacity(n_max + 1);
    fill_legendre(x, n_max, &mut out);
    Ok(out)
}

pub(crate) fn check_unit_interval(x: f64) -> Result<()> {
    if x.is_nan() || x.abs() > 1.0 {
        return Err(Error::domain(format!("x = {x} lies outside [-1, 1]")));
    }
    Ok(())
}

pub(crate) fn legendre_unchecked(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut curr = x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * curr - kf * prev) / (kf + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// Writes `P_0(x) ..= P_{n_max}(x)` into `out`, replacing its contents.
pub(crate) fn fill_legendre(x: f64, n_max: usize, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    if n_max == 0 {
        return;
    }
    out.push(x);
    for k in 1..n_max {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * out[k] - kf * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
}

/// Pochhammer symbol `(a)_r = a (a+1) ... (a+r-1)`, with `(a)_0 = 1`.
pub fn rising_factorial(a: f64, r: usize) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (a + i as f64))
}

/// `ln (a)_r` for `a > 0`.
pub fn ln_rising_factorial(a: f64, r: usize) -> f64 {
    debug_assert!(a > 0.0);
    if r <= RISING_PRODUCT_CUTOFF {
        rising_factorial(a, r).ln()
    } else {
        libm::lgamma(a + r as f64) - libm::lgamma(a)
    }
}

/// `ln r!`.
pub fn ln_factorial(r: usize) -> f64 {
    ln_rising_factorial(1.0, r)
}

fn valid_triple(j: usize, k: usize, l: usize) -> bool {
    l <= k && j <= l.min(k - l)
}

/// The three rising-factorial families `(1/2)_r`, `r!`, `(3/2)_r`, both as
/// plain values (for `r <= RISING_PRODUCT_CUTOFF`) and as logarithms.
trait Pochhammers {
    fn half(&self, r: usize) -> f64;
    fn fact(&self, r: usize) -> f64;
    fn three_halves(&self, r: usize) -> f64;
    fn ln_half(&self, r: usize) -> f64;
    fn ln_fact(&self, r: usize) -> f64;
    fn ln_three_halves(&self, r: usize) -> f64;
}

struct OnTheFly;

impl Pochhammers for OnTheFly {
    fn half(&self, r: usize) -> f64 {
        rising_factorial(0.5, r)
    }
    fn fact(&self, r: usize) -> f64 {
        rising_factorial(1.0, r)
    }
    fn three_halves(&self, r: usize) -> f64 {
        rising_factorial(1.5, r)
    }
    fn ln_half(&self, r: usize) -> f64 {
        ln_rising_factorial(0.5, r)
    }
    fn ln_fact(&self, r: usize) -> f64 {
        ln_factorial(r)
    }
    fn ln_three_halves(&self, r: usize) -> f64 {
        ln_rising_factorial(1.5, r)
    }
}

/// Cached values for every `r <= k_max`.
struct Cached {
    half: Vec<f64>,
    fact: Vec<f64>,
    three: Vec<f64>,
    ln_half: Vec<f64>,
    ln_fact: Vec<f64>,
    ln_three: Vec<f64>,
}

impl Cached {
    fn new(k_max: usize) -> Self {
        let small = k_max.min(RISING_PRODUCT_CUTOFF);
        Cached {
            half: (0..=small).map(|r| OnTheFly.half(r)).collect(),
            fact: (0..=small).map(|r| OnTheFly.fact(r)).collect(),
            three: (0..=small).map(|r| OnTheFly.three_halves(r)).collect(),
            ln_half: (0..=k_max).map(|r| OnTheFly.ln_half(r)).collect(),
            ln_fact: (0..=k_max).map(|r| OnTheFly.ln_fact(r)).collect(),
            ln_three: (0..=k_max).map(|r| OnTheFly.ln_three_halves(r)).collect(),
        }
    }
}

impl Pochhammers for Cached {
    fn half(&self, r: usize) -> f64 {
        self.half[r]
    }
    fn fact(&self, r: usize) -> f64 {
        self.fact[r]
    }
    fn three_halves(&self, r: usize) -> f64 {
        self.three[r]
    }
    fn ln_half(&self, r: usize) -> f64 {
        self.ln_half[r]
    }
    fn ln_fact(&self, r: usize) -> f64 {
        self.ln_fact[r]
    }
    fn ln_three_halves(&self, r: usize) -> f64 {
        self.ln_three[r]
    }
}

/// Shared assembly of `A(j, k, l)`, so the table and the pointwise routine
/// agree bit for bit. While `k - j` (the longest rising factorial) is at most
/// the cutoff, numerator and denominator are plain products, exact for small
/// arguments; beyond it the logarithms are summed and exponentiated. Values
/// that round above one are clamped to one.
fn assemble(p: &impl Pochhammers, j: usize, k: usize, l: usize) -> f64 {
    // A(j,k,l) = A(j,k,k-l); fold onto l <= k/2 so both orders round the same.
    let l = l.min(k - l);
    let (a, b, c) = (j, k - l - j, l - j);
    let weight = (2 * (k - 2 * j) + 1) as f64;
    if k - j <= RISING_PRODUCT_CUTOFF {
        let numerator = p.half(a) * p.half(b) * p.half(c) * p.fact(k - j) * weight;
        let denominator = p.fact(a) * p.fact(b) * p.fact(c) * p.three_halves(k - j);
        return (numerator / denominator).min(1.0);
    }
    let numerator = p.ln_half(a) + p.ln_half(b) + p.ln_half(c) + p.ln_fact(k - j);
    let denominator = p.ln_fact(a) + p.ln_fact(b) + p.ln_fact(c) + p.ln_three_halves(k - j);
    (numerator - denominator + weight.ln()).exp().min(1.0)
}

/// The linearization coefficient `A(j, k, l)`.
///
/// Defined only for `0 <= j <= min(k-l, l) <= l <= k`; anything else is a
/// domain error rather than a silent zero.
pub fn linearization_coefficient(j: usize, k: usize, l: usize) -> Result<f64> {
    if !valid_triple(j, k, l) {
        return Err(Error::domain(format!(
            "A(j={j}, k={k}, l={l}) requires 0 <= j <= min(k-l, l) and l <= k"
        )));
    }
    Ok(assemble(&OnTheFly, j, k, l))
}

/// Expands `P_m P_n` as `(degree, coefficient)` pairs, highest degree first.
pub fn product_linearization(m: usize, n: usize) -> Vec<(usize, f64)> {
    let k = m + n;
    let (lo, hi) = if m <= n { (m, n) } else { (n, m) };
    (0..=lo)
        .map(|j| {
            let coeff = linearization_coefficient(j, k, hi)
                .expect("j <= min(m, n) is always a valid index triple");
            (k - 2 * j, coeff)
        })
        .collect()
}

/// Precomputed `A(j, k, l)` for every valid triple with `k <= k_max`.
///
/// Only `l <= k/2` is stored; the other half follows from symmetry.
#[derive(Debug, Clone)]
pub struct LinearizationTable {
    k_max: usize,
    offsets: Vec<usize>,
    values: Vec<f64>,
}

impl LinearizationTable {
    pub fn new(k_max: usize) -> Self {
        let cache = Cached::new(k_max);

        let mut offsets = Vec::with_capacity(k_max + 2);
        let mut total = 0;
        for k in 0..=k_max {
            offsets.push(total);
            let half = k / 2;
            total += (half + 1) * (half + 2) / 2;
        }
        offsets.push(total);

        let mut values = Vec::with_capacity(total);
        for k in 0..=k_max {
            for l in 0..=k / 2 {
                for j in 0..=l {
                    values.push(assemble(&cache, j, k, l));
                }
            }
        }
        debug_assert_eq!(values.len(), total);
        LinearizationTable { k_max, offsets, values }
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Looks up `A(j, k, l)`. The triple must be valid and `k <= k_max`.
    #[inline]
    pub fn get(&self, j: usize, k: usize, l: usize) -> f64 {
        debug_assert!(k <= self.k_max && valid_triple(j, k, l));
        let l = l.min(k - l);
        self.values[self.offsets[k] + l * (l + 1) / 2 + j]
    }

    /// Checked variant of [`get`](Self::get).
    pub fn try_get(&self, j: usize, k: usize, l: usize) -> Result<f64> {
        if k > self.k_max {
            return Err(Error::domain(format!(
                "k = {k} exceeds the table limit {}",
                self.k_max
            )));
        }
        if !valid_triple(j, k, l) {
            return Err(Error::domain(format!(
                "A(j={j}, k={k}, l={l}) requires 0 <= j <= min(k-l, l) and l <= k"
            )));
        }
        Ok(self.get(j, k, l))
    }
}
