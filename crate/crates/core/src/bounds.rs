//! Coefficient decay and truncation bounds for products of Legendre series.
//!
//! Smoothness enters through the weighted derivative norm
//!
//! ```text
//! ||f^(j)|| = int_{-1}^{1} |f^(j+1)(x)| / (1 - x^2)^{1/4} dx
//! ```
//!
//! Note the shift: the norm labelled `j` integrates the `(j+1)`-st derivative.
//! Callers supply that derivative directly.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::expansion::FunctionSampler;
use crate::quadrature::{gauss_legendre_rule, QuadratureRule};

/// Default Gauss-Legendre order for [`weighted_norm`].
pub const DEFAULT_NORM_ORDER: usize = 400;

fn sqrt_two_over_pi() -> f64 {
    (2.0 / PI).sqrt()
}

/// Smoothness order `j` with the scaled norms `A_j`, `B_j`, `C_j` of `f`, `g`
/// and `f g` (each `sqrt(2/pi)` times the weighted norm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessData {
    j: usize,
    a: f64,
    b: f64,
    c: f64,
}

impl SmoothnessData {
    pub fn new(j: usize, a: f64, b: f64, c: f64) -> Result<Self> {
        if j == 0 {
            return Err(Error::domain("smoothness order j must be at least 1"));
        }
        for (name, v) in [("A", a), ("B", b), ("C", c)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::domain(format!("{name}_{j} = {v} must be finite and >= 0")));
            }
        }
        Ok(SmoothnessData { j, a, b, c })
    }

    /// Computes the three norms from samplers of `f^(j+1)`, `g^(j+1)` and
    /// `(fg)^(j+1)`.
    pub fn from_derivatives(
        j: usize,
        f_derivative: &FunctionSampler,
        g_derivative: &FunctionSampler,
        fg_derivative: &FunctionSampler,
        rule_order: usize,
    ) -> Result<Self> {
        let rule = gauss_legendre_rule(rule_order)?;
        let s = sqrt_two_over_pi();
        Self::new(
            j,
            s * weighted_norm_with(f_derivative, &rule)?,
            s * weighted_norm_with(g_derivative, &rule)?,
            s * weighted_norm_with(fg_derivative, &rule)?,
        )
    }

    pub fn j(&self) -> usize {
        self.j
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
}

/// `int_{-1}^{1} |d(x)| (1 - x^2)^{-1/4} dx` where `d` samples the next
/// derivative up.
///
/// Each half `[0, 1]`, `[-1, 0]` is mapped by `x = ±(1 - w^4)`, which turns
/// the weight into the smooth `4 w^2 (2 - w^4)^{-1/4}`. A kink of `|d|` at
/// the origin, as for odd `d`, falls on the split point.
pub fn weighted_norm(derivative: &FunctionSampler, rule_order: usize) -> Result<f64> {
    let rule = gauss_legendre_rule(rule_order)?;
    weighted_norm_with(derivative, &rule)
}

fn weighted_norm_with(derivative: &FunctionSampler, rule: &QuadratureRule) -> Result<f64> {
    let mut bad = None;
    let mut value = 0.0;
    for sign in [1.0, -1.0] {
        value += rule.integrate_on(0.0, 1.0, |w| {
            let w4 = w.powi(4);
            let x = sign * (1.0 - w4);
            let v = derivative.eval(x);
            if !v.is_finite() && bad.is_none() {
                bad = Some((x, v));
            }
            v.abs() * 4.0 * w * w * (2.0 - w4).powf(-0.25)
        });
    }
    if let Some((x, v)) = bad {
        return Err(Error::data(format!("derivative sampler returned {v} at x = {x}")));
    }
    Ok(value)
}

/// Both forms of the coefficient decay bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientBound {
    /// `sqrt(2/pi) ||f|| / [sqrt(n - (2j+1)/2) prod_{i=1}^{j} (n - (2i-1)/2)]`
    pub sharp: f64,
    /// `sqrt(2/pi) ||f|| / (n - j)^{(2j+1)/2}`; equal to `sharp` when `j = 0`.
    pub simplified: f64,
}

/// Bound on `|alpha_n|` given the weighted norm of order `j`.
///
/// Requires `n >= j + 1` for `j >= 1`, and `n >= 1` for `j = 0`.
pub fn wang_coefficient_bound(j: usize, n: usize, norm: f64) -> Result<CoefficientBound> {
    if norm.is_nan() || norm < 0.0 {
        return Err(Error::domain(format!("norm must be >= 0, got {norm}")));
    }
    let scaled = sqrt_two_over_pi() * norm;
    if j == 0 {
        if n < 1 {
            return Err(Error::domain("j = 0 bound needs n >= 1"));
        }
        let sharp = scaled / (n as f64 - 0.5).sqrt();
        return Ok(CoefficientBound { sharp, simplified: sharp });
    }
    if n < j + 1 {
        return Err(Error::domain(format!("bound needs n >= j + 1 (n = {n}, j = {j})")));
    }
    Ok(CoefficientBound {
        sharp: scaled / sharp_denominator(j, n),
        simplified: scaled / simplified_denominator(j, n),
    })
}

/// `sqrt(n - (2j+1)/2) * prod_{i=1}^{j} (n - (2i-1)/2)`.
pub fn sharp_denominator(j: usize, n: usize) -> f64 {
    let nf = n as f64;
    let root = (nf - (2 * j + 1) as f64 / 2.0).sqrt();
    (1..=j).fold(root, |acc, i| acc * (nf - (2 * i - 1) as f64 / 2.0))
}

/// `(n - j)^{(2j+1)/2}`.
pub fn simplified_denominator(j: usize, n: usize) -> f64 {
    ((n - j) as f64).powf((2 * j + 1) as f64 / 2.0)
}

/// Uniform bounds on the error of the degree-`N` partial sum of the product
/// series with `j = 1`: `C1 [pi - 2 atan(sqrt(N - 3/2))]` and `2 C1 / sqrt(N - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    pub exact: f64,
    pub simplified: f64,
}

pub fn tail_bound_j1(n: usize, c1: f64) -> Result<TailBound> {
    if n < 2 {
        return Err(Error::domain(format!("tail bound needs N >= 2, got {n}")));
    }
    let nf = n as f64;
    Ok(TailBound {
        exact: c1 * (PI - 2.0 * (nf - 1.5).sqrt().atan()),
        simplified: 2.0 * c1 / (nf - 1.0).sqrt(),
    })
}

/// `C_j / [(j-1) sqrt(N - (2j+1)/2)] * prod_{k=2}^{j} 1/(N - (2k-1)/2)`,
/// bounding the error of the degree-`(N-1)` partial sum.
pub fn tail_bound_general(n: usize, j: usize, cj: f64) -> Result<f64> {
    if j < 2 || n < j + 1 {
        return Err(Error::domain(format!("tail bound needs j >= 2 and N >= j + 1 (N = {n}, j = {j})")));
    }
    let nf = n as f64;
    let mut value = cj / ((j - 1) as f64 * (nf - (2 * j + 1) as f64 / 2.0).sqrt());
    for k in 2..=j {
        value /= nf - (2 * k - 1) as f64 / 2.0;
    }
    Ok(value)
}

/// Why the infinite sum in [`mu_truncation_bound_general`] was cut off.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The last term fell below `RELATIVE_STOP` times the running sum.
    Converged,
    /// `m` reached `MAX_OUTER_TERMS`.
    TermCap,
}

/// Result of the numeric truncation bound. The value is a partial sum of a
/// positive series, so it under-estimates the full series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralMuBound {
    pub value: f64,
    /// Last `m` included.
    pub last_m: usize,
    pub stop: StopReason,
    pub underestimate: bool,
}

pub const RELATIVE_STOP: f64 = 1e-14;
pub const MAX_OUTER_TERMS: usize = 1_000_000;

/// `A_j B_j sum_{m=M+1}^{inf} int_{m-1}^{k+m+1} dx / [(k+2m-x-j)^{(2j+1)/2} (x-j)^{(2j+1)/2}]`,
/// evaluated numerically.
pub fn mu_truncation_bound_general(
    k: usize,
    m_trunc: usize,
    j: usize,
    aj: f64,
    bj: f64,
) -> Result<GeneralMuBound> {
    if j == 0 {
        return Err(Error::domain("smoothness order j must be at least 1"));
    }
    if m_trunc < j + 1 {
        return Err(Error::domain(format!("needs M >= j + 1 (M = {m_trunc}, j = {j})")));
    }
    if !(aj >= 0.0 && bj >= 0.0) {
        return Err(Error::domain("A_j and B_j must be >= 0"));
    }
    if aj == 0.0 || bj == 0.0 {
        return Ok(GeneralMuBound {
            value: 0.0,
            last_m: m_trunc,
            stop: StopReason::Converged,
            underestimate: false,
        });
    }

    let p = (2 * j + 1) as f64 / 2.0;
    let (kf, jf) = (k as f64, j as f64);
    let mut sum = 0.0;
    let mut m = m_trunc;
    let stop = loop {
        m += 1;
        let mf = m as f64;
        let f = |x: f64| ((kf + 2.0 * mf - x - jf) * (x - jf)).powf(-p);
        let term = adaptive_gauss(&f, mf - 1.0, kf + mf + 1.0, 1e-13);
        sum += term;
        if term < RELATIVE_STOP * sum {
            break StopReason::Converged;
        }
        if m - m_trunc >= MAX_OUTER_TERMS {
            break StopReason::TermCap;
        }
    };
    Ok(GeneralMuBound { value: aj * bj * sum, last_m: m, stop, underestimate: true })
}

/// Adaptive Gauss-Legendre: a 10-point and a 20-point estimate are compared
/// on each panel and the panel is bisected until they agree to `tol`
/// relative to the panel estimate.
fn adaptive_gauss(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    static RULES: OnceLock<(QuadratureRule, QuadratureRule)> = OnceLock::new();
    let (coarse, fine) = RULES.get_or_init(|| {
        (
            gauss_legendre_rule(10).expect("10-point rule"),
            gauss_legendre_rule(20).expect("20-point rule"),
        )
    });
    fn panel(
        f: &impl Fn(f64) -> f64,
        coarse: &QuadratureRule,
        fine: &QuadratureRule,
        a: f64,
        b: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let lo = coarse.integrate_on(a, b, f);
        let hi = fine.integrate_on(a, b, f);
        if depth == 0 || (hi - lo).abs() <= tol * hi.abs() {
            return hi;
        }
        let mid = 0.5 * (a + b);
        panel(f, coarse, fine, a, mid, tol, depth - 1) + panel(f, coarse, fine, mid, b, tol, depth - 1)
    }
    panel(f, coarse, fine, a, b, tol, 30)
}

/// Closed-form truncation bound for `mu_k` with `j = 1`, normalized by `A_1 B_1`:
/// `4(k+2) / [(k+2M-2) (2(sqrt((M-2)(k+M)) + M - 1) + k)]`.
pub fn mu_truncation_bound_j1(k: usize, m: usize) -> Result<f64> {
    if m < 3 {
        return Err(Error::domain(format!("j = 1 bound needs M >= 3, got {m}")));
    }
    let (k, m) = (k as f64, m as f64);
    Ok(4.0 * (k + 2.0) / ((k + 2.0 * m - 2.0) * (2.0 * (((m - 2.0) * (k + m)).sqrt() + m - 1.0) + k)))
}

/// Closed-form truncation bound for `mu_k` with `j = 2`, normalized by `A_2 B_2`.
pub fn mu_truncation_bound_j2(k: usize, m: usize) -> Result<f64> {
    if m < 4 {
        return Err(Error::domain(format!("j = 2 bound needs M >= 4, got {m}")));
    }
    let (k, m) = (k as f64, m as f64);
    let s = k + 2.0 * m - 4.0;
    let k2 = k + 2.0;
    let log = ((k + m - 1.0) / (m - 3.0)).ln();
    let numerator = 3.0 * s * s * (s * log - 2.0 * k2) + 4.0 * k2.powi(3);
    let denominator = 9.0 * k2 * k2 * s.powi(3) * ((m - 3.0) * (k + m - 1.0)).sqrt();
    Ok(4.0 * numerator / denominator)
}

/// One row of a bound curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPoint {
    pub m: usize,
    pub bound: f64,
    pub log10_bound: f64,
}

/// The closed-form bound for `j` in `{1, 2}` over `M` in `m_lo..=m_hi`.
pub fn bound_curve(k: usize, j: usize, m_lo: usize, m_hi: usize) -> Result<Vec<BoundPoint>> {
    let f = match j {
        1 => mu_truncation_bound_j1,
        2 => mu_truncation_bound_j2,
        _ => return Err(Error::domain(format!("closed-form bounds exist for j = 1, 2 only, got {j}"))),
    };
    if m_lo > m_hi {
        return Err(Error::domain(format!("empty M range {m_lo}..={m_hi}")));
    }
    (m_lo..=m_hi)
        .map(|m| {
            let bound = f(k, m)?;
            Ok(BoundPoint { m, bound, log10_bound: bound.log10() })
        })
        .collect()
}

/// Default `M` ranges for the two bound curves.
pub fn default_m_range(j: usize) -> (usize, usize) {
    if j == 2 { (4, 100) } else { (3, 100) }
}
