//! Gauss-Legendre quadrature on `[-1, 1]`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Newton iteration cap per root.
pub const NEWTON_MAX_ITER: usize = 100;
/// Newton step size at which a root counts as converged.
pub const NEWTON_TOL: f64 = 1e-15;
/// Extra nodes beyond the projected degree used by default.
pub const DEFAULT_QUAD_MARGIN: usize = 16;
/// Environment variable that overrides [`DEFAULT_QUAD_MARGIN`].
pub const QUAD_MARGIN_ENV: &str = "LEGENDRE_SPECTRA_QUAD_MARGIN";

/// Gauss-Legendre nodes (increasing) and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_i w_i f(x_i)`, approximating the integral over `[-1, 1]`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Integral over `[a, b]` through the affine map from `[-1, 1]`.
    pub fn integrate_on(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        half * self.integrate(|t| f(mid + half * t))
    }
}

/// Builds the `order`-point Gauss-Legendre rule.
///
/// Roots of `P_order` are polished by Newton from `cos(pi (i + 0.75) / (order + 0.5))`.
/// Only the positive half is solved; the negative half is mirrored so the
/// rule is exactly symmetric.
pub fn gauss_legendre_rule(order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::domain("quadrature order must be at least 1"));
    }
    let n = order;
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];

    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = legendre_with_derivative(n, x);
            let step = p / dp;
            x -= step;
            if step.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Internal(format!(
                "Newton iteration for root {i} of P_{n} did not converge in {NEWTON_MAX_ITER} steps"
            )));
        }
        if n % 2 == 1 && i == n / 2 {
            x = 0.0;
        }
        let dp = legendre_with_derivative(n, x).1;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }

    Ok(QuadratureRule { order, nodes, weights })
}

/// `(P_n(x), P_n'(x))` for `|x| < 1`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut curr = x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * curr - kf * prev) / (kf + 1.0);
        prev = curr;
        curr = next;
    }
    let nf = n as f64;
    (curr, nf * (x * curr - prev) / (x * x - 1.0))
}

/// The quadrature margin: `LEGENDRE_SPECTRA_QUAD_MARGIN` when set and valid,
/// otherwise [`DEFAULT_QUAD_MARGIN`]. Read once per process.
pub fn quad_margin() -> usize {
    static MARGIN: OnceLock<usize> = OnceLock::new();
    *MARGIN.get_or_init(|| {
        std::env::var(QUAD_MARGIN_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_QUAD_MARGIN)
    })
}

/// Default rule order for projecting onto degree `degree`: `degree + margin`.
pub fn default_order(degree: usize) -> usize {
    degree + quad_margin()
}
