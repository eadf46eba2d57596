use std::fmt;
use std::sync::Arc;

use super::LegendreSeries;
use crate::error::{Error, Result};
use crate::legendre::{legendre_unchecked, ln_factorial};

/// Names accepted by [`FunctionSampler::from_name`].
pub const SAMPLER_REGISTRY: &[&str] = &[
    "exp",
    "sin_k:<k>",
    "runge",
    "manufactured_g",
    "poly:[c0,c1,...]",
];

/// A real function on `[-1, 1]`.
#[derive(Clone)]
pub enum FunctionSampler {
    /// `e^x`
    Exp,
    /// `sin(k x)`
    SinK(f64),
    /// `1 / (1 + 25 x^2)`
    Runge,
    /// Monomial coefficients: `sum_i c_i x^i`.
    Poly(Vec<f64>),
    /// `poly(x) * exp(rate * x^2 + shift)`, with `poly` in monomial form.
    GaussPoly { poly: Vec<f64>, rate: f64, shift: f64 },
    /// A tabulated Legendre series.
    Series(LegendreSeries),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for FunctionSampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exp => write!(f, "Exp"),
            Self::SinK(k) => write!(f, "SinK({k})"),
            Self::Runge => write!(f, "Runge"),
            Self::Poly(c) => f.debug_tuple("Poly").field(c).finish(),
            Self::GaussPoly { poly, rate, shift } => f
                .debug_struct("GaussPoly")
                .field("poly", poly)
                .field("rate", rate)
                .field("shift", shift)
                .finish(),
            Self::Series(s) => f.debug_tuple("Series").field(s).finish(),
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl FunctionSampler {
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Custom(Arc::new(f))
    }

    /// `e^{x^2 - 2}`, the initial profile of the manufactured diffusion problem.
    pub fn manufactured_g() -> Self {
        Self::GaussPoly { poly: vec![1.0], rate: 1.0, shift: -2.0 }
    }

    /// Parses a registry name such as `exp`, `sin_k:3` or `poly:[0,0,1]`.
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.trim();
        let unknown = || {
            Error::domain(format!(
                "unknown function '{name}'; known functions: {}",
                SAMPLER_REGISTRY.join(", ")
            ))
        };
        match name {
            "exp" => return Ok(Self::Exp),
            "runge" => return Ok(Self::Runge),
            "manufactured_g" => return Ok(Self::manufactured_g()),
            "sin_k" => return Ok(Self::SinK(1.0)),
            _ => {}
        }
        if let Some(k) = name.strip_prefix("sin_k:") {
            let k: f64 = k.trim().parse().map_err(|_| unknown())?;
            return Ok(Self::SinK(k));
        }
        if let Some(body) = name.strip_prefix("poly:") {
            let coeffs: Vec<f64> = serde_json::from_str(body.trim()).map_err(|_| unknown())?;
            if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                return Err(unknown());
            }
            return Ok(Self::Poly(coeffs));
        }
        Err(unknown())
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Exp => x.exp(),
            Self::SinK(k) => (k * x).sin(),
            Self::Runge => 1.0 / (1.0 + 25.0 * x * x),
            Self::Poly(c) => horner(c, x),
            Self::GaussPoly { poly, rate, shift } => horner(poly, x) * (rate * x * x + shift).exp(),
            Self::Series(s) => s
                .coefficients()
                .iter()
                .enumerate()
                .map(|(n, c)| c * legendre_unchecked(n, x))
                .sum(),
            Self::Custom(f) => f(x),
        }
    }

    /// Legendre coefficients computed without quadrature, when the sampler
    /// has a closed form for them.
    ///
    /// For [`GaussPoly`](Self::GaussPoly) the Taylor series is converted term
    /// by term; beyond the first few monomials every contribution is positive,
    /// so tiny high-order coefficients keep full relative accuracy (a
    /// quadrature sum bottoms out near `1e-16` absolute).
    pub fn exact_projection(&self, degree: usize) -> Option<LegendreSeries> {
        match self {
            Self::Poly(c) => Some(monomials_to_legendre(c, degree)),
            Self::GaussPoly { poly, rate, shift } => {
                Some(monomials_to_legendre(&gauss_poly_taylor(poly, *rate, *shift, degree), degree))
            }
            Self::Series(s) => Some(s.truncated(degree)),
            _ => None,
        }
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// Coefficient of `P_n` in the Legendre expansion of `x^m`:
/// `(2n+1) 2^n m! ((m+n)/2)! / (((m-n)/2)! (m+n+1)!)` for `m >= n` of equal
/// parity, zero otherwise.
pub fn monomial_projection_weight(m: usize, n: usize) -> f64 {
    if n > m || (m - n) % 2 == 1 {
        return 0.0;
    }
    let ln_w = ((2 * n + 1) as f64).ln()
        + n as f64 * std::f64::consts::LN_2
        + ln_factorial(m)
        + ln_factorial((m + n) / 2)
        - ln_factorial((m - n) / 2)
        - ln_factorial(m + n + 1);
    ln_w.exp()
}

fn monomials_to_legendre(monomials: &[f64], degree: usize) -> LegendreSeries {
    let mut out = vec![0.0; degree + 1];
    for (n, slot) in out.iter_mut().enumerate() {
        // Sum from the smallest contributions upward.
        *slot = monomials
            .iter()
            .enumerate()
            .skip(n)
            .rev()
            .filter(|&(m, &c)| (m - n) % 2 == 0 && c != 0.0)
            .map(|(m, &c)| c * monomial_projection_weight(m, n))
            .sum();
    }
    LegendreSeries(out)
}

/// Taylor coefficients of `poly(x) exp(rate x^2 + shift)`, long enough for
/// projection onto `degree` at full double precision.
fn gauss_poly_taylor(poly: &[f64], rate: f64, shift: f64, degree: usize) -> Vec<f64> {
    let scale = shift.exp();
    // Terms rate^k / k! are kept until they fall ~1e-40 below the peak and
    // k is past the degree of interest.
    let ln_rate = rate.abs().ln();
    let mut exp_terms = Vec::new();
    let mut peak = f64::NEG_INFINITY;
    for k in 0.. {
        if rate == 0.0 && k > 0 {
            break;
        }
        let ln_t = if k == 0 { 0.0 } else { k as f64 * ln_rate - ln_factorial(k) };
        peak = peak.max(ln_t);
        let sign = if rate < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
        exp_terms.push(sign * ln_t.exp());
        if 2 * k > degree + 2 && ln_t < peak - 92.0 {
            break;
        }
    }
    let len = poly.len() + 2 * exp_terms.len();
    let mut taylor = vec![0.0; len];
    for (k, &t) in exp_terms.iter().enumerate() {
        for (i, &p) in poly.iter().enumerate() {
            taylor[i + 2 * k] += scale * p * t;
        }
    }
    taylor
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::project;
    use crate::quadrature::gauss_legendre_rule;

    #[test]
    fn registry_parsing() {
        assert!(matches!(FunctionSampler::from_name("exp"), Ok(FunctionSampler::Exp)));
        assert!(matches!(FunctionSampler::from_name("sin_k:3"), Ok(FunctionSampler::SinK(k)) if k == 3.0));
        let p = FunctionSampler::from_name("poly:[0,0,1]").unwrap();
        assert_eq!(p.eval(0.5), 0.25);
        let g = FunctionSampler::from_name("manufactured_g").unwrap();
        assert!((g.eval(0.3) - (0.09f64 - 2.0).exp()).abs() < 1e-16);
        assert!((FunctionSampler::Runge.eval(0.2) - 0.5).abs() < 1e-16);

        let err = FunctionSampler::from_name("cosh").unwrap_err().to_string();
        for name in ["exp", "sin_k", "runge", "manufactured_g", "poly"] {
            assert!(err.contains(name), "{err}");
        }
        assert!(FunctionSampler::from_name("poly:[]").is_err());
        assert!(FunctionSampler::from_name("sin_k:abc").is_err());
    }

    #[test]
    fn monomial_weights() {
        assert!((monomial_projection_weight(2, 0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((monomial_projection_weight(2, 2) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(monomial_projection_weight(3, 2), 0.0);
        assert_eq!(monomial_projection_weight(1, 2), 0.0);
        // x^4 = 1/5 P0 + 4/7 P2 + 8/35 P4
        assert!((monomial_projection_weight(4, 0) - 0.2).abs() < 1e-15);
        assert!((monomial_projection_weight(4, 2) - 4.0 / 7.0).abs() < 1e-15);
        assert!((monomial_projection_weight(4, 4) - 8.0 / 35.0).abs() < 1e-15);
    }

    #[test]
    fn exact_and_quadrature_projection_agree() {
        let samplers = [
            FunctionSampler::manufactured_g(),
            FunctionSampler::GaussPoly { poly: vec![-3.0, 0.0, 2.0, 0.0, 4.0], rate: 1.0, shift: -2.0 },
            FunctionSampler::GaussPoly { poly: vec![1.0], rate: 2.0, shift: -4.0 },
            FunctionSampler::GaussPoly { poly: vec![0.5, 1.0], rate: -1.5, shift: 0.0 },
            FunctionSampler::Poly(vec![1.0, -2.0, 0.5, 3.0]),
        ];
        let rule = gauss_legendre_rule(60).unwrap();
        for s in &samplers {
            let exact = s.exact_projection(30).unwrap();
            let quad = project(s, 30, &rule).unwrap();
            for n in 0..=30 {
                assert!(
                    (exact.get(n) - quad.get(n)).abs() < 1e-14,
                    "{s:?} n={n}: {} vs {}",
                    exact.get(n),
                    quad.get(n)
                );
            }
        }
        assert!(FunctionSampler::Exp.exact_projection(3).is_none());
    }

    // Coefficients of e^{x^2-2} from a 30-digit reference integration.
    #[test]
    fn exact_projection_keeps_relative_accuracy() {
        let c = FunctionSampler::manufactured_g().exact_projection(30).unwrap();
        let reference = [
            (0, 0.19794839),
            (2, 0.14237048),
            (4, 0.024839387),
            (6, 0.0025282369),
            (10, 1.0185405e-5),
            (20, 4.6490249e-13),
            (30, 1.5428629e-21),
        ];
        for (n, want) in reference {
            let rel = (c.get(n) - want).abs() / want;
            assert!(rel < 1e-7, "n={n}: {} vs {want}", c.get(n));
        }
        for n in (1..=30).step_by(2) {
            assert_eq!(c.get(n), 0.0);
        }
    }
}
