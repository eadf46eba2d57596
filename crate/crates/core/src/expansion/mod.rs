//! Fourier-Legendre series: the data model, projection of functions onto the
//! basis, and coefficient formulas for products and powers.

mod product;
mod sampler;

pub use product::{
    mu_coefficient, mu_coefficients, power_series, product_bracket_coefficients,
    product_coefficients_finite, product_coefficients_into, product_partial_sum_original,
    product_partial_sum_reindexed,
};
pub use sampler::{monomial_projection_weight, FunctionSampler, SAMPLER_REGISTRY};

use crate::error::{Error, Result};
use crate::legendre::{check_unit_interval, fill_legendre, legendre_unchecked};
use crate::quadrature::QuadratureRule;

/// A finite Legendre series `sum_{n=0}^{N} c_n P_n(x)`.
///
/// Coefficients past the stored degree read as zero, which is how truncated
/// coefficient sequences are represented.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreSeries(Vec<f64>);

impl LegendreSeries {
    /// Wraps a coefficient vector. It must be non-empty and finite.
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::data("a Legendre series needs at least one coefficient"));
        }
        if let Some(n) = coefficients.iter().position(|c| !c.is_finite()) {
            return Err(Error::data(format!("coefficient {n} is not finite")));
        }
        Ok(LegendreSeries(coefficients))
    }

    pub fn zeros(degree: usize) -> Self {
        LegendreSeries(vec![0.0; degree + 1])
    }

    /// The constant series `value * P_0`.
    pub fn constant(value: f64) -> Result<Self> {
        Self::new(vec![value])
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Coefficient `n`, or zero past the stored degree.
    #[inline]
    pub fn get(&self, n: usize) -> f64 {
        self.0.get(n).copied().unwrap_or(0.0)
    }

    /// Cuts (or zero-pads) to exactly `degree + 1` coefficients.
    pub fn truncated(&self, degree: usize) -> Self {
        let mut c = self.0.clone();
        c.resize(degree + 1, 0.0);
        LegendreSeries(c)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|c| c * factor).collect())
    }

    /// The partial sum at `x`.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        evaluate(self, x)
    }

    /// `(1 - x^2) d/dx` of the partial sum, via
    /// `(1 - x^2) P_n'(x) = n (P_{n-1}(x) - x P_n(x))`.
    pub fn degenerate_flux(&self, x: f64) -> Result<f64> {
        check_unit_interval(x)?;
        let mut p = Vec::new();
        fill_legendre(x, self.degree(), &mut p);
        Ok((1..=self.degree())
            .map(|n| self.0[n] * n as f64 * (p[n - 1] - x * p[n]))
            .sum())
    }
}

impl AsRef<[f64]> for LegendreSeries {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Evaluates the partial sum `sum_n c_n P_n(x)`.
pub fn evaluate(series: &LegendreSeries, x: f64) -> Result<f64> {
    check_unit_interval(x)?;
    let mut p = Vec::with_capacity(series.0.len());
    fill_legendre(x, series.degree(), &mut p);
    Ok(series.0.iter().zip(&p).map(|(c, p)| c * p).sum())
}

/// Projects `f` onto `P_0 ..= P_degree`:
/// `c_n = (2n+1)/2 * sum_i w_i f(x_i) P_n(x_i)`.
///
/// Mirrored nodes are summed pairwise, so even (odd) samplers produce exactly
/// zero odd (even) coefficients.
pub fn project(f: &FunctionSampler, degree: usize, rule: &QuadratureRule) -> Result<LegendreSeries> {
    if rule.order() < degree + 1 {
        return Err(Error::domain(format!(
            "quadrature order {} is too low to project onto degree {degree}",
            rule.order()
        )));
    }
    let nodes = rule.nodes();
    let weights = rule.weights();
    let q = nodes.len();
    let mut values = Vec::with_capacity(q);
    for (i, &x) in nodes.iter().enumerate() {
        let v = f.eval(x);
        if !v.is_finite() {
            return Err(Error::data(format!(
                "sampler returned {v} at quadrature node {i} (x = {x})"
            )));
        }
        values.push(weights[i] * v);
    }

    let mut coefficients = vec![0.0; degree + 1];
    let mut p_lo = Vec::with_capacity(degree + 1);
    let mut p_hi = Vec::with_capacity(degree + 1);
    for i in 0..q / 2 {
        let mirror = q - 1 - i;
        fill_legendre(nodes[i], degree, &mut p_lo);
        fill_legendre(nodes[mirror], degree, &mut p_hi);
        for n in 0..=degree {
            coefficients[n] += values[i] * p_lo[n] + values[mirror] * p_hi[n];
        }
    }
    if q % 2 == 1 {
        let mid = q / 2;
        for (n, c) in coefficients.iter_mut().enumerate() {
            *c += values[mid] * legendre_unchecked(n, nodes[mid]);
        }
    }
    for (n, c) in coefficients.iter_mut().enumerate() {
        *c *= (2 * n + 1) as f64 / 2.0;
    }
    LegendreSeries::new(coefficients)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_legendre_rule;

    fn assert_series_close(got: &LegendreSeries, want: &[f64], tol: f64) {
        assert_eq!(got.coefficients().len(), want.len(), "{got:?}");
        for (n, (g, w)) in got.coefficients().iter().zip(want).enumerate() {
            assert!((g - w).abs() <= tol, "coefficient {n}: {g} vs {w}");
        }
    }

    #[test]
    fn series_validation() {
        assert!(LegendreSeries::new(vec![]).is_err());
        assert!(LegendreSeries::new(vec![1.0, f64::NAN]).is_err());
        assert!(LegendreSeries::new(vec![1.0, f64::INFINITY]).is_err());
        let s = LegendreSeries::new(vec![1.0, 2.0]).unwrap();
        assert_eq!(s.degree(), 1);
        assert_eq!(s.get(5), 0.0);
        assert_eq!(s.truncated(3).coefficients(), &[1.0, 2.0, 0.0, 0.0]);
        assert_eq!(s.truncated(0).coefficients(), &[1.0]);
    }

    #[test]
    fn project_square() {
        let rule = gauss_legendre_rule(20).unwrap();
        let f = FunctionSampler::Poly(vec![0.0, 0.0, 1.0]);
        let s = project(&f, 4, &rule).unwrap();
        assert_series_close(&s, &[1.0 / 3.0, 0.0, 2.0 / 3.0, 0.0, 0.0], 1e-14);
    }

    #[test]
    fn project_reproduces_basis() {
        let rule = gauss_legendre_rule(21).unwrap();
        let p3 = FunctionSampler::custom(|x| legendre_unchecked(3, x));
        let s = project(&p3, 5, &rule).unwrap();
        assert_series_close(&s, &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0], 1e-14);

        let one = FunctionSampler::Poly(vec![1.0]);
        assert_series_close(&project(&one, 2, &rule).unwrap(), &[1.0, 0.0, 0.0], 1e-14);
    }

    #[test]
    fn project_rejects_low_order_and_bad_samples() {
        let rule = gauss_legendre_rule(3).unwrap();
        assert!(matches!(
            project(&FunctionSampler::Exp, 3, &rule),
            Err(Error::Domain(_))
        ));
        let bad = FunctionSampler::custom(|x| if x > 0.5 { f64::NAN } else { x });
        let err = project(&bad, 2, &rule).unwrap_err();
        assert!(matches!(err, Error::Data(ref m) if m.contains("node 2")), "{err}");
    }

    #[test]
    fn even_sampler_has_exactly_zero_odd_coefficients() {
        let rule = gauss_legendre_rule(47).unwrap();
        let s = project(&FunctionSampler::manufactured_g(), 30, &rule).unwrap();
        for n in (1..=30).step_by(2) {
            assert_eq!(s.get(n), 0.0);
        }
    }

    #[test]
    fn evaluate_examples() {
        let sq = LegendreSeries::new(vec![1.0 / 3.0, 0.0, 2.0 / 3.0]).unwrap();
        assert!((sq.evaluate(0.5).unwrap() - 0.25).abs() < 1e-15);
        let c = LegendreSeries::constant(2.5).unwrap();
        assert_eq!(c.evaluate(-0.9).unwrap(), 2.5);
        let lin = LegendreSeries::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(lin.evaluate(-0.3).unwrap(), -0.3);
        assert!(matches!(lin.evaluate(1.2), Err(Error::Domain(_))));
    }

    #[test]
    fn flux_of_quadratic() {
        // T = x^2: (1 - x^2) T' = 2x (1 - x^2).
        let sq = LegendreSeries::new(vec![1.0 / 3.0, 0.0, 2.0 / 3.0]).unwrap();
        for x in [-1.0, -0.4, 0.0, 0.7, 1.0] {
            let want = 2.0 * x * (1.0 - x * x);
            assert!((sq.degenerate_flux(x).unwrap() - want).abs() < 1e-15);
        }
    }
}
