//! Legendre coefficients of products.
//!
//! For coefficient sequences `alpha`, `beta` the product coefficients are
//!
//! ```text
//! mu_n = sum_{m>=0} sum_{l=m}^{n+m} alpha_{n+2m-l} beta_l A(m, n+2m, l)
//! ```
//!
//! which is exact and finite when both sequences are finitely supported.

use super::LegendreSeries;
use crate::error::{Error, Result};
use crate::legendre::{fill_legendre, LinearizationTable};

/// Writes the product coefficients of degrees `0..out.len()` into `out`.
///
/// `table` must cover `k` up to `a.len() + b.len() - 2`. Coefficients past
/// that degree are zero.
pub fn product_coefficients_into(a: &[f64], b: &[f64], table: &LinearizationTable, out: &mut [f64]) {
    let (na, nb) = (a.len() - 1, b.len() - 1);
    let top = na + nb;
    debug_assert!(table.k_max() >= top);
    for (n, slot) in out.iter_mut().enumerate() {
        if n > top {
            *slot = 0.0;
            continue;
        }
        let mut acc = 0.0;
        for m in 0..=(top - n) / 2 {
            let k = n + 2 * m;
            // alpha index k - l must stay <= na, and l <= nb.
            let l_lo = m.max(k.saturating_sub(na));
            let l_hi = (n + m).min(nb);
            for l in l_lo..=l_hi {
                acc += a[k - l] * b[l] * table.get(m, k, l);
            }
        }
        *slot = acc;
    }
}

/// Exact Legendre coefficients of the product of two finite series; the
/// result has degree `deg a + deg b`.
pub fn product_coefficients_finite(a: &LegendreSeries, b: &LegendreSeries) -> LegendreSeries {
    let top = a.degree() + b.degree();
    let table = LinearizationTable::new(top);
    let mut out = vec![0.0; top + 1];
    product_coefficients_into(a.coefficients(), b.coefficients(), &table, &mut out);
    LegendreSeries(out)
}

/// The `M`-truncated coefficient series for `mu_k`:
/// `sum_{m=0}^{M} sum_{l=m}^{k+m} alpha_{k+2m-l} beta_l A(m, k+2m, l)`.
pub fn mu_coefficient(alpha: &LegendreSeries, beta: &LegendreSeries, k: usize, m_max: usize) -> f64 {
    let top = alpha.degree() + beta.degree();
    if k > top {
        return 0.0;
    }
    let m_eff = m_max.min((top - k) / 2);
    let table = LinearizationTable::new(k + 2 * m_eff);
    mu_with_table(alpha, beta, k, m_eff, &table)
}

/// `mu_coefficient` for every `k` in `0..=k_max`, sharing one table.
pub fn mu_coefficients(
    alpha: &LegendreSeries,
    beta: &LegendreSeries,
    k_max: usize,
    m_max: usize,
) -> LegendreSeries {
    let top = alpha.degree() + beta.degree();
    let reach = (k_max + 2 * m_max).min(top.max(k_max));
    let table = LinearizationTable::new(reach);
    let out = (0..=k_max)
        .map(|k| {
            if k > top {
                0.0
            } else {
                mu_with_table(alpha, beta, k, m_max.min((top - k) / 2), &table)
            }
        })
        .collect();
    LegendreSeries(out)
}

fn mu_with_table(
    alpha: &LegendreSeries,
    beta: &LegendreSeries,
    k: usize,
    m_max: usize,
    table: &LinearizationTable,
) -> f64 {
    let (na, nb) = (alpha.degree(), beta.degree());
    let mut acc = 0.0;
    for m in 0..=m_max {
        let kk = k + 2 * m;
        let l_lo = m.max(kk.saturating_sub(na));
        let l_hi = (k + m).min(nb);
        for l in l_lo..=l_hi {
            acc += alpha.get(kk - l) * beta.get(l) * table.get(m, kk, l);
        }
    }
    acc
}

/// `a^p`, truncating every intermediate product to degree `cap`.
/// The result always has `cap + 1` coefficients.
pub fn power_series(a: &LegendreSeries, p: usize, cap: usize) -> Result<LegendreSeries> {
    if p == 0 {
        return Err(Error::domain("power must be at least 1"));
    }
    let base = a.truncated(cap);
    let table = LinearizationTable::new(2 * cap);
    let mut acc = base.clone();
    let mut scratch = vec![0.0; cap + 1];
    for _ in 1..p {
        product_coefficients_into(acc.coefficients(), base.coefficients(), &table, &mut scratch);
        acc = LegendreSeries::new(scratch.clone())?;
    }
    Ok(acc)
}

/// Coefficients of the degree-`n_max` bracket
/// `sum_{m=0}^{floor((N-n)/2)} sum_{l=m}^{n+m} alpha_{n+2m-l} beta_l A(m, n+2m, l)`
/// for `n = 0..=N`.
pub fn product_bracket_coefficients(alpha: &[f64], beta: &[f64], n_max: usize) -> Vec<f64> {
    let table = LinearizationTable::new(n_max);
    let at = |s: &[f64], i: usize| s.get(i).copied().unwrap_or(0.0);
    (0..=n_max)
        .map(|n| {
            let mut acc = 0.0;
            for m in 0..=(n_max - n) / 2 {
                for l in m..=n + m {
                    acc += at(alpha, n + 2 * m - l) * at(beta, l) * table.get(m, n + 2 * m, l);
                }
            }
            acc
        })
        .collect()
}

/// The triple sum in product-degree order,
/// `sum_{k=0}^{N} sum_{l=0}^{k} sum_{j=0}^{min(k-l, l)} alpha_{k-l} beta_l A(j,k,l) P_{k-2j}(x)`.
pub fn product_partial_sum_original(alpha: &[f64], beta: &[f64], n_max: usize, x: f64) -> Result<f64> {
    crate::legendre::check_unit_interval(x)?;
    let table = LinearizationTable::new(n_max);
    let mut p = Vec::new();
    fill_legendre(x, n_max, &mut p);
    let at = |s: &[f64], i: usize| s.get(i).copied().unwrap_or(0.0);
    let mut acc = 0.0;
    for k in 0..=n_max {
        for l in 0..=k {
            for j in 0..=(k - l).min(l) {
                acc += at(alpha, k - l) * at(beta, l) * table.get(j, k, l) * p[k - 2 * j];
            }
        }
    }
    Ok(acc)
}

/// The same partial sum regrouped by output degree:
/// `sum_{n=0}^{N} [bracket_n] P_n(x)`.
pub fn product_partial_sum_reindexed(alpha: &[f64], beta: &[f64], n_max: usize, x: f64) -> Result<f64> {
    crate::legendre::check_unit_interval(x)?;
    let mut p = Vec::new();
    fill_legendre(x, n_max, &mut p);
    Ok(product_bracket_coefficients(alpha, beta, n_max)
        .iter()
        .zip(&p)
        .map(|(c, p)| c * p)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(c: &[f64]) -> LegendreSeries {
        LegendreSeries::new(c.to_vec()).unwrap()
    }

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
        for (i, (g, w)) in got.iter().zip(want).enumerate() {
            assert!((g - w).abs() <= tol, "index {i}: {g} vs {w}");
        }
    }

    #[test]
    fn x_times_x() {
        let x = series(&[0.0, 1.0]);
        let p = product_coefficients_finite(&x, &x);
        assert_close(p.coefficients(), &[1.0 / 3.0, 0.0, 2.0 / 3.0], 1e-15);
    }

    #[test]
    fn multiplication_by_one() {
        let b = series(&[0.3, -1.2, 0.7, 2.0]);
        let p = product_coefficients_finite(&series(&[1.0]), &b);
        assert_close(p.coefficients(), b.coefficients(), 1e-15);
    }

    #[test]
    fn p2_times_p1() {
        let p = product_coefficients_finite(&series(&[0.0, 0.0, 1.0]), &series(&[0.0, 1.0]));
        let c = p.coefficients();
        assert_eq!(c.len(), 4);
        assert_eq!(c[0], 0.0);
        assert_eq!(c[2], 0.0);
        // P_2 P_1 = 3/5 P_3 + 2/5 P_1
        assert!((c[3] - 0.6).abs() < 1e-15);
        assert!((c[1] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn mu_examples() {
        let x = series(&[0.0, 1.0]);
        assert!((mu_coefficient(&x, &x, 0, 1) - 1.0 / 3.0).abs() < 1e-15);
        assert!((mu_coefficient(&x, &x, 2, 0) - 2.0 / 3.0).abs() < 1e-15);
        // mu_0 needs the m = 1 term; M = 0 misses it.
        assert_eq!(mu_coefficient(&x, &x, 0, 0), 0.0);
        let one = series(&[1.0]);
        let p2 = series(&[0.0, 0.0, 1.0]);
        assert!((mu_coefficient(&one, &p2, 2, 3) - 1.0).abs() < 1e-15);
        assert_eq!(mu_coefficient(&one, &p2, 7, 3), 0.0);
    }

    #[test]
    fn mu_matches_finite_product_once_m_is_large() {
        let a = series(&[0.5, -0.25, 1.0, 0.125, -0.75]);
        let b = series(&[1.5, 0.5, -0.5]);
        let full = product_coefficients_finite(&a, &b);
        let mus = mu_coefficients(&a, &b, 6, 3);
        for k in 0..=6 {
            assert!((mu_coefficient(&a, &b, k, 3) - full.get(k)).abs() < 1e-15);
            assert!((mus.get(k) - full.get(k)).abs() < 1e-15);
        }
    }

    #[test]
    fn powers() {
        let x = series(&[0.0, 1.0]);
        let sq = power_series(&x, 2, 4).unwrap();
        assert_close(sq.coefficients(), &[1.0 / 3.0, 0.0, 2.0 / 3.0, 0.0, 0.0], 1e-15);

        let c = series(&[1.5]);
        assert_close(power_series(&c, 3, 0).unwrap().coefficients(), &[3.375], 1e-15);

        let x4 = power_series(&x, 4, 8).unwrap();
        let want = [0.2, 0.0, 4.0 / 7.0, 0.0, 8.0 / 35.0, 0.0, 0.0, 0.0, 0.0];
        assert_close(x4.coefficients(), &want, 1e-15);

        let trunc = power_series(&series(&[1.0, 2.0, 3.0]), 1, 1).unwrap();
        assert_close(trunc.coefficients(), &[1.0, 2.0], 0.0);
        assert!(power_series(&x, 0, 3).is_err());
    }

    #[test]
    fn bracket_with_full_reach_is_the_finite_product() {
        let a = [0.2, 0.4, -0.1, 0.3];
        let b = [1.0, -0.5, 0.25];
        let bracket = product_bracket_coefficients(&a, &b, 5);
        let full = product_coefficients_finite(&series(&a), &series(&b));
        assert_close(&bracket, full.coefficients(), 1e-15);
    }
}
