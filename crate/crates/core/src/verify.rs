//! Self-checks shared by the `verify` subcommand and the acceptance tests.
//!
//! Each check recomputes a known property from scratch and reports whether it
//! held, with a one-line summary of the worst case seen.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{bound_curve, default_m_range, mu_truncation_bound_j1, weighted_norm, DEFAULT_NORM_ORDER};
use crate::error::Result;
use crate::expansion::{
    mu_coefficient, product_coefficients_finite, product_partial_sum_original,
    product_partial_sum_reindexed, project, FunctionSampler,
};
use crate::legendre::linearization_coefficient;
use crate::pde::{
    self, error_grid, error_table, linear_exact_coefficients, manufactured_case, solve_ivp, Forcing,
    IbvpSpec, SolverConfig, GRID_DX, REPORT_STEPS,
};
use crate::quadrature::gauss_legendre_rule;

/// Result of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}. {}: {}", self.id, self.name, self.detail)
    }
}

fn outcome(id: u32, name: &'static str, passed: bool, start: Instant, detail: String) -> CriterionOutcome {
    let secs = start.elapsed().as_secs_f64();
    CriterionOutcome { id, name, passed, detail: format!("{detail} ({secs:.2} s)") }
}

fn failed(id: u32, name: &'static str, err: crate::Error) -> CriterionOutcome {
    CriterionOutcome { id, name, passed: false, detail: format!("error: {err}") }
}

/// `sum_j A(j,k,l) = 1` within `1e-12` and every `A(j,k,l)` in `(0, 1]`,
/// for `0 <= l <= k <= 60`.
pub fn partition_of_unity() -> CriterionOutcome {
    const NAME: &str = "partition of unity";
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut out_of_range = 0usize;
    for k in 0..=60 {
        for l in 0..=k {
            let mut sum = 0.0;
            for j in 0..=l.min(k - l) {
                let a = match linearization_coefficient(j, k, l) {
                    Ok(a) => a,
                    Err(e) => return failed(1, NAME, e),
                };
                if !(a > 0.0 && a <= 1.0) {
                    out_of_range += 1;
                }
                sum += a;
            }
            worst = worst.max((sum - 1.0).abs());
        }
    }
    let passed = worst <= 1e-12 && out_of_range == 0;
    outcome(1, NAME, passed, start, format!("max |sum - 1| = {worst:.3e}, coefficients outside (0,1]: {out_of_range}"))
}

fn series_product_oracle(f: &FunctionSampler, g: &FunctionSampler, degree: usize) -> Result<(f64, f64)> {
    let rule = gauss_legendre_rule(64.max(2 * degree + 16))?;
    let a = project(f, degree, &rule)?;
    let b = project(g, degree, &rule)?;
    // The pointwise product of the two partial sums has degree 2*degree and
    // is integrated exactly by the rule.
    let (sa, sb) = (a.clone(), b.clone());
    let pointwise = FunctionSampler::custom(move |x| {
        sa.evaluate(x).unwrap_or(f64::NAN) * sb.evaluate(x).unwrap_or(f64::NAN)
    });
    let oracle = project(&pointwise, 2 * degree, &rule)?;
    let finite = product_coefficients_finite(&a, &b);
    let finite_err = (0..=2 * degree)
        .map(|n| (finite.get(n) - oracle.get(n)).abs())
        .fold(0.0, f64::max);
    let mu_err = (0..=degree)
        .map(|k| (mu_coefficient(&a, &b, k, degree) - oracle.get(k)).abs())
        .fold(0.0, f64::max);
    Ok((finite_err, mu_err))
}

/// Finite product coefficients agree with a quadrature projection of the
/// pointwise product to `1e-10`; `M = 24` truncated `mu_k` agree to `1e-8`.
pub fn product_oracle() -> CriterionOutcome {
    const NAME: &str = "product coefficients vs quadrature oracle";
    let start = Instant::now();
    let pairs = [
        ("e^x * sin 3x", FunctionSampler::Exp, FunctionSampler::SinK(3.0)),
        ("g * g", FunctionSampler::manufactured_g(), FunctionSampler::manufactured_g()),
        (
            "1/(2+x) * x^3",
            FunctionSampler::custom(|x| 1.0 / (2.0 + x)),
            FunctionSampler::Poly(vec![0.0, 0.0, 0.0, 1.0]),
        ),
    ];
    let mut passed = true;
    let mut parts = Vec::new();
    for (label, f, g) in &pairs {
        match series_product_oracle(f, g, 24) {
            Ok((fe, me)) => {
                passed &= fe <= 1e-10 && me <= 1e-8;
                parts.push(format!("{label}: finite {fe:.1e}, mu {me:.1e}"));
            }
            Err(e) => return failed(2, NAME, e),
        }
    }
    outcome(2, NAME, passed, start, parts.join("; "))
}

/// Both sides of the reindexing identity for random inputs (20 seeds,
/// `N <= 24`) agree at 25 points to `1e-12`.
pub fn reindexing_identity() -> CriterionOutcome {
    const NAME: &str = "reindexed partial sum";
    let start = Instant::now();
    let xs: Vec<f64> = (0..25).map(|i| -1.0 + 2.0 * i as f64 / 24.0).collect();
    let mut worst: f64 = 0.0;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_max = rng.random_range(0..=24usize);
        let da = rng.random_range(0..=12usize);
        let db = rng.random_range(0..=12usize);
        let alpha: Vec<f64> = (0..=da).map(|_| rng.random_range(-1.0..1.0)).collect();
        let beta: Vec<f64> = (0..=db).map(|_| rng.random_range(-1.0..1.0)).collect();
        for &x in &xs {
            let lhs = product_partial_sum_original(&alpha, &beta, n_max, x);
            let rhs = product_partial_sum_reindexed(&alpha, &beta, n_max, x);
            match (lhs, rhs) {
                (Ok(l), Ok(r)) => worst = worst.max((l - r).abs()),
                (Err(e), _) | (_, Err(e)) => return failed(3, NAME, e),
            }
        }
    }
    outcome(3, NAME, worst <= 1e-12, start, format!("max |lhs - rhs| = {worst:.3e} over 20 seeds x 25 points"))
}

/// For `f = g = e^{x^2-2}` the truncation error of `mu_k` stays below
/// `A_1 B_1` times the `j = 1` bound for `k in {0,2,4}`, `M in 3..=30`.
pub fn bound_dominance() -> CriterionOutcome {
    const NAME: &str = "truncation bound dominance";
    let start = Instant::now();
    let run = || -> Result<(usize, f64)> {
        let g = FunctionSampler::manufactured_g();
        let second = FunctionSampler::GaussPoly { poly: vec![2.0, 0.0, 4.0], rate: 1.0, shift: -2.0 };
        let a1 = (2.0 / std::f64::consts::PI).sqrt() * weighted_norm(&second, DEFAULT_NORM_ORDER)?;
        let alpha = g.exact_projection(60).expect("closed-form projection");
        let full = product_coefficients_finite(&alpha, &alpha);
        let mut violations = 0;
        let mut max_ratio: f64 = 0.0;
        for k in [0, 2, 4] {
            for m in 3..=30 {
                let err = (full.get(k) - mu_coefficient(&alpha, &alpha, k, m)).abs();
                let bound = a1 * a1 * mu_truncation_bound_j1(k, m)?;
                if err > bound {
                    violations += 1;
                }
                max_ratio = max_ratio.max(err / bound);
            }
        }
        Ok((violations, max_ratio))
    };
    match run() {
        Ok((v, r)) => outcome(4, NAME, v == 0, start, format!("violations: {v}, max error/bound = {r:.3e}")),
        Err(e) => failed(4, NAME, e),
    }
}

/// The `j = 1` bound at `k = 2`, `M = 10` is `0.020204 +- 1e-5`, and both
/// default bound curves decrease strictly.
pub fn bound_curves() -> CriterionOutcome {
    const NAME: &str = "bound point value and curve shape";
    let start = Instant::now();
    let run = || -> Result<(f64, f64, bool)> {
        let value = mu_truncation_bound_j1(2, 10)?;
        // 4(k+2) / [(k+2M-2)(2 sqrt((M-2)(k+M)) + 2(M-1) + k)] at k = 2, M = 10.
        let independent = 16.0 / (20.0 * (2.0 * 96f64.sqrt() + 18.0 + 2.0));
        let mut decreasing = true;
        for j in [1, 2] {
            let (lo, hi) = default_m_range(j);
            let curve = bound_curve(2, j, lo, hi)?;
            decreasing &= curve.windows(2).all(|w| w[1].bound < w[0].bound);
        }
        Ok((value, independent, decreasing))
    };
    match run() {
        Ok((v, ind, dec)) => {
            let passed = (v - 0.020204).abs() <= 1e-5 && (v - ind).abs() <= 1e-5 && dec;
            outcome(
                5,
                NAME,
                passed,
                start,
                format!("bound(2,10) = {v:.8}, independent = {ind:.8}, curves strictly decreasing: {dec}"),
            )
        }
        Err(e) => failed(5, NAME, e),
    }
}

fn manufactured_trajectory() -> Result<(IbvpSpec, pde::ManufacturedSolution, pde::Trajectory)> {
    let (spec, exact) = manufactured_case(30)?;
    let traj = solve_ivp(&spec, &SolverConfig::new(0.01, 4000, 6)?)?;
    Ok((spec, exact, traj))
}

/// Relative grid error of the `N' = 6` reconstruction is below 1% at the six
/// report times.
pub fn manufactured_solve() -> CriterionOutcome {
    const NAME: &str = "manufactured solve, N' = 6";
    let start = Instant::now();
    let run = || -> Result<Vec<pde::ErrorRow>> {
        let (_, exact, traj) = manufactured_trajectory()?;
        error_table(&traj, |x, t| exact.value(x, t), &REPORT_STEPS, &[6], &error_grid(GRID_DX))
    };
    match run() {
        Ok(rows) => {
            let passed = rows.iter().all(|r| r.relative_error < 0.01);
            let per_step: Vec<String> =
                rows.iter().map(|r| format!("m={} {:.2e}", r.step, r.relative_error)).collect();
            outcome(6, NAME, passed, start, format!("relative errors: {}", per_step.join(", ")))
        }
        Err(e) => failed(6, NAME, e),
    }
}

/// `a_n(t)` tracks `e^{-t} c_n` within 1% for `n in {0,4,6,10,20,30}` at
/// every step, and odd modes stay below `1e-8`.
pub fn coefficient_tracking() -> CriterionOutcome {
    const NAME: &str = "coefficient tracking";
    let start = Instant::now();
    const MODES: [usize; 6] = [0, 4, 6, 10, 20, 30];
    let run = || -> Result<([f64; 6], [Option<f64>; 6], f64)> {
        let (_, exact, traj) = manufactured_trajectory()?;
        let mut worst_rel = [0.0f64; 6];
        let mut first_miss = [None; 6];
        let mut worst_odd: f64 = 0.0;
        for (t, row) in traj.times().iter().zip(traj.rows()) {
            let want = exact.coefficients(*t);
            for (i, &n) in MODES.iter().enumerate() {
                let rel = ((row[n] - want[n]) / want[n]).abs();
                worst_rel[i] = worst_rel[i].max(rel);
                if rel >= 0.01 && first_miss[i].is_none() {
                    first_miss[i] = Some(*t);
                }
            }
            for a in row.iter().skip(1).step_by(2) {
                worst_odd = worst_odd.max(a.abs());
            }
        }
        Ok((worst_rel, first_miss, worst_odd))
    };
    match run() {
        Ok((rel, miss, odd)) => {
            let passed = rel.iter().all(|&r| r < 0.01) && odd < 1e-8;
            let modes: Vec<String> = MODES
                .iter()
                .zip(rel.iter().zip(&miss))
                .map(|(n, (r, m))| match m {
                    Some(t) => format!("n={n} max {r:.1e} (>= 1% from t={t})"),
                    None => format!("n={n} max {r:.1e}"),
                })
                .collect();
            outcome(7, NAME, passed, start, format!("{}; max odd |a_n| {odd:.1e}", modes.join(", ")))
        }
        Err(e) => failed(7, NAME, e),
    }
}

/// The `c = 0` problem used for the order check: the manufactured data at
/// `N = 4` with the quadratic term switched off.
pub fn linear_test_problem() -> Result<IbvpSpec> {
    let (spec, _) = manufactured_case(4)?;
    IbvpSpec::new(0.0, 4, spec.initial().clone(), spec.forcing().to_vec())
}

/// Maximum coefficient error against the closed form over `[0, t_end]`.
pub fn linear_max_error(spec: &IbvpSpec, dt: f64, t_end: f64) -> Result<f64> {
    let steps = (t_end / dt).round() as usize;
    let traj = solve_ivp(spec, &SolverConfig::new(dt, steps, spec.order())?)?;
    let mut worst: f64 = 0.0;
    for (t, row) in traj.times().iter().zip(traj.rows()) {
        let want = linear_exact_coefficients(spec, *t)?;
        for (a, w) in row.iter().zip(&want) {
            worst = worst.max((a - w).abs());
        }
    }
    Ok(worst)
}

/// Halving `dt` from 0.02 to 0.01 to 0.005 divides the maximum error by
/// `16` within a factor of two.
pub fn rk4_order() -> CriterionOutcome {
    const NAME: &str = "RK4 convergence order";
    let start = Instant::now();
    let run = || -> Result<Vec<f64>> {
        let spec = linear_test_problem()?;
        debug_assert!(spec.forcing().iter().all(|f| matches!(f, Forcing::Separable { .. })));
        [0.02, 0.01, 0.005].iter().map(|&dt| linear_max_error(&spec, dt, 1.0)).collect()
    };
    match run() {
        Ok(errs) => {
            let ratios = [errs[0] / errs[1], errs[1] / errs[2]];
            let passed = ratios.iter().all(|r| (8.0..=32.0).contains(r));
            outcome(
                8,
                NAME,
                passed,
                start,
                format!(
                    "errors {:.3e}, {:.3e}, {:.3e}; ratios {:.2}, {:.2}",
                    errs[0], errs[1], errs[2], ratios[0], ratios[1]
                ),
            )
        }
        Err(e) => failed(8, NAME, e),
    }
}

/// Every check in order.
pub fn run_all() -> Vec<CriterionOutcome> {
    vec![
        partition_of_unity(),
        product_oracle(),
        reindexing_identity(),
        bound_dominance(),
        bound_curves(),
        manufactured_solve(),
        coefficient_tracking(),
        rk4_order(),
    ]
}

