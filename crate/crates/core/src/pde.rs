//! Spectral solution of the quadratic diffusion problem
//!
//! ```text
//! T_t = ((1 - x^2) T_x)_x + c T^2 + f(x, t),   x in [-1, 1]
//! T_x(-1, t) = T_x(1, t) = 0,   T(x, 0) = g(x)
//! ```
//!
//! Expanding `T = sum a_n(t) P_n(x)` diagonalizes the diffusion operator
//! (eigenvalue `-n(n+1)`) and turns the problem into the ODE system
//!
//! ```text
//! a_n' = -n(n+1) a_n + c b_n + d_n(t),   a_n(0) = c_n,   n = 0..=N
//! ```
//!
//! where `b_n` are the product coefficients of `T^2` truncated to degree `N`.
//! The system is marched with classic fixed-step RK4.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expansion::{evaluate, FunctionSampler, LegendreSeries};
use crate::expansion::{product_coefficients_into, project};
use crate::legendre::LinearizationTable;
use crate::quadrature::{default_order, gauss_legendre_rule};

/// Time step used for all reported results.
pub const DEFAULT_DT: f64 = 0.01;
/// Default truncation order of the ODE system.
pub const DEFAULT_ORDER: usize = 30;
/// Spatial spacing of the error grid.
pub const GRID_DX: f64 = 0.005;
/// Report times, in multiples of `dt`.
pub const REPORT_STEPS: [usize; 6] = [100, 500, 1000, 2000, 3000, 4000];
/// Reconstruction orders reported by default.
pub const REPORT_N_PRIMES: [usize; 4] = [0, 2, 4, 6];
/// Largest `h * n(n+1)` taken by one RK4 substep. Classic RK4 is stable on
/// the negative real axis up to about 2.785.
pub const RK4_STABLE_STEP: f64 = 2.5;

/// Adds the forcing coefficients at time `t` into the slice.
pub type ForcingFn = Arc<dyn Fn(f64, &mut [f64]) + Send + Sync>;

/// One additive forcing contribution to `d_n(t)`.
#[derive(Clone)]
pub enum Forcing {
    /// `exp(-rate t) * spatial_n`.
    Separable { rate: f64, spatial: LegendreSeries },
    /// Adds `d_n(t)` into the slice. Extension point for forcings that do not
    /// separate.
    Callback(ForcingFn),
}

impl std::fmt::Debug for Forcing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Forcing::Separable { rate, spatial } => f
                .debug_struct("Separable")
                .field("rate", rate)
                .field("spatial", spatial)
                .finish(),
            Forcing::Callback(_) => write!(f, "Callback(..)"),
        }
    }
}

/// The coefficient-space problem: nonlinearity constant `c`, forcing, initial
/// coefficients and truncation order `N`.
#[derive(Debug, Clone)]
pub struct IbvpSpec {
    c: f64,
    forcing: Vec<Forcing>,
    initial: LegendreSeries,
    order: usize,
}

impl IbvpSpec {
    /// The initial series and every separable forcing profile must have
    /// degree at most `order`.
    pub fn new(c: f64, order: usize, initial: LegendreSeries, forcing: Vec<Forcing>) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::domain(format!("nonlinearity constant c = {c} is not finite")));
        }
        if initial.degree() > order {
            return Err(Error::domain(format!(
                "initial series has degree {} above the truncation order {order}",
                initial.degree()
            )));
        }
        for (i, term) in forcing.iter().enumerate() {
            if let Forcing::Separable { rate, spatial } = term {
                if spatial.degree() > order {
                    return Err(Error::domain(format!(
                        "forcing term {i} has degree {} above the truncation order {order}",
                        spatial.degree()
                    )));
                }
                if !rate.is_finite() {
                    return Err(Error::domain(format!("forcing term {i} has non-finite rate")));
                }
            }
        }
        Ok(IbvpSpec { c, forcing, initial, order })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn initial(&self) -> &LegendreSeries {
        &self.initial
    }

    pub fn forcing(&self) -> &[Forcing] {
        &self.forcing
    }

    /// Initial coefficients zero-padded to `N + 1` entries.
    pub fn initial_coefficients(&self) -> Vec<f64> {
        self.initial.truncated(self.order).into_vec()
    }

    /// Adds `d_n(t)` for every `n` into `out`.
    pub fn add_forcing(&self, t: f64, out: &mut [f64]) {
        for term in &self.forcing {
            match term {
                Forcing::Separable { rate, spatial } => {
                    let scale = (-rate * t).exp();
                    for (o, s) in out.iter_mut().zip(spatial.coefficients()) {
                        *o += scale * s;
                    }
                }
                Forcing::Callback(f) => f(t, out),
            }
        }
    }
}

/// Time step, step count and reconstruction order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub dt: f64,
    pub steps: usize,
    pub n_prime: usize,
}

impl SolverConfig {
    pub fn new(dt: f64, steps: usize, n_prime: usize) -> Result<Self> {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::domain(format!("time step must be positive, got {dt}")));
        }
        if steps == 0 {
            return Err(Error::domain("step count must be positive"));
        }
        Ok(SolverConfig { dt, steps, n_prime })
    }
}

/// Coefficients `a_n(t^m)` on the grid `t^m = m dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    rows: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, m: usize) -> Option<&[f64]> {
        self.rows.get(m).map(Vec::as_slice)
    }

    /// Number of stored time levels (`steps + 1`).
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.rows[0].len() - 1
    }
}

/// Evaluates the ODE right-hand side with reusable buffers.
#[derive(Debug, Clone)]
pub struct SpectralSystem<'a> {
    spec: &'a IbvpSpec,
    table: LinearizationTable,
    square: Vec<f64>,
}

impl<'a> SpectralSystem<'a> {
    pub fn new(spec: &'a IbvpSpec) -> Self {
        let n = spec.order;
        SpectralSystem {
            spec,
            table: LinearizationTable::new(2 * n),
            square: vec![0.0; n + 1],
        }
    }

    /// `out_n = -n(n+1) a_n + c b_n + d_n(t)`.
    pub fn rhs(&mut self, a: &[f64], t: f64, out: &mut [f64]) {
        let c = self.spec.c;
        if c != 0.0 {
            product_coefficients_into(a, a, &self.table, &mut self.square);
        }
        for (n, o) in out.iter_mut().enumerate() {
            let nf = n as f64;
            *o = -nf * (nf + 1.0) * a[n];
            if c != 0.0 {
                *o += c * self.square[n];
            }
        }
        self.spec.add_forcing(t, out);
    }
}

/// The right-hand side of the coefficient ODE system.
pub fn spectral_rhs(a: &[f64], t: f64, spec: &IbvpSpec) -> Result<Vec<f64>> {
    check_len(a, spec)?;
    let mut out = vec![0.0; a.len()];
    SpectralSystem::new(spec).rhs(a, t, &mut out);
    Ok(out)
}

fn check_len(a: &[f64], spec: &IbvpSpec) -> Result<()> {
    if a.len() != spec.order + 1 {
        return Err(Error::domain(format!(
            "state has {} coefficients, expected N + 1 = {}",
            a.len(),
            spec.order + 1
        )));
    }
    Ok(())
}

/// Classic RK4 with preallocated stage buffers.
#[derive(Debug, Clone)]
pub struct Rk4<'a> {
    system: SpectralSystem<'a>,
    k: [Vec<f64>; 4],
    stage: Vec<f64>,
}

impl<'a> Rk4<'a> {
    pub fn new(spec: &'a IbvpSpec) -> Self {
        let len = spec.order + 1;
        Rk4 {
            system: SpectralSystem::new(spec),
            k: std::array::from_fn(|_| vec![0.0; len]),
            stage: vec![0.0; len],
        }
    }

    /// Advances `a` from `t` to `t + h` in place.
    pub fn step(&mut self, a: &mut [f64], t: f64, h: f64) {
        let [k1, k2, k3, k4] = &mut self.k;
        let stage = &mut self.stage;
        let sys = &mut self.system;

        sys.rhs(a, t, k1);
        for i in 0..a.len() {
            stage[i] = a[i] + 0.5 * h * k1[i];
        }
        sys.rhs(stage, t + 0.5 * h, k2);
        for i in 0..a.len() {
            stage[i] = a[i] + 0.5 * h * k2[i];
        }
        sys.rhs(stage, t + 0.5 * h, k3);
        for i in 0..a.len() {
            stage[i] = a[i] + h * k3[i];
        }
        sys.rhs(stage, t + h, k4);
        for i in 0..a.len() {
            a[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
}

/// One classic RK4 step of size `dt` from `(t, a)`.
pub fn rk4_step(a: &[f64], t: f64, dt: f64, spec: &IbvpSpec) -> Result<Vec<f64>> {
    check_len(a, spec)?;
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::domain(format!("time step must be positive, got {dt}")));
    }
    let mut next = a.to_vec();
    Rk4::new(spec).step(&mut next, t, dt);
    check_finite(&next, 0, t + dt)?;
    Ok(next)
}

fn check_finite(a: &[f64], step: usize, t: f64) -> Result<()> {
    match a.iter().position(|v| !v.is_finite()) {
        Some(mode) => Err(Error::Divergence { step, t, mode }),
        None => Ok(()),
    }
}

/// Number of RK4 substeps per reporting step that keeps `h n(n+1)` within
/// [`RK4_STABLE_STEP`] for every mode up to `order`.
pub fn stable_substeps(dt: f64, order: usize) -> usize {
    let stiffness = (order * (order + 1)) as f64;
    ((dt * stiffness / RK4_STABLE_STEP).ceil() as usize).max(1)
}

/// Integrates the coefficient system from `t = 0` over `cfg.steps` steps of
/// `cfg.dt`, storing every step.
///
/// Each step is split into [`stable_substeps`] equal RK4 substeps; when the
/// step is already stable for the highest mode this is plain RK4 at `dt`.
pub fn solve_ivp(spec: &IbvpSpec, cfg: &SolverConfig) -> Result<Trajectory> {
    if cfg.n_prime > spec.order {
        return Err(Error::domain(format!(
            "reconstruction order {} exceeds truncation order {}",
            cfg.n_prime, spec.order
        )));
    }
    let substeps = stable_substeps(cfg.dt, spec.order);
    let h = cfg.dt / substeps as f64;
    let mut rk = Rk4::new(spec);
    let mut state = spec.initial_coefficients();
    let mut times = Vec::with_capacity(cfg.steps + 1);
    let mut rows = Vec::with_capacity(cfg.steps + 1);
    times.push(0.0);
    rows.push(state.clone());
    for m in 1..=cfg.steps {
        let t0 = (m - 1) as f64 * cfg.dt;
        for s in 0..substeps {
            rk.step(&mut state, t0 + s as f64 * h, h);
        }
        let t = m as f64 * cfg.dt;
        check_finite(&state, m, t)?;
        times.push(t);
        rows.push(state.clone());
    }
    Ok(Trajectory { times, rows })
}

/// `T_{N'}(x, t^m) = sum_{n=0}^{N'} a_n(t^m) P_n(x)` at each `x`.
pub fn reconstruct(traj: &Trajectory, m: usize, n_prime: usize, xs: &[f64]) -> Result<Vec<f64>> {
    let row = traj
        .row(m)
        .ok_or_else(|| Error::domain(format!("step {m} is outside the trajectory (0..{})", traj.len())))?;
    if n_prime >= row.len() {
        return Err(Error::domain(format!(
            "reconstruction order {n_prime} exceeds truncation order {}",
            row.len() - 1
        )));
    }
    let partial = LegendreSeries::new(row[..=n_prime].to_vec())?;
    xs.iter().map(|&x| evaluate(&partial, x)).collect()
}

/// Discrete relative L2 error `||computed - exact|| / ||exact||`.
pub fn relative_error(computed: &[f64], exact: &[f64]) -> Result<f64> {
    if computed.len() != exact.len() {
        return Err(Error::domain(format!(
            "length mismatch: {} computed vs {} exact values",
            computed.len(),
            exact.len()
        )));
    }
    let num: f64 = computed.iter().zip(exact).map(|(c, e)| (c - e).powi(2)).sum();
    let den: f64 = exact.iter().map(|e| e * e).sum();
    if den == 0.0 {
        return Err(Error::domain("exact values are identically zero"));
    }
    Ok((num / den).sqrt())
}

/// The symmetric grid `x_j = j dx` covering `[-1, 1]`.
pub fn error_grid(dx: f64) -> Vec<f64> {
    let half = (1.0 / dx).round() as i64;
    (-half..=half).map(|j| (j as f64 * dx).clamp(-1.0, 1.0)).collect()
}

/// How spatial profiles are turned into coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionMethod {
    /// Closed-form Taylor/monomial conversion (falls back to quadrature for
    /// samplers without one).
    Exact,
    /// Gauss-Legendre of the given order.
    Quadrature(usize),
}

/// Projects `f` onto degree `degree` using `method`.
pub fn project_with(f: &FunctionSampler, degree: usize, method: ProjectionMethod) -> Result<LegendreSeries> {
    match method {
        ProjectionMethod::Exact => match f.exact_projection(degree) {
            Some(s) => Ok(s),
            None => project(f, degree, &gauss_legendre_rule(default_order(degree))?),
        },
        ProjectionMethod::Quadrature(order) => project(f, degree, &gauss_legendre_rule(order)?),
    }
}

/// First forcing profile of the manufactured case, `e^{x^2-2}(4x^4 + 2x^2 - 3)`
/// (multiplied by `e^{-t}`).
pub fn manufactured_forcing_1() -> FunctionSampler {
    FunctionSampler::GaussPoly { poly: vec![-3.0, 0.0, 2.0, 0.0, 4.0], rate: 1.0, shift: -2.0 }
}

/// Second forcing profile, `-e^{2x^2-4}` (multiplied by `e^{-2t}`).
pub fn manufactured_forcing_2() -> FunctionSampler {
    FunctionSampler::GaussPoly { poly: vec![-1.0], rate: 2.0, shift: -4.0 }
}

/// Exact solution `T(x, t) = e^{x^2 - t - 2}` of the manufactured case.
#[derive(Debug, Clone)]
pub struct ManufacturedSolution {
    initial: LegendreSeries,
}

impl ManufacturedSolution {
    pub fn value(&self, x: f64, t: f64) -> f64 {
        (x * x - t - 2.0).exp()
    }

    /// `a_n(t) = e^{-t} c_n` with `c_n` the initial coefficients.
    pub fn coefficients(&self, t: f64) -> Vec<f64> {
        let s = (-t).exp();
        self.initial.coefficients().iter().map(|c| s * c).collect()
    }

    pub fn initial(&self) -> &LegendreSeries {
        &self.initial
    }
}

/// The manufactured problem with `c = 1`, `g = e^{x^2-2}` and forcing
/// `e^{x^2-t-2}(4x^4+2x^2-3) - e^{2x^2-2t-4}`, whose solution is
/// `e^{x^2-t-2}`. Profiles are projected exactly.
pub fn manufactured_case(order: usize) -> Result<(IbvpSpec, ManufacturedSolution)> {
    manufactured_case_with(order, ProjectionMethod::Exact)
}

pub fn manufactured_case_with(
    order: usize,
    method: ProjectionMethod,
) -> Result<(IbvpSpec, ManufacturedSolution)> {
    let initial = project_with(&FunctionSampler::manufactured_g(), order, method)?;
    let forcing = vec![
        Forcing::Separable { rate: 1.0, spatial: project_with(&manufactured_forcing_1(), order, method)? },
        Forcing::Separable { rate: 2.0, spatial: project_with(&manufactured_forcing_2(), order, method)? },
    ];
    let spec = IbvpSpec::new(1.0, order, initial.clone(), forcing)?;
    Ok((spec, ManufacturedSolution { initial }))
}

/// Closed-form coefficients at time `t` when `c = 0` and every forcing term is
/// separable: each mode is the linear ODE `a' = -lambda a + sum_r s_r e^{-rho_r t}`.
pub fn linear_exact_coefficients(spec: &IbvpSpec, t: f64) -> Result<Vec<f64>> {
    if spec.c != 0.0 {
        return Err(Error::domain("closed-form solution requires c = 0"));
    }
    let mut a = spec.initial_coefficients();
    for (n, an) in a.iter_mut().enumerate() {
        let lambda = (n * (n + 1)) as f64;
        *an *= (-lambda * t).exp();
    }
    for term in &spec.forcing {
        let Forcing::Separable { rate, spatial } = term else {
            return Err(Error::domain("closed-form solution requires separable forcing"));
        };
        for (n, &s) in spatial.coefficients().iter().enumerate() {
            let lambda = (n * (n + 1)) as f64;
            let gap = lambda - rate;
            // (e^{-rate t} - e^{-lambda t}) / (lambda - rate), stable as gap -> 0.
            let response = if gap == 0.0 {
                t * (-lambda * t).exp()
            } else {
                (-rate * t).exp() * -(-gap * t).exp_m1() / gap
            };
            a[n] += s * response;
        }
    }
    Ok(a)
}

/// Relative error of `T_{N'}` against an exact solution on `grid` at step `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub step: usize,
    pub t: f64,
    pub n_prime: usize,
    pub relative_error: f64,
}

pub fn error_table(
    traj: &Trajectory,
    exact: impl Fn(f64, f64) -> f64,
    steps: &[usize],
    n_primes: &[usize],
    grid: &[f64],
) -> Result<Vec<ErrorRow>> {
    let mut out = Vec::new();
    for &m in steps {
        let t = *traj
            .times()
            .get(m)
            .ok_or_else(|| Error::domain(format!("report step {m} is past the end of the trajectory")))?;
        let want: Vec<f64> = grid.iter().map(|&x| exact(x, t)).collect();
        for &np in n_primes {
            let got = reconstruct(traj, m, np, grid)?;
            out.push(ErrorRow { step: m, t, n_prime: np, relative_error: relative_error(&got, &want)? });
        }
    }
    Ok(out)
}
