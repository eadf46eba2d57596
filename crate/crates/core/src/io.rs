//! File formats: Legendre series and report tables as CSV, problem
//! definitions as JSON.
//!
//! Every number is written with 17 significant digits in scientific
//! notation, so output is byte-for-byte reproducible and round-trips exactly.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::bounds::BoundPoint;
use crate::error::{Error, Result};
use crate::expansion::{FunctionSampler, LegendreSeries};
use crate::pde::{
    self, linear_exact_coefficients, manufactured_forcing_1, manufactured_forcing_2, ErrorRow,
    Forcing, IbvpSpec, ProjectionMethod, SolverConfig, Trajectory,
};

/// 17 significant digits, scientific notation. Negative zero prints as zero.
pub fn format_number(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub const SERIES_HEADER: [&str; 2] = ["n", "coefficient"];

/// Writes `n,coefficient` rows.
pub fn write_series<W: Write>(mut w: W, series: &LegendreSeries) -> Result<()> {
    writeln!(w, "n,coefficient")?;
    for (n, c) in series.coefficients().iter().enumerate() {
        writeln!(w, "{n},{}", format_number(*c))?;
    }
    Ok(())
}

/// Writes `n,coefficient,bound` rows; `bounds` must match the series length.
pub fn write_series_with_bound<W: Write>(mut w: W, series: &LegendreSeries, bounds: &[f64]) -> Result<()> {
    if bounds.len() != series.coefficients().len() {
        return Err(Error::data("bound column length does not match the series"));
    }
    writeln!(w, "n,coefficient,bound")?;
    for (n, (c, b)) in series.coefficients().iter().zip(bounds).enumerate() {
        writeln!(w, "{n},{},{}", format_number(*c), format_number(*b))?;
    }
    Ok(())
}

/// Reads a series file. The header must start with `n,coefficient`; extra
/// columns are ignored. Indices must run 0, 1, 2, ... without gaps.
pub fn read_series<R: Read>(r: R) -> Result<LegendreSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(r);
    let header = reader.headers().map_err(|e| csv_error(&e, 1))?.clone();
    if header.len() < 2 || header[0] != *SERIES_HEADER[0] || header[1] != *SERIES_HEADER[1] {
        return Err(Error::Parse { line: 1, message: "expected header 'n,coefficient'".into() });
    }
    let mut coefficients = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(&e, 0))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() < 2 {
            return Err(Error::Parse { line, message: "expected two fields".into() });
        }
        let n: usize = record[0]
            .parse()
            .map_err(|_| Error::Parse { line, message: format!("bad index '{}'", &record[0]) })?;
        if n != coefficients.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected index {}, found {n}", coefficients.len()),
            });
        }
        let c: f64 = record[1]
            .parse()
            .map_err(|_| Error::Parse { line, message: format!("bad coefficient '{}'", &record[1]) })?;
        if !c.is_finite() {
            return Err(Error::Parse { line, message: format!("coefficient {n} is not finite") });
        }
        coefficients.push(c);
    }
    if coefficients.is_empty() {
        return Err(Error::Parse { line: 1, message: "file contains no coefficients".into() });
    }
    LegendreSeries::new(coefficients)
}

fn csv_error(e: &csv::Error, fallback_line: u64) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line());
    Error::Parse { line, message: e.to_string() }
}

/// Long-format trajectory: `t,n,a_n`.
pub fn write_trajectory<W: Write>(mut w: W, traj: &Trajectory) -> Result<()> {
    writeln!(w, "t,n,a_n")?;
    for (t, row) in traj.times().iter().zip(traj.rows()) {
        let t = format_number(*t);
        for (n, a) in row.iter().enumerate() {
            writeln!(w, "{t},{n},{}", format_number(*a))?;
        }
    }
    Ok(())
}

/// One reconstruction sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructionRow {
    pub t: f64,
    pub x: f64,
    pub computed: f64,
    pub exact: Option<f64>,
}

/// `t,x,T_computed,T_exact,abs_err`; the last two columns stay empty when no
/// exact solution is known.
pub fn write_reconstruction<W: Write>(mut w: W, rows: &[ReconstructionRow]) -> Result<()> {
    writeln!(w, "t,x,T_computed,T_exact,abs_err")?;
    for r in rows {
        let (exact, err) = match r.exact {
            Some(e) => (format_number(e), format_number((r.computed - e).abs())),
            None => (String::new(), String::new()),
        };
        writeln!(
            w,
            "{},{},{},{exact},{err}",
            format_number(r.t),
            format_number(r.x),
            format_number(r.computed)
        )?;
    }
    Ok(())
}

/// `step,t,N_prime,relative_error`.
pub fn write_error_table<W: Write>(mut w: W, rows: &[ErrorRow]) -> Result<()> {
    writeln!(w, "step,t,N_prime,relative_error")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{}",
            r.step,
            format_number(r.t),
            r.n_prime,
            format_number(r.relative_error)
        )?;
    }
    Ok(())
}

/// `M,bound_j<j>,log_bound_j<j>` with base-10 logarithms.
pub fn write_bound_curve<W: Write>(mut w: W, j: usize, points: &[BoundPoint]) -> Result<()> {
    writeln!(w, "M,bound_j{j},log_bound_j{j}")?;
    for p in points {
        writeln!(w, "{},{},{}", p.m, format_number(p.bound), format_number(p.log10_bound))?;
    }
    Ok(())
}

/// A coefficient array or the name of a built-in profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileRef {
    Coefficients(Vec<f64>),
    Name(String),
}

/// Built-in spatial profiles beyond the sampler registry.
pub const PDE_PROFILES: &[&str] = &["manufactured_f1", "manufactured_f2"];

impl ProfileRef {
    /// Resolves to a series of degree `order`. Named profiles are projected
    /// exactly when a closed form exists, else by Gauss-Legendre quadrature.
    pub fn resolve(&self, order: usize) -> Result<LegendreSeries> {
        match self {
            ProfileRef::Coefficients(c) => LegendreSeries::new(c.clone()),
            ProfileRef::Name(name) => {
                let sampler = match name.as_str() {
                    "manufactured_f1" => manufactured_forcing_1(),
                    "manufactured_f2" => manufactured_forcing_2(),
                    other => FunctionSampler::from_name(other).map_err(|_| {
                        Error::domain(format!(
                            "unknown profile '{other}'; known: {}, {}",
                            crate::expansion::SAMPLER_REGISTRY.join(", "),
                            PDE_PROFILES.join(", ")
                        ))
                    })?,
                };
                pde::project_with(&sampler, order, ProjectionMethod::Exact)
            }
        }
    }
}

/// One `{rate, spatial}` forcing entry; the profile is multiplied by
/// `scale * exp(-rate t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForcingDocument {
    pub rate: f64,
    pub spatial: ProfileRef,
    #[serde(default = "unit_scale")]
    pub scale: f64,
}

fn unit_scale() -> f64 {
    1.0
}

/// Which exact solution, if any, the reports compare against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactKind {
    /// `e^{x^2 - t - 2}`.
    Manufactured,
    /// Closed-form per-mode solution, valid for `c = 0`.
    Linear,
}

/// The JSON problem definition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemDocument {
    pub c: f64,
    #[serde(rename = "N")]
    pub order: usize,
    pub initial: ProfileRef,
    #[serde(default)]
    pub forcing: Vec<ForcingDocument>,
    pub dt: f64,
    pub steps: usize,
    #[serde(rename = "N_prime")]
    pub n_prime: usize,
    #[serde(default)]
    pub exact: Option<ExactKind>,
}

impl ProblemDocument {
    pub fn from_reader<R: Read>(r: R) -> Result<Self> {
        serde_json::from_reader(r).map_err(|e| Error::Parse { line: e.line() as u64, message: e.to_string() })
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::from_reader(s.as_bytes())
    }

    /// The manufactured problem at its default order, step and step count.
    pub fn manufactured() -> Self {
        ProblemDocument {
            c: 1.0,
            order: pde::DEFAULT_ORDER,
            initial: ProfileRef::Name("manufactured_g".into()),
            forcing: vec![
                ForcingDocument {
                    rate: 1.0,
                    spatial: ProfileRef::Name("manufactured_f1".into()),
                    scale: 1.0,
                },
                ForcingDocument {
                    rate: 2.0,
                    spatial: ProfileRef::Name("manufactured_f2".into()),
                    scale: 1.0,
                },
            ],
            dt: pde::DEFAULT_DT,
            steps: 4000,
            n_prime: 6,
            exact: Some(ExactKind::Manufactured),
        }
    }

    pub fn build(&self) -> Result<(IbvpSpec, SolverConfig)> {
        let initial = self.initial.resolve(self.order)?;
        let forcing = self
            .forcing
            .iter()
            .map(|f| {
                let spatial = f.spatial.resolve(self.order)?.scaled(f.scale)?;
                Ok(Forcing::Separable { rate: f.rate, spatial })
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = IbvpSpec::new(self.c, self.order, initial, forcing)?;
        if self.n_prime > self.order {
            return Err(Error::domain(format!(
                "N_prime = {} exceeds N = {}",
                self.n_prime, self.order
            )));
        }
        let cfg = SolverConfig::new(self.dt, self.steps, self.n_prime)?;
        if self.exact == Some(ExactKind::Linear) && self.c != 0.0 {
            return Err(Error::domain("exact = \"linear\" requires c = 0"));
        }
        Ok((spec, cfg))
    }
}

/// Evaluates the selected exact solution `T(x, t)`.
pub fn exact_solution(kind: ExactKind, spec: &IbvpSpec) -> Box<dyn Fn(f64, f64) -> f64 + '_> {
    match kind {
        ExactKind::Manufactured => Box::new(|x: f64, t: f64| (x * x - t - 2.0).exp()),
        ExactKind::Linear => Box::new(move |x: f64, t: f64| {
            let a = linear_exact_coefficients(spec, t).expect("checked when the problem was built");
            LegendreSeries::new(a)
                .and_then(|s| s.evaluate(x))
                .unwrap_or(f64::NAN)
        }),
    }
}
