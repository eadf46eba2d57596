use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use legendre_spectra::bounds::{bound_curve, default_m_range, mu_truncation_bound_j1};
use legendre_spectra::expansion::{mu_coefficients, product_coefficients_finite, project};
use legendre_spectra::io::{
    exact_solution, format_number, read_series, write_bound_curve, write_error_table, write_reconstruction,
    write_series, write_series_with_bound, write_trajectory, ProblemDocument, ReconstructionRow,
};
use legendre_spectra::pde::{
    error_grid, error_table, reconstruct, solve_ivp, stable_substeps, GRID_DX, REPORT_N_PRIMES, REPORT_STEPS,
};
use legendre_spectra::quadrature::{default_order, gauss_legendre_rule, quad_margin};
use legendre_spectra::{verify, FunctionSampler, LegendreSeries};
use serde_json::json;

use crate::args::{BoundsArgs, Command, ExpandArgs, ProductArgs, ProductMode, SolveArgs};
use crate::manifest::{sidecar_path, RunManifest};
use crate::CliError;

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Expand(a) => expand(a),
        Command::Product(a) => product(a),
        Command::Bounds(a) => bounds(a),
        Command::Solve(a) => solve(a),
        Command::Verify => run_verify(),
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

fn read_series_file(path: &Path, manifest: &mut RunManifest) -> Result<LegendreSeries, CliError> {
    let bytes = read_input(path)?;
    manifest.add_input(path, &bytes);
    read_series(bytes.as_slice()).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Creates `path`, runs `body` on a buffered writer and flushes it.
fn write_file(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> legendre_spectra::Result<()>,
) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w)?;
    w.flush().map_err(|e| CliError::io(path, e))
}

fn expand(args: ExpandArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let source = Path::new(&args.source);
    let (series, mut manifest) = if source.is_file() {
        let mut manifest = RunManifest::new(
            "expand",
            json!({
                "source": args.source,
                "source_kind": "coefficient_file",
                "degree": args.degree,
                "output": args.output,
            }),
        );
        let series = read_series_file(source, &mut manifest)?.truncated(args.degree);
        (series, manifest)
    } else {
        let sampler = FunctionSampler::from_name(&args.source)?;
        let order = args.order.unwrap_or_else(|| default_order(args.degree));
        let series = project(&sampler, args.degree, &gauss_legendre_rule(order)?)?;
        let manifest = RunManifest::new(
            "expand",
            json!({
                "source": args.source,
                "source_kind": "function",
                "degree": args.degree,
                "quadrature_order": order,
                "quadrature_margin": quad_margin(),
                "output": args.output,
            }),
        );
        (series, manifest)
    };
    write_file(&args.output, |w| write_series(w, &series))?;
    manifest.add_output(&args.output);
    manifest.write(&sidecar_path(&args.output), start.elapsed())?;

    for (n, c) in series.coefficients().iter().take(8).enumerate() {
        println!("{n} {}", format_number(*c));
    }
    Ok(())
}

fn product(args: ProductArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let bound_constants = args.a1.zip(args.b1);
    if args.mode == ProductMode::Finite && bound_constants.is_some() {
        return Err(CliError::Usage("--a1/--b1 bound columns apply to --mode mu only".into()));
    }
    if let Some((a1, b1)) = bound_constants {
        if !(a1 >= 0.0 && b1 >= 0.0 && a1.is_finite() && b1.is_finite()) {
            return Err(CliError::Usage("--a1 and --b1 must be finite and non-negative".into()));
        }
    }
    let mut manifest = RunManifest::new(
        "product",
        json!({
            "a": args.a,
            "b": args.b,
            "mode": match args.mode { ProductMode::Finite => "finite", ProductMode::Mu => "mu" },
            "M": if args.mode == ProductMode::Mu { json!(args.m) } else { json!(null) },
            "A1": args.a1,
            "B1": args.b1,
            "output": args.output,
        }),
    );
    let a = read_series_file(&args.a, &mut manifest)?;
    let b = read_series_file(&args.b, &mut manifest)?;
    match args.mode {
        ProductMode::Finite => {
            let p = product_coefficients_finite(&a, &b);
            write_file(&args.output, |w| write_series(w, &p))?;
        }
        ProductMode::Mu => {
            let top = a.degree() + b.degree();
            let mu = mu_coefficients(&a, &b, top, args.m);
            match bound_constants {
                Some((a1, b1)) => {
                    let bounds = (0..=top)
                        .map(|k| Ok(a1 * b1 * mu_truncation_bound_j1(k, args.m)?))
                        .collect::<legendre_spectra::Result<Vec<f64>>>()?;
                    write_file(&args.output, |w| write_series_with_bound(w, &mu, &bounds))?;
                }
                None => write_file(&args.output, |w| write_series(w, &mu))?,
            }
        }
    }
    manifest.add_output(&args.output);
    manifest.write(&sidecar_path(&args.output), start.elapsed())?;
    Ok(())
}

fn bounds(args: BoundsArgs) -> Result<(), CliError> {
    let start = Instant::now();
    if !(1..=2).contains(&args.j) {
        return Err(CliError::Usage(format!("--j must be 1 or 2, got {}", args.j)));
    }
    let (lowest, _) = default_m_range(args.j);
    let m_min = args.m_min.unwrap_or(lowest);
    if m_min < lowest {
        return Err(CliError::Usage(format!("j = {} needs M >= {lowest}, got --m-min {m_min}", args.j)));
    }
    if m_min > args.m_max {
        return Err(CliError::Usage(format!("empty range: --m-min {m_min} > --m-max {}", args.m_max)));
    }
    let curve = bound_curve(args.k, args.j, m_min, args.m_max)?;
    write_file(&args.output, |w| write_bound_curve(w, args.j, &curve))?;
    let mut manifest = RunManifest::new(
        "bounds",
        json!({
            "k": args.k,
            "j": args.j,
            "m_min": m_min,
            "m_max": args.m_max,
            "output": args.output,
        }),
    );
    manifest.add_output(&args.output);
    manifest.write(&sidecar_path(&args.output), start.elapsed())?;
    Ok(())
}

fn resolve_report_steps(requested: Option<Vec<usize>>, steps: usize) -> Result<Vec<usize>, CliError> {
    let mut list = match requested {
        Some(list) => {
            if let Some(&bad) = list.iter().find(|&&m| m > steps) {
                return Err(CliError::Usage(format!("report step {bad} is past the last step {steps}")));
            }
            list
        }
        None => {
            let mut list: Vec<usize> = REPORT_STEPS.iter().copied().filter(|&m| m <= steps).collect();
            if list.is_empty() {
                list.push(steps);
            }
            list
        }
    };
    list.sort_unstable();
    list.dedup();
    Ok(list)
}

fn resolve_n_primes(requested: Option<Vec<usize>>, order: usize, n_prime: usize) -> Result<Vec<usize>, CliError> {
    let mut list = match requested {
        Some(list) => {
            if let Some(&bad) = list.iter().find(|&&n| n > order) {
                return Err(CliError::Usage(format!("reconstruction order {bad} exceeds N = {order}")));
            }
            list
        }
        None => {
            let mut list: Vec<usize> = REPORT_N_PRIMES.iter().copied().filter(|&n| n <= order).collect();
            list.push(n_prime);
            list
        }
    };
    list.sort_unstable();
    list.dedup();
    Ok(list)
}

fn solve(args: SolveArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let bytes = read_input(&args.spec)?;
    let doc = ProblemDocument::from_reader(bytes.as_slice())
        .map_err(|e| CliError::Data(format!("{}: {e}", args.spec.display())))?;
    let (spec, cfg) = doc.build()?;
    let report_steps = resolve_report_steps(args.report_steps, cfg.steps)?;
    let n_primes = resolve_n_primes(args.n_primes, spec.order(), cfg.n_prime)?;
    let grid = error_grid(GRID_DX);

    let traj = solve_ivp(&spec, &cfg)?;

    fs::create_dir_all(&args.out_dir).map_err(|e| CliError::io(&args.out_dir, e))?;
    let mut manifest = RunManifest::new(
        "solve",
        json!({
            "spec": args.spec,
            "problem": doc,
            "out_dir": args.out_dir,
            "report_steps": report_steps,
            "n_primes": n_primes,
            "grid_dx": GRID_DX,
            "grid_points": grid.len(),
            "rk4_substeps_per_step": stable_substeps(cfg.dt, spec.order()),
            "profile_projection": format!(
                "closed form where available, else Gauss-Legendre of order N + {}",
                quad_margin()
            ),
        }),
    );
    manifest.add_input(&args.spec, &bytes);

    let out = |name: String| -> PathBuf { args.out_dir.join(name) };
    let path = out("trajectory.csv".into());
    write_file(&path, |w| write_trajectory(w, &traj))?;
    manifest.add_output(&path);

    let exact = doc.exact.map(|kind| exact_solution(kind, &spec));
    for &np in &n_primes {
        let mut rows = Vec::with_capacity(report_steps.len() * grid.len());
        for &m in &report_steps {
            let t = traj.times()[m];
            let values = reconstruct(&traj, m, np, &grid)?;
            for (&x, &computed) in grid.iter().zip(&values) {
                rows.push(ReconstructionRow { t, x, computed, exact: exact.as_ref().map(|f| f(x, t)) });
            }
        }
        let path = out(format!("reconstruction_np{np}.csv"));
        write_file(&path, |w| write_reconstruction(w, &rows))?;
        manifest.add_output(&path);
    }

    if let Some(f) = &exact {
        let table = error_table(&traj, f, &report_steps, &n_primes, &grid)?;
        let path = out("errors.csv".into());
        write_file(&path, |w| write_error_table(w, &table))?;
        manifest.add_output(&path);
        println!("step t N' relative_error");
        for r in &table {
            println!("{} {} {} {}", r.step, format_number(r.t), r.n_prime, format_number(r.relative_error));
        }
    }
    manifest.write(&out("manifest.json".into()), start.elapsed())?;
    Ok(())
}

fn run_verify() -> Result<(), CliError> {
    let outcomes = verify::run_all();
    for o in &outcomes {
        println!("{o}");
    }
    match outcomes.iter().filter(|o| !o.passed).count() {
        0 => Ok(()),
        n => Err(CliError::ChecksFailed(n)),
    }
}
