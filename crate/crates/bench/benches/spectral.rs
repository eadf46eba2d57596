use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use legendre_spectra::pde::manufactured_case;
use legendre_spectra::{
    gauss_legendre_rule, mu_coefficients, product_coefficients_finite, project, solve_ivp, FunctionSampler,
    LinearizationTable, SolverConfig,
};

fn linearization(c: &mut Criterion) {
    let mut group = c.benchmark_group("linearization_table");
    for k_max in [32, 64, 128] {
        group.bench_with_input(BenchmarkId::from_parameter(k_max), &k_max, |b, &k| {
            b.iter(|| LinearizationTable::new(black_box(k)))
        });
    }
    group.finish();
}

fn products(c: &mut Criterion) {
    let rule = gauss_legendre_rule(128).unwrap();
    let mut group = c.benchmark_group("product");
    for degree in [16, 32, 64] {
        let a = project(&FunctionSampler::Exp, degree, &rule).unwrap();
        let b = project(&FunctionSampler::SinK(3.0), degree, &rule).unwrap();
        group.bench_with_input(BenchmarkId::new("finite", degree), &degree, |bench, _| {
            bench.iter(|| product_coefficients_finite(black_box(&a), black_box(&b)))
        });
        group.bench_with_input(BenchmarkId::new("mu_m10", degree), &degree, |bench, &d| {
            bench.iter(|| mu_coefficients(black_box(&a), black_box(&b), d, 10))
        });
    }
    group.finish();
}

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_manufactured");
    group.sample_size(10);
    for order in [10, 30] {
        let (spec, _) = manufactured_case(order).unwrap();
        let config = SolverConfig::new(0.01, 100, 6).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, _| {
            b.iter(|| solve_ivp(black_box(&spec), &config).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, linearization, products, solve);
criterion_main!(benches);
