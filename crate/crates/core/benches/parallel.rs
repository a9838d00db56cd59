use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use marginal_spectra::curve::SpectralCurve;
use marginal_spectra::elimination::golden;
use marginal_spectra::exactalg::{int, rat};
use marginal_spectra::maps::{enumerate_table, Enumerator};
use marginal_spectra::montecarlo::{simulate_seeds, Dims};
use marginal_spectra::resolvent::{density_auto, DensityOptions, Regime};
use marginal_spectra::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumeration_k4");
    group.sample_size(10);
    for (name, exec) in MODES {
        let settings = Enumerator { exec, ..Enumerator::default() };
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| enumerate_table(4, &settings).unwrap()));
    }
    group.finish();
}

fn density_grid(c: &mut Criterion) {
    let curve = SpectralCurve::new(golden::sextic()).unwrap();
    let mut group = c.benchmark_group("density_grid");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = DensityOptions { exec, ..DensityOptions::default() };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| density_auto(&curve, &rat(1, 2), &int(1), 400, &opts).unwrap())
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let dims = Dims { n_a: 60, dim_b: 2, dim_c: 2, n_d: 60 };
    let seeds: Vec<u64> = (0..8).collect();
    let mut group = c.benchmark_group("simulate_seeds");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| simulate_seeds(dims, Regime::Unbalanced, &seeds, 2, true, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration, density_grid, monte_carlo);
criterion_main!(benches);
