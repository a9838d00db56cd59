mod common;

use common::point;
use marginal_spectra::elimination::golden;
use marginal_spectra::montecarlo::{
    empirical_moments, empirical_spectrum, marginals, mixed_moment_freeness_probe, sample_tensor, sample_tensor_with,
    simulate, simulate_seeds, Dims,
};
use marginal_spectra::resolvent::Regime;
use marginal_spectra::{Error, Exec};

fn theory(n: usize, y: f64, c: f64) -> f64 {
    golden::moments()[n].eval_f64(&point(y, c))
}

#[test]
fn identical_seeds_give_identical_results() {
    let dims = Dims { n_a: 6, dim_b: 3, dim_c: 3, n_d: 4 };
    let a = simulate(dims, Regime::Unbalanced, 42, 3, true).unwrap();
    let b = simulate(dims, Regime::Unbalanced, 42, 3, true).unwrap();
    assert_eq!(a.normalized_moments, b.normalized_moments);
    assert_eq!(a.eigenvalues, b.eigenvalues);
    let seq = simulate_seeds(dims, Regime::Unbalanced, &[1, 2, 3], 2, true, Exec::Sequential).unwrap();
    let par = simulate_seeds(dims, Regime::Unbalanced, &[1, 2, 3], 2, true, Exec::Parallel).unwrap();
    for (s, p) in seq.iter().zip(&par) {
        assert_eq!(s.normalized_moments, p.normalized_moments);
        assert_eq!(s.eigenvalues, p.eigenvalues);
    }
}

#[test]
fn mismatched_inner_dimensions_are_rejected() {
    assert!(matches!(sample_tensor(2, 2, 3, 2, 0), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn entries_have_unit_second_moment() {
    let x = sample_tensor(10, 100, 100, 10, 7).unwrap();
    let mean = x.norm_sqr() / x.data().len() as f64;
    assert!((mean - 1.0).abs() < 0.01, "{mean}");
}

#[test]
fn expected_marginal_trace() {
    let dims = Dims { n_a: 4, dim_b: 3, dim_c: 3, n_d: 5 };
    let seeds = 1000;
    let mean = (0..seeds)
        .map(|s| {
            let x = sample_tensor_with(dims, s, Exec::Sequential).unwrap();
            marginals(&x).v_ab.trace().re
        })
        .sum::<f64>()
        / seeds as f64;
    let expected = (4 * 3 * 3 * 5) as f64;
    assert!((mean / expected - 1.0).abs() < 0.01, "{mean} vs {expected}");
}

#[test]
fn marginals_are_hermitian_and_spectra_nonnegative() {
    let dims = Dims { n_a: 8, dim_b: 3, dim_c: 3, n_d: 6 };
    for seed in 0..5 {
        let x = sample_tensor_with(dims, seed, Exec::Sequential).unwrap();
        let pair = marginals(&x);
        assert!(pair.hermiticity_residual() < 1e-12);
        let scale = dims.scale(Regime::Unbalanced);
        let s = empirical_spectrum(&pair, scale, seed, dims).unwrap();
        assert!(s.eigenvalues.iter().all(|&l| l >= -1e-8));
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let m = empirical_moments(&pair, 4, scale);
        for (n, mn) in m.iter().enumerate() {
            let from_eigs = s.moment(n as i32 + 1);
            assert!((mn - from_eigs).abs() <= 1e-8 * mn.abs(), "n = {}", n + 1);
        }
    }
}

#[test]
fn moments_approach_theory_as_outer_dimensions_grow() {
    let (y, c) = (0.5, 1.0);
    let (t1, t2) = (theory(1, y, c), theory(2, y, c));
    let deviation = |n_a: usize, seed: u64| {
        let dims = Dims { n_a, dim_b: 2, dim_c: 2, n_d: n_a };
        let r = simulate(dims, Regime::Unbalanced, seed, 2, false).unwrap();
        ((r.normalized_moments[0] - t1) / t1).abs() + ((r.normalized_moments[1] - t2) / t2).abs()
    };
    let improved = (0..5).filter(|&s| deviation(160, s) < deviation(10, s)).count();
    assert!(improved >= 4, "improved in {improved} of 5 seeds");
}

#[test]
fn freeness_deviation_shrinks_with_size() {
    let seeds: Vec<u64> = (0..10).collect();
    let small = mixed_moment_freeness_probe(20, 2, 2, &seeds, Exec::default()).unwrap();
    let large = mixed_moment_freeness_probe(80, 2, 2, &seeds, Exec::default()).unwrap();
    assert!(large.rms() < small.rms());
    assert!(large.alternating_mean.abs() <= 3.0 * large.alternating_stderr);
}
