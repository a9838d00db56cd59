//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::time::Instant;

use common::{
    catalan, constants, fuss_catalan, fuss_catalan_resolvent, point, small_poly, squared_free_poisson_density,
    unit_series, free_poisson_moment,
};
use marginal_spectra::balanced::balanced_moments;
use marginal_spectra::curve::SpectralCurve;
use marginal_spectra::elimination::{
    adjudicate, build_system, eliminate_to_eta, equal_up_to_constant, eta_to_sextic, golden,
};
use marginal_spectra::exactalg::{exact_divide, int, rat, MultiPoly, Rational, TruncatedSeries, Var};
use marginal_spectra::maps::enumerate_moment;
use marginal_spectra::montecarlo::{
    mixed_moment_freeness_probe, simulate_seeds, streamed_first_moment_estimate, Dims, Histogram,
};
use marginal_spectra::petals::{extract_moments, odd_coefficients_vanish, solve_petal_system, transfer_matrix_check};
use marginal_spectra::resolvent::{
    density, density_auto, moments_from_curve, moments_from_curve_at, track_branch, DensityOptions, Regime,
};
use marginal_spectra::Exec;
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn sextic() -> SpectralCurve {
    SpectralCurve::new(golden::sextic()).unwrap()
}

fn oracle_vs_listed_moments() -> Outcome {
    let listed = golden::moments();
    let equal: Vec<bool> = (1..=3).map(|k| enumerate_moment(k).unwrap() == listed[k]).collect();
    (equal.iter().all(|&e| e), format!("M_1..M_3 equal to listed polynomials: {equal:?}"))
}

fn oracle_vs_series() -> Outcome {
    let table = extract_moments(&solve_petal_system(10).unwrap(), 5).unwrap();
    let equal: Vec<bool> = (1..=5).map(|k| enumerate_moment(k).unwrap() == table.entries()[k]).collect();
    (equal.iter().all(|&e| e), format!("k = 1..5 equal: {equal:?}"))
}

fn elimination() -> Outcome {
    let state = solve_petal_system(12).unwrap();
    let elim = eliminate_to_eta(&build_system(adjudicate(&state).unwrap()), &state).unwrap();
    let eta_ok = equal_up_to_constant(&elim.eta, &golden::eta());
    let curve = eta_to_sextic(&elim.eta).unwrap();
    let sextic_ok = curve.poly() == &golden::sextic();
    (
        eta_ok && sextic_ok,
        format!("eliminant up to constant: {eta_ok}; sextic term-for-term: {sextic_ok}"),
    )
}

fn curve_moments() -> Outcome {
    let a = moments_from_curve(&sextic(), 10).unwrap();
    let b = extract_moments(&solve_petal_system(20).unwrap(), 10).unwrap();
    let ok = a.entries() == b.entries();
    (ok, format!("n <= 10 symbolic in (y, c): {}", if ok { "equal" } else { "different" }))
}

fn specialisations() -> Outcome {
    let at = |y: i64, c: i64| constants(&moments_from_curve_at(&sextic(), 4, &int(y), &int(c)).unwrap().entries()[1..]);
    let cat: Vec<Rational> = (1..=4).map(|n| catalan(2 * n)).collect();
    let fc: Vec<Rational> = (1..=4).map(fuss_catalan).collect();
    let ok = at(1, 1) == cat && at(0, 1) == fc;
    (ok, format!("(1,1) -> {:?}, (0,1) -> {:?}", to_ints(&at(1, 1)), to_ints(&at(0, 1))))
}

fn to_ints(v: &[Rational]) -> Vec<String> {
    v.iter().map(|r| r.to_string()).collect()
}

fn degenerate_point() -> Outcome {
    let special = sextic().specialize(&int(0), &int(1));
    let factors: Vec<MultiPoly> = ["W^3 z^2 - W z - 1", "W^3 z^2 - W z + 1"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let factor_ok = special.poly() == &(&factors[0] * &factors[1]);
    let zs: Vec<f64> = (0..20).map(|i| 7.0 + 93.0 * i as f64 / 19.0).rev().collect();
    let path: Vec<Complex64> = zs.iter().map(|&z| Complex64::new(z, 0.0)).collect();
    let w = track_branch(&sextic(), &path, 0.0, 1.0).unwrap();
    let worst = zs
        .iter()
        .zip(&w)
        .map(|(&z, w)| (w - fuss_catalan_resolvent(z)).norm())
        .fold(0.0, f64::max);
    (
        factor_ok && worst <= 1e-6,
        format!("factorisation exact: {factor_ok}; max branch deviation on [7, 100]: {worst:.2e}"),
    )
}

fn density_sanity() -> Outcome {
    let opts = DensityOptions::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for (c, m) in [(1, 1), (1, 2), (2, 2)] {
        let d = density_auto(&sextic(), &rat(1, m), &int(c), 1500, &opts).unwrap();
        let (y, cf) = (1.0 / m as f64, c as f64);
        let m1 = cf * cf + cf * y * y;
        let here = (d.mass() - 1.0).abs() <= 1e-3 && (d.moment(1) - m1).abs() <= 1e-2 && d.min_rho() >= -1e-4;
        ok &= here;
        parts.push(format!("({c},{m}) mass {:.5} mean {:.5}", d.mass(), d.moment(1)));
    }
    let lo = 0.01 * 16.0;
    let grid: Vec<f64> = (0..=200).map(|k| lo + (16.0 - 2.0 * lo) * k as f64 / 200.0).collect();
    let d = density(&sextic(), 1.0, 1.0, &grid, &opts).unwrap();
    let sup = grid
        .iter()
        .zip(&d.rho)
        .map(|(&l, r)| (r - squared_free_poisson_density(l)).abs())
        .fold(0.0, f64::max);
    ok &= sup <= 1e-2;
    parts.push(format!("m = 1 sup error {sup:.2e}"));
    (ok, parts.join("; "))
}

fn unbalanced_monte_carlo() -> Outcome {
    let dims = Dims { n_a: 300, dim_b: 2, dim_c: 2, n_d: 300 };
    let seeds: Vec<u64> = (0..20).collect();
    let runs = simulate_seeds(dims, Regime::Unbalanced, &seeds, 2, true, Exec::default()).unwrap();
    let mean = |n: usize| runs.iter().map(|r| r.normalized_moments[n]).sum::<f64>() / runs.len() as f64;
    let p = point(0.5, 1.0);
    let (t1, t2) = (golden::moments()[1].eval_f64(&p), golden::moments()[2].eval_f64(&p));
    let (e1, e2) = ((mean(0) - t1).abs() / t1, (mean(1) - t2).abs() / t2);
    let eigs: Vec<f64> = runs.iter().flat_map(|r| r.eigenvalues.iter().copied()).collect();
    let d = density_auto(&sextic(), &rat(1, 2), &int(1), 1500, &DensityOptions::default()).unwrap();
    let hist = Histogram::uniform(&eigs, 0.0, 1.05 * d.support_estimate.1, 30);
    let masses = d.bin_masses(&hist.edges);
    let l1 = hist.l1_distance(&masses, eigs.len()) + (1.0 - hist.total() as f64 / eigs.len() as f64);
    (
        e1 <= 0.05 && e2 <= 0.07 && l1 < 0.1,
        format!(
            "M_1 {:.4} ({:.2}%), M_2 {:.4} ({:.2}%), histogram L1 {l1:.4}",
            mean(0),
            100.0 * e1,
            mean(1),
            100.0 * e2
        ),
    )
}

fn balanced_regime() -> Outcome {
    let cubic = constants(&balanced_moments(6, &int(1)).unwrap().entries()[1..]);
    let fc: Vec<Rational> = (1..=6).map(fuss_catalan).collect();
    let exact_ok = cubic == fc;
    let dims = Dims { n_a: 20, dim_b: 300, dim_c: 300, n_d: 20 };
    let (m1, se) = streamed_first_moment_estimate(dims, 0, 8, 1, Regime::Balanced, Exec::default()).unwrap();
    let mc_ok = (m1 - 1.0).abs() <= 0.1;
    let seeds: Vec<u64> = (0..20).collect();
    let probe = mixed_moment_freeness_probe(200, 2, 2, &seeds, Exec::default()).unwrap();
    let probe_ok = probe.alternating_mean.abs() <= 3.0 * probe.alternating_stderr;
    let single_ok = probe.single_moments.iter().enumerate().all(|(k, v)| {
        let r = marginal_spectra::exactalg::to_f64(&free_poisson_moment(k + 1, &int(1)));
        (v - r).abs() <= 0.05 * r
    });
    (
        exact_ok && mc_ok && probe_ok && single_ok,
        format!(
            "cubic = Fuss-Catalan n <= 6: {exact_ok}; MC M_1 {m1:.4} ± {se:.4}; alternating moment {:.2e} ± {:.2e}; single moments within 5%: {single_ok}",
            probe.alternating_mean, probe.alternating_stderr
        ),
    )
}

fn property_suites() -> Outcome {
    let state = solve_petal_system(20).unwrap();
    let odd = odd_coefficients_vanish(&state);
    let transfer = transfer_matrix_check(&state, state.order());
    let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    let ring = runner
        .run(&(small_poly(), small_poly(), small_poly()), |(a, b, c)| {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            Ok(())
        })
        .is_ok();
    let divide = runner
        .run(&(small_poly(), small_poly()), |(a, b)| {
            if !b.is_zero() {
                prop_assert_eq!(exact_divide(&(&a * &b), &b, Var::X).unwrap(), a);
            }
            Ok(())
        })
        .is_ok();
    let inverse = runner
        .run(&unit_series(), |s| {
            let inv = s.geometric_inverse().unwrap();
            prop_assert_eq!(s.mul(&inv).unwrap(), TruncatedSeries::one(s.order()));
            Ok(())
        })
        .is_ok();
    (
        odd && transfer && ring && divide && inverse,
        format!(
            "odd coefficients to x^20: {odd}; transfer matrix: {transfer}; 1000 cases ring/divide/inverse: {ring}/{divide}/{inverse}"
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("oracle equals listed moments", oracle_vs_listed_moments),
        ("oracle equals petal series, k <= 5", oracle_vs_series),
        ("elimination reproduces eliminant and sextic", elimination),
        ("curve moments equal series moments, n <= 10", curve_moments),
        ("Catalan and Fuss-Catalan specialisations", specialisations),
        ("degenerate factorisation and branch", degenerate_point),
        ("density sanity", density_sanity),
        ("unbalanced Monte Carlo", unbalanced_monte_carlo),
        ("balanced regime", balanced_regime),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match std::panic::catch_unwind(check) {
            Ok(outcome) => outcome,
            Err(_) => (false, "panicked".to_string()),
        };
        failed += usize::from(!ok);
        println!(
            "criterion {:>2} {}: {name} [{:.1}s] {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
