//! End-to-end cross-checks between the independent pipelines, each run
//! against reference values that do not share code with the pipeline.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::balanced::balanced_moments;
use crate::curve::SpectralCurve;
use crate::elimination::{
    adjudicate, build_system, eliminate_to_eta, equal_up_to_constant, eta_to_sextic, golden,
};
use crate::error::Result;
use crate::exactalg::{exact_divide, format_rational, int, rat, MultiPoly, Rational, TruncatedSeries, Var, NVARS};
use crate::exec::Exec;
use crate::maps::Enumerator;
use crate::montecarlo::{
    mixed_moment_freeness_probe, simulate_seeds, streamed_first_moment_estimate, Dims, Histogram,
    PROBE_OUTER_DIM, PROBE_SEEDS,
};
use crate::petals::{extract_moments, odd_coefficients_vanish, solve_petal_system, transfer_matrix_check};
use crate::resolvent::{density, density_auto, moments_from_curve, track_branch, DensityOptions, Regime};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub passed: bool,
    pub results: Vec<CriterionResult>,
}

#[derive(Clone, Debug)]
pub struct CrosscheckOptions {
    pub exec: Exec,
    /// Seeds for the unbalanced Monte Carlo run.
    pub seeds: usize,
    /// First seed; the run uses `seed..seed + seeds`.
    pub seed: u64,
    /// Random instances per algebraic property.
    pub property_cases: usize,
}

impl Default for CrosscheckOptions {
    fn default() -> Self {
        Self {
            exec: Exec::default(),
            seeds: 20,
            seed: 0,
            property_cases: 1000,
        }
    }
}

pub const TITLES: [&str; 10] = [
    "map enumeration reproduces the listed moments",
    "petal series agree with map enumeration",
    "elimination reproduces the eliminant and the sextic",
    "curve moments agree with petal series",
    "Catalan and Fuss-Catalan specialisations",
    "degenerate sextic factors and tracks the Fuss-Catalan branch",
    "density mass, mean, sign and closed form",
    "unbalanced Monte Carlo agrees with theory",
    "balanced regime: cubic moments, Monte Carlo and freeness probe",
    "series and exact-arithmetic property suites",
];

/// Closed forms used as references.
mod reference {
    use num_bigint::BigInt;

    use crate::exactalg::Rational;

    pub fn binomial(n: u64, k: u64) -> BigInt {
        let mut acc = BigInt::from(1);
        for i in 0..k {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        acc
    }

    pub fn catalan(n: u64) -> Rational {
        Rational::new(binomial(2 * n, n), BigInt::from(n + 1))
    }

    pub fn fuss_catalan(n: u64) -> Rational {
        Rational::new(binomial(3 * n, n), BigInt::from(2 * n + 1))
    }

    /// `Σ FC_n z^{-n-1}` for real `z > 27/4`, summed until the terms underflow.
    pub fn fuss_catalan_resolvent(z: f64) -> f64 {
        let (mut term, mut sum, mut n) = (1.0 / z, 0.0f64, 0u64);
        while term > 1e-18 * sum.max(1e-300) || n < 4 {
            sum += term;
            let k = n as f64;
            term *= 3.0 * (3.0 * k + 1.0) * (3.0 * k + 2.0) / ((2.0 * k + 2.0) * (2.0 * k + 3.0)) / z;
            n += 1;
        }
        sum
    }

    /// Density of `t²` when `t` follows the free Poisson law with unit ratio.
    pub fn squared_free_poisson(l: f64) -> f64 {
        if !(0.0..16.0).contains(&l) || l == 0.0 {
            return 0.0;
        }
        let s = l.sqrt();
        ((4.0 - s) / s).sqrt() / (4.0 * std::f64::consts::PI * s)
    }

    /// Moments of the free Poisson law with ratio `c`: `Σ_k N(n,k) c^k`.
    pub fn free_poisson_moment(n: u64, c: f64) -> f64 {
        (1..=n)
            .map(|k| {
                let nar = binomial(n, k) * binomial(n, k - 1) / BigInt::from(n);
                nar.to_string().parse::<f64>().expect("integer") * c.powi(k as i32)
            })
            .sum()
    }
}

fn values(polys: &[MultiPoly]) -> Vec<Rational> {
    polys.iter().map(|p| p.constant_value().unwrap_or_else(|| int(-1))).collect()
}

fn list(v: &[Rational]) -> String {
    let items: Vec<String> = v.iter().map(format_rational).collect();
    format!("[{}]", items.join(", "))
}

fn sextic() -> Result<SpectralCurve> {
    SpectralCurve::new(golden::sextic())
}

fn criterion_1(opts: &CrosscheckOptions) -> Result<(bool, Vec<String>)> {
    let e = Enumerator { exec: opts.exec, ..Enumerator::default() };
    let listed = golden::moments();
    let mut ok = true;
    let mut details = Vec::new();
    for (k, expected) in listed.iter().enumerate().skip(1).take(3) {
        let m = e.moment(k)?;
        let same = &m == expected;
        ok &= same;
        details.push(format!("M_{k}: {}", if same { "equal" } else { "DIFFERENT" }));
    }
    Ok((ok, details))
}

fn criterion_2(opts: &CrosscheckOptions) -> Result<(bool, Vec<String>)> {
    let state = solve_petal_system(10)?;
    let table = extract_moments(&state, 5)?;
    let e = Enumerator { exec: opts.exec, ..Enumerator::default() };
    let mut ok = true;
    let mut details = Vec::new();
    for k in 1..=5 {
        let same = e.moment(k)? == table.entries()[k];
        ok &= same;
        details.push(format!("k = {k}: {}", if same { "equal" } else { "DIFFERENT" }));
    }
    Ok((ok, details))
}

fn criterion_3(_: &CrosscheckOptions) -> Result<(bool, Vec<String>)> {
    let state = solve_petal_system(12)?;
    let t = adjudicate(&state)?;
    let gens = build_system(t);
    let elim = eliminate_to_eta(&gens, &state)?;
    let eta_ok = equal_up_to_constant(&elim.eta, &golden::eta());
    let sextic = eta_to_sextic(&elim.eta)?;
    let diff = golden::diff(sextic.poly(), &golden::sextic());
    let sextic_ok = diff.is_empty();
    Ok((
        eta_ok && sextic_ok,
        vec![
            format!("transcription {t:?}"),
            format!("eliminant equal up to a constant: {eta_ok}"),
            format!("sextic term differences: {}", diff.len()),
        ],
    ))
}

fn criterion_4(_: &CrosscheckOptions) -> Result<(bool, Vec<String>)> {
    let from_curve = moments_from_curve(&sextic()?, 10)?;
    let from_series = extract_moments(&solve_petal_system(20)?, 10)?;
    let mismatched: Vec<usize> = (0..=10)
        .filter(|&n| from_curve.entries()[n] != from_series.entries()[n])
        .collect();
    Ok((
        mismatched.is_empty(),
        vec![format!("n = 0..10, mismatched orders: {mismatched:?}")],
    ))
}

fn criterion_5(_: &CrosscheckOptions) -> Result<(bool, Vec<String>)> {
    let curve = sextic()?;
    let cat = values(&crate::resolvent::moments_from_curve_at(&curve, 4, &int(1), &int(1))?.entries()[1..]);
    let fc = values(&crate::resolvent::moments_from_curve_at(&curve, 4, &int(0), &int(1))?.entries()[1..]);
    let cat_ref: Vec<Rational> = (1..=4).map(|n| reference::catalan(2 * n)).collect();
    let fc_ref: Vec<Rational> = (1..=4).map(reference::fuss_catalan).collect();
    Ok((
        cat == cat_ref && fc == fc_ref,
        vec![
            format!("y = 1: {} vs C_2n {}", list(&cat), list(&cat_ref)),
            format!("y = 0: {} vs Fuss-Catalan {}", list(&fc), list(&fc_ref)),
        ],
    ))
}

fn criterion_6(_: &CrosscheckOptions) -> Result<(bool, Vec<String>)> {
    let curve = sextic()?;
    let special = curve.specialize(&int(0), &int(1));
    let f: Vec<MultiPoly> = golden::DEGENERATE_FACTORS.iter().map(|s| s.parse().expect("factor")).collect();
    let product = &f[0] * &f[1];
    let factors_ok = special.poly() == &product;
    let zs: Vec<f64> = (0..20).map(|i| 100.0 - (100.0 - 7.0) * i as f64 / 19.0).collect();
    let path: Vec<Complex64> = zs.iter().map(|&z| Complex64::new(z, 0.0)).collect();
    let tracked = track_branch(&curve, &path, 0.0, 1.0)?;
    let worst = zs
        .iter()
        .zip(&tracked)
        .map(|(&z, w)| (*w - reference::fuss_catalan_resolvent(z)).norm())
        .fold(0.0, f64::max);
    Ok((
        factors_ok && worst <= 1e-6,
        vec![
            format!("exact factorisation: {factors_ok}"),
            format!("max |W - W_FC| over 20 points in [7, 100]: {worst:.3e}"),
        ],
    ))
}

fn criterion_7(opts: &CrosscheckOptions) -> Result<(bool, Vec<String>)> {
    let curve = sextic()?;
    let dopts = DensityOptions { exec: opts.exec, ..DensityOptions::default() };
    let mut ok = true;
    let mut details = Vec::new();
    for (c, m) in [(1i64, 1i64), (1, 2), (2, 2)] {
        let (yr, cr) = (rat(1, m), int(c));
        let d = density_auto(&curve, &yr, &cr, 1500, &dopts)?;
        let (y, cf) = (1.0 / m as f64, c as f64);
        let m1 = cf * cf + cf * y * y;
        let (mass, mean, min) = (d.mass(), d.moment(1), d.min_rho());
        let here = (mass - 1.0).abs() <= 1e-3 && (mean - m1).abs() <= 1e-2 && min >= -1e-4;
        ok &= here;
        details.push(format!(
            "(c, m) = ({c}, {m}): mass {mass:.6}, mean {mean:.6} vs {m1}, min {min:.2e}"
        ));
    }
    let grid: Vec<f64> = (1..=99).map(|k| 0.16 * k as f64).collect();
    let d = density(&curve, 1.0, 1.0, &grid, &dopts)?;
    let sup = grid
        .iter()
        .zip(&d.rho)
        .map(|(&l, r)| (r - reference::squared_free_poisson(l)).abs())
        .fold(0.0, f64::max);
    ok &= sup <= 1e-2;
    details.push(format!("m = 1 closed form, sup error on [0.16, 15.84]: {sup:.3e}"));
    Ok((ok, details))
}

fn criterion_8(opts: &CrosscheckOptions) -> Result<(bool, Vec<String>)> {
    let dims = Dims { n_a: 300, dim_b: 2, dim_c: 2, n_d: 300 };
    let seeds: Vec<u64> = (opts.seed..opts.seed + opts.seeds as u64).collect();
    let runs = simulate_seeds(dims, Regime::Unbalanced, &seeds, 2, true, opts.exec)?;
    let mean = |n: usize| runs.iter().map(|r| r.normalized_moments[n]).sum::<f64>() / runs.len() as f64;
    let (y, c) = (0.5, 1.0);
    let theory: Vec<f64> = golden::moments()[1..3]
        .iter()
        .map(|p| p.eval_f64(&point(y, c)))
        .collect();
    let (m1, m2) = (mean(0), mean(1));
    let e1 = (m1 - theory[0]).abs() / theory[0];
    let e2 = (m2 - theory[1]).abs() / theory[1];
    let eigs: Vec<f64> = runs.iter().flat_map(|r| r.eigenvalues.iter().copied()).collect();
    let d = density_auto(&sextic()?, &rat(1, 2), &int(1), 1500, &DensityOptions { exec: opts.exec, ..Default::default() })?;
    let hi = 1.05 * d.support_estimate.1;
    let hist = Histogram::uniform(&eigs, 0.0, hi, 30);
    let masses = d.bin_masses(&hist.edges);
    let outside = 1.0 - hist.total() as f64 / eigs.len() as f64;
    let l1 = hist.l1_distance(&masses, eigs.len()) + outside;
    Ok((
        e1 <= 0.05 && e2 <= 0.07 && l1 < 0.1,
        vec![
            format!("M_1: {m1:.5} vs {:.5} ({:.2}%)", theory[0], 100.0 * e1),
            format!("M_2: {m2:.5} vs {:.5} ({:.2}%)", theory[1], 100.0 * e2),
            format!("histogram L1 distance over 30 bins: {l1:.4}"),
        ],
    ))
}

fn point(y: f64, c: f64) -> [f64; NVARS] {
    let mut p = [0.0; NVARS];
    p[Var::Y.index()] = y;
    p[Var::C.index()] = c;
    p
}

fn criterion_9(opts: &CrosscheckOptions) -> Result<(bool, Vec<String>)> {
    let cubic = values(&balanced_moments(6, &int(1))?.entries()[1..]);
    let fc: Vec<Rational> = (1..=6).map(reference::fuss_catalan).collect();
    let exact_ok = cubic == fc;
    let dims = Dims { n_a: 20, dim_b: 300, dim_c: 300, n_d: 20 };
    let (est, se) = streamed_first_moment_estimate(dims, opts.seed, 8, opts.seed + 1, Regime::Balanced, opts.exec)?;
    let mc_ok = (est - 1.0).abs() <= 0.1;
    let (n_a, n_d) = (PROBE_OUTER_DIM, PROBE_OUTER_DIM);
    let seeds: Vec<u64> = (opts.seed..opts.seed + PROBE_SEEDS as u64).collect();
    let big = mixed_moment_freeness_probe(200, n_a, n_d, &seeds, opts.exec)?;
    let small = mixed_moment_freeness_probe(50, n_a, n_d, &seeds, opts.exec)?;
    let probe_ok = big.alternating_mean.abs() <= 3.0 * big.alternating_stderr;
    let shrink_ok = big.rms() < small.rms();
    let c = n_d as f64 / n_a as f64;
    let single_err = big
        .single_moments
        .iter()
        .chain(&big.single_moments_b)
        .enumerate()
        .map(|(i, v)| {
            let r = reference::free_poisson_moment(i as u64 % 3 + 1, c);
            (v - r).abs() / r
        })
        .fold(0.0, f64::max);
    let single_ok = single_err <= 0.05;
    Ok((
        exact_ok && mc_ok && probe_ok && shrink_ok && single_ok,
        vec![
            format!("cubic moments n <= 6 equal Fuss-Catalan: {exact_ok}"),
            format!("N = 300, N_A = N_D = 20: M_1 = {est:.4} ± {se:.4} (target 1 ± 10%)"),
            format!(
                "N = 200 alternating centred moment {:.2e} ± {:.2e}",
                big.alternating_mean, big.alternating_stderr
            ),
            format!("rms deviation N = 50: {:.3e}, N = 200: {:.3e}", small.rms(), big.rms()),
            format!("single-matrix moments vs free Poisson: max relative error {single_err:.3e}"),
        ],
    ))
}

fn random_poly(rng: &mut ChaCha20Rng) -> MultiPoly {
    let vars = [Var::X, Var::Y, Var::C];
    let mut terms = Vec::new();
    for _ in 0..rng.random_range(0..5) {
        let mut e = [0u16; NVARS];
        for v in vars {
            e[v.index()] = rng.random_range(0..3);
        }
        let num = rng.random_range(-9i64..=9);
        let den = rng.random_range(1i64..=4);
        terms.push((e, rat(num, den)));
    }
    MultiPoly::from_terms(terms)
}

fn random_series(rng: &mut ChaCha20Rng, order: usize) -> TruncatedSeries {
    let coeffs = (0..=order).map(|_| random_poly(rng)).collect();
    TruncatedSeries::from_coeffs(order, coeffs)
}

/// Ring axioms, exact division and geometric-series round trips on random
/// small instances. Returns the number of failing cases per property.
pub fn algebraic_properties(cases: usize, seed: u64) -> Result<[usize; 3]> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut failures = [0usize; 3];
    for _ in 0..cases {
        let (a, b, c) = (random_poly(&mut rng), random_poly(&mut rng), random_poly(&mut rng));
        let ring = &a + &b == &b + &a
            && &a * &b == &b * &a
            && &(&a * &b) * &c == &a * &(&b * &c)
            && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
            && &(&a + &b) - &b == a
            && &a * &MultiPoly::one() == a;
        failures[0] += usize::from(!ring);
        if !b.is_zero() {
            let back = exact_divide(&(&a * &b), &b, Var::X)?;
            failures[1] += usize::from(back != a);
        }
        let order = rng.random_range(1..6);
        let mut s = random_series(&mut rng, order);
        let mut coeffs = s.coeffs().to_vec();
        coeffs[0] = MultiPoly::one();
        s = TruncatedSeries::from_coeffs(order, coeffs);
        let inv = s.geometric_inverse()?;
        let round = s.mul(&inv)? == TruncatedSeries::one(order) && inv.geometric_inverse()? == s;
        failures[2] += usize::from(!round);
    }
    Ok(failures)
}

fn criterion_10(opts: &CrosscheckOptions) -> Result<(bool, Vec<String>)> {
    let state = solve_petal_system(20)?;
    let odd = odd_coefficients_vanish(&state);
    let transfer = transfer_matrix_check(&state, state.order());
    let fails = algebraic_properties(opts.property_cases, opts.seed)?;
    Ok((
        odd && transfer && fails == [0, 0, 0],
        vec![
            format!("odd coefficients of S01 vanish through x^20: {odd}"),
            format!("transfer matrix series at full order: {transfer}"),
            format!(
                "{} random cases; failures ring/divide/inverse: {fails:?}",
                opts.property_cases
            ),
        ],
    ))
}

type Check = fn(&CrosscheckOptions) -> Result<(bool, Vec<String>)>;

const CHECKS: [Check; 10] = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
];

/// Runs criterion `id` (1..=10). Pipeline errors count as failures.
pub fn run_criterion(id: u8, opts: &CrosscheckOptions) -> CriterionResult {
    let idx = usize::from(id).wrapping_sub(1);
    let start = Instant::now();
    let (passed, details) = match CHECKS.get(idx) {
        Some(check) => check(opts).unwrap_or_else(|e| (false, vec![format!("error: {e}")])),
        None => (false, vec![format!("no criterion {id}")]),
    };
    CriterionResult {
        id,
        title: TITLES.get(idx).copied().unwrap_or("unknown"),
        passed,
        details,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run(ids: &[u8], opts: &CrosscheckOptions) -> CrosscheckReport {
    let results: Vec<CriterionResult> = ids.iter().map(|&id| run_criterion(id, opts)).collect();
    CrosscheckReport {
        passed: results.iter().all(|r| r.passed),
        results,
    }
}

pub fn run_all(opts: &CrosscheckOptions) -> CrosscheckReport {
    run(&(1..=10).collect::<Vec<_>>(), opts)
}
