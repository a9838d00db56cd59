//! All complex roots of a small polynomial by Aberth–Ehrlich iteration,
//! finished with a Newton polish.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITER: usize = 500;
const TOL: f64 = 1e-12;

/// Drops vanishing leading coefficients. Tiny but non-zero ones are kept:
/// they carry genuinely large roots.
fn trimmed(coeffs: &[Complex64]) -> &[Complex64] {
    let mut n = coeffs.len();
    while n > 1 && coeffs[n - 1].norm() == 0.0 {
        n -= 1;
    }
    &coeffs[..n]
}

fn eval_with_derivative(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

/// Roots of `Σ coeffs[k] x^k` (lowest power first). Zero leading
/// coefficients are removed, so the count may be below `coeffs.len() - 1`.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    polynomial_roots_from(coeffs, &[])
}

/// As [`polynomial_roots`], starting from `guesses` where available.
pub fn polynomial_roots_from(coeffs: &[Complex64], guesses: &[Complex64]) -> Result<Vec<Complex64>> {
    let a = trimmed(coeffs);
    let n = a.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = a[n];
    // Fujiwara bound on the root moduli
    let radius = (0..n)
        .map(|k| (a[k] / lead).norm().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        * 2.0;
    let mut z: Vec<Complex64> = if guesses.len() == n {
        guesses.to_vec()
    } else {
        (0..n)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
                Complex64::from_polar(radius.max(1e-3) * 0.5, theta)
            })
            .collect()
    };
    // coincident starting points stall the iteration
    for i in 0..n {
        for j in 0..i {
            if (z[i] - z[j]).norm() < 1e-14 * (1.0 + z[i].norm()) {
                let bump = Complex64::new(1e-7, 1e-7) * (1.0 + z[i].norm());
                z[i] += bump;
            }
        }
    }
    let mut converged = vec![false; n];
    for _ in 0..MAX_ITER {
        let mut all = true;
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let (p, dp) = eval_with_derivative(a, z[i]);
            if p.norm() <= 1e-15 * magnitude(a, z[i]) {
                converged[i] = true;
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            let step = ratio / (1.0 - ratio * s);
            z[i] -= step;
            if step.norm() <= TOL * z[i].norm().max(1e-300) || !step.is_finite() {
                converged[i] = step.is_finite();
            }
            all &= converged[i];
        }
        if all {
            break;
        }
    }
    if z.iter().any(|r| !r.is_finite()) {
        return Err(Error::NoRootConverged);
    }
    // Newton polish
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(a, *r);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *r -= step;
            if step.norm() <= 1e-16 * r.norm() {
                break;
            }
        }
    }
    // clustered roots may stall the step test; judge them by backward error
    for (r, done) in z.iter().zip(&converged) {
        if !done && !small_residual(a, *r) {
            return Err(Error::NoRootConverged);
        }
    }
    Ok(z)
}

/// `Σ |a_k| |x|^k`, the size of the terms whose cancellation gives `p(x)`.
fn magnitude(a: &[Complex64], x: Complex64) -> f64 {
    a.iter().rev().fold(0.0, |acc, c| acc * x.norm() + c.norm())
}

fn small_residual(a: &[Complex64], x: Complex64) -> bool {
    let (p, _) = eval_with_derivative(a, x);
    p.norm() <= 1e-11 * magnitude(a, x)
}
