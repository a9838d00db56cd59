//! Closed-form references and random generators shared by the integration tests.
#![allow(dead_code)]

use marginal_spectra::exactalg::{int, rat, MultiPoly, Rational, TruncatedSeries, Var, NVARS};
use proptest::prelude::*;

pub fn binomial(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub fn catalan(n: u64) -> Rational {
    int((binomial(2 * n, n) / (n as u128 + 1)) as i64)
}

pub fn fuss_catalan(n: u64) -> Rational {
    int((binomial(3 * n, n) / (2 * n as u128 + 1)) as i64)
}

/// The Fuss-Catalan resolvent at real `z > 27/4`: the smaller positive root
/// of `z² W³ - z W + 1`, found by bisection below the cubic's local minimum.
pub fn fuss_catalan_resolvent(z: f64) -> f64 {
    let f = |w: f64| z * z * w * w * w - z * w + 1.0;
    let (mut lo, mut hi) = (0.0, 1.0 / (3.0 * z).sqrt());
    assert!(f(hi) < 0.0, "z = {z} is not above the support");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Density of `t²` for `t` with the free Poisson law of unit ratio.
pub fn squared_free_poisson_density(l: f64) -> f64 {
    if l <= 0.0 || l >= 16.0 {
        return 0.0;
    }
    let s = l.sqrt();
    ((4.0 - s) / s).sqrt() / (4.0 * std::f64::consts::PI * s)
}

/// `Σ_j N(n, j) c^j`, the free Poisson moments with every free cumulant equal to `c`.
pub fn free_poisson_moment(n: usize, c: &Rational) -> Rational {
    let n64 = n as u64;
    (1..=n64).fold(int(0), |acc, j| {
        let nar = binomial(n64, j) * binomial(n64, j - 1) / n as u128;
        acc + int(nar as i64) * c.pow(j as i32)
    })
}

/// Non-crossing partitions of `0..n` as block labels (restricted growth strings).
pub fn noncrossing_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn grow(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == labels.len() {
            out.push(labels.clone());
            return;
        }
        for b in 0..=max + 1 {
            labels[i] = b;
            grow(i + 1, max.max(b), labels, out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    grow(1, 0, &mut labels, &mut out);
    out.retain(|p| {
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        if p[a] == p[c] && p[b] == p[d] && p[a] != p[b] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    });
    out
}

/// Block sizes of the Kreweras complement `π⁻¹ γ`, with `π` the permutation
/// whose cycles are the increasing blocks and `γ = (0 1 ... n-1)`.
pub fn kreweras_block_sizes(p: &[usize]) -> Vec<usize> {
    let n = p.len();
    let mut pi = vec![0usize; n];
    for i in 0..n {
        let next = (i + 1..n).find(|&j| p[j] == p[i]);
        pi[i] = next.unwrap_or_else(|| (0..n).find(|&j| p[j] == p[i]).expect("own block"));
    }
    let mut pi_inv = vec![0usize; n];
    for (i, &j) in pi.iter().enumerate() {
        pi_inv[j] = i;
    }
    let k: Vec<usize> = (0..n).map(|i| pi_inv[(i + 1) % n]).collect();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let (mut len, mut i) = (0, s);
        while !seen[i] {
            seen[i] = true;
            i = k[i];
            len += 1;
        }
        sizes.push(len);
    }
    sizes
}

/// Moments of `ab` for free `a`, `b` with the free Poisson law of ratio `c`:
/// `Σ_{π ∈ NC(n)} κ_π[a] φ_{K(π)}[b]`, every free cumulant of `a` being `c`.
pub fn free_product_moment(n: usize, c: &Rational) -> Rational {
    noncrossing_partitions(n)
        .iter()
        .map(|p| {
            let blocks = p.iter().max().map_or(0, |m| m + 1);
            kreweras_block_sizes(p)
                .iter()
                .fold(c.pow(blocks as i32), |acc, &s| acc * free_poisson_moment(s, c))
        })
        .fold(int(0), |a, b| a + b)
}

pub fn point(y: f64, c: f64) -> [f64; NVARS] {
    let mut p = [0.0; NVARS];
    p[Var::Y.index()] = y;
    p[Var::C.index()] = c;
    p
}

pub fn constants(polys: &[MultiPoly]) -> Vec<Rational> {
    polys
        .iter()
        .map(|p| p.constant_value().expect("constant"))
        .collect()
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

/// Polynomials with up to five terms in `vars`, exponents below 3.
pub fn poly_in(vars: &'static [Var]) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0u16..3, vars.len()), small_rational()), 0..5).prop_map(
        move |terms| {
            MultiPoly::from_terms(terms.into_iter().map(|(es, c)| {
                let mut e = [0u16; NVARS];
                for (v, k) in vars.iter().zip(es) {
                    e[v.index()] = k;
                }
                (e, c)
            }))
        },
    )
}

pub const XYC: &[Var] = &[Var::X, Var::Y, Var::C];

pub fn small_poly() -> impl Strategy<Value = MultiPoly> {
    poly_in(XYC)
}

/// Series with unit constant term and coefficients in `y, c`.
pub fn unit_series() -> impl Strategy<Value = TruncatedSeries> {
    (1usize..7).prop_flat_map(|order| {
        prop::collection::vec(poly_in(&[Var::Y, Var::C]), order).prop_map(move |rest| {
            let mut coeffs = vec![MultiPoly::one()];
            coeffs.extend(rest);
            TruncatedSeries::from_coeffs(order, coeffs)
        })
    })
}
