//! Density by Stieltjes inversion along the tracked branch.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use super::support::support_endpoints;
use super::track::{start_radius, BranchState};
use crate::curve::{NumericCurve, SpectralCurve};
use crate::error::{Error, Result};
use crate::exactalg::{to_f64, Rational};
use crate::exec::Exec;

pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Unbalanced,
    Balanced,
}

#[derive(Clone, Copy, Debug)]
pub struct DensityOptions {
    pub epsilon: f64,
    /// Combine `ε` and `2ε` as `2ρ(ε) - ρ(2ε)`.
    pub richardson: bool,
    pub exec: Exec,
}

impl Default for DensityOptions {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            richardson: false,
            exec: Exec::default(),
        }
    }
}

/// Sampled density `ρ(λ)` with the parameters that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct DensityCurve {
    pub regime: Regime,
    pub lambdas: Vec<f64>,
    pub rho: Vec<f64>,
    pub c: f64,
    /// `1/y`; absent in the balanced regime.
    pub m: Option<f64>,
    pub epsilon: f64,
    pub richardson: bool,
    pub support_estimate: (f64, f64),
}

fn trapezoid(x: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    (1..x.len())
        .map(|i| 0.5 * (x[i] - x[i - 1]) * (f(i) + f(i - 1)))
        .sum()
}

impl DensityCurve {
    pub fn mass(&self) -> f64 {
        self.moment(0)
    }

    /// `∫ λ^k ρ(λ) dλ` by the trapezoid rule.
    pub fn moment(&self, k: i32) -> f64 {
        trapezoid(&self.lambdas, |i| self.lambdas[i].powi(k) * self.rho[i])
    }

    pub fn min_rho(&self) -> f64 {
        self.rho.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Cumulative trapezoid mass at each grid point.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.lambdas.len());
        let mut acc = 0.0;
        out.push(0.0);
        for i in 1..self.lambdas.len() {
            acc += 0.5 * (self.lambdas[i] - self.lambdas[i - 1]) * (self.rho[i] + self.rho[i - 1]);
            out.push(acc);
        }
        out
    }

    /// Mass between consecutive `edges`, from the piecewise-linear cumulative.
    pub fn bin_masses(&self, edges: &[f64]) -> Vec<f64> {
        let cdf = self.cumulative();
        let at = |x: f64| -> f64 {
            let l = &self.lambdas;
            if x <= l[0] {
                return 0.0;
            }
            if x >= l[l.len() - 1] {
                return cdf[cdf.len() - 1];
            }
            let i = l.partition_point(|&v| v <= x);
            let t = (x - l[i - 1]) / (l[i] - l[i - 1]);
            cdf[i - 1] + t * (cdf[i] - cdf[i - 1])
        };
        edges.windows(2).map(|w| at(w[1]) - at(w[0])).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("lambda,rho\n");
        for (l, r) in self.lambdas.iter().zip(&self.rho) {
            writeln!(s, "{l},{r}").expect("writing to a String");
        }
        s
    }
}

/// Grid for a density supported near `[lo, hi]`: logarithmic clusters on
/// both sides of each edge (resolving scales down to `epsilon`), a uniform
/// interior, and margins where only the Poisson tails live.
pub fn density_grid(lo: f64, hi: f64, epsilon: f64, uniform_points: usize) -> Vec<f64> {
    let margin = 0.1 * hi.abs().max(1.0);
    let per_side = 480;
    let (d_min, d_max) = (1e-3 * epsilon, margin);
    let ratio = (d_max / d_min).ln();
    let offsets: Vec<f64> = (0..per_side)
        .map(|k| d_min * (ratio * k as f64 / (per_side - 1) as f64).exp())
        .collect();
    let mut g = Vec::with_capacity(4 * per_side + uniform_points + 3);
    for &edge in &[lo, hi] {
        g.push(edge);
        for &d in &offsets {
            g.push(edge - d);
            g.push(edge + d);
        }
    }
    let n = uniform_points.max(2);
    g.extend((0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64));
    g.sort_by(f64::total_cmp);
    g.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs().max(1e-300));
    g
}

fn rho_at(curve: &NumericCurve, lambda: f64, radius: f64, opts: &DensityOptions) -> Result<f64> {
    let eps = opts.epsilon;
    let mut state = BranchState::start(curve, Complex64::new(lambda, radius))?.without_history();
    let stop = if opts.richardson { 2.0 * eps } else { eps };
    let mut h = radius;
    while h * 0.5 > stop {
        h *= 0.5;
        state.advance(curve, Complex64::new(lambda, h))?;
    }
    state.advance(curve, Complex64::new(lambda, stop))?;
    let coarse = -state.w().im / std::f64::consts::PI;
    if !opts.richardson {
        return Ok(coarse);
    }
    state.advance(curve, Complex64::new(lambda, eps))?;
    let fine = -state.w().im / std::f64::consts::PI;
    Ok(2.0 * fine - coarse)
}

fn estimate_support(lambdas: &[f64], rho: &[f64]) -> (f64, f64) {
    let inside: Vec<f64> = lambdas
        .iter()
        .zip(rho)
        .filter(|(_, &r)| r > 1e-4)
        .map(|(&l, _)| l)
        .collect();
    match (inside.first(), inside.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (f64::NAN, f64::NAN),
    }
}

pub(crate) fn density_numeric(
    curve: &NumericCurve,
    regime: Regime,
    y: f64,
    c: f64,
    grid: &[f64],
    opts: &DensityOptions,
) -> Result<DensityCurve> {
    if opts.epsilon.is_nan() || opts.epsilon <= 0.0 {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let radius = start_radius(y, c);
    let rho = opts
        .exec
        .try_map_range(grid.len(), |i| rho_at(curve, grid[i], radius, opts))?;
    let support_estimate = estimate_support(grid, &rho);
    Ok(DensityCurve {
        regime,
        lambdas: grid.to_vec(),
        rho,
        c,
        m: match regime {
            Regime::Unbalanced if y > 0.0 => Some(1.0 / y),
            _ => None,
        },
        epsilon: opts.epsilon,
        richardson: opts.richardson,
        support_estimate,
    })
}

/// `ρ(λ) = -Im W(λ + iε) / π` on `grid`, each point reached by its own descent
/// from far above the real axis.
pub fn density(
    curve: &SpectralCurve,
    y: f64,
    c: f64,
    grid: &[f64],
    opts: &DensityOptions,
) -> Result<DensityCurve> {
    density_numeric(&curve.numeric(y, c), Regime::Unbalanced, y, c, grid, opts)
}

/// Locates the support from the discriminant, builds a [`density_grid`] around
/// it and evaluates the density there. The reported support is the edge pair.
pub fn density_auto(
    curve: &SpectralCurve,
    y: &Rational,
    c: &Rational,
    uniform_points: usize,
    opts: &DensityOptions,
) -> Result<DensityCurve> {
    let support = support_endpoints(curve, y, c)?;
    let (lo, hi) = support
        .bulk
        .ok_or_else(|| Error::InvalidArgument("no support edges found".into()))?;
    let grid = density_grid(lo, hi, opts.epsilon, uniform_points);
    let mut out = density(curve, to_f64(y), to_f64(c), &grid, opts)?;
    out.support_estimate = (lo, hi);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elimination::golden;
    use crate::exactalg::{int, rat};

    fn sextic() -> SpectralCurve {
        SpectralCurve::new(golden::sextic()).unwrap()
    }

    /// Image of the quarter-circle law under `t -> t^2`.
    fn squared_quarter_circle(l: f64) -> f64 {
        let s = l.sqrt();
        (1.0 / (4.0 * std::f64::consts::PI * s)) * ((4.0 - s) / s).sqrt()
    }

    #[test]
    fn matches_closed_form_at_m_one() {
        let grid: Vec<f64> = (1..=99).map(|k| 0.16 * k as f64).collect();
        let d = density(&sextic(), 1.0, 1.0, &grid, &DensityOptions::default()).unwrap();
        for (l, r) in d.lambdas.iter().zip(&d.rho) {
            assert!((r - squared_quarter_circle(*l)).abs() < 1e-2, "{l}: {r}");
        }
    }

    #[test]
    fn mass_and_first_moment() {
        let opts = DensityOptions::default();
        let d = density_auto(&sextic(), &rat(1, 2), &int(1), 1500, &opts).unwrap();
        assert!((d.mass() - 1.0).abs() < 1e-3, "mass {}", d.mass());
        assert!((d.moment(1) - 1.25).abs() < 1e-2, "first moment {}", d.moment(1));
        assert!(d.min_rho() > -1e-4);
        let far = density(&sextic(), 0.5, 1.0, &[100.0, 1000.0], &opts).unwrap();
        assert!(far.rho.iter().all(|r| r.abs() < 1e-4));
    }

    #[test]
    fn bin_masses_sum_to_total() {
        let d = DensityCurve {
            regime: Regime::Unbalanced,
            lambdas: vec![0.0, 1.0, 2.0],
            rho: vec![0.0, 1.0, 0.0],
            c: 1.0,
            m: Some(1.0),
            epsilon: 1e-6,
            richardson: false,
            support_estimate: (0.0, 2.0),
        };
        let b = d.bin_masses(&[0.0, 1.0, 2.0]);
        assert_eq!(b, vec![0.5, 0.5]);
        assert!((d.bin_masses(&[0.5, 1.5])[0] - 0.5).abs() < 1e-12);
        assert!(d.to_csv().starts_with("lambda,rho\n0,0\n"));
    }
}
