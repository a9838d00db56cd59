//! Balanced regime: the Marchenko–Pastur resolvent, the S-transform chain
//! and the cubic curve of the free product of two Marchenko–Pastur laws.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::curve::SpectralCurve;
use crate::elimination::golden;
use crate::error::{Error, Result};
use crate::exactalg::{int, to_f64, MultiPoly, Rational, TruncatedSeries, Var};
use crate::maps::MomentTable;
use crate::resolvent::{
    self, density_grid, support_endpoints, DensityCurve, DensityOptions, Regime,
};

/// `z W^2 + (c - z - 1) W + 1`, the Marchenko–Pastur resolvent equation.
pub const MP_QUADRATIC: &str = "z W^2 + (c - z - 1) W + 1";

/// The cubic `z²W³ + 2(c−1)zW² + ((c−1)² − z)W + 1`.
#[derive(Clone, Debug)]
pub struct BalancedCurve {
    curve: SpectralCurve,
}

impl Default for BalancedCurve {
    fn default() -> Self {
        Self::new()
    }
}

impl BalancedCurve {
    pub fn new() -> Self {
        let curve = SpectralCurve::new(golden::balanced_cubic()).expect("cubic is a valid curve");
        Self { curve }
    }

    pub fn poly(&self) -> &MultiPoly {
        self.curve.poly()
    }

    pub fn curve(&self) -> &SpectralCurve {
        &self.curve
    }

    /// The curve at a fixed `c`.
    pub fn at(&self, c: &Rational) -> MultiPoly {
        self.curve.poly().specialize(Var::C, c)
    }
}

/// Side of the real axis from which a point on the cut is approached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfPlane {
    Upper,
    Lower,
}

/// Resolvent of the Marchenko–Pastur law of ratio `c`, on the branch with
/// `W ~ 1/z` at infinity.
///
/// Uses `W = 2 / (z + 1 - c + √(z-a)√(z-b))` with `a, b = (1 ∓ √c)²`, whose
/// cut is exactly `[a, b]`. Points on the cut need a `side`.
pub fn mp_resolvent(z: Complex64, c: f64, side: Option<HalfPlane>) -> Result<Complex64> {
    let (a, b) = ((1.0 - c.sqrt()).powi(2), (1.0 + c.sqrt()).powi(2));
    let root = if z.im == 0.0 && z.re > a && z.re < b {
        let r = ((z.re - a) * (b - z.re)).sqrt();
        match side {
            Some(HalfPlane::Upper) => Complex64::new(0.0, r),
            Some(HalfPlane::Lower) => Complex64::new(0.0, -r),
            None => return Err(Error::OnBranchCut(z.re)),
        }
    } else {
        (z - a).sqrt() * (z - b).sqrt()
    };
    Ok(2.0 / (z + 1.0 - c + root))
}

/// Moments of the Marchenko–Pastur law from its quadratic, symbolic in `c`.
pub fn mp_moments(n_max: usize) -> Result<MomentTable> {
    let curve = SpectralCurve::new(MP_QUADRATIC.parse().expect("valid polynomial"))?;
    resolvent::moments_from_curve(&curve, n_max)
}

/// Exact evaluators of the transforms along the free-multiplicative chain,
/// each pinned to its closed form. Every method returns `None` at a pole.
#[derive(Clone, Debug)]
pub struct SChain {
    c: Rational,
}

/// The chain at ratio `c`.
pub fn s_transform_chain(c: Rational) -> SChain {
    SChain { c }
}

fn ratio(num: Rational, den: Rational) -> Option<Rational> {
    if den.is_zero() {
        None
    } else {
        Some(num / den)
    }
}

impl SChain {
    pub fn c(&self) -> &Rational {
        &self.c
    }

    /// Inverse of the moment function of one Marchenko–Pastur factor,
    /// `t / (t² + (c+1)t + c)`.
    pub fn chi_inv(&self, t: &Rational) -> Option<Rational> {
        let c = &self.c;
        ratio(t.clone(), t * t + (c + Rational::one()) * t + c)
    }

    /// `S(t) = 1/(c + t)`.
    pub fn s(&self, t: &Rational) -> Option<Rational> {
        ratio(Rational::one(), &self.c + t)
    }

    /// `S_BC = S²`.
    pub fn s_bc(&self, t: &Rational) -> Option<Rational> {
        self.s(t).map(|s| &s * &s)
    }

    /// `t / ((t+1)(c+t)²)`.
    pub fn chi_bc_inv(&self, t: &Rational) -> Option<Rational> {
        let ct = &self.c + t;
        ratio(t.clone(), (t + Rational::one()) * &ct * &ct)
    }

    /// The inverse moment function rebuilt from an S-transform,
    /// `S(t) t / (1 + t)`.
    pub fn chi_inv_from_s(s: Option<Rational>, t: &Rational) -> Option<Rational> {
        s.and_then(|s| ratio(s * t, t + Rational::one()))
    }
}

/// `ψ(u) = Σ_{n≥1} M_n u^n` as a truncated series in `x`.
pub fn moment_series(table: &MomentTable, order: usize) -> TruncatedSeries {
    let mut coeffs = table.entries().to_vec();
    if let Some(first) = coeffs.first_mut() {
        *first = MultiPoly::zero();
    }
    TruncatedSeries::from_coeffs(order, coeffs)
}

/// `u (ψ+1)(c+ψ)² - ψ` through `x^order`, with `ψ` built from the cubic's
/// moments. Zero when the moments satisfy the S-transform relation.
pub fn s_relation_residual(order: usize) -> Result<TruncatedSeries> {
    let table = balanced_moments_symbolic(order)?;
    let psi = moment_series(&table, order);
    let c = TruncatedSeries::constant(order, MultiPoly::var(Var::C));
    let one = TruncatedSeries::one(order);
    let cp = c.add(&psi)?;
    let lhs = psi.add(&one)?.mul(&cp)?.mul(&cp)?.mul_x();
    lhs.sub(&psi)
}

/// `ψ(χ_BC^{-1}(t)) - t` through `t^order` at a fixed `c ≠ 0`, where the inner
/// series is the expansion of `t / ((t+1)(c+t)²)`.
pub fn round_trip_residual(order: usize, c: &Rational) -> Result<TruncatedSeries> {
    if c.is_zero() {
        return Err(Error::InvalidArgument("c must be non-zero".into()));
    }
    let table = balanced_moments(order, c)?;
    let psi = moment_series(&table, order);
    // (t+1)(1 + t/c)²; the factor 1/c² is restored below
    let inv_c = MultiPoly::constant(c.recip());
    let base = TruncatedSeries::from_coeffs(order, vec![MultiPoly::one(), MultiPoly::one()]);
    let shifted = TruncatedSeries::from_coeffs(order, vec![MultiPoly::one(), inv_c.clone()]);
    let den = base.mul(&shifted)?.mul(&shifted)?;
    let inner = den
        .geometric_inverse()?
        .mul_x()
        .scale(&(&inv_c * &inv_c));
    let mut composed = TruncatedSeries::zero(order);
    let mut power = TruncatedSeries::one(order);
    for n in 1..=order {
        power = power.mul(&inner)?;
        composed = composed.add(&power.scale(psi.coeff(n)))?;
    }
    composed.sub(&TruncatedSeries::x(order))
}

/// Exact moments of the free product of two Marchenko–Pastur laws of ratio `c`.
pub fn balanced_moments(n_max: usize, c: &Rational) -> Result<MomentTable> {
    resolvent::moments_from_curve_at(BalancedCurve::new().curve(), n_max, &int(0), c)
}

/// As [`balanced_moments`] with `c` left symbolic.
pub fn balanced_moments_symbolic(n_max: usize) -> Result<MomentTable> {
    resolvent::moments_from_curve(BalancedCurve::new().curve(), n_max)
}

/// Density of the balanced law on `grid` by branch tracking on the cubic.
pub fn balanced_density(c: f64, grid: &[f64], opts: &DensityOptions) -> Result<DensityCurve> {
    let numeric = BalancedCurve::new().curve().numeric(0.0, c);
    resolvent::density_numeric(&numeric, Regime::Balanced, 0.0, c, grid, opts)
}

/// Support edges of the balanced law from the cubic's discriminant.
pub fn balanced_support(c: &Rational) -> Result<resolvent::SupportReport> {
    support_endpoints(BalancedCurve::new().curve(), &int(0), c)
}

/// Density on a grid fitted to the support found from the discriminant.
pub fn balanced_density_auto(c: &Rational, uniform_points: usize, opts: &DensityOptions) -> Result<DensityCurve> {
    let support = balanced_support(c)?;
    let (lo, hi) = support
        .bulk
        .ok_or_else(|| Error::InvalidArgument("no support edges found".into()))?;
    let grid = density_grid(lo, hi, opts.epsilon, uniform_points);
    let mut out = balanced_density(to_f64(c), &grid, opts)?;
    out.support_estimate = (lo, hi);
    Ok(out)
}
