//! Moments read off a spectral curve by solving for the branch analytic at
//! infinity, one coefficient at a time.

use crate::curve::SpectralCurve;
use crate::error::{Error, Result};
use crate::exactalg::{exact_divide, substitute_series, MultiPoly, Rational, TruncatedSeries, Var};
use crate::maps::MomentTable;

/// Rewrites `Q(W, z)` under `W = w/z`, `z = 1/x` and clears the lowest power
/// of `x`, giving `P(w, x)` with `w` stored in the `W` slot.
fn at_infinity(curve: &SpectralCurve) -> MultiPoly {
    let (wi, zi, xi) = (Var::W.index(), Var::Z.index(), Var::X.index());
    let shift = curve
        .poly()
        .terms()
        .map(|(e, _)| e[wi] as i32 - e[zi] as i32)
        .min()
        .unwrap_or(0);
    MultiPoly::from_terms(curve.poly().terms().map(|(e, c)| {
        let mut out = *e;
        out[xi] = (e[wi] as i32 - e[zi] as i32 - shift) as u16;
        out[zi] = 0;
        (out, c.clone())
    }))
}

/// `M_0, ..., M_{n_max}` of the solution `W = Σ M_n z^{-n-1}` with `M_0 = 1`,
/// with coefficients left symbolic in whatever parameters the curve carries.
pub fn moments_from_curve(curve: &SpectralCurve, n_max: usize) -> Result<MomentTable> {
    let p = at_infinity(curve);
    let leading = p.coeff_of(Var::X, 0).specialize(Var::W, &Rational::from_integer(1.into()));
    if !leading.is_zero() {
        return Err(Error::InconsistentLeadingOrder);
    }
    let slope = p
        .derivative(Var::W)
        .coeff_of(Var::X, 0)
        .specialize(Var::W, &Rational::from_integer(1.into()));
    if slope.is_zero() {
        return Err(Error::DegenerateInput { var: Var::W });
    }
    let mut moments = vec![MultiPoly::one()];
    for n in 1..=n_max {
        let w = TruncatedSeries::from_coeffs(n, moments.clone());
        let residual = substitute_series(&p, &[(Var::W, &w)])?;
        let m = exact_divide(&-residual.coeff(n), &slope, Var::C)?;
        moments.push(m);
    }
    Ok(MomentTable::new(moments))
}

/// As [`moments_from_curve`] at exact parameter values.
pub fn moments_from_curve_at(
    curve: &SpectralCurve,
    n_max: usize,
    y: &Rational,
    c: &Rational,
) -> Result<MomentTable> {
    moments_from_curve(&curve.specialize(y, c), n_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elimination::golden;
    use crate::exactalg::{int, rat};

    fn sextic() -> SpectralCurve {
        SpectralCurve::new(golden::sextic()).unwrap()
    }

    #[test]
    fn symbolic_moments_match_listed_values() {
        let t = moments_from_curve(&sextic(), 3).unwrap();
        assert_eq!(t.entries(), golden::moments().as_slice());
    }

    #[test]
    fn catalan_and_fuss_catalan_specialisations() {
        let t = moments_from_curve_at(&sextic(), 4, &int(1), &int(1)).unwrap();
        let v: Vec<Rational> = t.entries().iter().map(|p| p.constant_value().unwrap()).collect();
        assert_eq!(v, [1, 2, 14, 132, 1430].map(int));
        let t = moments_from_curve_at(&sextic(), 4, &int(0), &int(1)).unwrap();
        let v: Vec<Rational> = t.entries().iter().map(|p| p.constant_value().unwrap()).collect();
        assert_eq!(v, [1, 1, 3, 12, 55].map(int));
    }

    #[test]
    fn specialising_commutes_with_solving() {
        let symbolic = moments_from_curve(&sextic(), 5).unwrap();
        let (y, c) = (rat(1, 3), rat(5, 2));
        let direct = moments_from_curve_at(&sextic(), 5, &y, &c).unwrap();
        let evaluated = symbolic.evaluate(&y, &c);
        let direct: Vec<Rational> = direct.entries().iter().map(|p| p.constant_value().unwrap()).collect();
        assert_eq!(evaluated, direct);
    }

    #[test]
    fn wrong_normalisation_is_rejected() {
        // W = 2/z at leading order
        let curve = SpectralCurve::new("z W - 2".parse().unwrap()).unwrap();
        assert!(matches!(moments_from_curve(&curve, 2), Err(Error::InconsistentLeadingOrder)));
    }
}
