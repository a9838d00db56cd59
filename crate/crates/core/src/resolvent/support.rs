//! Support edges: real ramification points of the curve that actually bound
//! the density.

use num_complex::Complex64;
use serde::Serialize;

use super::track::{start_radius, value_above};
use crate::curve::{NumericCurve, SpectralCurve};
use crate::error::{Error, Result};
use crate::exactalg::{resultant, to_f64, Rational, UniPoly, Var};

/// Height above the axis used when probing either side of a candidate.
const PROBE_HEIGHT: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupportReport {
    /// Distinct real roots of the discriminant in `z` (and `z = 0`).
    pub ramification: Vec<f64>,
    /// The subset across which the density switches on or off.
    pub edges: Vec<f64>,
    /// Outermost edges, bracketing the bulk of the density.
    pub bulk: Option<(f64, f64)>,
    /// More than two edges were found, so the support may be disconnected.
    pub multi_interval: bool,
}

/// `Res_W(Q, ∂Q/∂W)` at exact parameters, as a polynomial in `z`.
pub fn discriminant(curve: &SpectralCurve, y: &Rational, c: &Rational) -> Result<UniPoly> {
    let q = curve.specialize(y, c);
    let dq = q.poly().derivative(Var::W);
    let disc = resultant(q.poly(), &dq, Var::W)?;
    let uni = UniPoly::from_multi(&disc, Var::Z)
        .ok_or_else(|| Error::InvalidArgument("curve has parameters left after specialisation".into()))?;
    if uni.is_zero() {
        return Err(Error::DiscriminantDegenerate);
    }
    Ok(uni)
}

fn density_at(curve: &NumericCurve, x: f64, radius: f64) -> Result<f64> {
    let h = PROBE_HEIGHT * x.abs().max(1.0);
    let w = value_above(curve, Complex64::new(x, h), radius)?;
    Ok(-w.im / std::f64::consts::PI)
}

/// Ramification points and the support edges among them.
///
/// A candidate counts as an edge when the density is clearly positive on
/// one side and negligible on the other.
pub fn support_endpoints(curve: &SpectralCurve, y: &Rational, c: &Rational) -> Result<SupportReport> {
    let disc = discriminant(curve, y, c)?;
    let mut ramification = disc.real_roots(1e-13);
    if !ramification.iter().any(|r| r.abs() < 1e-12) {
        ramification.push(0.0);
        ramification.sort_by(f64::total_cmp);
    }
    let (yf, cf) = (to_f64(y), to_f64(c));
    let numeric = curve.numeric(yf, cf);
    let radius = start_radius(yf, cf);
    let mut edges = Vec::new();
    for &r in &ramification {
        let delta = 1e-3 * r.abs().max(1.0);
        let left = density_at(&numeric, r - delta, radius)?;
        let right = density_at(&numeric, r + delta, radius)?;
        let (hi, lo) = (left.max(right), left.min(right));
        if hi > 1e-7 && hi > 100.0 * lo.max(0.0) {
            edges.push(r);
        }
    }
    let bulk = match (edges.first(), edges.last()) {
        (Some(&a), Some(&b)) if b > a => Some((a, b)),
        _ => None,
    };
    Ok(SupportReport {
        ramification,
        multi_interval: edges.len() > 2,
        edges,
        bulk,
    })
}
