//! Continuation of the branch analytic at infinity along a path in `z`.

use num_complex::Complex64;

use super::roots::polynomial_roots_from;
use crate::curve::NumericCurve;
use crate::error::{Error, Result};

/// Halvings of a step allowed before an ambiguity is reported.
pub const MAX_REFINEMENTS: u32 = 20;
/// Relative residual accepted at every tracked point.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// A point on the tracked branch together with the path that led there.
#[derive(Clone, Debug)]
pub struct BranchState {
    z: Complex64,
    w: Complex64,
    roots: Vec<Complex64>,
    history: Vec<(Complex64, Complex64)>,
    keep_history: bool,
}

/// The root nearest `target`, and whether the runner-up is at least twice as far.
fn nearest(roots: &[Complex64], target: Complex64) -> Option<(Complex64, bool)> {
    let mut d: Vec<(f64, Complex64)> = roots.iter().map(|r| ((r - target).norm(), *r)).collect();
    d.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (d1, best) = *d.first()?;
    let clear = d.get(1).is_none_or(|&(d2, _)| d2 >= 2.0 * d1);
    Some((best, clear))
}

fn check_residual(curve: &NumericCurve, w: Complex64, z: Complex64) -> Result<()> {
    let r = curve.eval(w, z).norm();
    if r.is_finite() && r <= RESIDUAL_TOL * curve.scale(w, z) {
        Ok(())
    } else {
        Err(Error::NoRootConverged)
    }
}

impl BranchState {
    /// Starts on the root nearest `1/z0`.
    pub fn start(curve: &NumericCurve, z0: Complex64) -> Result<Self> {
        let roots = polynomial_roots_from(&curve.at(z0), &[])?;
        let (w, clear) = nearest(&roots, 1.0 / z0).ok_or(Error::NoRootConverged)?;
        if !clear {
            return Err(Error::BranchAmbiguity { re: z0.re, im: z0.im });
        }
        check_residual(curve, w, z0)?;
        Ok(Self {
            z: z0,
            w,
            roots,
            history: vec![(z0, w)],
            keep_history: true,
        })
    }

    /// Stops recording the path; only the current point is kept.
    pub fn without_history(mut self) -> Self {
        self.keep_history = false;
        self.history.clear();
        self
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn w(&self) -> Complex64 {
        self.w
    }

    pub fn history(&self) -> &[(Complex64, Complex64)] {
        &self.history
    }

    /// Distance from the current value to the nearest other root.
    fn separation(&self) -> f64 {
        let mut d: Vec<f64> = self.roots.iter().map(|r| (r - self.w).norm()).collect();
        d.sort_by(f64::total_cmp);
        d.get(1).copied().unwrap_or(f64::INFINITY)
    }

    /// One continuation step with a first-order predictor. `None` asks the
    /// caller for a shorter step: either the predicted move is not small
    /// against the root separation, or the matched root is not clearly the
    /// nearest to the prediction.
    fn try_step(&self, curve: &NumericCurve, z: Complex64) -> Result<Option<(Complex64, Vec<Complex64>)>> {
        let sep = self.separation();
        let (qw, qz) = curve.gradient(self.w, self.z);
        let dw = -qz / qw * (z - self.z);
        let predicted = if dw.is_finite() { self.w + dw } else { self.w };
        if dw.is_finite() && dw.norm() > 0.25 * sep {
            return Ok(None);
        }
        let roots = polynomial_roots_from(&curve.at(z), &self.roots)?;
        match nearest(&roots, predicted) {
            Some((w, true)) if (w - predicted).norm() <= 0.25 * sep => {
                check_residual(curve, w, z)?;
                Ok(Some((w, roots)))
            }
            Some(_) => Ok(None),
            None => Err(Error::NoRootConverged),
        }
    }

    /// Moves to `target`, halving the step whenever the nearest root is not
    /// clearly separated from the next one.
    pub fn advance(&mut self, curve: &NumericCurve, target: Complex64) -> Result<()> {
        let mut pending = vec![target];
        let mut depth = vec![0u32];
        while let Some(z) = pending.pop() {
            let level = depth.pop().expect("paired stacks");
            match self.try_step(curve, z)? {
                Some((w, roots)) => {
                    self.z = z;
                    self.w = w;
                    self.roots = roots;
                    if self.keep_history {
                        self.history.push((z, w));
                    }
                }
                None if level < MAX_REFINEMENTS => {
                    let mid = (self.z + z) / 2.0;
                    pending.extend([z, mid]);
                    depth.extend([level + 1, level + 1]);
                }
                None => return Err(Error::BranchAmbiguity { re: z.re, im: z.im }),
            }
        }
        Ok(())
    }
}

/// Tracks the branch with `W ~ 1/z` along `path`, returning `w` at every point.
pub fn track_path(curve: &NumericCurve, path: &[Complex64]) -> Result<Vec<Complex64>> {
    let Some((&z0, rest)) = path.split_first() else {
        return Ok(Vec::new());
    };
    let mut state = BranchState::start(curve, z0)?.without_history();
    let mut out = Vec::with_capacity(path.len());
    out.push(state.w());
    for &z in rest {
        state.advance(curve, z)?;
        out.push(state.w());
    }
    Ok(out)
}

/// A loose upper bound on the support edge, used to place starting points.
pub fn support_bound(y: f64, c: f64) -> f64 {
    (1.0 + c.sqrt()).powi(4) * (1.0 + y * y)
}

/// Starting height for descents at the given parameters.
pub fn start_radius(y: f64, c: f64) -> f64 {
    10.0 * (1.0 + support_bound(y, c))
}

/// The branch value at `z` in the closed upper half plane, reached by a
/// vertical descent from `Re z + i R` that shrinks the height geometrically.
pub fn value_above(curve: &NumericCurve, z: Complex64, radius: f64) -> Result<Complex64> {
    let top = Complex64::new(z.re, radius.max(z.im));
    let mut state = BranchState::start(curve, top)?.without_history();
    let mut h = top.im;
    while h * 0.5 > z.im {
        h *= 0.5;
        state.advance(curve, Complex64::new(z.re, h))?;
    }
    state.advance(curve, z)?;
    Ok(state.w())
}
