//! Numerical and series exploitation of a spectral curve: moments, branch
//! tracking, density and support.

mod density;
mod moments;
mod roots;
mod support;
mod track;

pub use density::{
    density, density_auto, density_grid, DensityCurve, DensityOptions, Regime, DEFAULT_EPSILON,
};
pub(crate) use density::density_numeric;
pub use moments::{moments_from_curve, moments_from_curve_at};
pub use roots::{polynomial_roots, polynomial_roots_from};
pub use support::{discriminant, support_endpoints, SupportReport};
pub use track::{
    start_radius, support_bound, track_path, value_above, BranchState, MAX_REFINEMENTS,
    RESIDUAL_TOL,
};

use num_complex::Complex64;

use crate::curve::SpectralCurve;
use crate::error::Result;

/// Tracks the branch analytic at infinity along `path` at parameters `(y, c)`.
pub fn track_branch(curve: &SpectralCurve, path: &[Complex64], y: f64, c: f64) -> Result<Vec<Complex64>> {
    track_path(&curve.numeric(y, c), path)
}
