//! Exact arithmetic: rational multivariate polynomials, truncated power
//! series, resultants and univariate root isolation.

mod divide;
mod parse;
mod poly;
mod rational;
mod resultant;
mod series;
mod univariate;

pub use divide::{
    content, exact_divide, gcd, normalize_coefficient, primitive_part, strip_factor, try_divide,
};
pub use poly::{Exponents, MultiPoly, Var, NVARS};
pub use rational::{format_rational, int, is_positive, parse_rational, rat, to_f64, Rational};
pub use resultant::{bareiss_determinant, resultant};
pub use series::{substitute_series, TruncatedSeries};
pub use univariate::UniPoly;
