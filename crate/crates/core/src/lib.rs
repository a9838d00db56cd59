//! Spectra of the product of two marginals of a Gaussian random tensor.

pub mod balanced;
pub mod crosscheck;
pub mod curve;
pub mod elimination;
pub mod error;
pub mod exactalg;
pub mod exec;
pub mod maps;
pub mod montecarlo;
pub mod petals;
pub mod report;
pub mod resolvent;

pub use error::{Error, Result};
pub use exec::Exec;
pub use maps::MomentTable;
