use thiserror::Error;

use crate::exactalg::Var;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division in {var} leaves a non-zero remainder")]
    NonZeroRemainder { var: Var },

    #[error("polynomial is constant in {var}; resultant undefined")]
    DegenerateInput { var: Var },

    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("series constant term is not 1")]
    NonUnitConstantTerm,

    #[error("map is not planar; only planar weights are defined")]
    NonPlanarMap,

    #[error("enumeration of (2k)! = {permutations} permutations exceeds the budget of {budget}")]
    TooLarge { permutations: u128, budget: u128 },

    #[error("petal fixed point did not stabilise after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("series of order {order} cannot provide moments up to n = {n_max}")]
    InsufficientOrder { order: usize, n_max: usize },

    #[error("elimination failed: {0}")]
    EliminationFailed(String),

    #[error("odd power of x encountered; x^2 -> 1/z is not defined")]
    OddPowerEncountered,

    #[error("W = 1/z + ... does not satisfy the leading-order equation")]
    InconsistentLeadingOrder,

    #[error("branch ambiguous at z = {re} + {im}i after step refinement")]
    BranchAmbiguity { re: f64, im: f64 },

    #[error("polynomial root iteration did not converge")]
    NoRootConverged,

    #[error("discriminant vanishes identically")]
    DiscriminantDegenerate,

    #[error("z = {0} lies on the branch cut; specify a half plane")]
    OnBranchCut(f64),

    #[error("tensor dimensions B = {dim_b} and C = {dim_c} differ")]
    DimensionMismatch { dim_b: usize, dim_c: usize },

    #[error("eigensolver residual {residual:e} exceeds tolerance")]
    EigensolverFailure { residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
