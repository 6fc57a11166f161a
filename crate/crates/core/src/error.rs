use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("non-integer coefficient at position {pos} (division is only allowed in rational functions)")]
    NonIntegerCoefficient { pos: usize },

    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,

    #[error("variable index {index} out of range for {nvars} variable(s)")]
    VarOutOfRange { index: usize, nvars: usize },

    #[error("variable count mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("all projective coordinates are zero")]
    ZeroPoint,

    #[error("root finder did not converge after {iterations} iterations (degree {degree})")]
    RootsNotConverged { iterations: usize, degree: usize },

    #[error("too many degenerate samples: {rejected} rejected out of {drawn} drawn")]
    DegenerateSampling { rejected: u64, drawn: u64 },

    #[error("invalid Monte Carlo parameters: {0}")]
    InvalidParams(String),

    #[error("pole at the origin")]
    PoleAtOrigin,

    #[error("pole on or too near the circle |z| = {radius}")]
    PoleOnCircle { radius: f64 },

    #[error("factor index {index} out of range for {d} factor(s)")]
    FactorOutOfRange { index: usize, d: usize },

    #[error("incompatible polarization: {0}")]
    IncompatiblePolarization(String),

    #[error("singular curve (discriminant is zero)")]
    SingularCurve,

    #[error("point does not satisfy the curve equation")]
    NotOnCurve,

    #[error("the point at infinity has no affine x-coordinate")]
    PointAtInfinity,

    #[error("search space of {cardinality} tuples exceeds the budget of {budget}")]
    BudgetExceeded { cardinality: String, budget: u64 },

    #[error("bounded-height sets are infinite for the geometric polarization (constants all have height 0)")]
    GeometricNotNorthcott,

    #[error("numerical verification failed: {0}")]
    VerificationFailed(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable snake_case identifier of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::UnknownVariable { .. } => "unknown_variable",
            Error::NonIntegerCoefficient { .. } => "non_integer_coefficient",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::VarOutOfRange { .. } => "var_out_of_range",
            Error::NvarsMismatch { .. } => "nvars_mismatch",
            Error::DivisionByZero => "division_by_zero",
            Error::ZeroPoint => "zero_point",
            Error::RootsNotConverged { .. } => "roots_not_converged",
            Error::DegenerateSampling { .. } => "degenerate_sampling",
            Error::InvalidParams(_) => "invalid_params",
            Error::PoleAtOrigin => "pole_at_origin",
            Error::PoleOnCircle { .. } => "pole_on_circle",
            Error::FactorOutOfRange { .. } => "factor_out_of_range",
            Error::IncompatiblePolarization(_) => "incompatible_polarization",
            Error::SingularCurve => "singular_curve",
            Error::NotOnCurve => "not_on_curve",
            Error::PointAtInfinity => "point_at_infinity",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::GeometricNotNorthcott => "geometric_not_northcott",
            Error::VerificationFailed(_) => "verification_failed",
            Error::InvalidArgument(_) => "invalid_argument",
        }
    }
}
