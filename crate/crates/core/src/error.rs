use thiserror::Error;

/// Errors raised by the index computations, the discretization and the
/// problem-file harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix `{what}` is not symmetric (max asymmetry {asymmetry:e})")]
    NonSymmetric { what: &'static str, asymmetry: f64 },

    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    EigensolverFailure { sweeps: usize, off_norm: f64 },

    #[error("direction is isotropic for the form, S(u,u) = 0")]
    IsotropicDirection,

    #[error("direction is not negative for the form, S(u,u) >= 0")]
    NotNegativeDirection,

    #[error("functional is identically zero")]
    TrivialFunctional,

    #[error("constraints are linearly dependent (rank {rank} < {count})")]
    DependentConstraints { rank: usize, count: usize },

    #[error(
        "constraint {index} is not in the range of the form; \
         apply the single-constraint predictors sequentially instead"
    )]
    NotInRange { index: usize },

    #[error("input vectors are linearly dependent")]
    DependentInput,

    #[error("invalid coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("interior block is singular: 0 is a Dirichlet eigenvalue (|delta| = {smallest:e})")]
    DegenerateDirichletKernel { smallest: f64 },

    #[error("boundary weight q vanishes at both endpoints")]
    ZeroBoundaryWeight,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("validation error in `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Short machine-readable tag used in reports and warnings.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonSymmetric { .. } => "NonSymmetric",
            Error::NotPositiveDefinite => "NotPositiveDefinite",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::EigensolverFailure { .. } => "EigensolverFailure",
            Error::IsotropicDirection => "IsotropicDirection",
            Error::NotNegativeDirection => "NotNegativeDirection",
            Error::TrivialFunctional => "TrivialFunctional",
            Error::DependentConstraints { .. } => "DependentConstraints",
            Error::NotInRange { .. } => "NotInRange",
            Error::DependentInput => "DependentInput",
            Error::InvalidCoefficients(_) => "InvalidCoefficients",
            Error::DegenerateDirichletKernel { .. } => "DegenerateDirichletKernel",
            Error::ZeroBoundaryWeight => "ZeroBoundaryWeight",
            Error::Parse { .. } => "ParseError",
            Error::Validation { .. } => "ValidationError",
            Error::Io(_) => "IoError",
        }
    }
}
