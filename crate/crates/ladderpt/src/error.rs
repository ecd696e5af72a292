use thiserror::Error;

use crate::algebra::Algebra;

/// Failure modes of the symbolic layer and the numeric cross-checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("algebra mismatch: {0} vs {1}")]
    AlgebraMismatch(Algebra, Algebra),
    #[error("generator `{0}` does not belong to the {1} algebra")]
    ForeignGenerator(&'static str, Algebra),
    #[error("missing value for parameter `{0}`")]
    MissingParameter(String),
    #[error("fractional power of parameter `{0}` whose value is not a positive real")]
    FractionalPower(String),
    #[error("scalar is not a single product term")]
    NotSingleTerm,
    #[error("scalar cannot be evaluated exactly: {0}")]
    NotExact(String),
    #[error("division by a zero scalar")]
    DivisionByZero,
    #[error("perturbation is not Hermitian")]
    NotHermitian,
    #[error("perturbation has a diagonal part; move it into the unperturbed Hamiltonian")]
    DiagonalPerturbation,
    #[error("gap constant must be a single nonzero product of parameters")]
    InvalidGap,
    #[error("expansion order must be at least 1")]
    InvalidOrder,
    #[error("operator has off-diagonal terms; expectation in a number basis is undefined")]
    NotDiagonal,
    #[error("invalid state label `{0}`: {1}")]
    InvalidState(String, String),
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitianMatrix(f64),
    #[error("eigensolver failed to converge")]
    NoConvergence,
    #[error("eigenpair residual {0:.3e} exceeds tolerance {1:.3e}")]
    ResidualTooLarge(f64, f64),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    pub(crate) fn config(message: impl Into<String>) -> Self {
        Error::Config(message.into())
    }
}
