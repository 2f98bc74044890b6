use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("variable {var} out of range for {n_vars} variables")]
    VariableOutOfRange { var: usize, n_vars: usize },
    #[error("exponent vector has repeated entries")]
    DegenerateExponents,
    #[error("partition has {len} parts but dimension is {n}")]
    PartitionTooLong { len: usize, n: usize },
    #[error("internal consistency: exact division left a nonzero remainder")]
    NonzeroRemainder,
    #[error("polynomial is not in the image of the restriction map")]
    NotInImage,
    #[error("polynomial is not alternating")]
    NotAlternating,
    #[error("polynomial is not symmetric")]
    NotSymmetric,
    #[error(
        "degenerate spectrum: gap {gap:e} is below tolerance {tolerance:e}; \
         use the character series evaluator for coincident eigenvalues"
    )]
    DegenerateSpectrum { gap: f64, tolerance: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
