use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by model construction, coding transforms and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{context}: expected length {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("monomial out of bounds: {detail}")]
    DegreeBound { detail: String },

    #[error("variable index {index} out of range for {num_variables} variables")]
    VariableOutOfRange { index: usize, num_variables: usize },

    #[error("duplicate monomial `{monomial}` in model")]
    DuplicateMonomial { monomial: String },

    #[error("polynomial model must contain at least one monomial")]
    EmptyModel,

    #[error("model expansion produces {monomials} monomials, limit is {limit}")]
    ModelTooLarge { monomials: usize, limit: usize },

    #[error("cannot parse monomial or model spec: {detail}")]
    ModelParse { detail: String },

    #[error("marker matrix must have at least one row and one column")]
    EmptyMatrix,

    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("rank-deficient system: condition estimate {condition:.3e} exceeds limit")]
    RankDeficient { condition: f64 },

    #[error("coordinate descent did not converge within {sweeps} sweeps")]
    NonConvergence { sweeps: usize },

    #[error("exhaustive search supports at most {limit} monomials, model has {monomials}")]
    TooLarge { monomials: usize, limit: usize },

    #[error("penalty specification mismatch: {detail}")]
    PenaltyMismatch { detail: String },
}
