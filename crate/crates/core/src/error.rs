use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed ring spec `{0}` (expected Q, Q(sqrt:<int>), Fp:<prime> or Z2:<k>)")]
    RingSpec(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("discriminant {0} must be square-free and different from 0 and 1")]
    BadDiscriminant(i64),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("division by non-unit {0}")]
    NotUnit(String),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("variable sets differ")]
    VarSetMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("expression is not a constant (contains `{0}`)")]
    NotConstant(String),
    #[error("no value assigned to variable `{0}`")]
    MissingAssignment(String),
    #[error("divisor is not monic in `{0}`")]
    NotMonic(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("not a witness: a^2+b^2+c^2+d^2 = {0}, expected -1")]
    InvalidWitness(String),
    #[error("degenerate witness: {0}")]
    Degenerate(String),
    #[error("determinant is not a unit constant: {0}")]
    BadDeterminant(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
