use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("reflection leaves the lattice: {0}")]
    NonIntegral(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable {0} assigned zero but appears with a negative exponent")]
    ZeroAssignment(usize),
    #[error("geometric series with ratio 1 diverges")]
    Divergent,
    #[error("pole at the evaluation point: {0}")]
    Pole(String),
    #[error("torus constraint violated: {0}")]
    Constraint(String),
    #[error("Weyl group enumeration exceeded the cap of {0} elements")]
    WeylCap(usize),
    #[error("inconsistent model data: {0}")]
    ModelData(String),
    #[error("minimal solution is not unique: {0}")]
    Uniqueness(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("unknown model `{name}`; known models: {known}")]
    UnknownModel { name: String, known: String },
    #[error("not a member: {0}")]
    NonMember(String),
    #[error("residue counts do not stabilize: {0}")]
    Stabilization(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
