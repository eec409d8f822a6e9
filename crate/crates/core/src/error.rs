use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("invalid number literal `{0}`")]
    Number(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitError {
    #[error("orbit `{0}` is elliptic; only hyperbolic orbits are supported here")]
    EllipticUnsupported(String),
    #[error("orbit `{id}`: {reason}")]
    InvalidOrbit { id: String, reason: String },
    #[error("unknown orbit `{0}`")]
    UnknownOrbit(String),
    #[error("orbit `{0}` listed twice in an orbit set")]
    DuplicateOrbit(String),
    #[error("multiplicities must be positive")]
    ZeroMultiplicity,
    #[error("multiplicity list is empty")]
    EmptyPartition,
    #[error("partition sums to {got}, expected {expected}")]
    PartitionSum { expected: u64, got: u64 },
    #[error("braid data: {0}")]
    BraidShape(String),
    #[error("cannot glue: {0}")]
    GlueMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GluingError {
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("no unique solution: alpha_(n-1) equals alpha_n")]
    NoUniqueSolution,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("evaluation at a pole or zero: {0}")]
    Pole(String),
    #[error("restriction is not admissible")]
    Inadmissible,
    #[error("root bracketing failed: {0}")]
    NumericRange(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IdentityError {
    #[error("index {0} out of range")]
    OutOfRange(usize),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Gluing(#[from] GluingError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChainError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(usize),
    #[error("too many generators: {0} (cap is 65536)")]
    TooManyGenerators(usize),
    #[error("invalid building: {0}")]
    InvalidBuilding(String),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}
