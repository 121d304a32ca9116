use thiserror::Error;

/// Errors from constructing physical parameters and network descriptions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("malformed network: {0}")]
    MalformedNetwork(String),
    #[error("failed to parse network description: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("linear system is degenerate at k = {k} (condition estimate {condition:.3e})")]
    Degenerate { k: f64, condition: f64 },
    #[error("unknown port `{0}`")]
    UnknownPort(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GateError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),
    #[error("reflection block too large (max-norm {0:.3e})")]
    ReflectionTooLarge(f64),
    #[error("invalid basis label `{0}`")]
    InvalidLabel(String),
    #[error("swap pairs overlap on `{0}`")]
    OverlappingSwaps(String),
    #[error("invalid qubit targets: {0}")]
    InvalidTargets(String),
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimulationError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("mode {mode} out of range 1..={max}")]
    ModeOutOfRange { mode: usize, max: usize },
    #[error("run covers {fraction:.3} of a period; at least 1/4 is required to resolve the phase")]
    MeasurementTooShort { fraction: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShorError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("measured register values carry no period information")]
    Inconclusive,
    #[error("period r = {r} is odd; retry with another base (next candidate {retry_with:?})")]
    OddPeriod { r: u64, retry_with: Option<u64> },
    #[error("a^(r/2) = -1 mod N for r = {r}; only trivial factors (next candidate {retry_with:?})")]
    TrivialFactor { r: u64, retry_with: Option<u64> },
    #[error("candidate period {candidate} does not satisfy a^r = 1 mod N")]
    PeriodNotVerified { candidate: u64 },
    #[error("compiled circuit only exists for N = 15, a = 11 with a 2-qubit register")]
    CompiledUnsupported,
    #[error(transparent)]
    Gate(#[from] GateError),
}
