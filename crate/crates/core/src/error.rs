use crate::horizon::CausalityViolation;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("qubit factor {qubit} is not normalized: |a0|^2 + |a1|^2 = {norm}")]
    UnnormalizedFactor { qubit: usize, norm: f64 },

    #[error("a product state needs at least one qubit factor")]
    EmptyProduct,

    #[error("at most {max} qubits are supported, got {got}")]
    TooManyQubits { got: usize, max: usize },

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("gate endpoints must be distinct, both are qubit {qubit}")]
    IdenticalQubits { qubit: usize },

    #[error("matrix is not unitary: max |U\u{2020}U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("matrix entries must be finite")]
    NonFiniteEntries,

    #[error("state vector of length {len} is not a power of two")]
    BadStateLength { len: usize },

    #[error("state vector is not normalized: sum |a_i|^2 = {norm}")]
    UnnormalizedState { norm: f64 },

    #[error("the kept subset of qubits must not be empty")]
    EmptySubset,

    #[error("density matrix dimension {dim} is not a power of two")]
    BadDimension { dim: usize },

    #[error("entry count {len} does not match dimension {dim}")]
    BadEntryCount { len: usize, dim: usize },

    #[error("matrix is not Hermitian: max |A - A\u{2020}| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("density matrix trace {trace} is not 1")]
    NonUnitTrace { trace: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps, off-diagonal residual {residual:e}")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("eigenvalue {eigenvalue} is below the -1e-9 floor: not a quantum state")]
    NotAState { eigenvalue: f64 },

    #[error("duplicate qubit name `{name}`")]
    DuplicateQubitName { name: String },

    #[error("circuit declares {names} qubit names but {factors} initial factors")]
    FactorCountMismatch { names: usize, factors: usize },

    #[error("event {index} at time {time} precedes the previous event at {prev}")]
    NonMonotoneTimes { index: usize, time: f64, prev: f64 },

    #[error("event time {time} is not finite")]
    NonFiniteTime { time: f64 },

    #[error("qubit {qubit} is already inside the horizon; crossings are inward-only")]
    OutwardCrossing { qubit: usize },

    #[error("circuit violates causality at {} event(s)", violations.len())]
    CausalityViolations { violations: Vec<CausalityViolation> },

    #[error("{which} amplitudes are not normalized: |a|^2 + |b|^2 = {norm}")]
    UnnormalizedPair { which: &'static str, norm: f64 },

    #[error("schedule instants must satisfy 0 < tau1 < tau2 < tau3 < tau4")]
    BadSchedule,

    #[error("staircase time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("invalid ensemble config: {0}")]
    BadEnsembleConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
