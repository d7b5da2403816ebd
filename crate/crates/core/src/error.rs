use thiserror::Error;

use crate::quantum::BellOutcome;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count {0} outside supported range 1..=8")]
    QubitCount(usize),

    #[error("amplitude array of length {0} is not a power of two")]
    BadLength(usize),

    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("qubit index {index} out of range for {num_qubits}-qubit state")]
    QubitIndex { index: usize, num_qubits: usize },

    #[error("qubit pair ({0}, {1}) must name two distinct qubits")]
    DuplicateQubits(usize, usize),

    #[error("expected a {expected}-qubit state, got {actual}")]
    WrongQubitCount { expected: usize, actual: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("decode table collision: announced pair ({alice}, {bob}) with Charlie {charlie} is reachable by two operator pairs")]
    DecodeCollision {
        charlie: BellOutcome,
        alice: BellOutcome,
        bob: BellOutcome,
    },

    #[error(
        "announced pair ({alice}, {bob}) with Charlie {charlie} is reachable by no operator pair"
    )]
    InconsistentTriple {
        charlie: BellOutcome,
        alice: BellOutcome,
        bob: BellOutcome,
    },

    #[error("stabilizer rates imply probability {value} for label p{label:03b}")]
    InconsistentRates { label: u8, value: f64 },

    #[error("inference is ambiguous: {0} consistent completions")]
    InferenceAmbiguity(usize),

    #[error("message has {actual} bits, expected {expected}")]
    MessageLength { expected: usize, actual: usize },

    #[error("scheme index {index} out of range (alphabet admits {count} schemes)")]
    SchemeIndex { index: usize, count: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid tamper model: {0}")]
    InvalidTamper(String),

    #[error("invalid bit string: {0:?}")]
    BitString(String),
}
