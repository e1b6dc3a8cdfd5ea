//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, SimError>;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("qubit index {index} out of range 1..={num_qubits}")]
    QubitIndexOutOfRange { index: usize, num_qubits: usize },

    #[error("space has no cavity factor")]
    NoCavity,

    #[error("subsystem selection is empty")]
    EmptySubsystemSelection,

    #[error("subsystem selection must be a proper, non-empty subset")]
    ImproperSubsystemSelection,

    #[error("subsystem {0:?} not present in this space")]
    UnknownSubsystem(crate::hilbert::Subsystem),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not hermitian (max |m - m†| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("trace deviates from one by {deviation:.3e}")]
    TraceDeviation { deviation: f64 },

    #[error("matrix has negative eigenvalue {eigenvalue:.3e}")]
    NotPositive { eigenvalue: f64 },

    #[error("state vector norm deviates from one by {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error(
        "population {population:.3e} of the n = n_max Fock layer exceeds {threshold:.1e} \
         at t = {time} ns; raise the photon cutoff"
    )]
    CutoffLeakage {
        population: f64,
        threshold: f64,
        time: f64,
    },

    #[error("positivity violated during evolution: min eigenvalue {eigenvalue:.3e} at t = {time} ns")]
    PositivityViolation { eigenvalue: f64, time: f64 },

    #[error("observable expectation has imaginary residue {residue:.3e} at t = {time} ns")]
    ImaginaryResidue { residue: f64, time: f64 },

    #[error("|E0 - omega_c| = {gap:.3e} rad/ns is below the resonance guard; closed forms are singular")]
    NearResonance { gap: f64 },

    #[error("closed forms require equal qubit frequencies, got {0:?}")]
    UnequalQubitFrequencies(Vec<f64>),

    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid evolution request: {0}")]
    InvalidRequest(String),

    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),

    #[error("configuration invalid:\n{}", .0.join("\n"))]
    Config(Vec<String>),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv parse error at line {line}: {message}")]
    CsvParse { line: usize, message: String },
}
