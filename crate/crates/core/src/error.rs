use std::path::PathBuf;

use thiserror::Error;

/// Largest register the dense code paths accept.
pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Error)]
pub enum Error {
    #[error("register of {0} qubits is outside 1..={MAX_QUBITS}")]
    RegisterSize(usize),

    #[error("operands act on {left} and {right} qubits")]
    RegisterMismatch { left: usize, right: usize },

    #[error("qubit index {index} out of range for a {qubits}-qubit register")]
    QubitIndex { index: usize, qubits: usize },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("operator is not Hermitian: {0}")]
    NonHermitian(String),

    #[error("eigensolver did not converge on a {0}x{0} matrix")]
    Eigensolver(usize),

    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid schedule: {0}")]
    Schedule(String),

    #[error("time {t} outside schedule domain [0, {total}]")]
    TimeOutOfRange { t: f64, total: f64 },

    #[error("norm drift {drift:.3e} at t = {t} exceeds the abort threshold; reduce dt (currently {dt})")]
    NormDrift { drift: f64, t: f64, dt: f64 },

    #[error("invalid gate parameters: {0}")]
    GateParameters(String),

    #[error("program step {index} failed: {source}")]
    ProgramStep {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("relative phase undefined: amplitude {0:.3e} is below 1e-6")]
    CalibrationUndefined(f64),

    #[error("expected a {expected}-fold degenerate ground space, found {found}")]
    GroundDegeneracy { expected: usize, found: usize },

    #[error("degenerate perturbation leaves the pair fully degenerate; amplitude ratio undefined")]
    FullyDegenerate,

    #[error("invalid partition: {0}")]
    Partition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("D-Wave problem out of range: {0}")]
    DWaveRange(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
    let path = path.into();
    move |source| Error::Io { path, source }
}
