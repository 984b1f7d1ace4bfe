use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("degenerate ground state: E0 = {e0}, E1 = {e1}")]
    DegenerateGroundState { e0: f64, e1: f64 },

    #[error("zero-energy single-particle mode (|E| = {0:.3e}); particle/hole split is ambiguous")]
    ZeroMode(f64),

    #[error("operator annihilated the state (norm {0:.3e})")]
    Annihilated(f64),

    #[error("Krylov propagator failed to reach tolerance {tol:.1e} with {substeps} substeps")]
    PropagatorFailure { tol: f64, substeps: usize },

    #[error("density matrix trace {0} deviates from 1")]
    BadTrace(f64),

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error("training diverged at epoch {epoch}, batch {batch}: loss {loss}, parameter norm {param_norm}")]
    Diverged {
        epoch: usize,
        batch: usize,
        loss: f64,
        param_norm: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("schema version mismatch in {path}: expected {expected}, found {found}")]
    Schema {
        path: String,
        expected: u32,
        found: u32,
    },

    #[error("I/O error on {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON in {path}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub(crate) fn json(path: impl AsRef<std::path::Path>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
