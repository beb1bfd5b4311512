use thiserror::Error;

/// Errors produced by graph construction, the spectral chain, cleanup and
/// the walk machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty graph")]
    EmptyGraph,

    #[error("graph has no edges")]
    Edgeless,

    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph on {n} vertices exceeds the exhaustive limit of {limit}; {hint}")]
    SizeLimit { n: usize, limit: usize, hint: &'static str },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),

    #[error("not bipartite: edge {0}-{1} joins vertices on the same side")]
    NotBipartite(usize, usize),

    #[error("no certifiable spectral gap (lambda2 = {0})")]
    NoSpectralGap(f64),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("{stage}: {message}")]
    Stage { stage: &'static str, message: String },

    #[error("step budget of {0} exhausted")]
    BudgetExhausted(usize),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn stage(stage: &'static str, err: Error) -> Error {
        match err {
            Error::Stage { .. } => err,
            other => Error::Stage { stage, message: other.to_string() },
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
