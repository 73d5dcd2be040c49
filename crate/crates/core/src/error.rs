use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("mesh topology error: {0}")]
    Topology(String),

    #[error("singular geometry: {0}")]
    SingularGeometry(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("size mismatch: expected {expected}, got {actual} ({what})")]
    Size {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("non-finite value at node {node} in time step {step}")]
    Divergence { node: usize, step: u64 },

    #[error("linear solver did not converge after {iterations} iterations (last relative residual {last:.3e})")]
    Solver {
        iterations: usize,
        last: f64,
        history: Vec<f64>,
    },

    #[error("no dynamics to advance: time step denominator vanishes in every cell")]
    ZeroDynamics,

    #[error("boundary configuration: {0}")]
    Boundary(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("step {step}: {source}")]
    AtStep {
        step: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn at_step(self, step: u64) -> Error {
        match self {
            e @ (Error::AtStep { .. } | Error::Divergence { .. }) => e,
            other => Error::AtStep {
                step,
                source: Box::new(other),
            },
        }
    }
}
