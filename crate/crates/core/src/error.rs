use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A position or parameter lies outside the admissible domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A model ingredient violates one of its structural assumptions.
    #[error("validation error: {0}")]
    Validation(String),

    /// The renewal boundary condition cannot be closed.
    #[error("boundary error: {0}")]
    Boundary(String),

    #[error("CFL violation: dt = {dt:e} exceeds the bound {bound:e}")]
    Cfl { dt: f64, bound: f64 },

    #[error("step {index} failed")]
    Step {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn at_step(self, index: usize) -> Self {
        match self {
            e @ Error::Step { .. } => e,
            e => Error::Step {
                index,
                source: Box::new(e),
            },
        }
    }
}
