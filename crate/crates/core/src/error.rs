use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degenerate Gram matrix")]
    Degenerate,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("sublattice is not contained in the lattice: {0}")]
    NotContained(String),
    #[error("matrix is not an isometry: {0}")]
    NotIsometry(String),
    #[error("not primitive: {0}")]
    NotPrimitive(String),
    #[error("basis rows are linearly dependent")]
    DependentBasis,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no integral solution: {0}")]
    NoSolution(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("{stage} stage failed: {source}")]
    Stage { stage: &'static str, source: Box<Error> },
}

impl Error {
    pub fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage { stage, source: Box::new(self) }
    }

    /// The innermost error, with stage labels stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
