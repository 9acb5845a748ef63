use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("id collision: {0}")]
    IdCollision(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("not a subquiver: {0}")]
    SubquiverViolation(String),
    #[error("paths are not composable")]
    NotComposable,
    #[error("not a potential: {0}")]
    NotAPotential(String),
    #[error("non-homogeneous element")]
    NonHomogeneous,
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("polynomial has mixed endpoints")]
    MixedEndpoints,
    #[error("not a solution: residual {0}")]
    NotASolution(f64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
