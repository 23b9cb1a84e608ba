use thiserror::Error;

use crate::geom::rational::ParseRationalError;
use crate::geom::GeomError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("constraint segments cross")]
    CrossingConstraints,
    #[error("point lies outside the region")]
    OutsideRegion,
    #[error("point coincides with an existing vertex")]
    DuplicateVertex,
    #[error("vertex {0} is an input vertex and cannot be removed")]
    InputVertex(usize),
    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),
    #[error("vertex {0} lies on constrained edges that cannot be re-merged")]
    RemovalBlocked(usize),
    #[error("insertion cavity is not star-shaped around the new point")]
    Cavity,
    #[error("action is stale for this triangulation")]
    StaleAction,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("schema error at `{path}`: {msg}")]
    Schema { path: String, msg: String },
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
