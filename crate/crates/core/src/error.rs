use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("face {face} references vertex {vertex}, but only {num_vertices} vertices exist")]
    VertexOutOfRange {
        face: usize,
        vertex: usize,
        num_vertices: usize,
    },
    #[error("face {face} repeats a vertex")]
    RepeatedVertex { face: usize },
    #[error("edge ({0}, {1}) is shared by more than two faces")]
    NonManifoldEdge(usize, usize),
    #[error("edge ({0}, {1}) has only one incident face; boundaries are not supported")]
    BoundaryDetected(usize, usize),
    #[error("edge ({0}, {1}) is traversed in the same direction by two faces")]
    InconsistentOrientation(usize, usize),
    #[error("vertex {0} is not a manifold vertex (its faces form more than one fan)")]
    NonManifoldVertex(usize),
    #[error("mesh is not connected")]
    Disconnected,
    #[error("mesh has no faces")]
    Empty,

    #[error("triangle inequality violated in face {0}")]
    TriangleInequalityViolated(usize),
    #[error("degenerate angle in face {0}")]
    DegenerateAngle(usize),
    #[error("edge {0} cannot be flipped")]
    UnflippableEdge(usize),
    #[error("flip limit of {0} exceeded while making the triangulation Delaunay")]
    FlipLimitExceeded(usize),
    #[error("non-finite Penner coordinate at edge {0}")]
    NonFiniteCoordinate(usize),
    #[error("expected {expected} coordinates, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("dual loop is inconsistent: {0}")]
    LoopInvalidated(String),
    #[error("invalid holonomy signature: {0}")]
    InvalidSignature(String),

    #[error("linear solve failed: {0}")]
    LinearSolveFailed(String),
    #[error("line search stalled at step {0:e}")]
    LineSearchStalled(f64),
    #[error("metric interpolation did not reach the angle bound after {0} steps")]
    InterpolationFailed(usize),
    #[error("layout failed: face {0} is degenerate")]
    DegenerateFace(usize),

    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
