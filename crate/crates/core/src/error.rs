use thiserror::Error;

use crate::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),

    #[error("invalid dimension {0}: need d >= 2")]
    InvalidDimension(u32),

    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("vertices {0:?} do not form a clique of the graph")]
    NotAClique(Vec<Vertex>),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),

    #[error("invalid pseudograph: {0}")]
    InvalidPseudograph(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("matrix is {rows}x{cols}, not square")]
    DimensionMismatch { rows: usize, cols: usize },

    #[error("permanent of a {side}x{side} matrix exceeds the Ryser limit of {max}")]
    PermanentTooLarge { side: usize, max: usize },

    #[error("vertex of extended degree ({p},{h}) must be eliminated inside a path")]
    ForbiddenStep { p: u32, h: u32 },

    #[error("extended degree ({p},{h}) admits no orientation with outdegree {d}")]
    NoOrientation { p: u32, h: u32, d: u32 },

    #[error("illegal elimination step: {0}")]
    IllegalStep(String),

    #[error("no elimination step applies: {0}")]
    Structural(String),

    #[error("data integrity violation: {0}")]
    Integrity(String),

    #[error("time limit exceeded")]
    Timeout,
}

pub type Result<T> = std::result::Result<T, Error>;
