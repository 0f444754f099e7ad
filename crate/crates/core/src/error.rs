use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("sparsity parameter k={0} outside 0..=3")]
    InvalidK(u8),
    #[error("graph on {0} vertices is too large for exhaustive enumeration")]
    TooLarge(usize),
    #[error("empty vertex set")]
    EmptyVertexSet,

    #[error("invalid move: {0}")]
    InvalidMove(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("graph is not (2,{k})-tight")]
    NotTight { k: u8 },
    #[error("reduction stalled at a graph on {n} vertices with no admissible inverse move")]
    ReductionStalled { n: usize },
    #[error("cannot generate a (2,{k})-tight graph on {n} vertices")]
    Unreachable { n: usize, k: u8 },

    #[error("unknown surface '{0}'")]
    UnknownSurface(String),
    #[error("invalid surface parameters: {0}")]
    InvalidSurfaceParams(String),
    #[error("surface '{0}' has no rational sampler")]
    NoSampler(String),
    #[error("surface '{0}' has no known type; pass k explicitly")]
    UnknownType(String),
    #[error("point {index} does not lie on the surface")]
    OffSurface { index: usize },
    #[error("point {index} is a singular point of the surface")]
    SingularPoint { index: usize },
    #[error("vertices {0} and {1} are placed at the same point")]
    CoincidentPoints(usize, usize),
    #[error("placement has {got} points for a graph on {expected} vertices")]
    PlacementSize { expected: usize, got: usize },
    #[error("unknown rank backend '{0}'")]
    UnknownBackend(String),
    #[error("at least one trial is required")]
    ZeroTrials,
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("rank {rank} exceeds 3|V|-k = {bound}")]
    RankBoundViolated { rank: usize, bound: usize },

    #[error("parse error: {0}")]
    Parse(String),
}
