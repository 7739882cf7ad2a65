use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("vertex `{0}` registered twice")]
    DuplicateVertex(String),

    #[error("vertex ids must be non-empty")]
    EmptyVertexId,

    #[error("vertex set must be non-empty")]
    EmptyVertexSet,

    #[error("self-loop at vertex `{0}` (b(x,x) must be 0)")]
    SelfLoop(String),

    #[error("edge ({from},{to}) has non-positive weight {value}")]
    NonPositiveWeight { from: String, to: String, value: f64 },

    #[error("vertex `{vertex}` has non-positive measure {value}")]
    NonPositiveMeasure { vertex: String, value: f64 },

    #[error("edge ({from},{to}) is not an edge of the graph")]
    EdgeNotInGraph { from: String, to: String },

    #[error("edge ({from},{to}) has an endpoint outside the part's vertex set")]
    EndpointOutsidePart { from: String, to: String },

    #[error("vertex `{0}` has no out-neighbor; normalized measure beta+ would vanish")]
    ZeroOutDegree(String),

    #[error("Kirchhoff balance violated: worst vertex `{vertex}` has beta+ - beta- = {defect}")]
    NotBalanced { vertex: String, defect: f64 },

    #[error(
        "operator is not symmetric in the m-inner product: |m(x)A[x,y] - m(y)A[y,x]| = {asymmetry} at ({row},{col})"
    )]
    NotMSymmetric { row: String, col: String, asymmetry: f64 },

    #[error(
        "QR iteration did not converge after {iterations} iterations (active block rows {block_start}..={block_end})"
    )]
    NoConvergence { block_start: usize, block_end: usize, iterations: usize },

    #[error("vertex function domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("function vanishes identically")]
    ZeroFunction,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("flower decomposition invalid: {0}")]
    Flower(String),

    #[error("theorem hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("index out of the theorem's range: {0}")]
    IndexOutOfRange(String),

    #[error("could not generate a valid instance after {0} attempts")]
    GenerationExhausted(usize),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}
