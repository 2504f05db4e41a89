use thiserror::Error;

/// Errors raised while reading a graph description.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown vertex label `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex label `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge {0} (the reverse orientation is implied)")]
    DuplicateEdge(String),
    #[error("offset has {found} components but the lattice dimension is {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("self-loop `{0}` inside a single cell")]
    SelfLoop(String),
    #[error("vertex `{0}` has no neighbours")]
    IsolatedVertex(String),
    #[error("missing `{0}` declaration")]
    Missing(&'static str),
}

/// Errors from the algebra, Bloch, syzygy and truncation layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("coefficient domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("ambient rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("zero kernel: the parameter is not an eigenvalue")]
    ZeroKernel,
    #[error("zero vector has no eigenfunction")]
    ZeroVector,
    #[error("free resolution did not terminate within {0} stages")]
    StageBoundExceeded(usize),
    #[error("density cross-check failed: resolution gives {resolution}, rank oracle gives {oracle}")]
    DensityMismatch { resolution: i64, oracle: i64 },
    #[error("Groebner engine invariant violated: {0}")]
    Engine(String),
    #[error("vertex {0} of the finite section has no internal neighbours")]
    IsolatedSectionVertex(String),
    #[error("computation cancelled")]
    Cancelled,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
