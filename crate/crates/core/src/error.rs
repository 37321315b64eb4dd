use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(String),
    #[error("repeated edge {{{0}, {1}}}")]
    MultiEdge(String, String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("complex is not connected")]
    Disconnected,
    #[error("invalid loop: {0}")]
    InvalidLoop(String),
    #[error("degree {degree} exceeds dimension {dimension}")]
    DegreeTooLarge { degree: usize, dimension: usize },
    #[error("the set S must contain 0")]
    MissingZero,
    #[error("empty set: {0}")]
    EmptySet(&'static str),
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("generator sets differ")]
    GeneratorMismatch,
    #[error("constants violate C > beta/alpha and C*alpha > 3: {0}")]
    InvalidConstants(String),
    #[error("subgraph is not induced: {0}")]
    NotInduced(String),
    #[error("oracle insufficient: {0}")]
    OracleInsufficient(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid orbit data: {0}")]
    InvalidOrbits(String),
    #[error("certificate rejected: {0}")]
    Certificate(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("json: {0}")]
    Json(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
