use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayersError {
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge endpoint {endpoint} out of range for {n} vertices")]
    EndpointOutOfRange { endpoint: usize, n: usize },
    #[error("tree depth must be at least 1")]
    DepthZero,
    #[error("degree sum is odd")]
    OddDegreeSum,
    #[error("no simple graph after {0} attempts")]
    AttemptsExhausted(usize),
    #[error("age ties detected between {0} and {1}")]
    TiesDetected(String, String),
    #[error("{size} relevant vertices exceeds the enumeration limit {max}")]
    TooLarge { size: usize, max: usize },
    #[error("degree too small: {0}")]
    DegreeTooSmall(String),
    #[error("cycle length bound {0} exceeds 8")]
    KTooLarge(usize),
    #[error("degree smoothing needs r' >= r + 2, got r={0}, r'={1}")]
    BadOrder(usize, usize),
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error("enumeration exceeds cap of {0} paths")]
    EnumerationTooLarge(usize),
    #[error("node budget of {0} exhausted")]
    BudgetExhausted(usize),
    #[error("series diverges: {0}")]
    DivergentSeries(String),
    #[error("unknown experiment '{0}'")]
    UnknownExperiment(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o failure: {0}")]
    IoFailure(String),
}

pub type Result<T> = std::result::Result<T, LayersError>;

impl From<std::io::Error> for LayersError {
    fn from(e: std::io::Error) -> Self {
        LayersError::IoFailure(e.to_string())
    }
}
