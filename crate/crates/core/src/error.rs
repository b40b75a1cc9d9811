use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("invalid Lukasiewicz path: {0}")]
    MalformedPath(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("sampler gave up after {tries} attempts")]
    Exhausted { tries: u64 },

    #[error("tree exceeded the size cap of {cap} vertices")]
    Overflow { cap: usize },

    #[error("no tree of size {0} has positive probability")]
    Infeasible(usize),

    #[error("unknown statistic `{0}`")]
    UnknownStatistic(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
