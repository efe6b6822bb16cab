use thiserror::Error;

/// Errors raised by graph operations, encoding, parsing and solving.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("pair ({0}, {0}) would be a self-loop")]
    SelfLoop(usize),

    #[error("edge-flip index {index} out of range for a flip set of size {len}")]
    FlipIndexOutOfRange { index: usize, len: usize },

    #[error("edge flip requested but the flip set is empty")]
    EmptyFlipSet,

    #[error("duplicate pair ({0}, {1})")]
    DuplicatePair(usize, usize),

    #[error("star center {0} is also listed as a leaf")]
    CenterIsLeaf(usize),

    #[error("a GHZ target needs at least two parties, got {0}")]
    TooFewParties(usize),

    #[error("requested {requested} distinct pairs but only {available} exist")]
    TooManyPairs { requested: usize, available: usize },

    #[error("probability {0} is outside [0, 1]")]
    BadProbability(f64),

    #[error("variable id 0 is not a valid literal")]
    ZeroVariable,

    #[error("value {value} does not fit in {width} selector bits")]
    ValueOutOfRange { value: u64, width: usize },

    #[error("source has {source_n} vertices but target has {target_n}")]
    VertexCountMismatch { source_n: usize, target_n: usize },

    #[error("instance needs at least one vertex")]
    EmptyInstance,

    #[error("unrolling depth must be at least 1 state, got {0}")]
    BadDepth(usize),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("model decodes to selector y={y}, z={z} outside the allowed range")]
    BadSelector { y: u64, z: u64 },

    #[error("model is missing a value for variable {0}")]
    IncompleteModel(u32),

    #[error("witness replay diverged at step {step}")]
    ReplayFailed { step: usize },

    #[error("state cap of {0} graphs exceeded")]
    CapExceeded(usize),

    #[error("solver error: {0}")]
    Solver(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
