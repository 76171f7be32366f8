use thiserror::Error;

use crate::pattern::Pattern;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("word is empty")]
    EmptyWord,

    #[error("letters {0:?} are not a reduced pattern")]
    NotReduced(Vec<u32>),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("extension rank {rank} out of range 0..={max}")]
    RankOutOfRange { rank: usize, max: usize },

    #[error("position {index} out of range for a pattern of length {len}")]
    PositionOutOfRange { index: usize, len: usize },

    #[error("n = {n} is outside the supported range {min}..={max}")]
    WindowSizeOutOfRange { n: usize, min: usize, max: usize },

    #[error("invalid collapse selection: {0}")]
    InvalidSelection(String),

    #[error("cluster {0} has been collapsed and no longer holds a twin pair")]
    CollapsedCluster(Pattern),

    #[error("graph is collapsed; double-edge cycles are only defined on the full clustered graph")]
    CollapsedGraph,

    #[error("graph has no Eulerian trail: {0}")]
    NotEulerian(String),

    #[error("window sequence breaks the overlap invariant between windows {0} and {1}")]
    BrokenOverlap(usize, usize),

    #[error("order constraints are cyclic; the window sequence cannot be realized")]
    InfeasibleRealization,

    #[error("nothing found within a budget of {attempts} steps")]
    NotFoundWithinBudget { attempts: u64 },

    #[error("malformed window: {0}")]
    MalformedWindow(String),

    #[error("malformed word: {0}")]
    MalformedWord(String),

    #[error("word contains no unrestricted diamonds")]
    NoDiamonds,

    #[error("diamond counts differ between windows: {counts:?}")]
    NotPeriodic { counts: Vec<usize> },

    #[error("unknown theorem id '{0}'")]
    UnknownTheorem(String),

    #[error("invalid search spec: {0}")]
    InvalidSpec(String),

    #[error("{0}")]
    Parse(#[from] ParseError),
}

/// A syntax error in the p-word text format or a search spec file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}
