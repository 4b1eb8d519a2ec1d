use std::io;

use thiserror::Error;

use crate::model::Factorization;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Structural problems with a head array.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("empty head array")]
    Empty,
    #[error("word {word} has head {head}, outside 0..={n}")]
    HeadOutOfRange { word: usize, head: usize, n: usize },
    #[error("word {word} is its own head")]
    SelfLoop { word: usize },
    #[error("word {word} is not connected to the root (cycle)")]
    Cycle { word: usize },
    #[error("tree is not projective")]
    NonProjective,
}

#[derive(Debug, Error)]
pub enum ConllError {
    #[error("line {line}: expected 10 tab-separated columns, found {found}")]
    ColumnCount { line: usize, found: usize },
    #[error("line {line}: invalid token id {value:?}")]
    InvalidId { line: usize, value: String },
    #[error("line {line}: multiword or empty-node token {value:?} is not supported")]
    MultiwordToken { line: usize, value: String },
    #[error("line {line}: duplicate token id {id}")]
    DuplicateId { line: usize, id: usize },
    #[error("line {line}: token id {id} out of order (expected {expected})")]
    IdOutOfOrder { line: usize, id: usize, expected: usize },
    #[error("line {line}: non-integer HEAD {value:?}")]
    InvalidHead { line: usize, value: String },
    #[error("line {line}: HEAD {head} out of range for a {n}-word sentence")]
    HeadOutOfRange { line: usize, head: usize, n: usize },
    #[error("line {line}: empty FORM")]
    EmptyForm { line: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("unsupported version: {0}")]
    Version(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid tree: {0}")]
    Tree(#[from] TreeError),
    #[error("sentence {sentence}: {source}")]
    SentenceTree {
        sentence: usize,
        #[source]
        source: TreeError,
    },
    #[error(transparent)]
    Conll(#[from] ConllError),
    #[error(transparent)]
    ModelFile(#[from] ModelFileError),
    #[error("sentence must contain at least one word")]
    EmptySentence,
    #[error("token {0} has an empty form")]
    EmptyForm(usize),
    #[error("enumeration supports 1 <= n <= {max}, got n = {n}")]
    EnumerationGuard { n: usize, max: usize },
    #[error("score table is for {found:?}, expected {expected:?}")]
    FactorizationMismatch {
        expected: Factorization,
        found: Factorization,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("part {0} is not valid for a sentence of length {1}")]
    InvalidPart(String, usize),
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("sentence {index}: gold and predicted lengths differ ({gold} vs {predicted})")]
    LengthMismatch {
        index: usize,
        gold: usize,
        predicted: usize,
    },
    #[error("line search failed at iteration {iteration}: {message}")]
    LineSearch { iteration: usize, message: String },
    #[error("objective became non-finite at iteration {iteration}")]
    NonFiniteObjective { iteration: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
}
