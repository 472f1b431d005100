use thiserror::Error;

/// Errors raised by automaton construction, model parsing and the deciders.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid event token {0:?}: events must be non-empty and contain no whitespace")]
    InvalidEvent(String),
    #[error("event {0:?} declared more than once")]
    DuplicateEvent(String),
    #[error("unknown event {0:?}")]
    UnknownEvent(String),
    #[error("state {0:?} declared more than once")]
    DuplicateState(String),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("nondeterministic transition: state {state:?} already has a successor on {event:?}")]
    Nondeterministic { state: String, event: String },
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("missing accepting set {0:?}")]
    MissingAcceptingSet(String),
    #[error("automaton has no initial state")]
    MissingInitial,
    #[error("word {0:?} is not in the system language")]
    WordRejected(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("regex error at offset {offset}: {message}")]
    Regex { offset: usize, message: String },
    #[error("direct and decomposed INI deciders disagree (direct holds: {direct}, decomposed holds: {decomposed})")]
    MethodDisagreement { direct: bool, decomposed: bool },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
