use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown automaton `{0}`")]
    UnknownAutomaton(String),
    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),
    #[error("cyclic test reference through automaton `{0}`")]
    Cycle(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("unsupported feature: {0}")]
    Unsupported(String),
    #[error("alphabet mismatch between operands")]
    AlphabetMismatch,
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
