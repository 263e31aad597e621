use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty universe")]
    EmptyUniverse,
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("duplicate predicate `{0}`")]
    DuplicatePredicate(String),
    #[error("predicate `{0}` must have arity at least 1")]
    ZeroArity(String),
    #[error("predicate `{predicate}` expects {expected} arguments, found {found}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("predicate `{predicate}` forbids repeated entries, got tuple ({tuple})")]
    RepeatedEntry { predicate: String, tuple: String },
    #[error(
        "predicate `{0}` allows repeated entries but is not marked finite; \
         in an incomplete signature only the finite part may repeat entries"
    )]
    NonDistinctTail(String),
    #[error("structures are over different signatures")]
    SignatureMismatch,
    #[error(
        "signature horizon exceeded: {needed} variables need every predicate of arity <= {needed}, \
         but the incomplete signature only lists predicates up to arity {horizon}"
    )]
    HorizonExceeded { needed: usize, horizon: usize },
    #[error("bound exceeded: {what} is {value}, limit is {bound}")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        bound: usize,
    },
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("free variable `{0}` in sentence")]
    FreeVariable(String),
    #[error("not a universal sentence: {0}")]
    NotUniversal(String),
    #[error("no ground terms exist: a sentence without quantified variables has no atoms to evaluate")]
    NoGroundTerms,
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("oracle failure: {0}")]
    Oracle(String),
    #[error("unknown forbidden-set family `{0}`")]
    UnknownFamily(String),
    #[error("malformed document: {0}")]
    Format(String),
    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Horizon and bound failures map to their own CLI exit code.
    pub fn is_limit(&self) -> bool {
        matches!(self, Error::HorizonExceeded { .. } | Error::BoundExceeded { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
