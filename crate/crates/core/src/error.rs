use thiserror::Error;

use crate::algebra::FieldTag;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldTag, FieldTag),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("expansion budget of {limit} term operations exceeded ({context})")]
    BudgetExceeded { limit: u64, context: String },

    #[error("{what} cap of {cap} exceeded")]
    CapExceeded { what: &'static str, cap: u64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported file version {found} for {kind} (expected {expected})")]
    Version {
        kind: String,
        found: u32,
        expected: u32,
    },

    #[error("malformed circuit: {0}")]
    MalformedCircuit(String),

    #[error("permutation not defined on {0}")]
    UndefinedVariable(String),

    #[error("not a bijection: {0}")]
    NotBijection(String),

    #[error("axiom set not invariant: generator {generator} maps axiom {axiom} outside the set")]
    NotInvariant { generator: usize, axiom: usize },

    #[error("duplicate axioms at positions {0} and {1}")]
    DuplicateAxiom(usize, usize),

    #[error("missing assignment for {0}")]
    MissingAssignment(String),

    #[error("invalid proof at line {line}: {msg}")]
    InvalidProof { line: usize, msg: String },

    #[error("symmetric EPC condition {condition} violated: {detail}")]
    EpcCondition { condition: u8, detail: String },

    #[error("characteristic {characteristic} divides {quantity} ({what})")]
    Characteristic {
        characteristic: u64,
        quantity: u64,
        what: &'static str,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("internal identity check failed: {0}")]
    Construction(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub fn budget(limit: u64, context: impl Into<String>) -> Self {
        Error::BudgetExceeded {
            limit,
            context: context.into(),
        }
    }
}
