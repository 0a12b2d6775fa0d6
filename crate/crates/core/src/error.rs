use alloc::string::String;
use alloc::vec::Vec;

use crate::classifiers::Violation;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("arity mismatch: expected {expected} features, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("invalid model: {}", join_violations(.0))]
    InvalidModel(Vec<Violation>),

    #[error("{what} refused: {arity} features exceeds the bound of {bound}")]
    BoundExceeded {
        what: &'static str,
        arity: usize,
        bound: usize,
    },

    #[error("invalid CNF: {0}")]
    InvalidCnf(String),
}

fn join_violations(violations: &[Violation]) -> String {
    let mut out = String::new();
    for (i, v) in violations.iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        out.push_str(&alloc::format!("{v}"));
    }
    out
}
