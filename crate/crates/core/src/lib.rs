//! Global necessary reasons for binary classifiers.
//!
//! A condition is a conjunction of equality/disequality literals over the
//! feature variables `v1..vn` and the constants `0`, `1`. It is a *necessary
//! reason* for class `c` of a classifier `M` when every instance that `M`
//! assigns to `c` satisfies it, and it is *minimal* when no other necessary
//! reason has strictly fewer models.
//!
//! The crate provides:
//!
//! * [`conditions`]: the literal language, a parity union-find constraint
//!   system used for entailment, satisfiability and model counting.
//! * [`classifiers`]: free BDDs, decision trees, perceptrons and ReLU/Heaviside
//!   MLPs with exact rational evaluation.
//! * [`necessity`]: per-family decision procedures for necessity.
//! * [`minimality`]: minimality checking and synthesis of a minimal reason.
//! * [`oracle`]: exhaustive ground truth for small feature counts.
//! * [`testgen`]: seeded generators and SAT-based reductions with known answers.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod classifiers;
pub mod conditions;
mod error;
pub mod minimality;
pub mod necessity;
pub mod oracle;
pub mod testgen;

pub use classifiers::{Class, Classifier, Family, Model};
pub use conditions::{Condition, Instance, Literal, Op, Term};
pub use error::{Error, Result};
pub use minimality::{find_min_necessary, is_min_necessary, Explanation, Preorder};
pub use necessity::{is_necessary, Bounds};

/// Arbitrary precision rational used for perceptron and MLP parameters.
pub type Rational = num_rational::BigRational;
