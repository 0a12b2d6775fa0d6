//! Deciding whether a condition is a global necessary reason.

mod bdd;
mod mlp;
mod perceptron;

pub use bdd::{bdd_witness, is_necessary_bdd, BddWitness, LiteralRewrite};
pub use mlp::is_necessary_mlp;
pub use perceptron::{extremal_candidate, is_necessary_perceptron};

use crate::classifiers::{Class, Classifier, Family};
use crate::conditions::{Condition, Instance};
use crate::error::Result;

/// Arity limits for the exponential procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Largest MLP arity the exhaustive engine accepts.
    pub mlp: usize,
    /// Largest arity the brute-force oracle accepts.
    pub oracle: usize,
}

impl Bounds {
    pub const DEFAULT_MLP: usize = 24;
    pub const DEFAULT_ORACLE: usize = 16;
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            mlp: Bounds::DEFAULT_MLP,
            oracle: Bounds::DEFAULT_ORACLE,
        }
    }
}

#[derive(Debug, Clone)]
enum Inner<'a> {
    Threshold(perceptron::ThresholdEngine),
    Bdd(bdd::BddEngine<'a>),
    Mlp(mlp::MlpEngine<'a>),
}

/// The family-specific necessity procedure for one (classifier, class) pair.
///
/// Building the engine does the per-model preparation once, which matters
/// when many conditions are checked against the same model.
#[derive(Debug, Clone)]
pub struct NecessityEngine<'a> {
    classifier: &'a Classifier,
    class: Class,
    inner: Inner<'a>,
}

impl<'a> NecessityEngine<'a> {
    pub fn new(classifier: &'a Classifier, class: Class, bounds: &Bounds) -> Result<Self> {
        let inner = match classifier.family() {
            Family::Perceptron => Inner::Threshold(perceptron::ThresholdEngine::new(
                classifier.threshold().expect("perceptron is compiled to a threshold"),
                class,
            )),
            Family::Bdd | Family::DecisionTree => Inner::Bdd(bdd::BddEngine::new(
                classifier.graph().expect("diagram is compiled to a graph"),
                class,
            )),
            Family::Mlp => Inner::Mlp(mlp::MlpEngine::new(classifier, class, bounds.mlp)?),
        };
        Ok(NecessityEngine {
            classifier,
            class,
            inner,
        })
    }

    pub fn classifier(&self) -> &'a Classifier {
        self.classifier
    }

    pub fn class(&self) -> Class {
        self.class
    }

    pub fn family(&self) -> Family {
        self.classifier.family()
    }

    pub fn arity(&self) -> usize {
        self.classifier.arity()
    }

    /// Prepares for many queries; only the MLP engine has anything to cache.
    pub fn warm(&self) {
        if let Inner::Mlp(m) = &self.inner {
            m.warm();
        }
    }

    /// An instance of the target class that violates `phi`, if one exists.
    pub fn counterexample(&self, phi: &Condition) -> Result<Option<Instance>> {
        phi.check_arity(self.arity())?;
        match &self.inner {
            Inner::Threshold(t) => t.counterexample(phi),
            Inner::Bdd(b) => b.counterexample(phi),
            Inner::Mlp(m) => m.counterexample(phi),
        }
    }

    pub fn is_necessary(&self, phi: &Condition) -> Result<bool> {
        Ok(self.counterexample(phi)?.is_none())
    }
}

/// Whether every instance `m` classifies as `class` satisfies `phi`, with
/// default bounds.
pub fn is_necessary(m: &Classifier, class: Class, phi: &Condition) -> Result<bool> {
    is_necessary_with(m, class, phi, &Bounds::default())
}

pub fn is_necessary_with(m: &Classifier, class: Class, phi: &Condition, bounds: &Bounds) -> Result<bool> {
    NecessityEngine::new(m, class, bounds)?.is_necessary(phi)
}
