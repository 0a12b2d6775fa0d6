//! Binary classifiers over {0,1}^n.

pub(crate) mod bdd;
mod mlp;
mod perceptron;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use bdd::{Bdd, BddEdge, BddGraph, BddNode, DecisionTree, GraphNode, NodeLabel};
pub use mlp::{Layer, Mlp};
pub use perceptron::Perceptron;

pub(crate) use mlp::IntegerNetwork;
pub(crate) use perceptron::IntegerThreshold;

use crate::conditions::Instance;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class {
    Zero,
    One,
}

impl Class {
    pub fn from_bool(b: bool) -> Class {
        if b {
            Class::One
        } else {
            Class::Zero
        }
    }

    pub fn as_bool(self) -> bool {
        self == Class::One
    }

    pub fn other(self) -> Class {
        Class::from_bool(!self.as_bool())
    }
}

impl TryFrom<u8> for Class {
    type Error = u8;

    fn try_from(v: u8) -> core::result::Result<Class, u8> {
        match v {
            0 => Ok(Class::Zero),
            1 => Ok(Class::One),
            other => Err(other),
        }
    }
}

impl From<Class> for u8 {
    fn from(c: Class) -> u8 {
        c as u8
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", *self as u8)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Bdd,
    DecisionTree,
    Perceptron,
    Mlp,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Bdd => "bdd",
            Family::DecisionTree => "dt",
            Family::Perceptron => "perceptron",
            Family::Mlp => "mlp",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    NotRooted,
    Cycle,
    DuplicateId,
    DanglingEdge,
    OutDegree,
    EdgeLabels,
    FeatureRange,
    RepeatedLabel,
    NotTree,
    EmptyWeights,
    Arity,
    LayerDimensions,
    OutputWidth,
    NoLayers,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            ViolationKind::NotRooted => "not rooted",
            ViolationKind::Cycle => "cycle",
            ViolationKind::DuplicateId => "duplicate id",
            ViolationKind::DanglingEdge => "dangling edge",
            ViolationKind::OutDegree => "out degree",
            ViolationKind::EdgeLabels => "edge labels",
            ViolationKind::FeatureRange => "feature range",
            ViolationKind::RepeatedLabel => "repeated label",
            ViolationKind::NotTree => "not a tree",
            ViolationKind::EmptyWeights => "empty weights",
            ViolationKind::Arity => "arity",
            ViolationKind::LayerDimensions => "layer dimensions",
            ViolationKind::OutputWidth => "output width",
            ViolationKind::NoLayers => "no layers",
        }
    }
}

/// A structural problem found by [`Model::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl Violation {
    pub fn new(kind: ViolationKind, detail: impl Into<String>) -> Violation {
        Violation {
            kind,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.name(), self.detail)
    }
}

/// A classifier description, possibly malformed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Bdd(Bdd),
    DecisionTree(DecisionTree),
    Perceptron(Perceptron),
    Mlp(Mlp),
}

impl Model {
    pub fn family(&self) -> Family {
        match self {
            Model::Bdd(_) => Family::Bdd,
            Model::DecisionTree(_) => Family::DecisionTree,
            Model::Perceptron(_) => Family::Perceptron,
            Model::Mlp(_) => Family::Mlp,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Model::Bdd(b) => b.arity,
            Model::DecisionTree(t) => t.bdd().arity,
            Model::Perceptron(p) => p.arity(),
            Model::Mlp(m) => m.arity(),
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        match self {
            Model::Bdd(b) => b.validate(),
            Model::DecisionTree(t) => t.validate(),
            Model::Perceptron(p) => p.validate(),
            Model::Mlp(m) => m.validate(),
        }
    }
}

#[derive(Debug, Clone)]
enum Compiled {
    Graph(BddGraph),
    Threshold(IntegerThreshold),
    Network(IntegerNetwork),
}

/// A validated model together with its evaluation-ready form.
///
/// Construction runs [`Model::validate`]; a `Classifier` is therefore always
/// well-formed and [`Classifier::classify`] only fails on arity mismatch.
#[derive(Debug, Clone)]
pub struct Classifier {
    model: Model,
    compiled: Compiled,
}

impl PartialEq for Classifier {
    fn eq(&self, other: &Self) -> bool {
        self.model == other.model
    }
}

impl Eq for Classifier {}

impl Classifier {
    pub fn new(model: Model) -> Result<Classifier> {
        let violations = model.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidModel(violations));
        }
        let compiled = match &model {
            Model::Bdd(b) => Compiled::Graph(b.graph()?),
            Model::DecisionTree(t) => Compiled::Graph(t.bdd().graph()?),
            Model::Perceptron(p) => Compiled::Threshold(IntegerThreshold::new(p)),
            Model::Mlp(m) => Compiled::Network(IntegerNetwork::new(m)),
        };
        Ok(Classifier { model, compiled })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn into_model(self) -> Model {
        self.model
    }

    pub fn family(&self) -> Family {
        self.model.family()
    }

    pub fn arity(&self) -> usize {
        self.model.arity()
    }

    pub(crate) fn graph(&self) -> Option<&BddGraph> {
        match &self.compiled {
            Compiled::Graph(g) => Some(g),
            _ => None,
        }
    }

    pub(crate) fn threshold(&self) -> Option<&IntegerThreshold> {
        match &self.compiled {
            Compiled::Threshold(t) => Some(t),
            _ => None,
        }
    }

    pub fn classify(&self, x: &Instance) -> Result<Class> {
        if x.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: x.len(),
            });
        }
        Ok(match &self.compiled {
            Compiled::Graph(g) => g.classify(x),
            Compiled::Threshold(t) => t.classify(x),
            Compiled::Network(n) => n.classify(x),
        })
    }

    /// Classification of the instance packed in `mask` (feature `i` at bit `i-1`).
    pub(crate) fn classify_mask(&self, mask: u64) -> Class {
        match &self.compiled {
            Compiled::Graph(g) => g.classify_mask(mask),
            Compiled::Threshold(t) => t.classify_mask(mask),
            Compiled::Network(n) => n.classify_mask(mask),
        }
    }
}

impl From<Bdd> for Model {
    fn from(b: Bdd) -> Self {
        Model::Bdd(b)
    }
}

impl From<DecisionTree> for Model {
    fn from(t: DecisionTree) -> Self {
        Model::DecisionTree(t)
    }
}

impl From<Perceptron> for Model {
    fn from(p: Perceptron) -> Self {
        Model::Perceptron(p)
    }
}

impl From<Mlp> for Model {
    fn from(m: Mlp) -> Self {
        Model::Mlp(m)
    }
}

impl TryFrom<Model> for Classifier {
    type Error = Error;

    fn try_from(m: Model) -> Result<Self> {
        Classifier::new(m)
    }
}
