//! Necessity for MLPs by exhaustive counterexample search.
//!
//! The exact problem is co-NP-hard, so the engine enumerates {0,1}^n and
//! refuses arities above a configured bound instead of approximating.

use alloc::vec::Vec;
use core::cell::OnceCell;

use crate::classifiers::{Class, Classifier, IntegerNetwork, Mlp};
use crate::conditions::{Condition, Instance};
use crate::error::{Error, Result};

/// Hard ceiling from packing instances into a `u64`.
const MASK_BITS: usize = 63;

pub(crate) fn check_bound(arity: usize, bound: usize) -> Result<()> {
    let bound = bound.min(MASK_BITS);
    if arity > bound {
        Err(Error::BoundExceeded {
            what: "exhaustive MLP search",
            arity,
            bound,
        })
    } else {
        Ok(())
    }
}

fn first_counterexample(
    classify: impl Fn(u64) -> Class,
    class: Class,
    phi: &Condition,
    n: usize,
) -> Option<u64> {
    (0..1u64 << n).find(|&m| classify(m) == class && !phi.holds_in_mask(m))
}

/// Whether every instance the network assigns to `class` satisfies `phi`,
/// stopping at the first counterexample.
pub fn is_necessary_mlp(m: &Mlp, class: Class, phi: &Condition, bound: usize) -> Result<bool> {
    let n = m.arity();
    check_bound(n, bound)?;
    phi.check_arity(n)?;
    let net = IntegerNetwork::new(m);
    Ok(first_counterexample(|x| net.classify_mask(x), class, phi, n).is_none())
}

#[derive(Debug, Clone)]
pub(crate) struct MlpEngine<'a> {
    classifier: &'a Classifier,
    class: Class,
    /// Instances of the target class, filled on demand for repeated queries.
    models: OnceCell<Vec<u64>>,
}

impl<'a> MlpEngine<'a> {
    pub fn new(classifier: &'a Classifier, class: Class, bound: usize) -> Result<MlpEngine<'a>> {
        check_bound(classifier.arity(), bound)?;
        Ok(MlpEngine {
            classifier,
            class,
            models: OnceCell::new(),
        })
    }

    pub fn arity(&self) -> usize {
        self.classifier.arity()
    }

    /// Enumerates the target class once so later queries skip the network.
    pub fn warm(&self) {
        self.models.get_or_init(|| {
            (0..1u64 << self.arity())
                .filter(|&m| self.classifier.classify_mask(m) == self.class)
                .collect()
        });
    }

    pub fn counterexample(&self, phi: &Condition) -> Result<Option<Instance>> {
        let n = self.arity();
        phi.check_arity(n)?;
        let found = match self.models.get() {
            Some(models) => models.iter().copied().find(|&m| !phi.holds_in_mask(m)),
            None => first_counterexample(|m| self.classifier.classify_mask(m), self.class, phi, n),
        };
        Ok(found.map(|m| Instance::from_mask(m, n)))
    }
}
