//! Minimal necessary reasons.
//!
//! A necessary `phi` is minimal iff no literal outside its entailment closure
//! is itself necessary. This holds for both the cardinality and the
//! inclusion preorder: a literal `l` with `phi |/= l` that is necessary gives
//! `phi & l`, strictly smaller in both senses, and conversely the models of
//! any strictly smaller necessary condition would miss some model of `phi`
//! which one of its literals excludes. The two preorders therefore route to
//! the same procedure.
//!
//! Synthesis starts from `true` and greedily conjoins necessary literals that
//! are not yet entailed until none is left.

use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use crate::classifiers::{Class, Classifier, Family};
use crate::conditions::{
    all_literals, build_constraints, condition_equivalent, Condition, ConstraintSystem, Literal,
};
use crate::error::Result;
use crate::necessity::{Bounds, NecessityEngine};

/// Preorder used to compare necessary reasons. Both give the same minimal
/// reasons; the variants exist so callers can say which one they mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Preorder {
    /// Compare model counts.
    Cardinality,
    /// Compare model sets by inclusion.
    #[default]
    Subset,
}

impl fmt::Display for Preorder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preorder::Cardinality => "card",
            Preorder::Subset => "subset",
        })
    }
}

/// Order in which synthesis scans the literal language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ScanOrder {
    #[default]
    Canonical,
    Reversed,
}

/// A synthesized minimal necessary reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explanation {
    /// The reason after dropping literals implied by the others.
    pub condition: Condition,
    pub class: Class,
    pub family: Family,
    /// Literals in the order the greedy search conjoined them.
    pub added_literals: Vec<Literal>,
    pub minimal: bool,
}

/// Minimality queries for one (classifier, class) pair, caching the
/// necessity verdict of every single literal.
pub struct MinimalityChecker<'a> {
    engine: NecessityEngine<'a>,
    literals: Vec<Literal>,
    single: RefCell<Vec<Option<bool>>>,
}

impl<'a> MinimalityChecker<'a> {
    pub fn new(m: &'a Classifier, class: Class, bounds: &Bounds) -> Result<Self> {
        let engine = NecessityEngine::new(m, class, bounds)?;
        engine.warm();
        let literals = all_literals(m.arity());
        let single = RefCell::new(alloc::vec![None; literals.len()]);
        Ok(MinimalityChecker {
            engine,
            literals,
            single,
        })
    }

    pub fn engine(&self) -> &NecessityEngine<'a> {
        &self.engine
    }

    fn literal_is_necessary(&self, index: usize) -> Result<bool> {
        if let Some(v) = self.single.borrow()[index] {
            return Ok(v);
        }
        let l = self.literals[index];
        let v = l.is_trivially_true() || self.engine.is_necessary(&Condition::literal(l))?;
        self.single.borrow_mut()[index] = Some(v);
        Ok(v)
    }

    /// First literal in scan order that is necessary but not entailed by `cs`.
    fn next_literal(&self, cs: &ConstraintSystem, order: ScanOrder) -> Result<Option<Literal>> {
        let n = self.literals.len();
        for k in 0..n {
            let i = match order {
                ScanOrder::Canonical => k,
                ScanOrder::Reversed => n - 1 - k,
            };
            if !cs.implies(&self.literals[i]) && self.literal_is_necessary(i)? {
                return Ok(Some(self.literals[i]));
            }
        }
        Ok(None)
    }

    pub fn is_min_necessary(&self, phi: &Condition) -> Result<bool> {
        if !self.engine.is_necessary(phi)? {
            return Ok(false);
        }
        let cs = build_constraints(phi, self.engine.arity())?;
        Ok(self.next_literal(&cs, ScanOrder::Canonical)?.is_none())
    }

    pub fn find(&self, order: ScanOrder) -> Result<Explanation> {
        let n = self.engine.arity();
        let mut cs = ConstraintSystem::new(n);
        let mut trace = Vec::new();
        // The running conjunction is necessary, so extending it by `l` stays
        // necessary exactly when `l` alone is.
        while let Some(l) = self.next_literal(&cs, order)? {
            cs.assert_literal(&l);
            trace.push(l);
        }
        let condition = prune_redundant(&trace, n)?;
        debug_assert!(condition_equivalent(&condition, &Condition::from_literals(trace.iter().copied()), n)?);
        Ok(Explanation {
            condition,
            class: self.engine.class(),
            family: self.engine.family(),
            added_literals: trace,
            minimal: true,
        })
    }
}

/// Drops literals implied by the remaining ones, last to first.
fn prune_redundant(literals: &[Literal], n: usize) -> Result<Condition> {
    let mut keep: Vec<Literal> = literals.to_vec();
    let mut i = keep.len();
    while i > 0 {
        i -= 1;
        let others = Condition::from_literals(
            keep.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, l)| *l),
        );
        if build_constraints(&others, n)?.implies(&keep[i]) {
            keep.remove(i);
        }
    }
    Ok(Condition::from_literals(keep))
}

pub fn is_min_necessary(m: &Classifier, class: Class, phi: &Condition) -> Result<bool> {
    is_min_necessary_with(m, class, phi, Preorder::default(), &Bounds::default())
}

/// `preorder` does not change the answer; see the module docs.
pub fn is_min_necessary_with(
    m: &Classifier,
    class: Class,
    phi: &Condition,
    _preorder: Preorder,
    bounds: &Bounds,
) -> Result<bool> {
    phi.check_arity(m.arity())?;
    MinimalityChecker::new(m, class, bounds)?.is_min_necessary(phi)
}

pub fn find_min_necessary(m: &Classifier, class: Class) -> Result<Explanation> {
    find_min_necessary_with(m, class, ScanOrder::Canonical, &Bounds::default())
}

pub fn find_min_necessary_with(
    m: &Classifier,
    class: Class,
    order: ScanOrder,
    bounds: &Bounds,
) -> Result<Explanation> {
    MinimalityChecker::new(m, class, bounds)?.find(order)
}

/// Minimality decided through synthesis: `phi` is minimal iff it is
/// necessary and has the same models as a synthesized minimal reason.
pub fn decide_min_via_find(m: &Classifier, class: Class, phi: &Condition) -> Result<bool> {
    decide_min_via_find_with(m, class, phi, &Bounds::default())
}

pub fn decide_min_via_find_with(
    m: &Classifier,
    class: Class,
    phi: &Condition,
    bounds: &Bounds,
) -> Result<bool> {
    phi.check_arity(m.arity())?;
    let checker = MinimalityChecker::new(m, class, bounds)?;
    if !checker.engine().is_necessary(phi)? {
        return Ok(false);
    }
    let found = checker.find(ScanOrder::Canonical)?;
    condition_equivalent(phi, &found.condition, m.arity())
}
