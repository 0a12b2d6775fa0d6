//! Necessity for BDDs and decision trees.
//!
//! `phi` is not necessary iff some literal `l` with `phi |= l` is not entailed
//! by the path condition of some path to a target sink. Walking a path we
//! substitute each tested feature's edge value into `l`; at the sink the
//! path condition entails `l` exactly when the rewritten literal is trivially
//! true. Each literal has at most two variables, so a rewrite state takes one
//! of nine shapes and the search is a DFS over (node, shape) pairs.

use alloc::vec::Vec;

use crate::classifiers::{BddGraph, Class, GraphNode};
use crate::conditions::{build_constraints, Condition, ConstraintSystem, Instance, Literal, Term};
use crate::error::Result;

/// A literal with some of its variables replaced by constants along a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiteralRewrite {
    original: Literal,
    subs: [Option<bool>; 2],
}

impl LiteralRewrite {
    pub fn new(original: Literal) -> LiteralRewrite {
        LiteralRewrite {
            original,
            subs: [None, None],
        }
    }

    /// Replaces every occurrence of `v_feature` with `value`.
    pub fn assign(mut self, feature: usize, value: bool) -> LiteralRewrite {
        for (slot, term) in self.subs.iter_mut().zip(self.original.terms()) {
            if term == Term::Var(feature) {
                *slot = Some(value);
            }
        }
        self
    }

    pub fn current(&self) -> Literal {
        let [a, b] = self.original.terms();
        let resolve = |t: Term, s: Option<bool>| s.map_or(t, Term::Const);
        Literal::new(resolve(a, self.subs[0]), self.original.op(), resolve(b, self.subs[1]))
    }

    fn code(&self) -> usize {
        let c = |s: Option<bool>| match s {
            None => 0,
            Some(false) => 1,
            Some(true) => 2,
        };
        c(self.subs[0]) * 3 + c(self.subs[1])
    }
}

/// A path to a target sink whose path condition does not entail `literal`,
/// while the checked condition does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BddWitness {
    pub literal: Literal,
    /// (feature, edge value) for each decision on the path.
    pub path: Vec<(usize, bool)>,
}

impl BddWitness {
    /// An instance following the path and falsifying `literal`.
    pub fn counterexample(&self, n: usize) -> Instance {
        let mut cs = ConstraintSystem::new(n);
        for &(f, v) in &self.path {
            cs.assert_literal(&Literal::eq(Term::Var(f), Term::Const(v)));
        }
        cs.assert_literal(&self.literal.negate());
        cs.model()
            .expect("path condition does not entail the witness literal")
    }
}

#[derive(Debug, Clone)]
pub(crate) struct BddEngine<'a> {
    graph: &'a BddGraph,
    class: Class,
    reach: Vec<bool>,
}

struct Frame {
    node: usize,
    rewrite: LiteralRewrite,
    next: u8,
}

impl<'a> BddEngine<'a> {
    pub fn new(graph: &'a BddGraph, class: Class) -> BddEngine<'a> {
        BddEngine {
            graph,
            class,
            reach: graph.reaches(class),
        }
    }

    pub fn arity(&self) -> usize {
        self.graph.arity
    }

    /// A path to a target sink along which `l` is not forced.
    fn path_for(&self, l: &Literal) -> Option<Vec<(usize, bool)>> {
        let g = self.graph;
        if !self.reach[g.root] {
            return None;
        }
        let mut visited = alloc::vec![false; g.nodes.len() * 9];
        let start = LiteralRewrite::new(*l);
        visited[g.root * 9 + start.code()] = true;
        let mut stack = alloc::vec![Frame {
            node: g.root,
            rewrite: start,
            next: 0
        }];
        while let Some(top) = stack.last_mut() {
            match g.nodes[top.node] {
                GraphNode::Sink(c) => {
                    if c == self.class && !top.rewrite.current().is_trivially_true() {
                        let path = stack[..stack.len() - 1]
                            .iter()
                            .map(|f| match g.nodes[f.node] {
                                GraphNode::Decision { feature, .. } => (feature, f.next == 2),
                                GraphNode::Sink(_) => unreachable!("sinks have no successors"),
                            })
                            .collect();
                        return Some(path);
                    }
                    stack.pop();
                }
                GraphNode::Decision { feature, low, high } => {
                    if top.next == 2 {
                        stack.pop();
                        continue;
                    }
                    let value = top.next == 1;
                    top.next += 1;
                    let child = if value { high } else { low };
                    if !self.reach[child] {
                        continue;
                    }
                    let rewrite = top.rewrite.assign(feature, value);
                    let key = child * 9 + rewrite.code();
                    if !visited[key] {
                        visited[key] = true;
                        stack.push(Frame {
                            node: child,
                            rewrite,
                            next: 0,
                        });
                    }
                }
            }
        }
        None
    }

    pub fn witness(&self, phi: &Condition) -> Result<Option<BddWitness>> {
        let cs = build_constraints(phi, self.arity())?;
        if !self.reach[self.graph.root] {
            return Ok(None);
        }
        // Trivially true literals stay trivially true under substitution, so
        // only the remaining entailed literals can witness.
        for l in cs.entailed_literals() {
            if let Some(path) = self.path_for(&l) {
                return Ok(Some(BddWitness { literal: l, path }));
            }
        }
        Ok(None)
    }

    pub fn counterexample(&self, phi: &Condition) -> Result<Option<Instance>> {
        Ok(self
            .witness(phi)?
            .map(|w| w.counterexample(self.arity())))
    }
}

/// Whether every instance the diagram sends to a `class` sink satisfies `phi`.
pub fn is_necessary_bdd(graph: &BddGraph, class: Class, phi: &Condition) -> Result<bool> {
    Ok(BddEngine::new(graph, class).witness(phi)?.is_none())
}

/// The (literal, path) pair refuting `phi`, if any.
pub fn bdd_witness(graph: &BddGraph, class: Class, phi: &Condition) -> Result<Option<BddWitness>> {
    BddEngine::new(graph, class).witness(phi)
}
