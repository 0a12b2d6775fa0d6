//! Parity union-find over the variables and the two constants.
//!
//! Every literal `a = b` / `a != b` is an edge carrying parity 0 / 1. A set of
//! such edges is satisfiable over {0,1} iff no cycle has odd parity, which is
//! exactly what the union-find tracks. The constant nodes are pre-linked with
//! parity 1 so that `0 != 1` holds from the start.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{all_literals, Condition, Literal, Op, Term};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    arity: usize,
    parent: Vec<usize>,
    /// Parity of each node relative to its parent.
    parity: Vec<bool>,
    rank: Vec<u8>,
    consistent: bool,
}

impl ConstraintSystem {
    /// No assertions besides `0 != 1`.
    pub fn new(arity: usize) -> ConstraintSystem {
        let size = arity + 2;
        let mut cs = ConstraintSystem {
            arity,
            parent: (0..size).collect(),
            parity: alloc::vec![false; size],
            rank: alloc::vec![0; size],
            consistent: true,
        };
        cs.link(cs.zero_node(), cs.one_node(), true);
        cs
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    fn zero_node(&self) -> usize {
        self.arity
    }

    fn one_node(&self) -> usize {
        self.arity + 1
    }

    fn node(&self, t: Term) -> usize {
        match t {
            Term::Var(i) => {
                assert!(i >= 1 && i <= self.arity, "variable v{i} outside arity {}", self.arity);
                i - 1
            }
            Term::Const(false) => self.zero_node(),
            Term::Const(true) => self.one_node(),
        }
    }

    /// Root of `x` and the parity of `x` relative to it.
    fn find(&self, mut x: usize) -> (usize, bool) {
        let mut p = false;
        while self.parent[x] != x {
            p ^= self.parity[x];
            x = self.parent[x];
        }
        (x, p)
    }

    /// Records `a xor b = parity`; returns false on contradiction.
    fn link(&mut self, a: usize, b: usize, parity: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == parity;
        }
        let rel = pa ^ pb ^ parity;
        let (child, root) = if self.rank[ra] < self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[child] = root;
        self.parity[child] = rel;
        if self.rank[child] == self.rank[root] {
            self.rank[root] += 1;
        }
        true
    }

    /// Adds one literal. Once inconsistent the system stays inconsistent.
    pub fn assert_literal(&mut self, l: &Literal) -> bool {
        let a = self.node(l.lhs());
        let b = self.node(l.rhs());
        if !self.link(a, b, l.op().parity()) {
            self.consistent = false;
        }
        self.consistent
    }

    /// `Some(parity)` when the relation between two terms is fixed.
    pub fn relation(&self, a: Term, b: Term) -> Option<bool> {
        let (ra, pa) = self.find(self.node(a));
        let (rb, pb) = self.find(self.node(b));
        (ra == rb).then_some(pa ^ pb)
    }

    /// Entailment read directly off the components: an inconsistent system
    /// entails everything, otherwise `a op b` is entailed iff `a` and `b` share
    /// a component with the matching parity.
    pub fn implies(&self, l: &Literal) -> bool {
        !self.consistent || self.relation(l.lhs(), l.rhs()) == Some(l.op().parity())
    }

    /// Components as lists of (term, parity relative to the representative).
    pub fn components(&self) -> Vec<Vec<(Term, bool)>> {
        let size = self.arity + 2;
        let mut slot = alloc::vec![usize::MAX; size];
        let mut out: Vec<Vec<(Term, bool)>> = Vec::new();
        for x in 0..size {
            let (root, p) = self.find(x);
            if slot[root] == usize::MAX {
                slot[root] = out.len();
                out.push(Vec::new());
            }
            out[slot[root]].push((self.term(x), p));
        }
        out
    }

    fn term(&self, node: usize) -> Term {
        if node < self.arity {
            Term::Var(node + 1)
        } else {
            Term::Const(node == self.one_node())
        }
    }

    /// Number of variable-only components, i.e. variables that can be chosen
    /// freely once the constraints are propagated.
    pub fn free_components(&self) -> usize {
        let (zero_root, _) = self.find(self.zero_node());
        (0..self.arity)
            .filter(|&x| self.parent[x] == x && x != zero_root)
            .count()
    }

    pub fn model_count(&self) -> BigUint {
        if !self.consistent {
            return BigUint::zero();
        }
        BigUint::one() << self.free_components()
    }

    /// Some satisfying instance, with every free component set to 0.
    pub fn model(&self) -> Option<super::Instance> {
        if !self.consistent {
            return None;
        }
        let (const_root, zero_parity) = self.find(self.zero_node());
        let bits = (0..self.arity)
            .map(|x| {
                let (root, p) = self.find(x);
                if root == const_root {
                    // value(x) = value(0) xor parity(x, 0)
                    p ^ zero_parity
                } else {
                    p
                }
            })
            .collect();
        Some(super::Instance::new(bits))
    }

    /// Every entailed literal that is not trivially true, in canonical order.
    ///
    /// For an inconsistent system that is every such literal of the language.
    pub fn entailed_literals(&self) -> Vec<Literal> {
        if !self.consistent {
            return all_literals(self.arity)
                .into_iter()
                .filter(|l| !l.is_trivially_true())
                .collect();
        }
        let mut out = Vec::new();
        for comp in self.components() {
            for (i, &(a, pa)) in comp.iter().enumerate() {
                for &(b, pb) in &comp[i + 1..] {
                    let op = if pa == pb { Op::Eq } else { Op::Neq };
                    let l = Literal::new(a, op, b);
                    if !l.is_trivially_true() {
                        out.push(l);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// One parity edge per literal of `phi`.
pub fn build_constraints(phi: &Condition, n: usize) -> Result<ConstraintSystem> {
    phi.check_arity(n)?;
    let mut cs = ConstraintSystem::new(n);
    for l in phi.literals() {
        cs.assert_literal(l);
    }
    Ok(cs)
}

/// `phi |= l`, decided as unsatisfiability of `phi` together with the negation of `l`.
pub fn entails(phi: &Condition, l: &Literal, n: usize) -> Result<bool> {
    if l.max_var() > n {
        return Err(crate::Error::ArityMismatch {
            expected: n,
            found: l.max_var(),
        });
    }
    let mut cs = build_constraints(phi, n)?;
    Ok(!cs.assert_literal(&l.negate()))
}

/// Number of instances in {0,1}^n satisfying `phi`.
pub fn model_count(phi: &Condition, n: usize) -> Result<BigUint> {
    Ok(build_constraints(phi, n)?.model_count())
}
