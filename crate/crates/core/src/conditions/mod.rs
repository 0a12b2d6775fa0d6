//! The condition language: terms, literals and conjunctions of literals.

mod constraints;
mod parse;

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};

pub use constraints::{build_constraints, entails, model_count, ConstraintSystem};
pub use parse::parse_condition;

/// A term: a feature variable `v_i` (1-based) or one of the constants 0, 1.
///
/// Ordering puts variables first (by index) and constants last, `0` before `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(usize),
    Const(bool),
}

impl Term {
    pub const ZERO: Term = Term::Const(false);
    pub const ONE: Term = Term::Const(true);

    pub fn var(&self) -> Option<usize> {
        match *self {
            Term::Var(i) => Some(i),
            Term::Const(_) => None,
        }
    }

    fn value(&self, x: &Instance) -> bool {
        match *self {
            Term::Var(i) => x.bit(i),
            Term::Const(b) => b,
        }
    }

    fn value_in_mask(&self, mask: u64) -> bool {
        match *self {
            Term::Var(i) => (mask >> (i - 1)) & 1 == 1,
            Term::Const(b) => b,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "v{i}"),
            Term::Const(false) => f.write_str("0"),
            Term::Const(true) => f.write_str("1"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    Eq,
    Neq,
}

impl Op {
    pub fn flipped(self) -> Op {
        match self {
            Op::Eq => Op::Neq,
            Op::Neq => Op::Eq,
        }
    }

    /// Parity encoded by the operator: `false` for `=`, `true` for `!=`.
    pub fn parity(self) -> bool {
        self == Op::Neq
    }
}

/// `lhs op rhs`, always stored with `lhs <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lhs: Term,
    rhs: Term,
    op: Op,
}

impl Literal {
    pub fn new(a: Term, op: Op, b: Term) -> Literal {
        let (lhs, rhs) = if a <= b { (a, b) } else { (b, a) };
        Literal { lhs, rhs, op }
    }

    pub fn eq(a: Term, b: Term) -> Literal {
        Literal::new(a, Op::Eq, b)
    }

    pub fn neq(a: Term, b: Term) -> Literal {
        Literal::new(a, Op::Neq, b)
    }

    /// The unsatisfiable literal `0=1`.
    pub fn falsum() -> Literal {
        Literal::eq(Term::ZERO, Term::ONE)
    }

    pub fn lhs(&self) -> Term {
        self.lhs
    }

    pub fn rhs(&self) -> Term {
        self.rhs
    }

    pub fn op(&self) -> Op {
        self.op
    }

    pub fn terms(&self) -> [Term; 2] {
        [self.lhs, self.rhs]
    }

    /// Operator swapped; the models of the result are exactly the non-models of `self`.
    pub fn negate(&self) -> Literal {
        Literal {
            op: self.op.flipped(),
            ..*self
        }
    }

    /// One of `0=0`, `1=1`, `0!=1` or `v_i=v_i`.
    pub fn is_trivially_true(&self) -> bool {
        match (self.lhs, self.rhs, self.op) {
            (a, b, Op::Eq) => a == b,
            (Term::Const(a), Term::Const(b), Op::Neq) => a != b,
            _ => false,
        }
    }

    /// Largest variable index mentioned, 0 if none.
    pub fn max_var(&self) -> usize {
        self.lhs.var().max(self.rhs.var()).unwrap_or(0)
    }

    pub fn evaluate(&self, x: &Instance) -> Result<bool> {
        check_arity(self.max_var(), x.len())?;
        Ok(self.holds(x))
    }

    pub(crate) fn holds(&self, x: &Instance) -> bool {
        (self.lhs.value(x) != self.rhs.value(x)) == self.op.parity()
    }

    /// Evaluation on an instance packed into a bit mask (feature `i` at bit `i-1`).
    pub(crate) fn holds_in_mask(&self, mask: u64) -> bool {
        (self.lhs.value_in_mask(mask) != self.rhs.value_in_mask(mask)) == self.op.parity()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.op {
            Op::Eq => "=",
            Op::Neq => "!=",
        };
        write!(f, "{}{}{}", self.lhs, op, self.rhs)
    }
}

/// Every canonical literal over `v1..vn`, `0`, `1`, in canonical order.
pub fn all_literals(n: usize) -> Vec<Literal> {
    let terms = all_terms(n);
    let mut out = Vec::with_capacity(terms.len() * (terms.len() + 1));
    for (i, &a) in terms.iter().enumerate() {
        for &b in &terms[i..] {
            out.push(Literal { lhs: a, rhs: b, op: Op::Eq });
            out.push(Literal { lhs: a, rhs: b, op: Op::Neq });
        }
    }
    out
}

fn all_terms(n: usize) -> Vec<Term> {
    (1..=n)
        .map(Term::Var)
        .chain([Term::ZERO, Term::ONE])
        .collect()
}

/// A conjunction of literals. The empty conjunction is `true`.
///
/// Literals are kept canonical and free of duplicates, in order of first
/// appearance.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Condition {
    literals: Vec<Literal>,
}

impl Condition {
    pub fn top() -> Condition {
        Condition::default()
    }

    pub fn from_literals<I: IntoIterator<Item = Literal>>(literals: I) -> Condition {
        let mut c = Condition::top();
        for l in literals {
            c.push(l);
        }
        c
    }

    pub fn literal(l: Literal) -> Condition {
        Condition { literals: alloc::vec![l] }
    }

    /// Appends a literal unless it is already present.
    pub fn push(&mut self, l: Literal) {
        if !self.literals.contains(&l) {
            self.literals.push(l);
        }
    }

    pub fn and(&self, l: Literal) -> Condition {
        let mut c = self.clone();
        c.push(l);
        c
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn is_top(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn max_var(&self) -> usize {
        self.literals.iter().map(Literal::max_var).max().unwrap_or(0)
    }

    /// Rejects conditions mentioning a variable above `n`.
    pub fn check_arity(&self, n: usize) -> Result<()> {
        check_arity(self.max_var(), n)
    }

    pub fn evaluate(&self, x: &Instance) -> Result<bool> {
        self.check_arity(x.len())?;
        Ok(self.literals.iter().all(|l| l.holds(x)))
    }

    pub(crate) fn holds_in_mask(&self, mask: u64) -> bool {
        self.literals.iter().all(|l| l.holds_in_mask(mask))
    }

    pub fn entails(&self, l: &Literal, n: usize) -> Result<bool> {
        entails(self, l, n)
    }

    pub fn model_count(&self, n: usize) -> Result<BigUint> {
        model_count(self, n)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("true");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl core::str::FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_condition(s)
    }
}

impl FromIterator<Literal> for Condition {
    fn from_iter<I: IntoIterator<Item = Literal>>(iter: I) -> Self {
        Condition::from_literals(iter)
    }
}

/// True iff both conditions entail exactly the same canonical literals,
/// which over this language is the same as having identical models.
pub fn condition_equivalent(a: &Condition, b: &Condition, n: usize) -> Result<bool> {
    let sa = build_constraints(a, n)?;
    let sb = build_constraints(b, n)?;
    Ok(all_literals(n)
        .iter()
        .all(|l| sa.implies(l) == sb.implies(l)))
}

fn check_arity(max_var: usize, n: usize) -> Result<()> {
    if max_var > n {
        Err(Error::ArityMismatch {
            expected: n,
            found: max_var,
        })
    } else {
        Ok(())
    }
}

/// A binary feature vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Instance {
    bits: Vec<bool>,
}

impl Instance {
    pub fn new(bits: Vec<bool>) -> Instance {
        Instance { bits }
    }

    pub fn zeros(n: usize) -> Instance {
        Instance {
            bits: alloc::vec![false; n],
        }
    }

    /// Feature `i` (1-based) is bit `i-1` of `mask`.
    pub fn from_mask(mask: u64, n: usize) -> Instance {
        Instance {
            bits: (0..n).map(|i| (mask >> i) & 1 == 1).collect(),
        }
    }

    /// Inverse of [`Instance::from_mask`]; `None` beyond 64 features.
    pub fn to_mask(&self) -> Option<u64> {
        if self.bits.len() > 64 {
            return None;
        }
        Some(
            self.bits
                .iter()
                .enumerate()
                .fold(0u64, |m, (i, &b)| m | ((b as u64) << i)),
        )
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Value of feature `i` (1-based).
    pub fn bit(&self, i: usize) -> bool {
        self.bits[i - 1]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i - 1] = value;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl From<Vec<bool>> for Instance {
    fn from(bits: Vec<bool>) -> Self {
        Instance::new(bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use std::collections::BTreeSet;

    fn v(i: usize) -> Term {
        Term::Var(i)
    }

    fn inst(bits: &[u8]) -> Instance {
        Instance::new(bits.iter().map(|&b| b == 1).collect())
    }

    #[test]
    fn canonical_order_is_symmetric() {
        assert_eq!(Literal::neq(v(2), v(1)), Literal::neq(v(1), v(2)));
        assert_eq!(Literal::eq(Term::ONE, v(3)).lhs(), v(3));
        assert_eq!(Literal::eq(Term::ONE, Term::ZERO), Literal::falsum());
    }

    #[test]
    fn evaluate_examples() {
        let phi = Condition::from_literals([Literal::eq(v(1), Term::ONE), Literal::eq(v(2), v(3))]);
        assert!(phi.evaluate(&inst(&[1, 0, 0])).unwrap());
        assert!(!phi.evaluate(&inst(&[1, 0, 1])).unwrap());
        assert!(Condition::top().evaluate(&inst(&[0, 0])).unwrap());
        assert!(matches!(
            phi.evaluate(&inst(&[1, 0])),
            Err(Error::ArityMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn negation_examples() {
        assert_eq!(
            Literal::eq(v(1), Term::ZERO).negate(),
            Literal::neq(v(1), Term::ZERO)
        );
        assert_eq!(Literal::neq(v(1), v(2)).negate(), Literal::eq(v(1), v(2)));
        for l in all_literals(3) {
            assert_eq!(l.negate().negate(), l);
        }
    }

    #[test]
    fn negation_partitions_instances() {
        let n = 4;
        for l in all_literals(n) {
            for mask in 0..1u64 << n {
                let x = Instance::from_mask(mask, n);
                assert_ne!(l.holds(&x), l.negate().holds(&x), "{l} at {x}");
            }
        }
    }

    #[test]
    fn all_literals_for_one_feature() {
        let got: BTreeSet<_> = all_literals(1).into_iter().collect();
        let expected: BTreeSet<_> = [
            Literal::eq(v(1), Term::ZERO),
            Literal::eq(v(1), Term::ONE),
            Literal::neq(v(1), Term::ZERO),
            Literal::neq(v(1), Term::ONE),
            Literal::eq(v(1), v(1)),
            Literal::neq(v(1), v(1)),
            Literal::eq(Term::ZERO, Term::ZERO),
            Literal::eq(Term::ZERO, Term::ONE),
            Literal::neq(Term::ZERO, Term::ZERO),
            Literal::neq(Term::ZERO, Term::ONE),
            Literal::eq(Term::ONE, Term::ONE),
            Literal::neq(Term::ONE, Term::ONE),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, expected);
        assert_eq!(all_literals(1).len(), 12);
    }

    #[test]
    fn all_literals_growth_matches_enumeration() {
        // Independent count: every ordered pair of terms and operator,
        // deduplicated through canonicalization.
        fn brute(n: usize) -> usize {
            let terms: Vec<Term> = (1..=n)
                .map(Term::Var)
                .chain([Term::ZERO, Term::ONE])
                .collect();
            let mut set = BTreeSet::new();
            for &a in &terms {
                for &b in &terms {
                    for op in [Op::Eq, Op::Neq] {
                        set.insert(Literal::new(a, op, b));
                    }
                }
            }
            set.len()
        }
        for n in 1..8 {
            let lits = all_literals(n);
            assert_eq!(lits.len(), brute(n));
            let unique: BTreeSet<_> = lits.iter().collect();
            assert_eq!(unique.len(), lits.len());
            assert!(lits.windows(2).all(|w| w[0] < w[1]));
        }
        // Going from one to two features adds v1=v2, v1!=v2, four v2/constant
        // literals, and v2=v2, v2!=v2.
        assert_eq!(brute(2), brute(1) + 8);
    }

    #[test]
    fn trivially_true_list() {
        let trivial: Vec<_> = all_literals(3)
            .into_iter()
            .filter(Literal::is_trivially_true)
            .collect();
        assert_eq!(
            trivial,
            vec![
                Literal::eq(v(1), v(1)),
                Literal::eq(v(2), v(2)),
                Literal::eq(v(3), v(3)),
                Literal::eq(Term::ZERO, Term::ZERO),
                Literal::neq(Term::ZERO, Term::ONE),
                Literal::eq(Term::ONE, Term::ONE),
            ]
        );
        assert!(Literal::neq(Term::ONE, Term::ZERO).is_trivially_true());
        assert!(!Literal::eq(v(1), Term::ZERO).is_trivially_true());
    }

    #[test]
    fn condition_dedups_and_keeps_order() {
        let c = Condition::from_literals([
            Literal::eq(v(2), Term::ONE),
            Literal::eq(Term::ONE, v(2)),
            Literal::eq(v(1), Term::ONE),
        ]);
        assert_eq!(c.len(), 2);
        assert_eq!(c.literals()[0], Literal::eq(v(2), Term::ONE));
    }

    #[test]
    fn equivalence_examples() {
        let a: Condition = "v1=1 & v2=1".parse().unwrap();
        let b: Condition = "v2=1 & v1=1 & v1=v2".parse().unwrap();
        assert!(condition_equivalent(&a, &b, 2).unwrap());
        let t: Condition = "v1=v1".parse().unwrap();
        assert!(condition_equivalent(&Condition::top(), &t, 2).unwrap());
        let c0: Condition = "v1=0".parse().unwrap();
        let c1: Condition = "v1=1".parse().unwrap();
        assert!(!condition_equivalent(&c0, &c1, 2).unwrap());
    }

    #[test]
    fn mask_round_trip() {
        for mask in 0..32u64 {
            assert_eq!(Instance::from_mask(mask, 5).to_mask(), Some(mask));
        }
    }
}
