//! Necessity for perceptrons by extremal candidates.
//!
//! `phi` fails to be necessary iff some instance of the target class violates
//! one of its literals. For each literal we substitute its negation into the
//! threshold inequality, which removes at most one variable, and test the
//! reduced inequality with the greedy candidate that pushes every remaining
//! weight in the favorable direction.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::classifiers::{Class, IntegerThreshold, Perceptron};
use crate::conditions::{build_constraints, Condition, Instance, Literal, Op, Term};
use crate::error::Result;
use crate::Rational;

/// Value assigned to an eliminated variable in terms of the surviving ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Substitution {
    Keep,
    Const(bool),
    Same(usize),
    Opposite(usize),
}

/// `x.w + b >= 0` (class 1) or `x.w + b < 0` (class 0) over integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Inequality {
    weights: Vec<BigInt>,
    bias: BigInt,
    class: Class,
    subs: Vec<Substitution>,
}

impl Inequality {
    pub fn new(weights: Vec<BigInt>, bias: BigInt, class: Class) -> Inequality {
        let subs = alloc::vec![Substitution::Keep; weights.len()];
        Inequality {
            weights,
            bias,
            class,
            subs,
        }
    }

    /// For class 1 take every feature whose weight is non-negative; for class
    /// 0 take exactly the features with negative weight.
    pub fn candidate(&self) -> Vec<bool> {
        self.weights
            .iter()
            .map(|w| match self.class {
                Class::One => !w.is_negative(),
                Class::Zero => w.is_negative(),
            })
            .collect()
    }

    fn value(&self, x: &[bool]) -> BigInt {
        self.weights
            .iter()
            .zip(x)
            .filter(|(_, &b)| b)
            .fold(self.bias.clone(), |acc, (w, _)| acc + w)
    }

    fn holds(&self, value: &BigInt) -> bool {
        match self.class {
            Class::One => !value.is_negative(),
            Class::Zero => value.is_negative(),
        }
    }

    /// A solution of the inequality as an instance of the original
    /// perceptron, or `None` if it has none.
    pub fn solve(&self) -> Option<Instance> {
        let mut x = self.candidate();
        if !self.holds(&self.value(&x)) {
            return None;
        }
        for j in 0..x.len() {
            x[j] = match self.subs[j] {
                Substitution::Keep => x[j],
                Substitution::Const(d) => d,
                Substitution::Same(i) => x[i],
                Substitution::Opposite(i) => !x[i],
            };
        }
        Some(Instance::new(x))
    }

    /// The inequality restricted to instances satisfying `l`; `None` if `l`
    /// is unsatisfiable.
    pub fn restrict(&self, l: &Literal) -> Option<Inequality> {
        let mut out = self.clone();
        match (l.lhs(), l.rhs()) {
            (Term::Const(a), Term::Const(b)) => {
                // Constant literals are either always or never satisfied.
                return ((a == b) == (l.op() == Op::Eq)).then_some(out);
            }
            (Term::Var(i), Term::Const(d)) => {
                let value = if l.op() == Op::Eq { d } else { !d };
                let w = core::mem::take(&mut out.weights[i - 1]);
                if value {
                    out.bias += w;
                }
                out.subs[i - 1] = Substitution::Const(value);
            }
            (Term::Var(i), Term::Var(j)) if i == j => {
                return (l.op() == Op::Eq).then_some(out);
            }
            (Term::Var(i), Term::Var(j)) => {
                // i < j by canonical order; x_j is expressed through x_i.
                let wj = core::mem::take(&mut out.weights[j - 1]);
                match l.op() {
                    Op::Eq => {
                        out.weights[i - 1] += wj;
                        out.subs[j - 1] = Substitution::Same(i - 1);
                    }
                    Op::Neq => {
                        out.weights[i - 1] -= &wj;
                        out.bias += wj;
                        out.subs[j - 1] = Substitution::Opposite(i - 1);
                    }
                }
            }
            (Term::Const(_), Term::Var(_)) => unreachable!("literals are canonical"),
        }
        Some(out)
    }
}

/// Prepared per-(perceptron, class) checker.
#[derive(Debug, Clone)]
pub(crate) struct ThresholdEngine {
    base: Inequality,
}

impl ThresholdEngine {
    pub fn new(t: &IntegerThreshold, class: Class) -> ThresholdEngine {
        ThresholdEngine {
            base: Inequality::new(t.weights.clone(), t.bias.clone(), class),
        }
    }

    pub fn arity(&self) -> usize {
        self.base.weights.len()
    }

    pub fn counterexample(&self, phi: &Condition) -> Result<Option<Instance>> {
        let n = self.arity();
        let cs = build_constraints(phi, n)?;
        if cs.implies(&Literal::falsum()) {
            // No instance satisfies phi: any instance of the class refutes it.
            return Ok(self.base.solve());
        }
        for l in phi.literals() {
            if l.is_trivially_true() {
                continue;
            }
            if let Some(x) = self.base.restrict(&l.negate()).and_then(|r| r.solve()) {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }
}

/// Whether every instance the perceptron assigns to `class` satisfies `phi`.
pub fn is_necessary_perceptron(p: &Perceptron, class: Class, phi: &Condition) -> Result<bool> {
    phi.check_arity(p.arity())?;
    let engine = ThresholdEngine::new(&IntegerThreshold::new(p), class);
    Ok(engine.counterexample(phi)?.is_none())
}

/// The greedy maximizer (class 1) or minimizer (class 0) of `x.w` over {0,1}^n.
pub fn extremal_candidate(weights: &[Rational], class: Class) -> Instance {
    Instance::new(
        weights
            .iter()
            .map(|w| match class {
                Class::One => !w.is_negative(),
                Class::Zero => w.is_negative(),
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::parse_condition;
    use num_traits::Zero;

    fn check(w: &[i64], b: i64, c: Class, phi: &str) -> bool {
        let p = Perceptron::from_integers(w, b);
        is_necessary_perceptron(&p, c, &parse_condition(phi).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        assert!(check(&[1, 1], -2, Class::One, "v1=1"));
        assert!(!check(&[1, 1], -2, Class::One, "v1=0"));
        assert!(!check(&[1, -1], 0, Class::One, "v1=v2"));
        assert!(!check(&[1, -1], 0, Class::One, "v2=0"));
        assert!(check(&[1, -1], 0, Class::One, "true"));
    }

    #[test]
    fn unsatisfiable_condition() {
        // Class 1 is non-empty, so 0=1 is not necessary.
        assert!(!check(&[1, 1], -2, Class::One, "0=1"));
        // Nothing reaches the threshold.
        assert!(check(&[1, 1], -3, Class::One, "0=1"));
        assert!(check(&[1, 1], -3, Class::One, "v1=1 & v1=0"));
        // Class 0 of an always-1 perceptron is empty.
        assert!(check(&[1, 1], 0, Class::Zero, "0=1"));
        assert!(!check(&[1, 1], -1, Class::Zero, "0=1"));
    }

    #[test]
    fn class_zero_uses_strict_inequality() {
        // x1 - 1 < 0 only at x1 = 0; activation 0 at x1 = 1 is class 1.
        assert!(check(&[1], -1, Class::Zero, "v1=0"));
        assert!(!check(&[1], -1, Class::One, "v1=0"));
    }

    #[test]
    fn disequality_substitution() {
        // Class 1 iff x1 + x2 >= 2; the only model (1,1) has v1 = v2.
        assert!(check(&[1, 1], -2, Class::One, "v1=v2"));
        assert!(!check(&[1, 1], -1, Class::One, "v1=v2"));
        // 2 x1 - x2 >= 2 forces x1 = 1, x2 = 0; with bias -1, (1,1) sits on the boundary.
        assert!(check(&[2, -1], -2, Class::One, "v1!=v2"));
        assert!(!check(&[2, -1], -1, Class::One, "v1!=v2"));
    }

    #[test]
    fn restriction_eliminates_variables() {
        let base = Inequality::new(
            alloc::vec![BigInt::from(3), BigInt::from(-5)],
            BigInt::from(1),
            Class::One,
        );
        let r = base.restrict(&parse_condition("v1!=v2").unwrap().literals()[0]).unwrap();
        assert!(r.weights[1].is_zero());
        // x2 = 1 - x1: 3 x1 - 5 + 5 x1 + 1 = 8 x1 - 4, solved by x1 = 1.
        assert_eq!(r.solve(), Some(Instance::new(alloc::vec![true, false])));
        assert!(base.restrict(&Literal::falsum()).is_none());
    }

    #[test]
    fn counterexamples_refute() {
        let p = Perceptron::from_integers(&[2, -1, 1], -1);
        let t = IntegerThreshold::new(&p);
        for c in [Class::Zero, Class::One] {
            let e = ThresholdEngine::new(&t, c);
            for l in crate::conditions::all_literals(3) {
                let phi = Condition::literal(l);
                if let Some(x) = e.counterexample(&phi).unwrap() {
                    assert_eq!(p.classify(&x), c);
                    assert!(!phi.evaluate(&x).unwrap());
                }
            }
        }
    }
}
