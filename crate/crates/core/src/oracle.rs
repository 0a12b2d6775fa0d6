//! Brute-force ground truth.
//!
//! Everything here is computed by classifying and evaluating every instance
//! of {0,1}^n. Minimality is characterized through the minimal model set
//! (the intersection of the models of all necessary literals) and never
//! through entailment, so these answers are independent of the engines.

use alloc::vec::Vec;

use crate::classifiers::{Class, Classifier};
use crate::conditions::{all_literals, Condition, Instance, Literal};
use crate::error::{Error, Result};

/// Hard ceiling from packing instances into a `u64`.
const MASK_BITS: usize = 63;

/// `Mod(M, c)`: the instances `M` assigns to `c`, in increasing mask order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassModelSet {
    arity: usize,
    masks: Vec<u64>,
}

impl ClassModelSet {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn contains(&self, x: &Instance) -> bool {
        x.to_mask()
            .is_some_and(|m| x.len() == self.arity && self.masks.binary_search(&m).is_ok())
    }

    pub fn instances(&self) -> impl Iterator<Item = Instance> + '_ {
        self.masks.iter().map(|&m| Instance::from_mask(m, self.arity))
    }
}

fn check_bound(n: usize, bound: usize) -> Result<()> {
    let bound = bound.min(MASK_BITS);
    if n > bound {
        return Err(Error::BoundExceeded {
            what: "brute-force oracle",
            arity: n,
            bound,
        });
    }
    Ok(())
}

fn all_instances(n: usize) -> impl Iterator<Item = (u64, Instance)> {
    (0..1u64 << n).map(move |m| (m, Instance::from_mask(m, n)))
}

pub fn enumerate_class_models(m: &Classifier, class: Class, bound: usize) -> Result<ClassModelSet> {
    let n = m.arity();
    check_bound(n, bound)?;
    let mut masks = Vec::new();
    for (mask, x) in all_instances(n) {
        if m.classify(&x)? == class {
            masks.push(mask);
        }
    }
    Ok(ClassModelSet { arity: n, masks })
}

/// Models of `phi` among all instances, in increasing mask order.
pub fn condition_models(phi: &Condition, n: usize, bound: usize) -> Result<Vec<u64>> {
    check_bound(n, bound)?;
    phi.check_arity(n)?;
    let mut out = Vec::new();
    for (mask, x) in all_instances(n) {
        if phi.evaluate(&x)? {
            out.push(mask);
        }
    }
    Ok(out)
}

/// Prepared ground truth for one (classifier, class) pair.
#[derive(Debug, Clone)]
pub struct Oracle {
    class_models: ClassModelSet,
    necessary: Vec<Literal>,
    minimal: Vec<u64>,
}

impl Oracle {
    pub fn new(m: &Classifier, class: Class, bound: usize) -> Result<Oracle> {
        let class_models = enumerate_class_models(m, class, bound)?;
        let n = class_models.arity;
        let models: Vec<Instance> = class_models.instances().collect();
        let necessary: Vec<Literal> = all_literals(n)
            .into_iter()
            .filter(|l| models.iter().all(|x| literal_holds(l, x)))
            .collect();
        let minimal = all_instances(n)
            .filter(|(_, x)| necessary.iter().all(|l| literal_holds(l, x)))
            .map(|(mask, _)| mask)
            .collect();
        Ok(Oracle {
            class_models,
            necessary,
            minimal,
        })
    }

    pub fn arity(&self) -> usize {
        self.class_models.arity
    }

    pub fn class_models(&self) -> &ClassModelSet {
        &self.class_models
    }

    /// Every literal satisfied by all instances of the class, canonical order.
    pub fn necessary_literals(&self) -> &[Literal] {
        &self.necessary
    }

    /// `M*`: instances satisfying every necessary literal, increasing mask order.
    pub fn minimal_model_set(&self) -> &[u64] {
        &self.minimal
    }

    pub fn is_necessary(&self, phi: &Condition) -> Result<bool> {
        phi.check_arity(self.arity())?;
        let mut ok = true;
        for x in self.class_models.instances() {
            if !phi.evaluate(&x)? {
                ok = false;
                break;
            }
        }
        Ok(ok)
    }

    /// Necessary and with exactly `M*` as its model set. Equality with `M*`
    /// is what both cardinality- and inclusion-minimality come down to, since
    /// every necessary condition's models contain `M*`.
    pub fn is_min_necessary(&self, phi: &Condition) -> Result<bool> {
        Ok(self.is_necessary(phi)?
            && condition_models(phi, self.arity(), MASK_BITS)? == self.minimal)
    }
}

fn literal_holds(l: &Literal, x: &Instance) -> bool {
    l.evaluate(x).expect("literal within arity")
}

pub fn necessary_literal_set(m: &Classifier, class: Class, bound: usize) -> Result<Vec<Literal>> {
    Ok(Oracle::new(m, class, bound)?.necessary)
}

pub fn minimal_model_set(m: &Classifier, class: Class, bound: usize) -> Result<Vec<Instance>> {
    let o = Oracle::new(m, class, bound)?;
    let n = o.arity();
    Ok(o.minimal.iter().map(|&mask| Instance::from_mask(mask, n)).collect())
}

pub fn oracle_is_necessary(m: &Classifier, class: Class, phi: &Condition, bound: usize) -> Result<bool> {
    let models = enumerate_class_models(m, class, bound)?;
    phi.check_arity(models.arity)?;
    for x in models.instances() {
        if !phi.evaluate(&x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn oracle_is_min_necessary(
    m: &Classifier,
    class: Class,
    phi: &Condition,
    bound: usize,
) -> Result<bool> {
    Oracle::new(m, class, bound)?.is_min_necessary(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::{Bdd, Perceptron};
    use crate::conditions::parse_condition;

    fn classifier(w: &[i64], b: i64) -> Classifier {
        Classifier::new(Perceptron::from_integers(w, b).into()).unwrap()
    }

    fn lit(s: &str) -> Literal {
        parse_condition(s).unwrap().literals()[0]
    }

    #[test]
    fn class_models_example() {
        let m = classifier(&[1, -1], 0);
        let ones = enumerate_class_models(&m, Class::One, 16).unwrap();
        // (0,0), (1,0), (1,1) as masks with v1 at bit 0.
        assert_eq!(ones.masks(), &[0b00, 0b01, 0b11]);
        let zeros = enumerate_class_models(&m, Class::Zero, 16).unwrap();
        assert_eq!(zeros.masks(), &[0b10]);
        let empty = Classifier::new(Bdd::constant(3, Class::Zero).into()).unwrap();
        assert!(enumerate_class_models(&empty, Class::One, 16).unwrap().is_empty());
    }

    #[test]
    fn necessary_literals_example() {
        let m = classifier(&[1, 1], -2);
        let nec = necessary_literal_set(&m, Class::One, 16).unwrap();
        for s in ["v1=1", "v2=1", "v1=v2", "v1!=0", "0!=1", "v1=v1"] {
            assert!(nec.contains(&lit(s)), "{s}");
        }
        assert!(!nec.contains(&lit("v1=0")));

        let m = classifier(&[1, -1], 0);
        let nec = necessary_literal_set(&m, Class::One, 16).unwrap();
        assert!(nec.iter().all(Literal::is_trivially_true));

        let empty = Classifier::new(Bdd::constant(2, Class::Zero).into()).unwrap();
        assert_eq!(necessary_literal_set(&empty, Class::One, 16).unwrap(), all_literals(2));
    }

    #[test]
    fn minimal_model_set_example() {
        let m = classifier(&[1, 1], -2);
        assert_eq!(
            minimal_model_set(&m, Class::One, 16).unwrap(),
            [Instance::from_mask(0b11, 2)]
        );
        let m = classifier(&[1, -1], 0);
        assert_eq!(minimal_model_set(&m, Class::One, 16).unwrap().len(), 4);
    }

    #[test]
    fn minimality_examples() {
        let m = classifier(&[1, 1], -2);
        let o = Oracle::new(&m, Class::One, 16).unwrap();
        assert!(o.is_min_necessary(&parse_condition("v1=1 & v2=1").unwrap()).unwrap());
        assert!(!o.is_min_necessary(&parse_condition("v1=1").unwrap()).unwrap());
        assert!(o.is_necessary(&Condition::top()).unwrap());
        let m = classifier(&[1, -1], 0);
        assert!(oracle_is_min_necessary(&m, Class::One, &Condition::top(), 16).unwrap());
    }

    #[test]
    fn bound_is_enforced() {
        let m = classifier(&[1; 20], 0);
        assert!(matches!(
            enumerate_class_models(&m, Class::One, 16),
            Err(Error::BoundExceeded { arity: 20, bound: 16, .. })
        ));
    }
}
