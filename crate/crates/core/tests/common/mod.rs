#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xnr_core::conditions::all_literals;
use xnr_core::oracle::Oracle;
use xnr_core::testgen::{random_bdd, random_dt, random_mlp, random_perceptron};
use xnr_core::{Class, Classifier, Condition, Family, Literal, Op, Term};

pub const FAMILIES: [Family; 4] = [Family::Perceptron, Family::Bdd, Family::DecisionTree, Family::Mlp];

pub fn max_arity(family: Family) -> usize {
    match family {
        Family::Mlp => 12,
        _ => 10,
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_literal(rng: &mut ChaCha8Rng, n: usize) -> Literal {
    let mut term = || {
        if rng.gen_bool(0.2) {
            Term::Const(rng.gen_bool(0.5))
        } else {
            Term::Var(rng.gen_range(1..=n))
        }
    };
    let (a, b) = (term(), term());
    let op = if rng.gen_bool(0.5) { Op::Eq } else { Op::Neq };
    Literal::new(a, op, b)
}

/// A classifier of `family` with arity `n`, varying the generator shape
/// with the seed.
pub fn random_model(family: Family, n: usize, seed: u64) -> Classifier {
    let mut r = rng(seed ^ 0x5eed);
    let model = match family {
        Family::Perceptron => random_perceptron(n, r.gen_range(1..=5), seed).into(),
        Family::Bdd => random_bdd(n, r.gen_range(1..=4 * n), seed).into(),
        Family::DecisionTree => random_dt(n, r.gen_range(1..=n.min(7)), seed).into(),
        Family::Mlp => {
            let hidden: Vec<usize> = (0..r.gen_range(1..=2)).map(|_| r.gen_range(1..=4)).collect();
            random_mlp(n, &hidden, r.gen_range(1..=3), seed).into()
        }
    };
    Classifier::new(model).expect("generated models validate")
}

/// One (model, class) pair with its ground truth and the conditions to test.
pub struct Group {
    pub model: Classifier,
    pub class: Class,
    pub oracle: Oracle,
    pub conditions: Vec<Condition>,
}

impl Group {
    pub fn arity(&self) -> usize {
        self.model.arity()
    }
}

/// Non-tautological necessary literals from the oracle.
pub fn informative(oracle: &Oracle) -> Vec<Literal> {
    oracle
        .necessary_literals()
        .iter()
        .copied()
        .filter(|l| !l.is_trivially_true())
        .collect()
}

/// Condition mix per group: random conditions, subsets of necessary
/// literals, the conjunction of all necessary literals, and a necessary
/// subset extended by one random literal.
fn conditions(oracle: &Oracle, n: usize, per_group: usize, r: &mut ChaCha8Rng) -> Vec<Condition> {
    let nec = informative(oracle);
    let mut out = vec![Condition::from_literals(nec.iter().copied())];
    while out.len() < per_group {
        let subset = |r: &mut ChaCha8Rng| -> Vec<Literal> {
            let k = r.gen_range(0..=nec.len().min(4));
            nec.choose_multiple(r, k).copied().collect()
        };
        let phi = match out.len() % 4 {
            0 => (0..r.gen_range(0..=3)).map(|_| random_literal(r, n)).collect(),
            1 => Condition::from_literals(subset(r)),
            2 => Condition::from_literals(subset(r)).and(random_literal(r, n)),
            _ => {
                // Pick from the full language so tautologies and
                // contradictions show up too.
                let all = all_literals(n);
                (0..r.gen_range(1..=2)).map(|_| *all.choose(r).unwrap()).collect()
            }
        };
        out.push(phi);
    }
    out
}

/// `models` (model, class) groups of `family` with `per_group` conditions
/// each. Arities cycle through `1..=max_arity`.
pub fn population(family: Family, models: usize, per_group: usize, seed: u64) -> Vec<Group> {
    let mut r = rng(seed);
    let max = max_arity(family);
    (0..models)
        .map(|i| {
            let n = 1 + i % max;
            let model = random_model(family, n, r.gen());
            let class = Class::from_bool(r.gen_bool(0.5));
            let oracle = Oracle::new(&model, class, 16).expect("arity within oracle bound");
            let conditions = conditions(&oracle, n, per_group, &mut r);
            Group {
                model,
                class,
                oracle,
                conditions,
            }
        })
        .collect()
}
