use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classifiers::{Class, Layer, Mlp};
use crate::conditions::{Condition, Instance, Literal, Term};
use crate::error::{Error, Result};
use crate::Rational;

/// Largest variable count [`brute_force_sat`] accepts.
pub const SAT_BOUND: usize = 20;

/// A CNF over variables `1..=num_vars`; literal `k` is `x_k`, `-k` its negation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<CnfFormula> {
        let f = CnfFormula { num_vars, clauses };
        f.check()?;
        Ok(f)
    }

    fn check(&self) -> Result<()> {
        for (i, clause) in self.clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(Error::InvalidCnf(format!("clause {} is empty", i + 1)));
            }
            if let Some(&lit) = clause
                .iter()
                .find(|&&l| l == 0 || l.unsigned_abs() as usize > self.num_vars)
            {
                return Err(Error::InvalidCnf(format!(
                    "literal {lit} in clause {} outside 1..={}",
                    i + 1,
                    self.num_vars
                )));
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &Instance) -> bool {
        self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|&l| x.bit(l.unsigned_abs() as usize) == (l > 0))
        })
    }

    fn evaluate_mask(&self, mask: u64) -> bool {
        self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|&l| ((mask >> (l.unsigned_abs() - 1)) & 1 == 1) == (l > 0))
        })
    }
}

/// Exhaustive satisfiability, up to [`SAT_BOUND`] variables.
pub fn brute_force_sat(f: &CnfFormula) -> Result<bool> {
    if f.num_vars > SAT_BOUND {
        return Err(Error::BoundExceeded {
            what: "brute-force SAT",
            arity: f.num_vars,
            bound: SAT_BOUND,
        });
    }
    Ok((0..1u64 << f.num_vars).any(|m| f.evaluate_mask(m)))
}

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Two-layer network computing the formula.
///
/// Hidden neuron `j` outputs `relu(1 - s_j)` where `s_j` counts the true
/// literals of clause `j`; on binary inputs that is 1 exactly when the clause
/// is falsified. The output neuron fires iff the hidden outputs sum to 0.
pub fn cnf_to_mlp(f: &CnfFormula) -> Result<Mlp> {
    f.check()?;
    if f.clauses.is_empty() || f.num_vars == 0 {
        return Err(Error::InvalidCnf("formula has no clauses or no variables".into()));
    }
    let m = f.clauses.len();
    let mut weights = alloc::vec![alloc::vec![int(0); m]; f.num_vars];
    let mut bias = Vec::with_capacity(m);
    for (j, clause) in f.clauses.iter().enumerate() {
        let mut negatives = 0;
        for &l in clause {
            let row = l.unsigned_abs() as usize - 1;
            if l > 0 {
                weights[row][j] -= int(1);
            } else {
                weights[row][j] += int(1);
                negatives += 1;
            }
        }
        bias.push(int(1 - negatives));
    }
    let output = Layer::new(alloc::vec![alloc::vec![int(-1)]; m], alloc::vec![int(0)]);
    Ok(Mlp::new(alloc::vec![Layer::new(weights, bias), output]))
}

/// Builds `(M, 1, v_d = 1)` for `(gamma | g) & (delta | d)`, with gamma's
/// variables first, then delta's, then `g`, then `d`. The condition is a
/// minimal necessary reason iff gamma is satisfiable and delta is not.
pub fn build_satunsat_instance(gamma: &CnfFormula, delta: &CnfFormula) -> Result<(Mlp, Class, Condition)> {
    gamma.check()?;
    delta.check()?;
    let p = gamma.num_vars as i32;
    let q = delta.num_vars as i32;
    let g = p + q + 1;
    let d = p + q + 2;
    let mut clauses = Vec::with_capacity(gamma.clauses.len() + delta.clauses.len());
    for c in &gamma.clauses {
        let mut c = c.clone();
        c.push(g);
        clauses.push(c);
    }
    for c in &delta.clauses {
        let mut c: Vec<i32> = c.iter().map(|&l| if l > 0 { l + p } else { l - p }).collect();
        c.push(d);
        clauses.push(c);
    }
    let psi = CnfFormula::new(d as usize, clauses)?;
    let phi = Condition::literal(Literal::eq(Term::Var(d as usize), Term::ONE));
    Ok((cnf_to_mlp(&psi)?, Class::One, phi))
}

/// Uniform random `width`-CNF with distinct variables per clause (as far as
/// `num_vars` allows) and random signs.
pub fn random_cnf(num_vars: usize, num_clauses: usize, width: usize, seed: u64) -> CnfFormula {
    assert!(num_vars > 0 && width > 0, "empty CNF shape");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = width.min(num_vars);
    let clauses = (0..num_clauses)
        .map(|_| {
            let mut vars: Vec<i32> = Vec::with_capacity(width);
            while vars.len() < width {
                let v = rng.gen_range(1..=num_vars as i32);
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            vars.into_iter()
                .map(|v| if rng.gen_bool(0.5) { v } else { -v })
                .collect()
        })
        .collect();
    CnfFormula { num_vars, clauses }
}
