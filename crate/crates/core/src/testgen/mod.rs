//! Seeded generators for models, conditions and CNF-derived networks.

mod cnf;
mod random;

pub use cnf::{brute_force_sat, build_satunsat_instance, cnf_to_mlp, random_cnf, CnfFormula, SAT_BOUND};
pub use random::{
    random_bdd, random_classifier, random_condition, random_dt, random_mlp, random_perceptron,
};
