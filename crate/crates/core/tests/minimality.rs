mod common;

use xnr_core::conditions::{all_literals, condition_equivalent, entails};
use xnr_core::minimality::{
    decide_min_via_find, find_min_necessary_with, is_min_necessary_with, ScanOrder,
};
use xnr_core::oracle::condition_models;
use xnr_core::{find_min_necessary, is_min_necessary, is_necessary, Bounds, Condition, Preorder};

use common::{informative, population, FAMILIES};

#[test]
fn synthesized_reasons_are_fixpoints() {
    for (i, family) in FAMILIES.into_iter().enumerate() {
        for g in population(family, 40, 1, 800 + i as u64) {
            let n = g.arity();
            let e = find_min_necessary(&g.model, g.class).unwrap();
            assert!(e.minimal);
            assert_eq!(e.family, family);
            for l in all_literals(n) {
                if !entails(&e.condition, &l, n).unwrap() {
                    assert!(!is_necessary(&g.model, g.class, &Condition::literal(l)).unwrap());
                }
            }
            // Pruning keeps the model set of the greedy trace.
            let trace = Condition::from_literals(e.added_literals.iter().copied());
            assert!(condition_equivalent(&trace, &e.condition, n).unwrap());
        }
    }
}

#[test]
fn scan_order_does_not_change_models() {
    for (i, family) in FAMILIES.into_iter().enumerate() {
        for g in population(family, 40, 1, 900 + i as u64) {
            let b = Bounds::default();
            let a = find_min_necessary_with(&g.model, g.class, ScanOrder::Canonical, &b).unwrap();
            let r = find_min_necessary_with(&g.model, g.class, ScanOrder::Reversed, &b).unwrap();
            assert!(condition_equivalent(&a.condition, &r.condition, g.arity()).unwrap());
        }
    }
}

#[test]
fn decide_via_find_agrees() {
    for (i, family) in FAMILIES.into_iter().enumerate() {
        for g in population(family, 25, 8, 1000 + i as u64) {
            for phi in &g.conditions {
                assert_eq!(
                    decide_min_via_find(&g.model, g.class, phi).unwrap(),
                    is_min_necessary(&g.model, g.class, phi).unwrap(),
                    "{} phi {phi}",
                    family.name()
                );
            }
        }
    }
}

#[test]
fn engines_agree_with_oracle() {
    for (i, family) in FAMILIES.into_iter().enumerate() {
        for g in population(family, 40, 8, 1100 + i as u64) {
            for phi in &g.conditions {
                assert_eq!(
                    is_min_necessary(&g.model, g.class, phi).unwrap(),
                    g.oracle.is_min_necessary(phi).unwrap(),
                    "{} n={} phi {phi}",
                    family.name(),
                    g.arity()
                );
            }
        }
    }
}

#[test]
fn preorders_give_the_same_answer() {
    for g in population(FAMILIES[0], 20, 6, 1200) {
        for phi in &g.conditions {
            let b = Bounds::default();
            assert_eq!(
                is_min_necessary_with(&g.model, g.class, phi, Preorder::Cardinality, &b).unwrap(),
                is_min_necessary_with(&g.model, g.class, phi, Preorder::Subset, &b).unwrap()
            );
        }
    }
}

#[test]
fn minimal_reason_has_the_minimal_model_set() {
    for (i, family) in FAMILIES.into_iter().enumerate() {
        for g in population(family, 30, 1, 1300 + i as u64) {
            let e = find_min_necessary(&g.model, g.class).unwrap();
            let models = condition_models(&e.condition, g.arity(), 16).unwrap();
            assert_eq!(models, g.oracle.minimal_model_set());
            let all = Condition::from_literals(informative(&g.oracle));
            assert!(g.oracle.is_min_necessary(&all).unwrap());
        }
    }
}
