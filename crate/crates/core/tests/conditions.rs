use num_bigint::BigUint;
use proptest::prelude::*;
use xnr_core::conditions::{all_literals, entails, model_count, parse_condition};
use xnr_core::{Condition, Instance, Literal, Op, Term};

fn instances(n: usize) -> impl Iterator<Item = Instance> {
    (0..1u64 << n).map(move |m| Instance::from_mask(m, n))
}

fn enumerated_entails(phi: &Condition, l: &Literal, n: usize) -> bool {
    instances(n).all(|x| !phi.evaluate(&x).unwrap() || l.evaluate(&x).unwrap())
}

fn term(n: usize) -> impl Strategy<Value = Term> {
    prop_oneof![
        1 => any::<bool>().prop_map(Term::Const),
        4 => (1..=n).prop_map(Term::Var),
    ]
}

fn literal(n: usize) -> impl Strategy<Value = Literal> {
    (term(n), any::<bool>(), term(n))
        .prop_map(|(a, eq, b)| Literal::new(a, if eq { Op::Eq } else { Op::Neq }, b))
}

/// `(n, phi, l)` with `n <= 6` and `phi` of at most 3 literals.
fn case() -> impl Strategy<Value = (usize, Condition, Literal)> {
    (1usize..=6).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(literal(n), 0..=3).prop_map(Condition::from_literals),
            literal(n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn entailment_matches_enumeration((n, phi, l) in case()) {
        prop_assert_eq!(entails(&phi, &l, n).unwrap(), enumerated_entails(&phi, &l, n));
    }

    #[test]
    fn model_count_matches_enumeration((n, phi, _l) in case()) {
        let count = instances(n).filter(|x| phi.evaluate(x).unwrap()).count();
        prop_assert_eq!(model_count(&phi, n).unwrap(), BigUint::from(count));
    }

    #[test]
    fn negation_partitions_instances((n, _phi, l) in case()) {
        let neg = l.negate();
        for x in instances(n) {
            prop_assert!(l.evaluate(&x).unwrap() ^ neg.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn print_parse_round_trip((_n, phi, _l) in case()) {
        prop_assert_eq!(parse_condition(&phi.to_string()).unwrap(), phi);
    }

    #[test]
    fn entailment_is_transitive((n, phi, l) in case(), extra in 0usize..1000) {
        // phi |= l and l |= k imply phi |= k, for k ranging over the language.
        let lits = all_literals(n);
        let k = lits[extra % lits.len()];
        let single = Condition::literal(l);
        if entails(&phi, &l, n).unwrap() && entails(&single, &k, n).unwrap() {
            prop_assert!(entails(&phi, &k, n).unwrap());
        }
    }
}

#[test]
fn entailment_is_reflexive() {
    for n in 1..=6 {
        for l in all_literals(n) {
            assert!(entails(&Condition::literal(l), &l, n).unwrap(), "{l}");
        }
    }
}

#[test]
fn literal_counts() {
    // (n + 2)(n + 3): unordered term pairs with repetition, times two operators.
    for n in 0..=12 {
        assert_eq!(all_literals(n).len(), (n + 2) * (n + 3), "n = {n}");
    }
    assert_eq!(all_literals(2).len() - all_literals(1).len(), 8);
}

#[test]
fn model_count_beyond_64_bits() {
    assert_eq!(model_count(&Condition::top(), 100).unwrap(), BigUint::from(1u8) << 100);
    let phi = parse_condition("v1 = v2 & v3 != 1").unwrap();
    assert_eq!(model_count(&phi, 100).unwrap(), BigUint::from(1u8) << 98);
}
