use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classifiers::{
    Bdd, BddEdge, BddNode, Class, Classifier, DecisionTree, Family, Layer, Mlp, Model, NodeLabel,
    Perceptron,
};
use crate::conditions::{Condition, Instance, Literal, Op, Term};
use crate::Rational;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform over the rationals `k/den` in `[-bound, bound]` with `den <= max_den`.
fn rational(rng: &mut ChaCha8Rng, bound: i64, max_den: i64) -> Rational {
    let den = rng.gen_range(1..=max_den);
    let num = rng.gen_range(-bound * den..=bound * den);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Target {
    Node(usize),
    Sink(bool),
}

struct Draft {
    level: usize,
    children: [Option<Target>; 2],
}

/// A layered diagram: features are tested in one random order, so no path
/// repeats a feature. Up to `internal_node_budget` decision nodes are placed
/// top-down, each hanging off a free edge of a shallower node, which keeps
/// every node reachable from the root.
pub fn random_bdd(n: usize, internal_node_budget: usize, seed: u64) -> Bdd {
    assert!(n > 0, "at least one feature");
    let mut rng = rng(seed);
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(&mut rng);

    let budget = internal_node_budget.max(1);
    let mut levels: Vec<usize> = (1..budget)
        .filter(|_| n > 1)
        .map(|_| rng.gen_range(1..n))
        .collect();
    levels.sort_unstable();

    let mut nodes = alloc::vec![Draft {
        level: 0,
        children: [None, None]
    }];
    let mut floor = 0;
    'place: for wanted in levels {
        let mut level = wanted.max(floor);
        loop {
            let open: Vec<(usize, usize)> = nodes
                .iter()
                .enumerate()
                .filter(|(_, d)| d.level < level)
                .flat_map(|(i, d)| (0..2).filter(move |&s| d.children[s].is_none()).map(move |s| (i, s)))
                .collect();
            if let Some(&(i, s)) = open.choose(&mut rng) {
                nodes[i].children[s] = Some(Target::Node(nodes.len()));
                nodes.push(Draft {
                    level,
                    children: [None, None],
                });
                floor = level;
                continue 'place;
            }
            level += 1;
            if level >= n {
                break 'place;
            }
        }
    }

    for i in 0..nodes.len() {
        let level = nodes[i].level;
        let mut below: Vec<Target> = (0..nodes.len())
            .filter(|&j| nodes[j].level > level)
            .map(Target::Node)
            .collect();
        below.extend([Target::Sink(false), Target::Sink(true)]);
        for s in 0..2 {
            if nodes[i].children[s].is_some() {
                continue;
            }
            let other = nodes[i].children[1 - s];
            let mut pick = *below.choose(&mut rng).expect("sinks are always available");
            for _ in 0..4 {
                if Some(pick) != other {
                    break;
                }
                pick = *below.choose(&mut rng).expect("sinks are always available");
            }
            nodes[i].children[s] = Some(pick);
        }
    }

    let internal = nodes.len();
    let used = |b: bool| {
        nodes
            .iter()
            .any(|d| d.children.contains(&Some(Target::Sink(b))))
    };
    let sink_id = |b: bool| internal + b as usize;
    let mut out_nodes: Vec<BddNode> = nodes
        .iter()
        .enumerate()
        .map(|(i, d)| BddNode {
            id: i,
            label: NodeLabel::Feature(order[d.level]),
        })
        .collect();
    for b in [false, true] {
        if used(b) {
            out_nodes.push(BddNode {
                id: sink_id(b),
                label: NodeLabel::Class(Class::from_bool(b)),
            });
        }
    }
    let mut edges = Vec::with_capacity(2 * internal);
    for (i, d) in nodes.iter().enumerate() {
        for (s, child) in d.children.iter().enumerate() {
            let to = match child.expect("every slot is filled") {
                Target::Node(j) => j,
                Target::Sink(b) => sink_id(b),
            };
            edges.push(BddEdge {
                from: i,
                to,
                value: s == 1,
            });
        }
    }
    Bdd::new(n, out_nodes, edges, 0)
}

/// A random decision tree of depth at most `depth` (at least one decision).
pub fn random_dt(n: usize, depth: usize, seed: u64) -> DecisionTree {
    assert!(n > 0, "at least one feature");
    let mut rng = rng(seed);
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut unused: Vec<usize> = (1..=n).collect();
    grow(&mut rng, &mut nodes, &mut edges, &mut unused, depth.clamp(1, n), true);
    DecisionTree::new(Bdd::new(n, nodes, edges, 0))
}

fn grow(
    rng: &mut ChaCha8Rng,
    nodes: &mut Vec<BddNode>,
    edges: &mut Vec<BddEdge>,
    unused: &mut Vec<usize>,
    depth: usize,
    root: bool,
) -> usize {
    let id = nodes.len();
    if depth == 0 || unused.is_empty() || (!root && rng.gen_bool(0.25)) {
        nodes.push(BddNode {
            id,
            label: NodeLabel::Class(Class::from_bool(rng.gen_bool(0.5))),
        });
        return id;
    }
    let feature = unused.swap_remove(rng.gen_range(0..unused.len()));
    nodes.push(BddNode {
        id,
        label: NodeLabel::Feature(feature),
    });
    for value in [false, true] {
        let child = grow(rng, nodes, edges, unused, depth - 1, false);
        edges.push(BddEdge { from: id, to: child, value });
    }
    unused.push(feature);
    id
}

/// Weights are rationals in `[-weight_bound, weight_bound]`; the bias puts the
/// decision boundary near a random instance.
pub fn random_perceptron(n: usize, weight_bound: i64, seed: u64) -> Perceptron {
    assert!(n > 0 && weight_bound > 0, "empty perceptron shape");
    let mut rng = rng(seed);
    let weights: Vec<Rational> = (0..n).map(|_| rational(&mut rng, weight_bound, 4)).collect();
    let anchor: Rational = weights
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .sum();
    let jitter = if rng.gen_bool(0.2) {
        Rational::from_integer(BigInt::from(0))
    } else {
        rational(&mut rng, weight_bound.max(2) / 2, 4)
    };
    Perceptron::new(weights, jitter - anchor)
}

/// ReLU layers of the given widths and a single output; the output bias puts
/// the boundary near a random instance.
pub fn random_mlp(n: usize, hidden_widths: &[usize], weight_bound: i64, seed: u64) -> Mlp {
    assert!(n > 0 && weight_bound > 0, "empty network shape");
    let mut rng = rng(seed);
    let mut layers = Vec::with_capacity(hidden_widths.len() + 1);
    let mut width = n;
    for &w in hidden_widths.iter().chain([&1]) {
        let weights = (0..width)
            .map(|_| (0..w).map(|_| rational(&mut rng, weight_bound, 2)).collect())
            .collect();
        let bias = (0..w).map(|_| rational(&mut rng, weight_bound, 2)).collect();
        layers.push(Layer::new(weights, bias));
        width = w;
    }
    let mut mlp = Mlp::new(layers);
    let anchor = Instance::new((0..n).map(|_| rng.gen_bool(0.5)).collect());
    let last = mlp.layers.len() - 1;
    mlp.layers[last].bias[0] = Rational::from_integer(BigInt::from(0));
    let at_anchor = mlp.output_activation(&anchor);
    let jitter = if rng.gen_bool(0.2) {
        Rational::from_integer(BigInt::from(0))
    } else {
        rational(&mut rng, weight_bound, 2)
    };
    mlp.layers[last].bias[0] = jitter - at_anchor;
    mlp
}

/// Up to `max_literals` literals, mostly over variables.
pub fn random_condition(n: usize, max_literals: usize, seed: u64) -> Condition {
    let mut rng = rng(seed);
    let k = rng.gen_range(0..=max_literals);
    (0..k).map(|_| random_literal(&mut rng, n)).collect()
}

pub(crate) fn random_literal(rng: &mut ChaCha8Rng, n: usize) -> Literal {
    let term = |rng: &mut ChaCha8Rng| {
        if n == 0 || rng.gen_bool(0.2) {
            Term::Const(rng.gen_bool(0.5))
        } else {
            Term::Var(rng.gen_range(1..=n))
        }
    };
    let a = term(rng);
    let b = term(rng);
    let op = if rng.gen_bool(0.5) { Op::Eq } else { Op::Neq };
    Literal::new(a, op, b)
}

/// A valid classifier of the family with default generator parameters:
/// BDDs get `3n` decision nodes, trees depth `min(n, 6)`, perceptrons weight
/// bound 4, MLPs one or two hidden layers of width up to 4.
pub fn random_classifier(family: Family, n: usize, seed: u64) -> Classifier {
    let model: Model = match family {
        Family::Bdd => random_bdd(n, 3 * n, seed).into(),
        Family::DecisionTree => random_dt(n, n.min(6), seed).into(),
        Family::Perceptron => random_perceptron(n, 4, seed).into(),
        Family::Mlp => {
            let mut r = rng(seed ^ 0x6d6c70);
            let hidden: Vec<usize> = (0..r.gen_range(1..=2)).map(|_| r.gen_range(1..=4)).collect();
            random_mlp(n, &hidden, 3, seed).into()
        }
    };
    Classifier::new(model).expect("generators emit valid models")
}
