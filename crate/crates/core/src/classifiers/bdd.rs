use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::{Class, Violation, ViolationKind};
use crate::conditions::Instance;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeLabel {
    /// Tests feature `v_i` (1-based).
    Feature(usize),
    Class(Class),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BddNode {
    pub id: usize,
    pub label: NodeLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BddEdge {
    pub from: usize,
    pub to: usize,
    pub value: bool,
}

/// A free binary decision diagram as an explicit labeled graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bdd {
    pub arity: usize,
    pub nodes: Vec<BddNode>,
    pub edges: Vec<BddEdge>,
    pub root: usize,
}

impl Bdd {
    pub fn new(arity: usize, nodes: Vec<BddNode>, edges: Vec<BddEdge>, root: usize) -> Bdd {
        Bdd {
            arity,
            nodes,
            edges,
            root,
        }
    }

    /// A single sink: every instance gets `class`.
    pub fn constant(arity: usize, class: Class) -> Bdd {
        Bdd::new(
            arity,
            alloc::vec![BddNode {
                id: 0,
                label: NodeLabel::Class(class),
            }],
            Vec::new(),
            0,
        )
    }

    pub fn internal_nodes(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n.label, NodeLabel::Feature(_)))
            .count()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.arity == 0 {
            out.push(Violation::new(ViolationKind::Arity, "at least one feature is required"));
        }
        let mut index = BTreeMap::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if index.insert(node.id, i).is_some() {
                out.push(Violation::new(
                    ViolationKind::DuplicateId,
                    format!("node id {} appears twice", node.id),
                ));
            }
            if let NodeLabel::Feature(f) = node.label {
                if f == 0 || f > self.arity {
                    out.push(Violation::new(
                        ViolationKind::FeatureRange,
                        format!("node {} tests v{f} outside 1..={}", node.id, self.arity),
                    ));
                }
            }
        }
        if !out.is_empty() {
            return out;
        }

        let size = self.nodes.len();
        let mut outgoing: Vec<Vec<(usize, bool)>> = alloc::vec![Vec::new(); size];
        let mut indegree = alloc::vec![0usize; size];
        for e in &self.edges {
            match (index.get(&e.from), index.get(&e.to)) {
                (Some(&a), Some(&b)) => {
                    outgoing[a].push((b, e.value));
                    indegree[b] += 1;
                }
                _ => out.push(Violation::new(
                    ViolationKind::DanglingEdge,
                    format!("edge {} -> {} references an unknown node", e.from, e.to),
                )),
            }
        }

        for (i, node) in self.nodes.iter().enumerate() {
            let edges = &outgoing[i];
            match node.label {
                NodeLabel::Class(_) if !edges.is_empty() => out.push(Violation::new(
                    ViolationKind::OutDegree,
                    format!("class-labeled node {} has outgoing edges", node.id),
                )),
                NodeLabel::Feature(_) if edges.len() != 2 => out.push(Violation::new(
                    ViolationKind::OutDegree,
                    format!("node {} has {} outgoing edges, expected 2", node.id, edges.len()),
                )),
                NodeLabel::Feature(_) if edges[0].1 == edges[1].1 => out.push(Violation::new(
                    ViolationKind::EdgeLabels,
                    format!("both outgoing edges of node {} are labeled {}", node.id, edges[0].1 as u8),
                )),
                _ => {}
            }
        }

        let roots: Vec<usize> = (0..size).filter(|&i| indegree[i] == 0).collect();
        match roots.as_slice() {
            [r] if self.nodes[*r].id == self.root => {}
            [r] => out.push(Violation::new(
                ViolationKind::NotRooted,
                format!("declared root {} but node {} has no incoming edges", self.root, self.nodes[*r].id),
            )),
            [] if size == 0 => out.push(Violation::new(ViolationKind::NotRooted, "no nodes")),
            [] => {}
            many => out.push(Violation::new(
                ViolationKind::NotRooted,
                format!("{} nodes have no incoming edges", many.len()),
            )),
        }

        let Some(order) = topological_order(&outgoing, &indegree) else {
            out.push(Violation::new(ViolationKind::Cycle, "the graph has a directed cycle"));
            return out;
        };
        if !out.is_empty() {
            return out;
        }

        // A feature repeats on some root path iff a node shares its feature
        // with one of its ancestors.
        let words = self.arity / 64 + 1;
        let mut above: Vec<Vec<u64>> = alloc::vec![alloc::vec![0; words]; size];
        for &u in &order {
            let mut here = above[u].clone();
            if let NodeLabel::Feature(f) = self.nodes[u].label {
                if above[u][f / 64] >> (f % 64) & 1 == 1 {
                    out.push(Violation::new(
                        ViolationKind::RepeatedLabel,
                        format!("v{f} is tested twice on a path through node {}", self.nodes[u].id),
                    ));
                }
                here[f / 64] |= 1 << (f % 64);
            }
            for &(v, _) in &outgoing[u] {
                for (a, b) in above[v].iter_mut().zip(&here) {
                    *a |= *b;
                }
            }
        }
        out
    }

    /// Index-based form used for evaluation. Fails on invalid diagrams.
    pub fn graph(&self) -> Result<BddGraph> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidModel(violations));
        }
        let index: BTreeMap<usize, usize> =
            self.nodes.iter().enumerate().map(|(i, n)| (n.id, i)).collect();
        let mut children = alloc::vec![[usize::MAX; 2]; self.nodes.len()];
        for e in &self.edges {
            children[index[&e.from]][e.value as usize] = index[&e.to];
        }
        let nodes = self
            .nodes
            .iter()
            .zip(children)
            .map(|(n, [low, high])| match n.label {
                NodeLabel::Class(c) => GraphNode::Sink(c),
                NodeLabel::Feature(feature) => GraphNode::Decision { feature, low, high },
            })
            .collect();
        Ok(BddGraph {
            arity: self.arity,
            root: index[&self.root],
            nodes,
        })
    }
}

fn topological_order(outgoing: &[Vec<(usize, bool)>], indegree: &[usize]) -> Option<Vec<usize>> {
    let mut remaining = indegree.to_vec();
    let mut stack: Vec<usize> = (0..remaining.len()).filter(|&i| remaining[i] == 0).collect();
    let mut order = Vec::with_capacity(remaining.len());
    while let Some(u) = stack.pop() {
        order.push(u);
        for &(v, _) in &outgoing[u] {
            remaining[v] -= 1;
            if remaining[v] == 0 {
                stack.push(v);
            }
        }
    }
    (order.len() == remaining.len()).then_some(order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphNode {
    Sink(Class),
    Decision { feature: usize, low: usize, high: usize },
}

/// A validated BDD with nodes addressed by position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BddGraph {
    pub arity: usize,
    pub root: usize,
    pub nodes: Vec<GraphNode>,
}

impl BddGraph {
    fn walk(&self, value: impl Fn(usize) -> bool) -> Class {
        #[cfg(debug_assertions)]
        let mut seen = alloc::vec![false; self.arity + 1];
        let mut u = self.root;
        loop {
            match self.nodes[u] {
                GraphNode::Sink(c) => return c,
                GraphNode::Decision { feature, low, high } => {
                    #[cfg(debug_assertions)]
                    {
                        assert!(!seen[feature], "v{feature} tested twice on one path");
                        seen[feature] = true;
                    }
                    u = if value(feature) { high } else { low };
                }
            }
        }
    }

    pub fn classify(&self, x: &Instance) -> Class {
        self.walk(|f| x.bit(f))
    }

    pub(crate) fn classify_mask(&self, mask: u64) -> Class {
        self.walk(|f| (mask >> (f - 1)) & 1 == 1)
    }

    /// Marks the nodes from which a `class` sink is reachable.
    pub fn reaches(&self, class: Class) -> Vec<bool> {
        let mut memo: Vec<Option<bool>> = alloc::vec![None; self.nodes.len()];
        let mut stack = alloc::vec![(self.root, false)];
        while let Some((u, expanded)) = stack.pop() {
            if memo[u].is_some() {
                continue;
            }
            match self.nodes[u] {
                GraphNode::Sink(c) => memo[u] = Some(c == class),
                GraphNode::Decision { low, high, .. } => {
                    if expanded {
                        memo[u] = Some(memo[low] == Some(true) || memo[high] == Some(true));
                    } else {
                        stack.push((u, true));
                        for v in [low, high] {
                            if memo[v].is_none() {
                                stack.push((v, false));
                            }
                        }
                    }
                }
            }
        }
        memo.into_iter().map(|m| m.unwrap_or(false)).collect()
    }
}

/// A BDD whose underlying graph is a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTree(Bdd);

impl DecisionTree {
    /// Wraps a diagram without checking the tree shape; see [`DecisionTree::validate`].
    pub fn new(bdd: Bdd) -> DecisionTree {
        DecisionTree(bdd)
    }

    pub fn bdd(&self) -> &Bdd {
        &self.0
    }

    pub fn into_bdd(self) -> Bdd {
        self.0
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = self.0.validate();
        let mut indegree: BTreeMap<usize, usize> = BTreeMap::new();
        for e in &self.0.edges {
            *indegree.entry(e.to).or_default() += 1;
        }
        for (id, d) in indegree {
            if d > 1 {
                out.push(Violation::new(
                    ViolationKind::NotTree,
                    format!("node {id} has {d} incoming edges"),
                ));
            }
        }
        out
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn feature(id: usize, f: usize) -> BddNode {
        BddNode {
            id,
            label: NodeLabel::Feature(f),
        }
    }

    fn sink(id: usize, c: Class) -> BddNode {
        BddNode {
            id,
            label: NodeLabel::Class(c),
        }
    }

    fn edge(from: usize, to: usize, value: u8) -> BddEdge {
        BddEdge {
            from,
            to,
            value: value == 1,
        }
    }

    /// Class 1 iff v1 = 1 and v2 = 1.
    pub(crate) fn and_bdd() -> Bdd {
        Bdd::new(
            2,
            alloc::vec![
                feature(0, 1),
                feature(1, 2),
                sink(2, Class::Zero),
                sink(3, Class::One)
            ],
            alloc::vec![edge(0, 1, 1), edge(0, 2, 0), edge(1, 3, 1), edge(1, 2, 0)],
            0,
        )
    }

    fn kinds(b: &Bdd) -> Vec<ViolationKind> {
        b.validate().into_iter().map(|v| v.kind).collect()
    }

    #[test]
    fn classify_follows_the_path() {
        let g = and_bdd().graph().unwrap();
        let cls = |bits: [bool; 2]| g.classify(&Instance::new(bits.to_vec()));
        assert_eq!(cls([true, true]), Class::One);
        assert_eq!(cls([true, false]), Class::Zero);
        assert_eq!(cls([false, true]), Class::Zero);
    }

    #[test]
    fn valid_examples() {
        assert!(and_bdd().validate().is_empty());
        assert!(Bdd::constant(3, Class::Zero).validate().is_empty());
        assert!(DecisionTree::new(Bdd::constant(1, Class::One)).validate().is_empty());
    }

    #[test]
    fn edge_label_violation() {
        let mut b = and_bdd();
        b.edges[1].value = true;
        assert_eq!(kinds(&b), [ViolationKind::EdgeLabels]);
    }

    #[test]
    fn two_roots() {
        let mut b = and_bdd();
        b.nodes.push(sink(9, Class::One));
        assert_eq!(kinds(&b), [ViolationKind::NotRooted]);
    }

    #[test]
    fn wrong_declared_root() {
        let mut b = and_bdd();
        b.root = 1;
        assert_eq!(kinds(&b), [ViolationKind::NotRooted]);
    }

    #[test]
    fn cycle_detected() {
        let b = Bdd::new(
            2,
            alloc::vec![feature(0, 1), feature(1, 2), feature(2, 1), sink(3, Class::One)],
            alloc::vec![
                edge(0, 1, 0),
                edge(0, 3, 1),
                edge(1, 2, 0),
                edge(1, 3, 1),
                edge(2, 1, 0),
                edge(2, 3, 1)
            ],
            0,
        );
        assert!(kinds(&b).contains(&ViolationKind::Cycle));
    }

    #[test]
    fn repeated_label_on_a_path() {
        let mut b = and_bdd();
        b.nodes[1].label = NodeLabel::Feature(1);
        assert_eq!(kinds(&b), [ViolationKind::RepeatedLabel]);
    }

    #[test]
    fn repeated_label_on_separate_paths_is_fine() {
        // v1 on both branches below a v2 test: never on one path twice.
        let b = Bdd::new(
            2,
            alloc::vec![
                feature(0, 2),
                feature(1, 1),
                feature(2, 1),
                sink(3, Class::Zero),
                sink(4, Class::One)
            ],
            alloc::vec![
                edge(0, 1, 0),
                edge(0, 2, 1),
                edge(1, 3, 0),
                edge(1, 4, 1),
                edge(2, 4, 0),
                edge(2, 3, 1)
            ],
            0,
        );
        assert!(b.validate().is_empty());
        assert!(DecisionTree::new(b).validate().iter().any(|v| v.kind == ViolationKind::NotTree));
    }

    #[test]
    fn out_degree_and_range() {
        let mut b = and_bdd();
        b.edges.pop();
        assert!(kinds(&b).contains(&ViolationKind::OutDegree));
        let mut b = and_bdd();
        b.nodes[1].label = NodeLabel::Feature(3);
        assert_eq!(kinds(&b), [ViolationKind::FeatureRange]);
        let mut b = and_bdd();
        b.edges.push(edge(3, 7, 0));
        assert!(kinds(&b).contains(&ViolationKind::DanglingEdge));
    }

    #[test]
    fn reachability() {
        let g = and_bdd().graph().unwrap();
        assert_eq!(g.reaches(Class::One), [true, true, false, true]);
        let g = Bdd::constant(2, Class::Zero).graph().unwrap();
        assert_eq!(g.reaches(Class::One), [false]);
    }
}
