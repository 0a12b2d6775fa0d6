//! JSON model files.
//!
//! ```json
//! {"type": "perceptron", "n": 2, "weights": ["1", "-3/2"], "bias": "0"}
//! ```
//!
//! Rationals are `"num/den"` strings; integers may drop the denominator and
//! may also be plain JSON numbers on input. Output always uses strings.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use xnr_core::classifiers::{
    Bdd, BddEdge, BddNode, DecisionTree, Layer, Mlp, NodeLabel, Perceptron, Violation, ViolationKind,
};
use xnr_core::{Class, Classifier, Model, Rational};

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation error: {}", join(.0))]
    Validation(Vec<Violation>),
}

impl ModelError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            ModelError::Validation(v) => v,
            _ => &[],
        }
    }
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// An exact rational as it appears in model files.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Exact(Rational);

impl FromStr for Exact {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let int = |t: &str| {
            BigInt::from_str(t.trim()).map_err(|_| format!("{s:?} is not a rational of the form num/den"))
        };
        let value = match s.split_once('/') {
            None => Rational::from_integer(int(s)?),
            Some((num, den)) => {
                let den = int(den)?;
                if den == BigInt::from(0) {
                    return Err(format!("{s:?} has a zero denominator"));
                }
                Rational::new(int(num)?, den)
            }
        };
        Ok(Exact(value))
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Exact;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string \"num/den\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Exact, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exact, E> {
                Ok(Exact(Rational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exact, E> {
                Ok(Exact(Rational::from_integer(v.into())))
            }
        }
        d.deserialize_any(V)
    }
}

/// A 0/1 field that rejects anything else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
struct Bit(bool);

impl TryFrom<u8> for Bit {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        match v {
            0 | 1 => Ok(Bit(v == 1)),
            _ => Err(format!("expected 0 or 1, found {v}")),
        }
    }
}

impl From<Bit> for u8 {
    fn from(b: Bit) -> u8 {
        b.0 as u8
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum LabelDoc {
    Feature(usize),
    Class(Bit),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: usize,
    label: LabelDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    from: usize,
    to: usize,
    value: Bit,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    n: usize,
    nodes: Vec<NodeDoc>,
    edges: Vec<EdgeDoc>,
    root: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PerceptronDoc {
    n: usize,
    weights: Vec<Exact>,
    bias: Exact,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerDoc {
    weights: Vec<Vec<Exact>>,
    bias: Vec<Exact>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MlpDoc {
    n: usize,
    layers: Vec<LayerDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum ModelDoc {
    Bdd(GraphDoc),
    Dt(GraphDoc),
    Perceptron(PerceptronDoc),
    Mlp(MlpDoc),
}

fn graph_doc(b: &Bdd) -> GraphDoc {
    GraphDoc {
        n: b.arity,
        nodes: b
            .nodes
            .iter()
            .map(|v| NodeDoc {
                id: v.id,
                label: match v.label {
                    NodeLabel::Feature(f) => LabelDoc::Feature(f),
                    NodeLabel::Class(c) => LabelDoc::Class(Bit(c.as_bool())),
                },
            })
            .collect(),
        edges: b
            .edges
            .iter()
            .map(|e| EdgeDoc {
                from: e.from,
                to: e.to,
                value: Bit(e.value),
            })
            .collect(),
        root: b.root,
    }
}

fn bdd_from(doc: GraphDoc) -> Bdd {
    let nodes = doc
        .nodes
        .into_iter()
        .map(|v| BddNode {
            id: v.id,
            label: match v.label {
                LabelDoc::Feature(f) => NodeLabel::Feature(f),
                LabelDoc::Class(b) => NodeLabel::Class(Class::from_bool(b.0)),
            },
        })
        .collect();
    let edges = doc
        .edges
        .into_iter()
        .map(|e| BddEdge {
            from: e.from,
            to: e.to,
            value: e.value.0,
        })
        .collect();
    Bdd::new(doc.n, nodes, edges, doc.root)
}

fn exacts(v: &[Rational]) -> Vec<Exact> {
    v.iter().cloned().map(Exact).collect()
}

fn rationals(v: Vec<Exact>) -> Vec<Rational> {
    v.into_iter().map(|e| e.0).collect()
}

impl From<&Model> for ModelDoc {
    fn from(m: &Model) -> ModelDoc {
        match m {
            Model::Bdd(b) => ModelDoc::Bdd(graph_doc(b)),
            Model::DecisionTree(t) => ModelDoc::Dt(graph_doc(t.bdd())),
            Model::Perceptron(p) => ModelDoc::Perceptron(PerceptronDoc {
                n: p.arity(),
                weights: exacts(&p.weights),
                bias: Exact(p.bias.clone()),
            }),
            Model::Mlp(m) => ModelDoc::Mlp(MlpDoc {
                n: m.arity(),
                layers: m
                    .layers
                    .iter()
                    .map(|l| LayerDoc {
                        weights: l.weights.iter().map(|row| exacts(row)).collect(),
                        bias: exacts(&l.bias),
                    })
                    .collect(),
            }),
        }
    }
}

impl ModelDoc {
    /// The declared `n` next to the model it describes.
    fn into_model(self) -> (usize, Model) {
        match self {
            ModelDoc::Bdd(g) => (g.n, bdd_from(g).into()),
            ModelDoc::Dt(g) => (g.n, DecisionTree::new(bdd_from(g)).into()),
            ModelDoc::Perceptron(p) => (p.n, Perceptron::new(rationals(p.weights), p.bias.0).into()),
            ModelDoc::Mlp(m) => {
                let layers = m
                    .layers
                    .into_iter()
                    .map(|l| Layer::new(l.weights.into_iter().map(rationals).collect(), rationals(l.bias)))
                    .collect();
                (m.n, Mlp::new(layers).into())
            }
        }
    }
}

/// Parses and validates a model document.
pub fn model_from_json(text: &str) -> Result<Classifier, ModelError> {
    let doc: ModelDoc = serde_json::from_str(text).map_err(|e| ModelError::Schema(e.to_string()))?;
    let (n, model) = doc.into_model();
    let mut violations = model.validate();
    if violations.is_empty() && model.arity() != n {
        violations.push(Violation::new(
            ViolationKind::Arity,
            format!("declared n = {n} but the model has {} features", model.arity()),
        ));
    }
    if !violations.is_empty() {
        return Err(ModelError::Validation(violations));
    }
    Ok(Classifier::new(model).expect("validated above"))
}

/// Pretty-printed JSON with a trailing newline.
pub fn model_to_json(model: &Model) -> String {
    let mut s = serde_json::to_string_pretty(&ModelDoc::from(model)).expect("model documents serialize");
    s.push('\n');
    s
}

pub fn load_model(path: &Path) -> Result<Classifier, ModelError> {
    let text = fs::read_to_string(path).map_err(|source| ModelError::Io {
        path: path.to_owned(),
        source,
    })?;
    model_from_json(&text)
}

pub fn save_model(model: &Model, path: &Path) -> Result<(), ModelError> {
    fs::write(path, model_to_json(model)).map_err(|source| ModelError::Io {
        path: path.to_owned(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text() {
        assert_eq!("-3/6".parse::<Exact>().unwrap().to_string(), "-1/2");
        assert_eq!("4/-2".parse::<Exact>().unwrap().to_string(), "-2");
        assert_eq!(" 7 ".parse::<Exact>().unwrap().to_string(), "7");
        assert!("1/0".parse::<Exact>().is_err());
        assert!("0.5".parse::<Exact>().is_err());
    }

    #[test]
    fn integer_shorthand_and_numbers() {
        let m = model_from_json(r#"{"type":"perceptron","n":2,"weights":[1,"-1"],"bias":"0/5"}"#).unwrap();
        assert_eq!(m.arity(), 2);
    }

    #[test]
    fn bad_bits_are_schema_errors() {
        let doc = r#"{"type":"bdd","n":1,"nodes":[{"id":0,"label":{"class":2}}],"edges":[],"root":0}"#;
        assert!(matches!(model_from_json(doc), Err(ModelError::Schema(_))));
    }

    #[test]
    fn declared_arity_must_match() {
        let doc = r#"{"type":"perceptron","n":3,"weights":["1","1"],"bias":"0"}"#;
        let err = model_from_json(doc).unwrap_err();
        assert_eq!(err.violations()[0].kind, ViolationKind::Arity);
    }
}
