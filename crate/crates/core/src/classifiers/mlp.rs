use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::perceptron::{common_denominator, scale_to_integer};
use super::{Class, Violation, ViolationKind};
use crate::conditions::Instance;
use crate::Rational;

/// One affine layer. `weights[r][c]` connects input `r` to output `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub weights: Vec<Vec<Rational>>,
    pub bias: Vec<Rational>,
}

impl Layer {
    pub fn new(weights: Vec<Vec<Rational>>, bias: Vec<Rational>) -> Layer {
        Layer { weights, bias }
    }

    pub fn inputs(&self) -> usize {
        self.weights.len()
    }

    pub fn outputs(&self) -> usize {
        self.bias.len()
    }

    fn apply(&self, h: &[Rational]) -> Vec<Rational> {
        let mut z = self.bias.clone();
        for (hr, row) in h.iter().zip(&self.weights) {
            if hr.is_zero() {
                continue;
            }
            for (zc, w) in z.iter_mut().zip(row) {
                *zc += hr * w;
            }
        }
        z
    }
}

/// Multi-layer perceptron: ReLU on every hidden layer, a single Heaviside
/// output neuron.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mlp {
    pub layers: Vec<Layer>,
}

impl Mlp {
    pub fn new(layers: Vec<Layer>) -> Mlp {
        Mlp { layers }
    }

    pub fn arity(&self) -> usize {
        self.layers.first().map_or(0, Layer::inputs)
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let Some(first) = self.layers.first() else {
            return alloc::vec![Violation::new(ViolationKind::NoLayers, "the network has no layers")];
        };
        if first.inputs() == 0 {
            out.push(Violation::new(ViolationKind::Arity, "the first layer has no inputs"));
        }
        let mut width = first.inputs();
        for (i, layer) in self.layers.iter().enumerate() {
            if layer.inputs() != width {
                out.push(Violation::new(
                    ViolationKind::LayerDimensions,
                    format!("layer {} expects {} inputs but receives {width}", i + 1, layer.inputs()),
                ));
            }
            if let Some(r) = layer.weights.iter().position(|row| row.len() != layer.outputs()) {
                out.push(Violation::new(
                    ViolationKind::LayerDimensions,
                    format!(
                        "layer {} row {} has {} entries, bias has {}",
                        i + 1,
                        r + 1,
                        layer.weights[r].len(),
                        layer.outputs()
                    ),
                ));
            }
            width = layer.outputs();
        }
        if width != 1 {
            out.push(Violation::new(
                ViolationKind::OutputWidth,
                format!("output layer has width {width}, expected 1"),
            ));
        }
        out
    }

    /// Exact pre-activation of the output neuron.
    pub fn output_activation(&self, x: &Instance) -> Rational {
        let mut h: Vec<Rational> = x
            .bits()
            .iter()
            .map(|&b| Rational::from_integer(BigInt::from(b as u8)))
            .collect();
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            h = layer.apply(&h);
            if i < last {
                for v in &mut h {
                    if v.is_negative() {
                        *v = Rational::zero();
                    }
                }
            }
        }
        h.swap_remove(0)
    }

    pub fn classify(&self, x: &Instance) -> Class {
        Class::from_bool(!self.output_activation(x).is_negative())
    }
}

#[derive(Debug, Clone)]
struct IntegerLayer {
    weights: Vec<Vec<BigInt>>,
    bias: Vec<BigInt>,
}

/// The network with every layer multiplied through by a positive constant so
/// that activations stay integral.
///
/// If layer `i` is scaled by `L_i` and the incoming activations carry the
/// accumulated scale `S`, the layer computes `h W' + S b'`, with `W' = L_i W`
/// and `b' = L_i b`, and the result carries scale `S L_i`. ReLU and the
/// output sign are invariant under positive scaling.
/// One layer in machine integers: weights by input row, then bias.
type SmallLayer = (Vec<Vec<i128>>, Vec<i128>);

#[derive(Debug, Clone)]
pub(crate) struct IntegerNetwork {
    layers: Vec<IntegerLayer>,
    small: Option<Vec<SmallLayer>>,
}

impl IntegerNetwork {
    pub fn new(m: &Mlp) -> IntegerNetwork {
        let mut accumulated = BigInt::from(1u8);
        let mut layers = Vec::with_capacity(m.layers.len());
        for layer in &m.layers {
            let scale = common_denominator(layer.weights.iter().flatten().chain(&layer.bias));
            let weights = layer
                .weights
                .iter()
                .map(|row| row.iter().map(|w| scale_to_integer(w, &scale)).collect())
                .collect();
            let bias = layer
                .bias
                .iter()
                .map(|b| scale_to_integer(b, &scale) * &accumulated)
                .collect();
            accumulated *= scale;
            layers.push(IntegerLayer { weights, bias });
        }
        let small = layers
            .iter()
            .map(|l| {
                let w = l
                    .weights
                    .iter()
                    .map(|row| row.iter().map(ToPrimitive::to_i128).collect::<Option<Vec<_>>>())
                    .collect::<Option<Vec<_>>>()?;
                let b = l.bias.iter().map(ToPrimitive::to_i128).collect::<Option<Vec<_>>>()?;
                Some((w, b))
            })
            .collect::<Option<Vec<_>>>();
        IntegerNetwork { layers, small }
    }

    fn forward_small(&self, bits: &[bool]) -> Option<bool> {
        let small = self.small.as_ref()?;
        let mut h: Vec<i128> = bits.iter().map(|&b| b as i128).collect();
        let last = small.len() - 1;
        for (i, (w, b)) in small.iter().enumerate() {
            let mut z = b.clone();
            for (&hr, row) in h.iter().zip(w) {
                if hr == 0 {
                    continue;
                }
                for (zc, &wv) in z.iter_mut().zip(row) {
                    *zc = zc.checked_add(hr.checked_mul(wv)?)?;
                }
            }
            if i < last {
                z.iter_mut().for_each(|v| *v = (*v).max(0));
            }
            h = z;
        }
        Some(h[0] >= 0)
    }

    fn forward_big(&self, bits: &[bool]) -> bool {
        let mut h: Vec<BigInt> = bits.iter().map(|&b| BigInt::from(b as u8)).collect();
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            let mut z = layer.bias.clone();
            for (hr, row) in h.iter().zip(&layer.weights) {
                if hr.is_zero() {
                    continue;
                }
                for (zc, w) in z.iter_mut().zip(row) {
                    *zc += hr * w;
                }
            }
            if i < last {
                for v in &mut z {
                    if v.is_negative() {
                        *v = BigInt::zero();
                    }
                }
            }
            h = z;
        }
        !h[0].is_negative()
    }

    fn decide(&self, bits: &[bool]) -> Class {
        Class::from_bool(
            self.forward_small(bits)
                .unwrap_or_else(|| self.forward_big(bits)),
        )
    }

    pub fn classify(&self, x: &Instance) -> Class {
        self.decide(x.bits())
    }

    pub fn classify_mask(&self, mask: u64) -> Class {
        let n = self.layers[0].weights.len();
        let bits: Vec<bool> = (0..n).map(|i| (mask >> i) & 1 == 1).collect();
        self.decide(&bits)
    }
}
