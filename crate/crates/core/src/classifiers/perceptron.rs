use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Class, Violation, ViolationKind};
use crate::conditions::Instance;
use crate::Rational;

/// `x -> [x.w + b >= 0]` with exact rational parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perceptron {
    pub weights: Vec<Rational>,
    pub bias: Rational,
}

impl Perceptron {
    pub fn new(weights: Vec<Rational>, bias: Rational) -> Perceptron {
        Perceptron { weights, bias }
    }

    /// Convenience constructor for integer parameters.
    pub fn from_integers(weights: &[i64], bias: i64) -> Perceptron {
        Perceptron {
            weights: weights.iter().map(|&w| Rational::from_integer(w.into())).collect(),
            bias: Rational::from_integer(bias.into()),
        }
    }

    pub fn arity(&self) -> usize {
        self.weights.len()
    }

    pub fn validate(&self) -> Vec<Violation> {
        if self.weights.is_empty() {
            alloc::vec![Violation::new(ViolationKind::EmptyWeights, "weight vector is empty")]
        } else {
            Vec::new()
        }
    }

    /// `x.w + b` in exact arithmetic.
    pub fn activation(&self, x: &Instance) -> Rational {
        self.weights
            .iter()
            .zip(x.bits())
            .filter(|(_, &b)| b)
            .fold(self.bias.clone(), |acc, (w, _)| acc + w)
    }

    /// Heaviside at zero: an activation of exactly 0 gives class 1.
    pub fn classify(&self, x: &Instance) -> Class {
        Class::from_bool(!self.activation(x).is_negative())
    }
}

/// Least common multiple of the denominators, always positive.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// `r * scale` where `scale` is a multiple of `r`'s denominator.
pub(crate) fn scale_to_integer(r: &Rational, scale: &BigInt) -> BigInt {
    r.numer() * (scale / r.denom())
}

/// A perceptron rescaled by the (positive) common denominator of its
/// parameters, so that every comparison is on integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct IntegerThreshold {
    pub weights: Vec<BigInt>,
    pub bias: BigInt,
    small: Option<(Vec<i64>, i64)>,
}

impl IntegerThreshold {
    pub fn new(p: &Perceptron) -> IntegerThreshold {
        let scale = common_denominator(p.weights.iter().chain([&p.bias]));
        let weights: Vec<BigInt> = p.weights.iter().map(|w| scale_to_integer(w, &scale)).collect();
        let bias = scale_to_integer(&p.bias, &scale);
        let small = weights
            .iter()
            .map(ToPrimitive::to_i64)
            .collect::<Option<Vec<_>>>()
            .zip(bias.to_i64());
        IntegerThreshold {
            weights,
            bias,
            small,
        }
    }

    fn decide(&self, bit: impl Fn(usize) -> bool) -> Class {
        if let Some((w, b)) = &self.small {
            // n * 2^63 + 2^63 stays far inside i128.
            let sum = w
                .iter()
                .enumerate()
                .filter(|&(i, _)| bit(i))
                .fold(*b as i128, |acc, (_, &wi)| acc + wi as i128);
            return Class::from_bool(sum >= 0);
        }
        let sum = self
            .weights
            .iter()
            .enumerate()
            .filter(|&(i, _)| bit(i))
            .fold(self.bias.clone(), |acc, (_, wi)| acc + wi);
        Class::from_bool(sum >= BigInt::zero())
    }

    pub fn classify(&self, x: &Instance) -> Class {
        self.decide(|i| x.bits()[i])
    }

    pub fn classify_mask(&self, mask: u64) -> Class {
        self.decide(|i| (mask >> i) & 1 == 1)
    }
}
