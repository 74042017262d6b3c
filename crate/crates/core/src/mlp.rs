//! Fully connected feed-forward regressor with one input and one output.
//!
//! Every hidden layer computes `G(W·h + b)`; the final one-neuron output
//! layer is linear. A "chain" network of depth `L` is the special case with
//! `L − 1` hidden layers of one neuron each, so it carries exactly `2L`
//! parameters.
//!
//! Flat parameter layout: layer by layer, the row-major weight matrix
//! (`fan_out × fan_in`) followed by the bias vector.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::optim::Trainable;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MlpError {
    #[error("hidden layer widths must be positive, got {0:?}")]
    ZeroWidth(Vec<usize>),
    #[error("chain depth must be at least 1")]
    ZeroDepth,
    #[error("expected {expected} parameters, got {found}")]
    ParamCount { expected: usize, found: usize },
    #[error("unknown activation '{0}' (expected tanh, sigmoid or relu)")]
    UnknownActivation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Tanh,
    Sigmoid,
    Relu,
}

impl Activation {
    pub const ALL: [Activation; 3] = [Activation::Tanh, Activation::Sigmoid, Activation::Relu];

    pub fn name(&self) -> &'static str {
        match self {
            Activation::Tanh => "tanh",
            Activation::Sigmoid => "sigmoid",
            Activation::Relu => "relu",
        }
    }

    #[inline]
    pub fn apply<T: Real>(&self, z: T) -> T {
        match self {
            Activation::Tanh => z.tanh(),
            Activation::Sigmoid => T::one() / (T::one() + (-z).exp()),
            Activation::Relu => z.max(T::zero()),
        }
    }

    /// Derivative with respect to the pre-activation `z`, given `a = G(z)`.
    /// ReLU uses 0 at `z = 0`.
    #[inline]
    pub fn derivative<T: Real>(&self, z: T, a: T) -> T {
        match self {
            Activation::Tanh => T::one() - a * a,
            Activation::Sigmoid => a * (T::one() - a),
            Activation::Relu => {
                if z > T::zero() {
                    T::one()
                } else {
                    T::zero()
                }
            }
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Activation {
    type Err = MlpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tanh" => Ok(Activation::Tanh),
            "sigmoid" => Ok(Activation::Sigmoid),
            "relu" => Ok(Activation::Relu),
            _ => Err(MlpError::UnknownActivation(s.to_string())),
        }
    }
}

/// Trainable parameter count of a network with the given hidden widths,
/// one input and a linear one-neuron output. An empty list is a single
/// linear neuron (2 parameters).
pub fn param_count(hidden_widths: &[usize]) -> usize {
    layer_shapes(hidden_widths)
        .map(|(fan_in, fan_out)| (fan_in + 1) * fan_out)
        .sum()
}

/// `(fan_in, fan_out)` of every layer including the output layer.
fn layer_shapes(hidden_widths: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    let fan_ins = std::iter::once(1).chain(hidden_widths.iter().copied());
    let fan_outs = hidden_widths.iter().copied().chain(std::iter::once(1));
    fan_ins.zip(fan_outs)
}

/// Shape of a network: hidden widths plus activation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MlpArchitecture {
    pub hidden_widths: Vec<usize>,
    pub activation: Activation,
}

impl MlpArchitecture {
    pub fn new(hidden_widths: Vec<usize>, activation: Activation) -> Result<Self, MlpError> {
        if hidden_widths.contains(&0) {
            return Err(MlpError::ZeroWidth(hidden_widths));
        }
        Ok(Self {
            hidden_widths,
            activation,
        })
    }

    /// `depth` single-neuron layers, the last one linear.
    pub fn chain(depth: usize, activation: Activation) -> Result<Self, MlpError> {
        if depth == 0 {
            return Err(MlpError::ZeroDepth);
        }
        Self::new(vec![1; depth - 1], activation)
    }

    pub fn param_count(&self) -> usize {
        param_count(&self.hidden_widths)
    }

    /// Number of weight layers, output layer included.
    pub fn depth(&self) -> usize {
        self.hidden_widths.len() + 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer<T: Real> {
    /// `fan_out × fan_in`.
    pub weights: DMatrix<T>,
    pub biases: DVector<T>,
}

impl<T: Real> DenseLayer<T> {
    fn zeros(fan_in: usize, fan_out: usize) -> Self {
        Self {
            weights: DMatrix::zeros(fan_out, fan_in),
            biases: DVector::zeros(fan_out),
        }
    }

    fn len(&self) -> usize {
        self.weights.len() + self.biases.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpNetwork<T: Real> {
    arch: MlpArchitecture,
    layers: Vec<DenseLayer<T>>,
}

/// Gradient with the same layer layout as the network it belongs to.
pub type MlpGradient<T> = Vec<DenseLayer<T>>;

impl<T: Real> MlpNetwork<T> {
    pub fn zeros(arch: MlpArchitecture) -> Self {
        let layers = layer_shapes(&arch.hidden_widths)
            .map(|(i, o)| DenseLayer::zeros(i, o))
            .collect();
        Self { arch, layers }
    }

    /// Weights uniform on `±√(1/fan_in)`, biases zero.
    pub fn random<R: Rng + ?Sized>(arch: MlpArchitecture, rng: &mut R) -> Self {
        let mut net = Self::zeros(arch);
        for layer in &mut net.layers {
            let bound = (1.0 / layer.weights.ncols() as f64).sqrt();
            for w in layer.weights.iter_mut() {
                *w = T::lit(rng.random_range(-bound..=bound));
            }
        }
        net
    }

    pub fn from_flat(arch: MlpArchitecture, flat: &[T]) -> Result<Self, MlpError> {
        let mut net = Self::zeros(arch);
        let expected = net.num_params();
        if flat.len() != expected {
            return Err(MlpError::ParamCount {
                expected,
                found: flat.len(),
            });
        }
        let mut it = flat.iter().copied();
        for layer in &mut net.layers {
            let (rows, cols) = layer.weights.shape();
            for r in 0..rows {
                for c in 0..cols {
                    layer.weights[(r, c)] = it.next().expect("length checked");
                }
            }
            for b in layer.biases.iter_mut() {
                *b = it.next().expect("length checked");
            }
        }
        Ok(net)
    }

    pub fn to_flat(&self) -> Vec<T> {
        flatten(&self.layers)
    }

    pub fn architecture(&self) -> &MlpArchitecture {
        &self.arch
    }

    pub fn activation(&self) -> Activation {
        self.arch.activation
    }

    pub fn layers(&self) -> &[DenseLayer<T>] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [DenseLayer<T>] {
        &mut self.layers
    }

    pub fn num_params(&self) -> usize {
        self.layers.iter().map(DenseLayer::len).sum()
    }

    pub fn forward(&self, x: T) -> T {
        let mut h = DVector::from_element(1, x);
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            let z = &layer.weights * &h + &layer.biases;
            h = if i == last {
                z
            } else {
                z.map(|v| self.arch.activation.apply(v))
            };
        }
        h[0]
    }

    /// Gradient of `(ŷ − y)²` with respect to every weight and bias.
    pub fn backward(&self, x: T, target: T) -> MlpGradient<T> {
        let act = self.arch.activation;
        let last = self.layers.len() - 1;
        // pre-activations and activations per layer; activations[0] is the input
        let mut pre = Vec::with_capacity(self.layers.len());
        let mut post = vec![DVector::from_element(1, x)];
        for (i, layer) in self.layers.iter().enumerate() {
            let z = &layer.weights * post.last().expect("input present") + &layer.biases;
            let a = if i == last { z.clone() } else { z.map(|v| act.apply(v)) };
            pre.push(z);
            post.push(a);
        }
        let y_hat = post[self.layers.len()][0];
        let mut delta = DVector::from_element(1, T::lit(2.0) * (y_hat - target));
        let mut grads: Vec<DenseLayer<T>> = Vec::with_capacity(self.layers.len());
        for i in (0..self.layers.len()).rev() {
            if i != last {
                let z = &pre[i];
                let a = &post[i + 1];
                delta = delta.zip_zip_map(z, a, |d, zv, av| d * act.derivative(zv, av));
            }
            grads.push(DenseLayer {
                weights: &delta * post[i].transpose(),
                biases: delta.clone(),
            });
            delta = self.layers[i].weights.tr_mul(&delta);
        }
        grads.reverse();
        grads
    }
}

pub fn flatten<T: Real>(layers: &[DenseLayer<T>]) -> Vec<T> {
    let mut flat = Vec::with_capacity(layers.iter().map(DenseLayer::len).sum());
    for layer in layers {
        let (rows, cols) = layer.weights.shape();
        for r in 0..rows {
            for c in 0..cols {
                flat.push(layer.weights[(r, c)]);
            }
        }
        flat.extend(layer.biases.iter().copied());
    }
    flat
}

/// Chain network of `depth` single-neuron layers with zero parameters.
pub fn chain_network<T: Real>(depth: usize, activation: Activation) -> Result<MlpNetwork<T>, MlpError> {
    Ok(MlpNetwork::zeros(MlpArchitecture::chain(depth, activation)?))
}

/// Training adapter over a fixed architecture.
#[derive(Debug, Clone)]
pub struct MlpModel {
    arch: MlpArchitecture,
}

impl MlpModel {
    pub fn new(arch: MlpArchitecture) -> Self {
        Self { arch }
    }

    pub fn architecture(&self) -> &MlpArchitecture {
        &self.arch
    }

    fn network<T: Real>(&self, flat: &[T]) -> MlpNetwork<T> {
        MlpNetwork::from_flat(self.arch.clone(), flat).expect("optimizer keeps parameter count")
    }
}

impl<T: Real> Trainable<T> for MlpModel {
    fn num_params(&self) -> usize {
        self.arch.param_count()
    }

    fn init_params(&self, rng: &mut dyn rand::RngCore) -> Vec<T> {
        MlpNetwork::<T>::random(self.arch.clone(), rng).to_flat()
    }

    fn predict(&self, params: &[T], xs: &[T]) -> Vec<T> {
        let net = self.network(params);
        xs.iter().map(|&x| net.forward(x)).collect()
    }

    fn mse_and_gradient(&self, params: &[T], xs: &[T], ys: &[T]) -> (T, Vec<T>) {
        let net = self.network(params);
        let n = T::from_usize_lossy(xs.len());
        let mut grad = vec![T::zero(); params.len()];
        let mut loss = T::zero();
        for (&x, &y) in xs.iter().zip(ys) {
            let r = net.forward(x) - y;
            loss += r * r;
            for (g, v) in grad.iter_mut().zip(flatten(&net.backward(x, y))) {
                *g += v;
            }
        }
        for g in &mut grad {
            *g /= n;
        }
        (loss / n, grad)
    }
}
