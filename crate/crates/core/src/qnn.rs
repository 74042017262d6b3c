//! Single-mode continuous-variable quantum neural network.
//!
//! A scalar input `x` is encoded as the coherent state `D(x)|0⟩`, pushed
//! through `L` quantum neurons `K(χ)D(α)R(θ₂)S(ξ)R(θ₁)` (rightmost acts
//! first) and read out as `⟨X̂⟩`.
//!
//! Flat parameter vectors are layer-major, and within a layer follow the
//! order the gates act: `[θ₁, ξ, θ₂, α, χ]`.
//!
//! Two evaluation routes exist. [`forward`] builds every gate as a dense
//! complex matrix and is the reference. [`QnnCircuit`] works on a whole batch
//! of inputs at once using the cached generator spectra, and computes exact
//! gradients of the truncated model by an adjoint sweep through the gates.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::fock::{
    expectation, quadrature_x_op, quadrature_x_real, CutoffConfig, FockVector, GateMatrix,
    LEAKAGE_LEVELS,
};
use crate::gates::{displacement, kerr_phases, rotation_phases, GateKind, GateParam, GaussianSpectra};
use crate::optim::Trainable;
use crate::scalar::Real;

/// Top-level population fraction above which a run is flagged as leaking.
pub const LEAKAGE_THRESHOLD: f64 = 1e-4;

/// Trainable parameters per quantum neuron.
pub const PARAMS_PER_LAYER: usize = 5;

/// Standard deviation of the normal distribution used to initialise every
/// circuit parameter; small values keep the initial state near vacuum.
pub const INIT_STD: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QnnError {
    #[error("a circuit needs at least one layer")]
    NoLayers,
    #[error("flat parameter vector of length {0} is not a positive multiple of 5")]
    BadLength(usize),
    #[error("parameter {index} is not finite")]
    NonFinite { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QnnLayerParams<T: Real> {
    pub theta1: T,
    pub xi: T,
    pub theta2: T,
    pub alpha: T,
    pub chi: T,
}

impl<T: Real> QnnLayerParams<T> {
    pub fn zeros() -> Self {
        Self {
            theta1: T::zero(),
            xi: T::zero(),
            theta2: T::zero(),
            alpha: T::zero(),
            chi: T::zero(),
        }
    }

    /// Parameters in application order.
    pub fn to_array(&self) -> [T; PARAMS_PER_LAYER] {
        [self.theta1, self.xi, self.theta2, self.alpha, self.chi]
    }

    pub fn from_array(p: [T; PARAMS_PER_LAYER]) -> Self {
        Self {
            theta1: p[0],
            xi: p[1],
            theta2: p[2],
            alpha: p[3],
            chi: p[4],
        }
    }

    /// The five gates in application order.
    pub fn gates(&self) -> [GateParam<T>; PARAMS_PER_LAYER] {
        let g = |kind, value| GateParam { kind, value };
        [
            g(GateKind::Rotation, self.theta1),
            g(GateKind::Squeeze, self.xi),
            g(GateKind::Rotation, self.theta2),
            g(GateKind::Displacement, self.alpha),
            g(GateKind::Kerr, self.chi),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QnnParams<T: Real> {
    layers: Vec<QnnLayerParams<T>>,
}

impl<T: Real> QnnParams<T> {
    pub fn new(layers: Vec<QnnLayerParams<T>>) -> Result<Self, QnnError> {
        if layers.is_empty() {
            return Err(QnnError::NoLayers);
        }
        let params = Self { layers };
        if let Some(index) = params.to_flat().iter().position(|v| !v.is_finite()) {
            return Err(QnnError::NonFinite { index });
        }
        Ok(params)
    }

    /// All-zero circuit of depth `layers`; every gate is then the identity.
    pub fn zeros(layers: usize) -> Result<Self, QnnError> {
        Self::new(vec![QnnLayerParams::zeros(); layers])
    }

    pub fn from_flat(flat: &[T]) -> Result<Self, QnnError> {
        if flat.is_empty() || flat.len() % PARAMS_PER_LAYER != 0 {
            return Err(QnnError::BadLength(flat.len()));
        }
        let layers = flat
            .chunks_exact(PARAMS_PER_LAYER)
            .map(|c| QnnLayerParams::from_array([c[0], c[1], c[2], c[3], c[4]]))
            .collect();
        Self::new(layers)
    }

    /// Draws every parameter from `Normal(0, INIT_STD)`.
    pub fn random<R: Rng + ?Sized>(layers: usize, rng: &mut R) -> Result<Self, QnnError> {
        if layers == 0 {
            return Err(QnnError::NoLayers);
        }
        let dist = Normal::new(0.0, INIT_STD).expect("positive std");
        let flat: Vec<T> = (0..layers * PARAMS_PER_LAYER)
            .map(|_| T::lit(dist.sample(rng)))
            .collect();
        Self::from_flat(&flat)
    }

    pub fn to_flat(&self) -> Vec<T> {
        self.layers.iter().flat_map(|l| l.to_array()).collect()
    }

    pub fn layers(&self) -> &[QnnLayerParams<T>] {
        &self.layers
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn num_params(&self) -> usize {
        PARAMS_PER_LAYER * self.layers.len()
    }
}

/// `D(x)|0⟩`.
pub fn encode<T: Real>(x: T, cfg: CutoffConfig) -> FockVector<T> {
    displacement(x, cfg)
        .apply(&FockVector::vacuum(cfg))
        .expect("matching cutoff")
}

/// Final state of the circuit for input `x`, via dense gate matrices.
pub fn output_state<T: Real>(x: T, params: &QnnParams<T>, cfg: CutoffConfig) -> FockVector<T> {
    let mut psi = encode(x, cfg);
    for layer in params.layers() {
        for gate in layer.gates() {
            psi = gate.matrix(cfg).apply(&psi).expect("matching cutoff");
        }
    }
    psi
}

/// `⟨X̂⟩` of the circuit output for input `x` (reference route).
pub fn forward<T: Real>(x: T, params: &QnnParams<T>, cfg: CutoffConfig) -> T {
    forward_with_diagnostics(x, params, cfg).value
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QnnOutput<T: Real> {
    pub value: T,
    /// Population fraction in the top Fock levels of the output state.
    pub leakage: T,
}

impl<T: Real> QnnOutput<T> {
    pub fn leaked(&self) -> bool {
        self.leakage > T::lit(LEAKAGE_THRESHOLD)
    }
}

pub fn forward_with_diagnostics<T: Real>(
    x: T,
    params: &QnnParams<T>,
    cfg: CutoffConfig,
) -> QnnOutput<T> {
    let psi = output_state(x, params, cfg);
    let x_op: GateMatrix<T> = quadrature_x_op(cfg);
    let value = expectation(&x_op, &psi).expect("unitary evolution keeps the state normalised");
    QnnOutput {
        value,
        leakage: psi.leakage(),
    }
}

/// `∂⟨X̂⟩/∂p` for every circuit parameter, in flat layout.
pub fn gradient<T: Real>(x: T, params: &QnnParams<T>, cfg: CutoffConfig) -> Vec<T> {
    let circuit = QnnCircuit::new(cfg);
    circuit.weighted_gradient(params, &[x], &[T::one()]).1
}

/// Complex batch of states stored as real and imaginary `D×B` matrices, one
/// column per input.
#[derive(Debug, Clone)]
struct Batch<T: Real> {
    re: DMatrix<T>,
    im: DMatrix<T>,
}

enum CompiledGate<T: Real> {
    /// Diagonal `e^{i·t·wₙ}` with `wₙ = n` (rotation) or `n²` (Kerr).
    Phase { cos: Vec<T>, sin: Vec<T>, kerr: bool },
    /// Real orthogonal gate with its transpose, generated by the displacement
    /// or squeeze generator.
    Orthogonal {
        matrix: DMatrix<T>,
        transpose: DMatrix<T>,
        squeeze: bool,
    },
}

/// Batched evaluator for one cutoff. Cheap to share across threads.
#[derive(Debug, Clone)]
pub struct QnnCircuit<T: Real> {
    spectra: GaussianSpectra<T>,
    x_op: DMatrix<T>,
    levels: Vec<T>,
    levels_sq: Vec<T>,
}

/// Outputs and diagnostics for a batch of inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct QnnEvaluation<T: Real> {
    pub outputs: Vec<T>,
    pub leakage: Vec<T>,
}

impl<T: Real> QnnEvaluation<T> {
    pub fn max_leakage(&self) -> T {
        self.leakage.iter().fold(T::zero(), |m, &v| m.max(v))
    }
}

impl<T: Real> QnnCircuit<T> {
    pub fn new(cfg: CutoffConfig) -> Self {
        let dim = cfg.dim();
        Self {
            spectra: GaussianSpectra::new(cfg),
            x_op: quadrature_x_real(dim),
            levels: (0..dim).map(T::from_usize_lossy).collect(),
            levels_sq: (0..dim).map(|n| T::from_usize_lossy(n * n)).collect(),
        }
    }

    pub fn cutoff(&self) -> CutoffConfig {
        self.spectra.cutoff()
    }

    fn dim(&self) -> usize {
        self.levels.len()
    }

    fn compile(&self, params: &QnnParams<T>) -> Vec<CompiledGate<T>> {
        let dim = self.dim();
        let phase = |iter: Box<dyn Iterator<Item = nalgebra::Complex<T>>>, kerr: bool| {
            let (cos, sin) = iter.map(|c| (c.re, c.im)).unzip();
            CompiledGate::Phase { cos, sin, kerr }
        };
        let orthogonal = |matrix: DMatrix<T>, squeeze: bool| CompiledGate::Orthogonal {
            transpose: matrix.transpose(),
            matrix,
            squeeze,
        };
        let mut gates = Vec::with_capacity(params.num_params());
        for layer in params.layers() {
            gates.push(phase(Box::new(rotation_phases(layer.theta1, dim)), false));
            gates.push(orthogonal(self.spectra.squeeze(layer.xi), true));
            gates.push(phase(Box::new(rotation_phases(layer.theta2, dim)), false));
            gates.push(orthogonal(self.spectra.displacement(layer.alpha), false));
            gates.push(phase(Box::new(kerr_phases(layer.chi, dim)), true));
        }
        gates
    }

    fn encode_batch(&self, xs: &[T]) -> Batch<T> {
        let mut re = DMatrix::zeros(self.dim(), xs.len());
        for (b, &x) in xs.iter().enumerate() {
            for (n, v) in self.spectra.coherent_column(x).into_iter().enumerate() {
                re[(n, b)] = v;
            }
        }
        Batch {
            im: DMatrix::zeros(self.dim(), xs.len()),
            re,
        }
    }

    fn apply(gate: &CompiledGate<T>, state: &Batch<T>, adjoint: bool) -> Batch<T> {
        match gate {
            CompiledGate::Phase { cos, sin, .. } => {
                let mut out = state.clone();
                for n in 0..cos.len() {
                    let c = cos[n];
                    let s = if adjoint { -sin[n] } else { sin[n] };
                    for b in 0..state.re.ncols() {
                        let r = state.re[(n, b)];
                        let i = state.im[(n, b)];
                        out.re[(n, b)] = r * c - i * s;
                        out.im[(n, b)] = r * s + i * c;
                    }
                }
                out
            }
            CompiledGate::Orthogonal {
                matrix, transpose, ..
            } => {
                let m = if adjoint { transpose } else { matrix };
                Batch {
                    re: m * &state.re,
                    im: m * &state.im,
                }
            }
        }
    }

    /// `2·Σ_b Re(λ_bᴴ G φ_b)` for the generator `G` of `gate`.
    fn generator_overlap(&self, gate: &CompiledGate<T>, lambda: &Batch<T>, phi: &Batch<T>) -> T {
        let two = T::lit(2.0);
        match gate {
            CompiledGate::Phase { kerr, .. } => {
                let weights = if *kerr { &self.levels_sq } else { &self.levels };
                let mut acc = T::zero();
                for (n, &w) in weights.iter().enumerate() {
                    let mut row = T::zero();
                    for b in 0..phi.re.ncols() {
                        row += lambda.im[(n, b)] * phi.re[(n, b)] - lambda.re[(n, b)] * phi.im[(n, b)];
                    }
                    acc += w * row;
                }
                two * acc
            }
            CompiledGate::Orthogonal { squeeze, .. } => {
                let g = if *squeeze {
                    self.spectra.squeeze_generator()
                } else {
                    self.spectra.displacement_generator()
                };
                let g_re = g * &phi.re;
                let g_im = g * &phi.im;
                two * (lambda.re.dot(&g_re) + lambda.im.dot(&g_im))
            }
        }
    }

    /// Forward sweep; returns every intermediate state (index 0 is the
    /// encoded input).
    fn sweep(&self, gates: &[CompiledGate<T>], xs: &[T]) -> Vec<Batch<T>> {
        let mut states = Vec::with_capacity(gates.len() + 1);
        states.push(self.encode_batch(xs));
        for gate in gates {
            let next = Self::apply(gate, states.last().expect("non-empty"), false);
            states.push(next);
        }
        states
    }

    fn readout(&self, state: &Batch<T>) -> Vec<T> {
        let x_re = &self.x_op * &state.re;
        let x_im = &self.x_op * &state.im;
        (0..state.re.ncols())
            .map(|b| state.re.column(b).dot(&x_re.column(b)) + state.im.column(b).dot(&x_im.column(b)))
            .collect()
    }

    fn leakage(&self, state: &Batch<T>) -> Vec<T> {
        let dim = self.dim();
        let start = dim.saturating_sub(LEAKAGE_LEVELS);
        (0..state.re.ncols())
            .map(|b| {
                let pop = |range: std::ops::Range<usize>| -> T {
                    range
                        .map(|n| state.re[(n, b)] * state.re[(n, b)] + state.im[(n, b)] * state.im[(n, b)])
                        .sum()
                };
                let total = pop(0..dim);
                if total > T::zero() {
                    pop(start..dim) / total
                } else {
                    T::zero()
                }
            })
            .collect()
    }

    fn adjoint_sweep(
        &self,
        gates: &[CompiledGate<T>],
        states: &[Batch<T>],
        weights: &[T],
    ) -> Vec<T> {
        let last = states.last().expect("non-empty");
        let mut lambda = Batch {
            re: &self.x_op * &last.re,
            im: &self.x_op * &last.im,
        };
        for (b, &w) in weights.iter().enumerate() {
            lambda.re.column_mut(b).scale_mut(w);
            lambda.im.column_mut(b).scale_mut(w);
        }
        let mut grad = vec![T::zero(); gates.len()];
        for k in (0..gates.len()).rev() {
            grad[k] = self.generator_overlap(&gates[k], &lambda, &states[k + 1]);
            if k > 0 {
                lambda = Self::apply(&gates[k], &lambda, true);
            }
        }
        grad
    }

    pub fn evaluate(&self, params: &QnnParams<T>, xs: &[T]) -> QnnEvaluation<T> {
        let gates = self.compile(params);
        let states = self.sweep(&gates, xs);
        let last = states.last().expect("non-empty");
        QnnEvaluation {
            outputs: self.readout(last),
            leakage: self.leakage(last),
        }
    }

    /// Outputs `f_b` and `Σ_b w_b ∇f_b`.
    pub fn weighted_gradient(&self, params: &QnnParams<T>, xs: &[T], weights: &[T]) -> (Vec<T>, Vec<T>) {
        assert_eq!(xs.len(), weights.len(), "one weight per input");
        let gates = self.compile(params);
        let states = self.sweep(&gates, xs);
        let outputs = self.readout(states.last().expect("non-empty"));
        (outputs, self.adjoint_sweep(&gates, &states, weights))
    }

    /// Mean squared error over `(xs, ys)` and its gradient.
    pub fn mse_and_gradient(&self, params: &QnnParams<T>, xs: &[T], ys: &[T]) -> (T, Vec<T>) {
        assert_eq!(xs.len(), ys.len(), "inputs and targets differ in length");
        let gates = self.compile(params);
        let states = self.sweep(&gates, xs);
        let outputs = self.readout(states.last().expect("non-empty"));
        let n = T::from_usize_lossy(xs.len());
        let residuals: Vec<T> = outputs.iter().zip(ys).map(|(&f, &y)| f - y).collect();
        let mse = residuals.iter().map(|&r| r * r).sum::<T>() / n;
        let weights: Vec<T> = residuals.iter().map(|&r| T::lit(2.0) * r / n).collect();
        (mse, self.adjoint_sweep(&gates, &states, &weights))
    }
}

/// A depth-`L` circuit packaged for the training loop.
#[derive(Debug, Clone)]
pub struct QnnModel<T: Real> {
    layers: usize,
    circuit: QnnCircuit<T>,
}

impl<T: Real> QnnModel<T> {
    pub fn new(layers: usize, cfg: CutoffConfig) -> Result<Self, QnnError> {
        if layers == 0 {
            return Err(QnnError::NoLayers);
        }
        Ok(Self {
            layers,
            circuit: QnnCircuit::new(cfg),
        })
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn circuit(&self) -> &QnnCircuit<T> {
        &self.circuit
    }

    fn params(&self, flat: &[T]) -> QnnParams<T> {
        QnnParams::from_flat(flat).expect("optimizer keeps parameters finite and sized")
    }
}

impl<T: Real> Trainable<T> for QnnModel<T> {
    fn num_params(&self) -> usize {
        PARAMS_PER_LAYER * self.layers
    }

    fn init_params(&self, rng: &mut dyn rand::RngCore) -> Vec<T> {
        QnnParams::random(self.layers, rng)
            .expect("positive depth")
            .to_flat()
    }

    fn predict(&self, params: &[T], xs: &[T]) -> Vec<T> {
        self.circuit.evaluate(&self.params(params), xs).outputs
    }

    fn mse_and_gradient(&self, params: &[T], xs: &[T], ys: &[T]) -> (T, Vec<T>) {
        self.circuit.mse_and_gradient(&self.params(params), xs, ys)
    }

    fn max_leakage(&self, params: &[T], xs: &[T]) -> Option<T> {
        Some(self.circuit.evaluate(&self.params(params), xs).max_leakage())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn d30() -> CutoffConfig {
        CutoffConfig::default()
    }

    #[test]
    fn encode_vacuum_and_coherent() {
        let c = d30();
        assert!(encode(0.0f64, c).amplitudes().iter().skip(1).all(|z| z.norm() == 0.0));
        assert_abs_diff_eq!(encode(0.0f64, c).amplitude(0).re, 1.0, epsilon = 1e-15);
        let psi = encode(0.3f64, c);
        assert_abs_diff_eq!(psi.norm_sqr(), 1.0, epsilon = 1e-10);
        let x = expectation(&quadrature_x_op(c), &psi).unwrap();
        assert_abs_diff_eq!(x, 0.3 * SQRT2, epsilon = 1e-9);
    }

    #[test]
    fn coherent_tail_is_negligible() {
        let psi = encode(1.0f64, d30());
        let tail: f64 = (27..30).map(|n| psi.amplitude(n).norm_sqr()).sum();
        assert!(tail < 1e-20, "tail {tail}");
    }

    #[test]
    fn zero_circuit_is_identity_map() {
        for layers in 1..=3 {
            let p = QnnParams::<f64>::zeros(layers).unwrap();
            for &x in &[-1.0, -0.25, 0.0, 0.6, 1.0] {
                assert_abs_diff_eq!(forward(x, &p, d30()), SQRT2 * x, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn phase_only_circuit_keeps_vacuum() {
        let layer = QnnLayerParams {
            theta1: 0.4,
            theta2: -1.3,
            chi: 0.8,
            ..QnnLayerParams::zeros()
        };
        let p = QnnParams::new(vec![layer, layer]).unwrap();
        assert_abs_diff_eq!(forward(0.0, &p, d30()), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn single_displacement_shifts_output() {
        let layer = QnnLayerParams {
            alpha: 0.2,
            ..QnnLayerParams::zeros()
        };
        let p = QnnParams::new(vec![layer]).unwrap();
        assert_abs_diff_eq!(forward(0.5, &p, d30()), SQRT2 * 0.7, epsilon = 1e-8);
    }

    #[test]
    fn gradient_at_zero_params() {
        let p = QnnParams::<f64>::zeros(1).unwrap();
        let g = gradient(0.3, &p, d30());
        assert_eq!(g.len(), 5);
        assert_abs_diff_eq!(g[3], SQRT2, epsilon = 1e-6);
        let g0 = gradient(0.0, &p, d30());
        assert_abs_diff_eq!(g0[0], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn batched_route_matches_reference() {
        let c = CutoffConfig::new(20).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = QnnParams::<f64>::random(3, &mut rng).unwrap();
        let xs = [-0.8, -0.1, 0.35, 0.9];
        let eval = QnnCircuit::new(c).evaluate(&p, &xs);
        for (&x, &y) in xs.iter().zip(&eval.outputs) {
            assert_abs_diff_eq!(y, forward(x, &p, c), epsilon = 1e-11);
        }
    }

    #[test]
    fn mse_gradient_is_weighted_output_gradient() {
        let c = CutoffConfig::new(16).unwrap();
        let circuit = QnnCircuit::new(c);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = QnnParams::<f64>::random(2, &mut rng).unwrap();
        let xs = [-0.5, 0.2, 0.7];
        let ys = [0.1, -0.3, 0.4];
        let (mse, grad) = circuit.mse_and_gradient(&p, &xs, &ys);
        let out = circuit.evaluate(&p, &xs).outputs;
        let expected_mse: f64 = out.iter().zip(&ys).map(|(f, y)| (f - y) * (f - y)).sum::<f64>() / 3.0;
        assert_abs_diff_eq!(mse, expected_mse, epsilon = 1e-14);
        let mut expected = vec![0.0; 10];
        for (i, &x) in xs.iter().enumerate() {
            let g = circuit.weighted_gradient(&p, &[x], &[1.0]).1;
            for (e, gi) in expected.iter_mut().zip(g) {
                *e += 2.0 * (out[i] - ys[i]) / 3.0 * gi;
            }
        }
        for (a, b) in grad.iter().zip(&expected) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn deterministic_outputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = QnnParams::<f64>::random(2, &mut rng).unwrap();
        let a = forward(0.4, &p, d30());
        let b = forward(0.4, &p, d30());
        assert_eq!(a.to_bits(), b.to_bits());
        let ga = gradient(0.4, &p, d30());
        let gb = gradient(0.4, &p, d30());
        assert_eq!(ga, gb);
    }

    #[test]
    fn params_validation() {
        assert_eq!(QnnParams::<f64>::zeros(0), Err(QnnError::NoLayers));
        assert_eq!(QnnParams::<f64>::from_flat(&[0.0; 7]), Err(QnnError::BadLength(7)));
        let mut flat = vec![0.0; 10];
        flat[6] = f64::INFINITY;
        assert_eq!(QnnParams::from_flat(&flat), Err(QnnError::NonFinite { index: 6 }));
        let p = QnnParams::<f64>::zeros(4).unwrap();
        assert_eq!(p.num_params(), 20);
        assert_eq!(QnnParams::from_flat(&p.to_flat()).unwrap(), p);
    }

    #[test]
    fn leakage_flag_for_large_displacement() {
        let c = CutoffConfig::new(10).unwrap();
        let layer = QnnLayerParams {
            alpha: 2.0,
            ..QnnLayerParams::zeros()
        };
        let p = QnnParams::new(vec![layer]).unwrap();
        assert!(forward_with_diagnostics(1.0f64, &p, c).leaked());
        assert!(!forward_with_diagnostics(0.1f64, &QnnParams::zeros(1).unwrap(), d30()).leaked());
    }
}
