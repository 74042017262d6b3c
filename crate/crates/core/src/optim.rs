//! Mean squared error, Adam, and the full-batch training loop shared by the
//! quantum and classical models.
//!
//! Runs are reproducible: parameters are initialised from a
//! [`rand_chacha::ChaCha8Rng`] seeded with `seed_from_u64(seed)`, and all
//! arithmetic after that is deterministic.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::DataSplit;
use crate::scalar::Real;

/// Training is abandoned once the training MSE exceeds this value.
pub const DIVERGENCE_MSE: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimError {
    #[error("mse needs equal, non-empty vectors (got {predictions} predictions, {targets} targets)")]
    LengthMismatch { predictions: usize, targets: usize },
    #[error("gradient has {found} entries, state has {expected}")]
    GradientLength { expected: usize, found: usize },
    #[error("gradient component {index} is not finite")]
    NonFiniteGradient { index: usize },
    #[error("invalid optimizer setting {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
}

/// `(1/N) Σ (ŷᵢ − yᵢ)²`.
pub fn mse<T: Real>(predictions: &[T], targets: &[T]) -> Result<T, OptimError> {
    if predictions.len() != targets.len() || predictions.is_empty() {
        return Err(OptimError::LengthMismatch {
            predictions: predictions.len(),
            targets: targets.len(),
        });
    }
    let sum: T = predictions
        .iter()
        .zip(targets)
        .map(|(&p, &t)| (p - t) * (p - t))
        .sum();
    Ok(sum / T::from_usize_lossy(predictions.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub epochs: usize,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            epochs: 10_000,
        }
    }
}

impl AdamConfig {
    pub fn validate(&self) -> Result<(), OptimError> {
        let bad = |field, reason: &str| {
            Err(OptimError::InvalidConfig {
                field,
                reason: reason.to_string(),
            })
        };
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate", &format!("must be positive, got {}", self.learning_rate));
        }
        if !(0.0..1.0).contains(&self.beta1) {
            return bad("beta1", &format!("must lie in [0, 1), got {}", self.beta1));
        }
        if !(0.0..1.0).contains(&self.beta2) {
            return bad("beta2", &format!("must lie in [0, 1), got {}", self.beta2));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad("epsilon", &format!("must be positive, got {}", self.epsilon));
        }
        Ok(())
    }
}

/// Parameters plus Adam's moment estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainState<T: Real> {
    pub parameters: Vec<T>,
    pub first_moment: Vec<T>,
    pub second_moment: Vec<T>,
    pub step_count: u64,
}

impl<T: Real> TrainState<T> {
    pub fn new(parameters: Vec<T>) -> Self {
        let n = parameters.len();
        Self {
            parameters,
            first_moment: vec![T::zero(); n],
            second_moment: vec![T::zero(); n],
            step_count: 0,
        }
    }

    /// In-place bias-corrected Adam update. The state is left untouched when
    /// the gradient is rejected.
    pub fn adam_update(&mut self, gradient: &[T], cfg: &AdamConfig) -> Result<(), OptimError> {
        if gradient.len() != self.parameters.len() {
            return Err(OptimError::GradientLength {
                expected: self.parameters.len(),
                found: gradient.len(),
            });
        }
        if let Some(index) = gradient.iter().position(|g| !g.is_finite()) {
            return Err(OptimError::NonFiniteGradient { index });
        }
        self.step_count += 1;
        let beta1 = T::lit(cfg.beta1);
        let beta2 = T::lit(cfg.beta2);
        let lr = T::lit(cfg.learning_rate);
        let eps = T::lit(cfg.epsilon);
        let t = self.step_count.min(i32::MAX as u64) as i32;
        let correction1 = T::one() - beta1.powi(t);
        let correction2 = T::one() - beta2.powi(t);
        for i in 0..gradient.len() {
            let g = gradient[i];
            self.first_moment[i] = beta1 * self.first_moment[i] + (T::one() - beta1) * g;
            self.second_moment[i] = beta2 * self.second_moment[i] + (T::one() - beta2) * g * g;
            let m_hat = self.first_moment[i] / correction1;
            let v_hat = self.second_moment[i] / correction2;
            self.parameters[i] -= lr * m_hat / (v_hat.sqrt() + eps);
        }
        Ok(())
    }
}

/// Functional form of [`TrainState::adam_update`].
pub fn adam_step<T: Real>(
    state: &TrainState<T>,
    gradient: &[T],
    cfg: &AdamConfig,
) -> Result<TrainState<T>, OptimError> {
    let mut next = state.clone();
    next.adam_update(gradient, cfg)?;
    Ok(next)
}

/// A model trained over a flat parameter vector.
pub trait Trainable<T: Real>: Send + Sync {
    fn num_params(&self) -> usize;

    fn init_params(&self, rng: &mut dyn rand::RngCore) -> Vec<T>;

    fn predict(&self, params: &[T], xs: &[T]) -> Vec<T>;

    /// Training loss and its gradient.
    fn mse_and_gradient(&self, params: &[T], xs: &[T], ys: &[T]) -> (T, Vec<T>);

    /// Worst truncation leakage over `xs`, for models that have one.
    fn max_leakage(&self, _params: &[T], _xs: &[T]) -> Option<T> {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Completed,
    /// Training MSE exceeded [`DIVERGENCE_MSE`] at this epoch.
    Diverged { epoch: usize },
    NonFiniteGradient { epoch: usize, index: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome<T: Real> {
    pub status: RunStatus,
    pub initial_train_mse: T,
    pub train_mse: T,
    pub test_mse: T,
    pub parameters: Vec<T>,
    /// `(x, ŷ)` over the test inputs.
    pub fit_curve: Vec<(T, T)>,
    pub max_leakage: Option<T>,
    pub epochs_run: usize,
    pub runtime_seconds: f64,
}

impl<T: Real> TrainOutcome<T> {
    pub fn failed(&self) -> bool {
        self.status != RunStatus::Completed
    }
}

/// Result of [`fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitOutcome<T: Real> {
    pub status: RunStatus,
    pub parameters: Vec<T>,
    /// Loss before the first update, if any epoch ran.
    pub initial_mse: Option<T>,
    pub epochs_run: usize,
}

/// Full-batch Adam on the MSE over `(xs, ys)` for `cfg.epochs` epochs,
/// starting from the model's seeded initialization.
///
/// Divergence and non-finite gradients end the run early and are reported
/// through [`RunStatus`]; they never panic.
pub fn fit<T, M>(model: &M, xs: &[T], ys: &[T], cfg: &AdamConfig, seed: u64) -> FitOutcome<T>
where
    T: Real,
    M: Trainable<T> + ?Sized,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = TrainState::new(model.init_params(&mut rng));
    debug_assert_eq!(state.parameters.len(), model.num_params());

    let mut status = RunStatus::Completed;
    let mut initial = None;
    let mut epochs_run = 0;
    for epoch in 0..cfg.epochs {
        let (loss, grad) = model.mse_and_gradient(&state.parameters, xs, ys);
        initial.get_or_insert(loss);
        if !loss.is_finite() || loss > T::lit(DIVERGENCE_MSE) {
            status = RunStatus::Diverged { epoch };
            break;
        }
        if let Err(OptimError::NonFiniteGradient { index }) = state.adam_update(&grad, cfg) {
            status = RunStatus::NonFiniteGradient { epoch, index };
            break;
        }
        epochs_run = epoch + 1;
    }
    FitOutcome {
        status,
        parameters: state.parameters,
        initial_mse: initial,
        epochs_run,
    }
}

/// [`fit`] on the training split, then evaluation on both splits.
pub fn train<T, M>(model: &M, data: &DataSplit<T>, cfg: &AdamConfig, seed: u64) -> TrainOutcome<T>
where
    T: Real,
    M: Trainable<T> + ?Sized,
{
    let started = Instant::now();
    let (xs, ys) = (data.train.inputs(), data.train.targets());
    let fitted = fit(model, xs, ys, cfg, seed);

    let params = fitted.parameters;
    let train_pred = model.predict(&params, xs);
    let train_mse = mse(&train_pred, ys).expect("training set is non-empty");
    let test_x = data.test.inputs();
    let test_pred = model.predict(&params, test_x);
    let test_mse = mse(&test_pred, data.test.targets()).expect("test set is non-empty");
    let max_leakage = model.max_leakage(&params, test_x);
    TrainOutcome {
        status: fitted.status,
        initial_train_mse: fitted.initial_mse.unwrap_or(train_mse),
        train_mse,
        test_mse,
        fit_curve: test_x.iter().copied().zip(test_pred).collect(),
        parameters: params,
        max_leakage,
        epochs_run: fitted.epochs_run,
        runtime_seconds: started.elapsed().as_secs_f64(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mse_examples() {
        assert_eq!(mse(&[1.0, 2.0], &[1.0, 0.0]).unwrap(), 2.0);
        assert_eq!(mse(&[0.3, -0.7], &[0.3, -0.7]).unwrap(), 0.0);
        assert_eq!(mse(&[0.5], &[-0.5]).unwrap(), 1.0);
        assert!(mse::<f64>(&[], &[]).is_err());
        assert!(matches!(
            mse(&[1.0], &[1.0, 2.0]),
            Err(OptimError::LengthMismatch { predictions: 1, targets: 2 })
        ));
    }

    #[test]
    fn zero_gradient_leaves_parameters() {
        let cfg = AdamConfig::default();
        let s = TrainState::new(vec![0.3, -1.2]);
        let next = adam_step(&s, &[0.0, 0.0], &cfg).unwrap();
        assert_eq!(next.parameters, s.parameters);
        assert_eq!(next.step_count, 1);
    }

    #[test]
    fn first_step_moves_by_learning_rate() {
        let cfg = AdamConfig::default();
        let s = TrainState::new(vec![0.0, 0.0, 0.0]);
        let next = adam_step(&s, &[3.0, -0.02, 150.0], &cfg).unwrap();
        assert_abs_diff_eq!(next.parameters[0], -0.01, epsilon = 1e-6);
        assert_abs_diff_eq!(next.parameters[1], 0.01, epsilon = 1e-6);
        assert_abs_diff_eq!(next.parameters[2], -0.01, epsilon = 1e-6);
    }

    #[test]
    fn moments_decay_after_gradient_stops() {
        let cfg = AdamConfig::default();
        let s0 = TrainState::new(vec![0.0f64]);
        let s1 = adam_step(&s0, &[1.0], &cfg).unwrap();
        let s2 = adam_step(&s1, &[0.0], &cfg).unwrap();
        let s3 = adam_step(&s2, &[0.0], &cfg).unwrap();
        let d2 = (s2.parameters[0] - s1.parameters[0]).abs();
        let d3 = (s3.parameters[0] - s2.parameters[0]).abs();
        assert!(d2 > 0.0);
        assert!(d3 < d2, "drift should decay: {d2} then {d3}");
        assert!(s3.first_moment[0].abs() < s1.first_moment[0].abs());
    }

    #[test]
    fn rejects_bad_gradients() {
        let cfg = AdamConfig::default();
        let s = TrainState::new(vec![0.0, 0.0]);
        assert_eq!(
            adam_step(&s, &[0.0, f64::NAN], &cfg),
            Err(OptimError::NonFiniteGradient { index: 1 })
        );
        assert!(matches!(
            adam_step(&s, &[0.0], &cfg),
            Err(OptimError::GradientLength { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(AdamConfig::default().validate().is_ok());
        let cfg = AdamConfig {
            learning_rate: -0.1,
            ..AdamConfig::default()
        };
        match cfg.validate() {
            Err(OptimError::InvalidConfig { field, .. }) => assert_eq!(field, "learning_rate"),
            other => panic!("unexpected {other:?}"),
        }
        let cfg = AdamConfig {
            beta2: 1.0,
            ..AdamConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
