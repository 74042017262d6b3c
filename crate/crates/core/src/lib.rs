//! Continuous-variable quantum neural network simulator with classical MLP
//! baselines for one-dimensional regression.
//!
//! The numerical core is generic over the scalar type ([`Real`], implemented
//! for `f32` and `f64`). The aliases below fix it to `f64`, which is what the
//! benchmark harness and CLI use.

pub mod bench;
pub mod data;
pub mod fock;
pub mod gates;
pub mod mlp;
pub mod optim;
pub mod qnn;
pub mod scalar;
pub mod selftest;

pub use bench::{ExperimentSpec, ModelDescriptor, RunResult, Strategy};
pub use data::{DataSplit, Dataset, TargetKind};
pub use fock::{CutoffConfig, FockError};
pub use mlp::{Activation, MlpArchitecture, MlpModel};
pub use optim::{AdamConfig, RunStatus, Trainable};
pub use qnn::QnnModel;
pub use scalar::Real;

pub type FockVector = fock::FockVector<f64>;
pub type GateMatrix = fock::GateMatrix<f64>;
pub type QnnParams = qnn::QnnParams<f64>;
pub type QnnLayerParams = qnn::QnnLayerParams<f64>;
pub type QnnCircuit = qnn::QnnCircuit<f64>;
pub type MlpNetwork = mlp::MlpNetwork<f64>;
pub type TrainState = optim::TrainState<f64>;
pub type TrainOutcome = optim::TrainOutcome<f64>;

