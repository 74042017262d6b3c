//! The four parameterised single-mode gates of the quantum neuron.
//!
//! | gate | matrix |
//! |------|--------|
//! | displacement `D(α)` | `exp(α(â† − â))` |
//! | squeeze `S(ξ)` | `exp(½ξ(â² − â†²))`, positive `ξ` narrows `X̂` |
//! | rotation `R(θ)` | `exp(iθn̂)` |
//! | Kerr `K(χ)` | `exp(iχn̂²)` |
//!
//! Displacement and squeezing are exponentiated from truncated generators;
//! rotation and Kerr are diagonal and built directly from their phases.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::fock::{annihilation_real, matrix_exp, CutoffConfig, GateMatrix, HermitianSpectrum};
use crate::scalar::Real;

/// Magnitude above which displacement and squeeze amplitudes risk populating
/// the top of a 30-level basis.
pub const SOFT_AMPLITUDE_BOUND: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    Displacement,
    Squeeze,
    Rotation,
    Kerr,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateParam<T: Real> {
    pub kind: GateKind,
    pub value: T,
}

impl<T: Real> GateParam<T> {
    /// Returns `None` for non-finite values.
    pub fn new(kind: GateKind, value: T) -> Option<Self> {
        value.is_finite().then_some(Self { kind, value })
    }

    /// True when a displacement or squeeze amplitude exceeds
    /// [`SOFT_AMPLITUDE_BOUND`]; the leakage diagnostic should then be
    /// consulted before trusting results.
    pub fn exceeds_soft_bound(&self) -> bool {
        matches!(self.kind, GateKind::Displacement | GateKind::Squeeze)
            && self.value.abs() > T::lit(SOFT_AMPLITUDE_BOUND)
    }

    pub fn matrix(&self, cfg: CutoffConfig) -> GateMatrix<T> {
        match self.kind {
            GateKind::Displacement => displacement(self.value, cfg),
            GateKind::Squeeze => squeeze(self.value, cfg),
            GateKind::Rotation => rotation(self.value, cfg),
            GateKind::Kerr => kerr(self.value, cfg),
        }
    }
}

/// Real antisymmetric generator `â† − â` of displacements.
pub fn displacement_generator<T: Real>(cfg: CutoffConfig) -> DMatrix<T> {
    let a = annihilation_real::<T>(cfg.dim());
    a.transpose() - a
}

/// Real antisymmetric generator `½(â² − â†²)` of squeezing.
pub fn squeeze_generator<T: Real>(cfg: CutoffConfig) -> DMatrix<T> {
    let a = annihilation_real::<T>(cfg.dim());
    let a2 = &a * &a;
    (&a2 - a2.transpose()) * T::lit(0.5)
}

fn exp_real_generator<T: Real>(generator: DMatrix<T>, scale: T) -> GateMatrix<T> {
    let g = GateMatrix::from_real(&(generator * scale)).expect("cutoff validated");
    matrix_exp(&g).expect("real antisymmetric generator")
}

pub fn displacement<T: Real>(alpha: T, cfg: CutoffConfig) -> GateMatrix<T> {
    exp_real_generator(displacement_generator(cfg), alpha)
}

pub fn squeeze<T: Real>(xi: T, cfg: CutoffConfig) -> GateMatrix<T> {
    exp_real_generator(squeeze_generator(cfg), xi)
}

/// Phase `θn` on level `n`.
pub fn rotation<T: Real>(theta: T, cfg: CutoffConfig) -> GateMatrix<T> {
    GateMatrix::diagonal(rotation_phases(theta, cfg.dim())).expect("cutoff validated")
}

/// Phase `χn²` on level `n`.
pub fn kerr<T: Real>(chi: T, cfg: CutoffConfig) -> GateMatrix<T> {
    GateMatrix::diagonal(kerr_phases(chi, cfg.dim())).expect("cutoff validated")
}

pub(crate) fn rotation_phases<T: Real>(theta: T, dim: usize) -> impl Iterator<Item = Complex<T>> {
    (0..dim).map(move |n| unit_phase(theta * T::from_usize_lossy(n)))
}

pub(crate) fn kerr_phases<T: Real>(chi: T, dim: usize) -> impl Iterator<Item = Complex<T>> {
    (0..dim).map(move |n| unit_phase(chi * T::from_usize_lossy(n * n)))
}

#[inline]
fn unit_phase<T: Real>(phi: T) -> Complex<T> {
    let (s, c) = phi.sin_cos();
    Complex::new(c, s)
}

/// Cached eigendecompositions of the displacement and squeeze generators at
/// one cutoff. Building a gate from the cache costs one real matrix product
/// instead of a fresh eigendecomposition.
#[derive(Debug, Clone)]
pub struct GaussianSpectra<T: Real> {
    cfg: CutoffConfig,
    displacement_gen: DMatrix<T>,
    squeeze_gen: DMatrix<T>,
    displacement: HermitianSpectrum<T>,
    squeeze: HermitianSpectrum<T>,
}

impl<T: Real> GaussianSpectra<T> {
    pub fn new(cfg: CutoffConfig) -> Self {
        let displacement_gen = displacement_generator::<T>(cfg);
        let squeeze_gen = squeeze_generator::<T>(cfg);
        Self {
            cfg,
            displacement: HermitianSpectrum::of_real_generator(&displacement_gen),
            squeeze: HermitianSpectrum::of_real_generator(&squeeze_gen),
            displacement_gen,
            squeeze_gen,
        }
    }

    pub fn cutoff(&self) -> CutoffConfig {
        self.cfg
    }

    /// `D(α)` as a real orthogonal matrix.
    pub fn displacement(&self, alpha: T) -> DMatrix<T> {
        self.displacement.exp_i_real(alpha)
    }

    /// `S(ξ)` as a real orthogonal matrix.
    pub fn squeeze(&self, xi: T) -> DMatrix<T> {
        self.squeeze.exp_i_real(xi)
    }

    /// `D(α)|0⟩`, real.
    pub fn coherent_column(&self, alpha: T) -> Vec<T> {
        self.displacement
            .exp_i_first_column(alpha)
            .iter()
            .map(|c| c.re)
            .collect()
    }

    pub fn displacement_generator(&self) -> &DMatrix<T> {
        &self.displacement_gen
    }

    pub fn squeeze_generator(&self) -> &DMatrix<T> {
        &self.squeeze_gen
    }
}
