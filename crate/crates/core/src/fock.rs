//! Truncated Fock-space linear algebra for a single bosonic mode.
//!
//! States are complex amplitude vectors over the photon-number basis
//! `|0⟩ … |D-1⟩`; operators are dense `D×D` complex matrices. Gates built from
//! a generator are obtained by truncating the generator first and then
//! exponentiating it, so every truncated gate is exactly unitary.
//!
//! Matrix norms written `‖·‖∞` below are the largest absolute entry.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

/// Number of top Fock levels inspected by the leakage diagnostic.
pub const LEAKAGE_LEVELS: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("cutoff dimension must be at least 2, got {dim}")]
    InvalidCutoff { dim: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("generator is not anti-Hermitian: ‖G + G†‖∞ = {deviation:e} exceeds bound {bound:e}")]
    NotAntiHermitian { deviation: f64, bound: f64 },
    #[error("operator is not Hermitian: ‖A - A†‖∞ = {deviation:e} exceeds bound {bound:e}")]
    NotHermitian { deviation: f64, bound: f64 },
    #[error("state is not normalised: ‖ψ‖² = {norm_sqr}, allowed deviation {tolerance:e}")]
    NotNormalized { norm_sqr: f64, tolerance: f64 },
    #[error("state norm ‖ψ‖² = {norm_sqr} exceeds 1")]
    NormTooLarge { norm_sqr: f64 },
    #[error("expectation value has imaginary residue {residue:e}")]
    ComplexExpectation { residue: f64 },
    #[error("non-finite amplitude or matrix entry")]
    NonFinite,
}

/// Tolerance for scalar type `T`: `bound` for double precision, widened to a
/// multiple of machine epsilon for narrower types.
pub(crate) fn tolerance<T: Real>(bound: f64) -> T {
    let floor = T::default_epsilon() * T::lit(4096.0);
    T::lit(bound).max(floor)
}

/// Size of the retained photon-number basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct CutoffConfig {
    dim: usize,
}

impl CutoffConfig {
    pub const DEFAULT_DIM: usize = 30;

    pub fn new(dim: usize) -> Result<Self, FockError> {
        if dim < 2 {
            return Err(FockError::InvalidCutoff { dim });
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl Default for CutoffConfig {
    fn default() -> Self {
        Self {
            dim: Self::DEFAULT_DIM,
        }
    }
}

impl TryFrom<usize> for CutoffConfig {
    type Error = FockError;

    fn try_from(dim: usize) -> Result<Self, Self::Error> {
        Self::new(dim)
    }
}

impl From<CutoffConfig> for usize {
    fn from(cfg: CutoffConfig) -> usize {
        cfg.dim
    }
}

/// Pure state `Σ cₙ|n⟩` in the truncated photon-number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<T: Real> {
    amplitudes: DVector<Complex<T>>,
}

impl<T: Real> FockVector<T> {
    /// Builds a state from raw amplitudes, rejecting vectors shorter than 2,
    /// non-finite entries and squared norms above `1 + 1e-12`.
    pub fn from_amplitudes(amplitudes: DVector<Complex<T>>) -> Result<Self, FockError> {
        if amplitudes.len() < 2 {
            return Err(FockError::InvalidCutoff {
                dim: amplitudes.len(),
            });
        }
        if amplitudes
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(FockError::NonFinite);
        }
        let state = Self { amplitudes };
        let norm_sqr = state.norm_sqr();
        if norm_sqr > T::one() + tolerance::<T>(1e-12) {
            return Err(FockError::NormTooLarge {
                norm_sqr: norm_sqr.as_f64(),
            });
        }
        Ok(state)
    }

    /// Photon-number eigenstate `|n⟩`. Panics if `n` is outside the cutoff.
    pub fn basis(cfg: CutoffConfig, n: usize) -> Self {
        assert!(n < cfg.dim(), "Fock level {n} outside cutoff {}", cfg.dim());
        let mut amplitudes = DVector::zeros(cfg.dim());
        amplitudes[n] = Complex::new(T::one(), T::zero());
        Self { amplitudes }
    }

    pub fn vacuum(cfg: CutoffConfig) -> Self {
        Self::basis(cfg, 0)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex<T>> {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: usize) -> Complex<T> {
        self.amplitudes[n]
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Returns `e^{iφ}·ψ`.
    pub fn with_global_phase(&self, phi: T) -> Self {
        let phase = Complex::new(phi.cos(), phi.sin());
        Self {
            amplitudes: self.amplitudes.map(|c| c * phase),
        }
    }

    /// Fraction of the population sitting in the top [`LEAKAGE_LEVELS`] Fock
    /// levels. Large values mean the cutoff is too small for this state.
    pub fn leakage(&self) -> T {
        let total = self.norm_sqr();
        if total <= T::zero() {
            return T::zero();
        }
        let start = self.dim().saturating_sub(LEAKAGE_LEVELS);
        let top: T = self.amplitudes.rows(start, self.dim() - start).iter().map(|c| c.norm_sqr()).sum();
        top / total
    }
}

/// Dense complex operator on the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix<T: Real> {
    entries: DMatrix<Complex<T>>,
}

impl<T: Real> GateMatrix<T> {
    pub fn from_matrix(entries: DMatrix<Complex<T>>) -> Result<Self, FockError> {
        if !entries.is_square() {
            return Err(FockError::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        if entries.nrows() < 2 {
            return Err(FockError::InvalidCutoff {
                dim: entries.nrows(),
            });
        }
        Ok(Self { entries })
    }

    pub(crate) fn from_matrix_unchecked(entries: DMatrix<Complex<T>>) -> Self {
        debug_assert!(entries.is_square());
        Self { entries }
    }

    /// Real matrix promoted to a complex operator.
    pub fn from_real(entries: &DMatrix<T>) -> Result<Self, FockError> {
        Self::from_matrix(entries.map(|v| Complex::new(v, T::zero())))
    }

    pub fn identity(cfg: CutoffConfig) -> Self {
        Self {
            entries: DMatrix::identity(cfg.dim(), cfg.dim()),
        }
    }

    pub fn diagonal<I>(values: I) -> Result<Self, FockError>
    where
        I: IntoIterator<Item = Complex<T>>,
    {
        let values: Vec<Complex<T>> = values.into_iter().collect();
        Self::from_matrix(DMatrix::from_diagonal(&DVector::from_vec(values)))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex<T>> {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
        }
    }

    /// `self · other` (other acts first).
    pub fn compose(&self, other: &Self) -> Result<Self, FockError> {
        self.check_dim(other.dim())?;
        Ok(Self {
            entries: &self.entries * &other.entries,
        })
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self {
            entries: self.entries.map(|c| c * factor),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FockError> {
        self.check_dim(other.dim())?;
        Ok(Self {
            entries: &self.entries + &other.entries,
        })
    }

    pub fn apply(&self, state: &FockVector<T>) -> Result<FockVector<T>, FockError> {
        self.check_dim(state.dim())?;
        Ok(FockVector {
            amplitudes: &self.entries * &state.amplitudes,
        })
    }

    /// `‖A − A†‖∞`.
    pub fn hermiticity_error(&self) -> T {
        max_abs(&(&self.entries - self.entries.adjoint()))
    }

    /// `‖G + G†‖∞`.
    pub fn anti_hermiticity_error(&self) -> T {
        max_abs(&(&self.entries + self.entries.adjoint()))
    }

    /// `‖U†U − I‖∞`.
    pub fn unitarity_error(&self) -> T {
        let n = self.dim();
        let product = self.entries.adjoint() * &self.entries;
        max_abs(&(product - DMatrix::<Complex<T>>::identity(n, n)))
    }

    /// `‖A − B‖∞`. Panics on dimension mismatch.
    pub fn distance(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim(), "gate dimension mismatch");
        max_abs(&(&self.entries - &other.entries))
    }

    fn check_dim(&self, found: usize) -> Result<(), FockError> {
        if found != self.dim() {
            return Err(FockError::DimensionMismatch {
                expected: self.dim(),
                found,
            });
        }
        Ok(())
    }
}

fn max_abs<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    m.iter().fold(T::zero(), |acc, c| acc.max(c.norm_sqr().sqrt()))
}

/// `â`: `entries[n-1][n] = √n`.
pub fn annihilation_op<T: Real>(cfg: CutoffConfig) -> GateMatrix<T> {
    GateMatrix::from_real(&annihilation_real(cfg.dim())).expect("cutoff validated")
}

/// `â†`.
pub fn creation_op<T: Real>(cfg: CutoffConfig) -> GateMatrix<T> {
    GateMatrix::from_real(&annihilation_real::<T>(cfg.dim()).transpose()).expect("cutoff validated")
}

/// `n̂ = diag(0, 1, …, D-1)`.
pub fn number_op<T: Real>(cfg: CutoffConfig) -> GateMatrix<T> {
    let diag = DVector::from_fn(cfg.dim(), |n, _| T::from_usize_lossy(n));
    GateMatrix::from_real(&DMatrix::from_diagonal(&diag)).expect("cutoff validated")
}

/// `X̂ = (â† + â)/√2`.
pub fn quadrature_x_op<T: Real>(cfg: CutoffConfig) -> GateMatrix<T> {
    GateMatrix::from_real(&quadrature_x_real(cfg.dim())).expect("cutoff validated")
}

pub(crate) fn annihilation_real<T: Real>(dim: usize) -> DMatrix<T> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = T::from_usize_lossy(n).sqrt();
    }
    a
}

pub(crate) fn quadrature_x_real<T: Real>(dim: usize) -> DMatrix<T> {
    let a = annihilation_real::<T>(dim);
    (&a + a.transpose()) * T::lit(std::f64::consts::FRAC_1_SQRT_2)
}

/// Eigendecomposition `H = V diag(λ) V†` of a Hermitian matrix, kept around
/// so that `exp(i t H)` can be evaluated for many `t` at the cost of one
/// matrix product each.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum<T: Real> {
    vectors: DMatrix<Complex<T>>,
    values: DVector<T>,
}

impl<T: Real> HermitianSpectrum<T> {
    /// Decomposes `H`. `H` is symmetrised as `(H + H†)/2` first; callers are
    /// responsible for checking it was Hermitian to begin with.
    pub fn new(h: &DMatrix<Complex<T>>) -> Self {
        let half = Complex::new(T::lit(0.5), T::zero());
        let sym = (h + h.adjoint()).map(|c| c * half);
        let eig = SymmetricEigen::new(sym);
        Self {
            vectors: eig.eigenvectors,
            values: eig.eigenvalues,
        }
    }

    /// Spectrum of `H = -iG` for a real antisymmetric generator `G`, so that
    /// `exp(tG) = exp(itH)`.
    pub fn of_real_generator(g: &DMatrix<T>) -> Self {
        let h = g.map(|v| Complex::new(T::zero(), -v));
        Self::new(&h)
    }

    pub fn values(&self) -> &DVector<T> {
        &self.values
    }

    pub fn vectors(&self) -> &DMatrix<Complex<T>> {
        &self.vectors
    }

    /// `exp(i t H)`.
    pub fn exp_i(&self, t: T) -> DMatrix<Complex<T>> {
        let mut scaled = self.vectors.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            let phase = t * self.values[j];
            col *= Complex::new(phase.cos(), phase.sin());
        }
        scaled * self.vectors.adjoint()
    }

    /// Real part of `exp(i t H)`. For `H = -iG` with `G` real antisymmetric
    /// the exponential is real orthogonal and this is the whole matrix.
    ///
    /// With `V = P + iQ` and phases `c + is`,
    /// `Re(V diag(c+is) V†) = [PC − QS | PS + QC] · [Pᵀ ; Qᵀ]`.
    pub fn exp_i_real(&self, t: T) -> DMatrix<T> {
        let n = self.vectors.nrows();
        let mut left = DMatrix::<T>::zeros(n, 2 * n);
        let mut right = DMatrix::<T>::zeros(2 * n, n);
        for j in 0..n {
            let phase = t * self.values[j];
            let (s, c) = phase.sin_cos();
            for i in 0..n {
                let v = self.vectors[(i, j)];
                left[(i, j)] = v.re * c - v.im * s;
                left[(i, n + j)] = v.re * s + v.im * c;
                right[(j, i)] = v.re;
                right[(n + j, i)] = v.im;
            }
        }
        left * right
    }

    /// First column of `exp(i t H)`, i.e. `exp(itH)|0⟩`.
    pub fn exp_i_first_column(&self, t: T) -> DVector<Complex<T>> {
        let n = self.vectors.nrows();
        let mut coeffs = DVector::<Complex<T>>::zeros(n);
        for j in 0..n {
            let phase = t * self.values[j];
            coeffs[j] = Complex::new(phase.cos(), phase.sin()) * self.vectors[(0, j)].conj();
        }
        &self.vectors * coeffs
    }
}

/// `exp(G)` for an anti-Hermitian generator `G = iH`, computed through the
/// eigendecomposition of `H`. Rejects generators with `‖G + G†‖∞ ≥ 1e-10`.
pub fn matrix_exp<T: Real>(generator: &GateMatrix<T>) -> Result<GateMatrix<T>, FockError> {
    let bound = tolerance::<T>(1e-10);
    if generator.entries.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(FockError::NonFinite);
    }
    let deviation = generator.anti_hermiticity_error();
    if deviation >= bound {
        return Err(FockError::NotAntiHermitian {
            deviation: deviation.as_f64(),
            bound: bound.as_f64(),
        });
    }
    let minus_i = Complex::new(T::zero(), -T::one());
    let h = generator.entries.map(|c| c * minus_i);
    let spectrum = HermitianSpectrum::new(&h);
    Ok(GateMatrix::from_matrix_unchecked(spectrum.exp_i(T::one())))
}

/// `⟨ψ|A|ψ⟩` for Hermitian `A` and a normalised state.
pub fn expectation<T: Real>(op: &GateMatrix<T>, state: &FockVector<T>) -> Result<T, FockError> {
    op.check_dim(state.dim())?;
    let herm_bound = tolerance::<T>(1e-10);
    let deviation = op.hermiticity_error();
    if deviation >= herm_bound {
        return Err(FockError::NotHermitian {
            deviation: deviation.as_f64(),
            bound: herm_bound.as_f64(),
        });
    }
    let norm_sqr = state.norm_sqr();
    let norm_tol = tolerance::<T>(1e-6);
    if (norm_sqr - T::one()).abs() > norm_tol {
        return Err(FockError::NotNormalized {
            norm_sqr: norm_sqr.as_f64(),
            tolerance: norm_tol.as_f64(),
        });
    }
    let value = state.amplitudes.dotc(&(&op.entries * &state.amplitudes));
    if value.im.abs() >= tolerance::<T>(1e-10) {
        return Err(FockError::ComplexExpectation {
            residue: value.im.as_f64(),
        });
    }
    Ok(value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg(d: usize) -> CutoffConfig {
        CutoffConfig::new(d).unwrap()
    }

    #[test]
    fn rejects_tiny_cutoff() {
        assert_eq!(CutoffConfig::new(1), Err(FockError::InvalidCutoff { dim: 1 }));
        assert_eq!(CutoffConfig::default().dim(), 30);
    }

    #[test]
    fn annihilation_lowers_photon_number() {
        let a = annihilation_op::<f64>(cfg(4));
        let out = a.apply(&FockVector::basis(cfg(4), 2)).unwrap();
        assert_abs_diff_eq!(out.amplitude(1).re, 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(out.norm_sqr(), 2.0, epsilon = 1e-14);

        let killed = a.apply(&FockVector::vacuum(cfg(4))).unwrap();
        assert_eq!(killed.norm_sqr(), 0.0);

        let a30 = annihilation_op::<f64>(cfg(30));
        let out = a30.apply(&FockVector::basis(cfg(30), 29)).unwrap();
        assert_abs_diff_eq!(out.amplitude(28).re, 29f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(out.norm_sqr(), 29.0, epsilon = 1e-12);
    }

    #[test]
    fn creation_is_adjoint_of_annihilation() {
        let a = annihilation_op::<f64>(cfg(6));
        let ad = creation_op::<f64>(cfg(6));
        assert_eq!(a.adjoint(), ad);
    }

    #[test]
    fn number_and_quadrature_are_hermitian() {
        let n = number_op::<f64>(cfg(8));
        let x = quadrature_x_op::<f64>(cfg(8));
        assert_eq!(n.hermiticity_error(), 0.0);
        assert_eq!(x.hermiticity_error(), 0.0);
        let three = n.apply(&FockVector::basis(cfg(8), 3)).unwrap();
        assert_eq!(three.amplitude(3).re, 3.0);
    }

    #[test]
    fn vacuum_expectations() {
        let c = cfg(30);
        let vac = FockVector::<f64>::vacuum(c);
        let x = quadrature_x_op::<f64>(c);
        assert_eq!(expectation(&number_op(c), &vac).unwrap(), 0.0);
        assert_eq!(expectation(&x, &vac).unwrap(), 0.0);
        let x2 = x.compose(&x).unwrap();
        assert_abs_diff_eq!(expectation(&x2, &vac).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn equal_superposition_has_half_a_photon() {
        let c = cfg(5);
        let h = 0.5f64.sqrt();
        let mut amps = DVector::zeros(5);
        amps[0] = Complex::new(h, 0.0);
        amps[1] = Complex::new(h, 0.0);
        let psi = FockVector::from_amplitudes(amps).unwrap();
        assert_abs_diff_eq!(expectation(&number_op(c), &psi).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn expectation_rejects_bad_inputs() {
        let c = cfg(4);
        let a = annihilation_op::<f64>(c);
        let vac = FockVector::vacuum(c);
        assert!(matches!(expectation(&a, &vac), Err(FockError::NotHermitian { .. })));

        let mut amps = DVector::zeros(4);
        amps[0] = Complex::new(0.5, 0.0);
        let half = FockVector::from_amplitudes(amps).unwrap();
        assert!(matches!(
            expectation(&number_op(c), &half),
            Err(FockError::NotNormalized { .. })
        ));

        let wrong = FockVector::<f64>::vacuum(cfg(5));
        assert!(matches!(
            expectation(&number_op(c), &wrong),
            Err(FockError::DimensionMismatch { expected: 4, found: 5 })
        ));
    }

    #[test]
    fn from_amplitudes_validates() {
        let too_big = DVector::from_element(3, Complex::new(1.0f64, 0.0));
        assert!(matches!(
            FockVector::from_amplitudes(too_big),
            Err(FockError::NormTooLarge { .. })
        ));
        let short = DVector::from_element(1, Complex::new(1.0f64, 0.0));
        assert!(FockVector::from_amplitudes(short).is_err());
        let nan = DVector::from_element(2, Complex::new(f64::NAN, 0.0));
        assert_eq!(FockVector::from_amplitudes(nan), Err(FockError::NonFinite));
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let c = cfg(10);
        let zero = GateMatrix::<f64>::from_matrix(DMatrix::zeros(10, 10)).unwrap();
        let u = matrix_exp(&zero).unwrap();
        assert!(u.distance(&GateMatrix::identity(c)) < 1e-13);
    }

    #[test]
    fn exp_of_i_pi_number_alternates_sign() {
        let c = cfg(12);
        let g = number_op::<f64>(c).scale(Complex::new(0.0, std::f64::consts::PI));
        let u = matrix_exp(&g).unwrap();
        for n in 0..12 {
            let expected = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_abs_diff_eq!(u.entry(n, n).re, expected, epsilon = 1e-12);
            assert_abs_diff_eq!(u.entry(n, n).im, 0.0, epsilon = 1e-12);
        }
        assert!(u.unitarity_error() < 1e-12);
    }

    #[test]
    fn exp_rejects_hermitian_generator() {
        let err = matrix_exp(&number_op::<f64>(cfg(4))).unwrap_err();
        match err {
            FockError::NotAntiHermitian { deviation, bound } => {
                assert_eq!(deviation, 6.0);
                assert_eq!(bound, 1e-10);
                assert!(err.to_string().contains("anti-Hermitian"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn leakage_counts_top_levels() {
        let c = cfg(10);
        assert_eq!(FockVector::<f64>::vacuum(c).leakage(), 0.0);
        assert_eq!(FockVector::<f64>::basis(c, 7).leakage(), 1.0);
        assert_eq!(FockVector::<f64>::basis(c, 6).leakage(), 0.0);
    }

    #[test]
    fn real_exponential_matches_complex_route() {
        let c = cfg(12);
        let a = annihilation_real::<f64>(c.dim());
        let g = a.transpose() - &a;
        let spectrum = HermitianSpectrum::of_real_generator(&g);
        let real = spectrum.exp_i_real(0.7);
        let full = spectrum.exp_i(0.7);
        for (r, z) in real.iter().zip(full.iter()) {
            assert_abs_diff_eq!(*r, z.re, epsilon = 1e-13);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-13);
        }
        let col = spectrum.exp_i_first_column(0.7);
        for n in 0..12 {
            assert_abs_diff_eq!(col[n].re, full[(n, 0)].re, epsilon = 1e-14);
        }
    }
}
