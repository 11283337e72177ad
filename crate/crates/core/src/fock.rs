//! Single-mode oscillator algebra on a truncated Fock space.
//!
//! Basis states are `|0⟩ .. |dim−1⟩`. The ladder operator is the usual
//! `â|n⟩ = √n |n−1⟩` cut at `dim`, so `[â, â†] = I` holds everywhere except
//! the last diagonal entry, which equals `−(dim−1)`.
//!
//! Displaced squeezed vacua are built as `D(α) S(ξ) |0⟩` with
//!
//! ```text
//! D(α) = exp(α â† − α* â)
//! S(ξ) = exp(½ (ξ* â² − ξ â†²)),   ξ = r e^{iφ}
//! ```
//!
//! Quadratures follow `x̂ = √(ħ/2mω)(â + â†)` and `p̂ = i√(mħω/2)(â† − â)`,
//! so `φ = 0` squeezes `x̂`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::{Float, Zero};
use thiserror::Error;

use crate::expm::{self, ExpmError};
use crate::linalg::{self, CMatrix};

/// Amplitude tail targeted by [`required_dim`] for the squeezed component.
const SQUEEZE_TAIL: f64 = 1e-12;
/// Largest tolerated `|Σ|cₙ|² − 1|` for inputs that must be normalized.
pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("Fock space dimension {0} is below the minimum of 2")]
    DimTooSmall(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error(
        "dim {dim} is too small for |alpha| = {alpha_abs}, r = {r}: truncation rule needs dim >= {required}"
    )]
    Truncation {
        dim: usize,
        required: usize,
        alpha_abs: f64,
        r: f64,
    },
    #[error("state is not normalized: sum |c_n|^2 = {0}")]
    NotNormalized(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error(transparent)]
    Expm(#[from] ExpmError),
}

/// Whether constructors enforce the truncation rule or proceed regardless.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Truncation {
    #[default]
    Enforce,
    /// Build anyway; the caller accepts edge reflections from the cut.
    Force,
}

/// Smallest dimension at which a displaced squeezed vacuum is represented
/// to about `1e-12` in its quadrature variances.
///
/// `ceil(|α|² + 7|α| + max(10, ln(1e-12) / ln(tanh r)))`. The squeezed
/// vacuum's even amplitudes fall off as `tanh(r)^n`, which sets the second
/// term.
pub fn required_dim(alpha_abs: f64, r: f64) -> usize {
    let squeeze = if r > 0.0 {
        SQUEEZE_TAIL.ln() / r.tanh().ln()
    } else {
        0.0
    };
    let need = alpha_abs * alpha_abs + 7.0 * alpha_abs + squeeze.max(10.0);
    need.ceil() as usize
}

fn check_truncation(space: FockSpace, alpha_abs: f64, r: f64, policy: Truncation) -> Result<(), FockError> {
    if alpha_abs == 0.0 && r == 0.0 {
        return Ok(());
    }
    let required = required_dim(alpha_abs, r);
    if policy == Truncation::Enforce && space.dim() < required {
        return Err(FockError::Truncation {
            dim: space.dim(),
            required,
            alpha_abs,
            r,
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FockSpace {
    dim: usize,
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self, FockError> {
        if dim < 2 {
            return Err(FockError::DimTooSmall(dim));
        }
        Ok(Self { dim })
    }

    #[inline]
    pub fn dim(self) -> usize {
        self.dim
    }

    fn same(self, other: Self) -> Result<(), FockError> {
        if self.dim != other.dim {
            return Err(FockError::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }
}

/// Dense operator on a [`FockSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    space: FockSpace,
    matrix: CMatrix,
}

impl FockOperator {
    pub fn from_matrix(space: FockSpace, matrix: CMatrix) -> Result<Self, FockError> {
        if matrix.rows() != space.dim() || matrix.cols() != space.dim() {
            return Err(FockError::DimMismatch {
                left: space.dim(),
                right: matrix.rows().max(matrix.cols()),
            });
        }
        Ok(Self { space, matrix })
    }

    pub fn identity(space: FockSpace) -> Self {
        Self {
            space,
            matrix: CMatrix::identity(space.dim()),
        }
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            space: self.space,
            matrix: self.matrix.scale(s),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FockError> {
        self.space.same(other.space)?;
        Ok(Self {
            space: self.space,
            matrix: self.matrix.add(&other.matrix),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FockError> {
        self.space.same(other.space)?;
        Ok(Self {
            space: self.space,
            matrix: self.matrix.sub(&other.matrix),
        })
    }

    /// Operator product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self, FockError> {
        self.space.same(other.space)?;
        Ok(Self {
            space: self.space,
            matrix: self.matrix.matmul(&other.matrix),
        })
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, FockError> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// Raw `Â|ψ⟩`; the result is not renormalized.
    pub fn apply(&self, state: &QuantumState) -> Result<Vec<Complex64>, FockError> {
        self.space.same(state.space)?;
        Ok(self.matrix.matvec(&state.amplitudes))
    }

    pub fn expectation(&self, state: &QuantumState) -> Result<Complex64, FockError> {
        let v = self.apply(state)?;
        Ok(linalg::inner(&state.amplitudes, &v))
    }

    /// `max |(Û†Û − I)_ij|`
    pub fn unitarity_defect(&self) -> f64 {
        self.matrix
            .adjoint()
            .matmul(&self.matrix)
            .max_abs_diff(&CMatrix::identity(self.space.dim()))
    }

    /// `max |(Â − Â†)_ij|`
    pub fn hermiticity_defect(&self) -> f64 {
        self.matrix.max_abs_diff(&self.matrix.adjoint())
    }
}

/// Normalized pure state over the Fock basis.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    space: FockSpace,
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    pub fn vacuum(space: FockSpace) -> Self {
        Self::basis(space, 0).expect("n = 0 is always in range")
    }

    /// Number state `|n⟩`.
    pub fn basis(space: FockSpace, n: usize) -> Result<Self, FockError> {
        if n >= space.dim() {
            return Err(FockError::InvalidParameter("basis index outside the truncated space"));
        }
        let mut amplitudes = vec![Complex64::zero(); space.dim()];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Ok(Self { space, amplitudes })
    }

    /// Normalizes the given amplitudes. Rejects the zero vector.
    pub fn from_amplitudes(space: FockSpace, amplitudes: Vec<Complex64>) -> Result<Self, FockError> {
        if amplitudes.len() != space.dim() {
            return Err(FockError::DimMismatch {
                left: space.dim(),
                right: amplitudes.len(),
            });
        }
        let mut state = Self { space, amplitudes };
        state.normalize()?;
        Ok(state)
    }

    /// Wraps amplitudes without touching them; the norm is checked.
    pub fn from_normalized(space: FockSpace, amplitudes: Vec<Complex64>) -> Result<Self, FockError> {
        if amplitudes.len() != space.dim() {
            return Err(FockError::DimMismatch {
                left: space.dim(),
                right: amplitudes.len(),
            });
        }
        let state = Self { space, amplitudes };
        state.check_normalized()?;
        Ok(state)
    }

    pub fn normalize(&mut self) -> Result<(), FockError> {
        let n = self.norm_sqr();
        if !(n > 0.0 && n.is_finite()) {
            return Err(FockError::NotNormalized(n));
        }
        let s = 1.0 / n.sqrt();
        for c in &mut self.amplitudes {
            *c *= s;
        }
        Ok(())
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        linalg::norm_sqr(&self.amplitudes)
    }

    fn check_normalized(&self) -> Result<(), FockError> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL || !n.is_finite() {
            return Err(FockError::NotNormalized(n));
        }
        Ok(())
    }
}

/// Displacement amplitude and squeeze `ξ = r e^{iφ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezeSpec {
    alpha: Complex64,
    r: f64,
    phi: f64,
}

impl SqueezeSpec {
    /// `phi` is wrapped into `[0, 2π)`.
    pub fn new(alpha: Complex64, r: f64, phi: f64) -> Result<Self, FockError> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(FockError::InvalidParameter("alpha must be finite"));
        }
        if !(r >= 0.0 && r.is_finite()) {
            return Err(FockError::InvalidParameter("squeeze magnitude r must be finite and >= 0"));
        }
        if !phi.is_finite() {
            return Err(FockError::InvalidParameter("squeeze phase must be finite"));
        }
        let mut phi = phi % TAU;
        if phi < 0.0 {
            phi += TAU;
        }
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(Self { alpha, r, phi })
    }

    pub fn vacuum() -> Self {
        Self {
            alpha: Complex64::zero(),
            r: 0.0,
            phi: 0.0,
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn xi(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.phi)
    }

    pub fn required_dim(&self) -> usize {
        required_dim(self.alpha.norm(), self.r)
    }
}

/// `(ħ, m, ω)` used to scale the quadratures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillatorFrame {
    hbar: f64,
    mass: f64,
    omega: f64,
}

impl Default for OscillatorFrame {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
        }
    }
}

impl OscillatorFrame {
    pub fn new(hbar: f64, mass: f64, omega: f64) -> Result<Self, FockError> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if !(ok(hbar) && ok(mass) && ok(omega)) {
            return Err(FockError::InvalidParameter("hbar, mass and omega must be positive and finite"));
        }
        Ok(Self { hbar, mass, omega })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Position scale `√(ħ/2mω)`; `x̂ = x_scale · (â + â†)`.
    pub fn x_scale(&self) -> f64 {
        (self.hbar / (2.0 * self.mass * self.omega)).sqrt()
    }

    /// Momentum scale `√(mħω/2)`.
    pub fn p_scale(&self) -> f64 {
        (self.mass * self.hbar * self.omega / 2.0).sqrt()
    }

    /// Vacuum position variance `ħ/2mω`.
    pub fn vacuum_var_x(&self) -> f64 {
        self.hbar / (2.0 * self.mass * self.omega)
    }

    /// Vacuum momentum variance `mħω/2`.
    pub fn vacuum_var_p(&self) -> f64 {
        self.mass * self.hbar * self.omega / 2.0
    }

    /// `β` such that `⟨â⟩ = β` for a packet centred at `(x, p)`.
    pub fn to_alpha(&self, x: f64, p: f64) -> Complex64 {
        Complex64::new(x / (2.0 * self.x_scale()), p / (2.0 * self.p_scale()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarianceReport {
    pub var_x: f64,
    pub var_p: f64,
    /// `√(var_x · var_p)`
    pub product: f64,
}

pub fn annihilation(space: FockSpace) -> FockOperator {
    let n = space.dim();
    let mut m = CMatrix::zeros(n, n);
    for k in 1..n {
        m[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    FockOperator { space, matrix: m }
}

pub fn creation(space: FockSpace) -> FockOperator {
    annihilation(space).adjoint()
}

/// `â†â`, built directly as `diag(0, 1, …, dim−1)`.
pub fn number(space: FockSpace) -> FockOperator {
    let diag: Vec<Complex64> = (0..space.dim()).map(|k| Complex64::new(k as f64, 0.0)).collect();
    FockOperator {
        space,
        matrix: CMatrix::from_diag(&diag),
    }
}

/// Returns `(x̂, p̂)` in the frame's units.
pub fn quadratures(space: FockSpace, frame: &OscillatorFrame) -> (FockOperator, FockOperator) {
    let a = annihilation(space);
    let ad = a.adjoint();
    let x = a
        .add(&ad)
        .expect("same space")
        .scale(Complex64::new(frame.x_scale(), 0.0));
    let p = ad
        .sub(&a)
        .expect("same space")
        .scale(Complex64::new(0.0, frame.p_scale()));
    (x, p)
}

fn displacement_generator(space: FockSpace, alpha: Complex64) -> CMatrix {
    let a = annihilation(space);
    a.adjoint()
        .scale(alpha)
        .sub(&a.scale(alpha.conj()))
        .expect("same space")
        .matrix
}

fn squeeze_generator(space: FockSpace, xi: Complex64) -> CMatrix {
    let n = space.dim();
    // ½(ξ* â² − ξ â†²); â² has (k−2, k) entries √(k(k−1))
    let mut g = CMatrix::zeros(n, n);
    for k in 2..n {
        let v = ((k * (k - 1)) as f64).sqrt();
        g[(k - 2, k)] = xi.conj() * (0.5 * v);
        g[(k, k - 2)] = -xi * (0.5 * v);
    }
    g
}

/// `D(α) = exp(α â† − α* â)`.
pub fn displacement(space: FockSpace, alpha: Complex64, policy: Truncation) -> Result<FockOperator, FockError> {
    if !(alpha.re.is_finite() && alpha.im.is_finite()) {
        return Err(FockError::InvalidParameter("alpha must be finite"));
    }
    check_truncation(space, alpha.norm(), 0.0, policy)?;
    if alpha.is_zero() {
        return Ok(FockOperator::identity(space));
    }
    let g = displacement_generator(space, alpha);
    let matrix = expm::matrix_exponential(&g, expm::DEFAULT_TOL)?;
    Ok(FockOperator { space, matrix })
}

/// `S(ξ) = exp(½(ξ* â² − ξ â†²))`.
pub fn squeeze(space: FockSpace, xi: Complex64, policy: Truncation) -> Result<FockOperator, FockError> {
    if !(xi.re.is_finite() && xi.im.is_finite()) {
        return Err(FockError::InvalidParameter("xi must be finite"));
    }
    check_truncation(space, 0.0, xi.norm(), policy)?;
    if xi.is_zero() {
        return Ok(FockOperator::identity(space));
    }
    let g = squeeze_generator(space, xi);
    let matrix = expm::matrix_exponential(&g, expm::DEFAULT_TOL)?;
    Ok(FockOperator { space, matrix })
}

/// `D(α) S(ξ) |0⟩`: squeeze the vacuum first, then displace.
///
/// Uses the action of each exponential on the vector rather than the dense
/// operators; the result agrees with `displacement(..) · squeeze(..) · |0⟩`.
pub fn squeezed_coherent_state(
    space: FockSpace,
    spec: &SqueezeSpec,
    policy: Truncation,
) -> Result<QuantumState, FockError> {
    check_truncation(space, spec.alpha().norm(), spec.r(), policy)?;
    let mut v = QuantumState::vacuum(space).amplitudes;
    if spec.r() > 0.0 {
        v = expm::expm_action(&squeeze_generator(space, spec.xi()), &v, expm::DEFAULT_TOL)?;
    }
    if !spec.alpha().is_zero() {
        v = expm::expm_action(&displacement_generator(space, spec.alpha()), &v, expm::DEFAULT_TOL)?;
    }
    QuantumState::from_amplitudes(space, v)
}

/// Position and momentum variances of a normalized state.
pub fn variances(state: &QuantumState, frame: &OscillatorFrame) -> Result<VarianceReport, FockError> {
    state.check_normalized()?;
    let (x, p) = quadratures(state.space(), frame);
    let moments = |op: &FockOperator| {
        let v = op.matrix.matvec(&state.amplitudes);
        let mean = linalg::inner(&state.amplitudes, &v).re;
        // Hermitian: ⟨Â²⟩ = ‖Â ψ‖²
        let second = linalg::norm_sqr(&v);
        second - mean * mean
    };
    let var_x = moments(&x);
    let var_p = moments(&p);
    Ok(VarianceReport {
        var_x,
        var_p,
        product: (var_x * var_p).sqrt(),
    })
}

/// `(⟨x̂⟩, ⟨p̂⟩)` of a normalized state.
pub fn quadrature_means(state: &QuantumState, frame: &OscillatorFrame) -> Result<(f64, f64), FockError> {
    state.check_normalized()?;
    let (x, p) = quadratures(state.space(), frame);
    Ok((x.expectation(state)?.re, p.expectation(state)?.re))
}

/// `⟨n̂⟩`
pub fn mean_photon_number(state: &QuantumState) -> f64 {
    photon_distribution(state)
        .iter()
        .enumerate()
        .map(|(n, p)| n as f64 * p)
        .sum()
}

/// `Pₙ = |cₙ|²`
pub fn photon_distribution(state: &QuantumState) -> Vec<f64> {
    state.amplitudes.iter().map(Complex64::norm_sqr).collect()
}
