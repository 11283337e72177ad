//! Wigner function of a pure state on a rectangular `(x, p)` grid.
//!
//! Uses the displaced-parity form. With `Π D(γ) = D(−γ) Π`,
//!
//! ```text
//! D(β) Π D†(β) = D(2β) Π
//! W(x, p) = (1/πħ) Σₘₙ cₘ* (−1)ⁿ cₙ ⟨m|D(2β)|n⟩
//! ```
//!
//! where `β` is the point `(x, p)` in ladder units. For `m = n + k`
//!
//! ```text
//! ⟨m|D(γ)|n⟩ = √(n!/m!) γᵏ e^{−|γ|²/2} Lₙ⁽ᵏ⁾(|γ|²)
//! ⟨n|D(γ)|m⟩ = (−γ*)ᵏ / γᵏ · ⟨m|D(γ)|n⟩
//! ```
//!
//! The Laguerre factor runs along each diagonal `k` through a recurrence
//! normalized so its terms are the matrix elements themselves, with a
//! separate log scale carried to survive `e^{−|γ|²/2}` underflow. The plain
//! ladder recursion on the columns of `D(γ)` cancels catastrophically once
//! `|γ|` reaches about 10.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{Float, Zero};
use thiserror::Error;

use crate::fock::{self, FockError, OscillatorFrame, QuantumState};

/// Largest accepted `|∫∫W − 1|` on a grid.
pub const NORMALIZATION_TOL: f64 = 2e-2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WignerError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("invalid phase-space grid: {0}")]
    Grid(&'static str),
    #[error(
        "Wigner integral over the grid is {integral} (|1 - integral| > {tolerance}); the grid does not cover the state's support"
    )]
    Normalization { integral: f64, tolerance: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub np: usize,
}

impl PhaseGrid {
    pub fn new(x_min: f64, x_max: f64, nx: usize, p_min: f64, p_max: f64, np: usize) -> Result<Self, WignerError> {
        let finite = [x_min, x_max, p_min, p_max].iter().all(|v| v.is_finite());
        if !finite {
            return Err(WignerError::Grid("bounds must be finite"));
        }
        if !(x_min < x_max && p_min < p_max) {
            return Err(WignerError::Grid("lower bounds must be below upper bounds"));
        }
        if nx < 2 || np < 2 {
            return Err(WignerError::Grid("need at least 2 points per axis"));
        }
        Ok(Self {
            x_min,
            x_max,
            nx,
            p_min,
            p_max,
            np,
        })
    }

    /// Grid centred on the state's means, `sigmas` standard deviations wide on
    /// each side.
    pub fn covering(
        state: &QuantumState,
        frame: &OscillatorFrame,
        sigmas: f64,
        nx: usize,
        np: usize,
    ) -> Result<Self, WignerError> {
        let rep = fock::variances(state, frame)?;
        let (mx, mp) = fock::quadrature_means(state, frame)?;
        let hx = sigmas * rep.var_x.max(0.0).sqrt();
        let hp = sigmas * rep.var_p.max(0.0).sqrt();
        Self::new(mx - hx, mx + hx, nx, mp - hp, mp + hp, np)
    }

    pub fn x(&self, i: usize) -> f64 {
        axis(self.x_min, self.x_max, self.nx, i)
    }

    pub fn p(&self, j: usize) -> f64 {
        axis(self.p_min, self.p_max, self.np, j)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }
}

fn axis(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

/// Per-state precomputation for pointwise evaluation.
#[derive(Clone, Debug)]
pub struct WignerKernel {
    frame: OscillatorFrame,
    /// `diagonals[k][j] = c*_{j+k} (−1)ʲ c_j`
    diagonals: Vec<Vec<Complex64>>,
    ln_factorial: Vec<f64>,
}

/// Rescale threshold for the Laguerre recurrence.
const RESCALE: f64 = 1e150;

impl WignerKernel {
    pub fn new(state: &QuantumState, frame: OscillatorFrame) -> Result<Self, WignerError> {
        let n = state.norm_sqr();
        if (n - 1.0).abs() > fock::NORM_TOL {
            return Err(FockError::NotNormalized(n).into());
        }
        let c = state.amplitudes();
        let dim = c.len();
        let diagonals = (0..dim)
            .map(|k| {
                (0..dim - k)
                    .map(|j| {
                        let v = c[j + k].conj() * c[j];
                        if j % 2 == 0 {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect()
            })
            .collect();
        let mut ln_factorial = vec![0.0; dim + 1];
        for k in 1..=dim {
            ln_factorial[k] = ln_factorial[k - 1] + (k as f64).ln();
        }
        Ok(Self {
            frame,
            diagonals,
            ln_factorial,
        })
    }

    /// `Σⱼ diagonals[k][j] · |⟨j+k|D(γ)|j⟩|` with the sign of the Laguerre
    /// factor kept, i.e. without the phase `e^{ikθ}`.
    fn diagonal_sum(&self, k: usize, modulus: f64, x: f64) -> Complex64 {
        let row = &self.diagonals[k];
        if modulus == 0.0 && k > 0 {
            return Complex64::zero();
        }
        let kf = k as f64;
        let mut scale = -0.5 * x - 0.5 * self.ln_factorial[k];
        if k > 0 {
            scale += kf * modulus.ln();
        }
        // running sum is kept in units of e^{scale}
        let mut acc = Complex64::zero();
        let (mut prev, mut cur) = (0.0f64, 1.0f64);
        for (j, &q) in row.iter().enumerate() {
            acc += q * cur;
            let jf = j as f64;
            let next = ((2.0 * jf + 1.0 + kf - x) * cur - (jf * (jf + kf)).sqrt() * prev)
                / ((jf + 1.0) * (jf + kf + 1.0)).sqrt();
            prev = cur;
            cur = next;
            if cur.abs() > RESCALE {
                prev /= RESCALE;
                cur /= RESCALE;
                let bump = RESCALE.ln();
                acc /= RESCALE;
                scale += bump;
            }
        }
        acc * scale.exp()
    }

    /// `W(x, p)` in units of `1/(position · momentum)`.
    pub fn at(&self, x: f64, p: f64) -> f64 {
        let gamma = self.frame.to_alpha(x, p) * 2.0;
        let (modulus, theta) = gamma.to_polar();
        let x2 = modulus * modulus;
        let mut total = self.diagonal_sum(0, modulus, x2).re;
        for k in 1..self.diagonals.len() {
            let phase = Complex64::from_polar(1.0, k as f64 * theta);
            total += 2.0 * (phase * self.diagonal_sum(k, modulus, x2)).re;
        }
        total / (PI * self.frame.hbar())
    }
}

/// Wigner values on a grid, row-major with one row per momentum sample.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerMap {
    grid: PhaseGrid,
    values: Vec<f64>,
}

/// Grid moments of a Wigner map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseMoments {
    pub integral: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
}

impl WignerMap {
    /// Wraps precomputed values (e.g. from a parallel evaluation).
    pub fn from_values(grid: PhaseGrid, values: Vec<f64>) -> Result<Self, WignerError> {
        if values.len() != grid.nx * grid.np {
            return Err(WignerError::Grid("value count does not match grid size"));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `W(x_i, p_j)`
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.nx + i]
    }

    /// Trapezoidal moments over the grid.
    pub fn moments(&self) -> PhaseMoments {
        let g = &self.grid;
        let wx = |i: usize| if i == 0 || i + 1 == g.nx { 0.5 } else { 1.0 };
        let wp = |j: usize| if j == 0 || j + 1 == g.np { 0.5 } else { 1.0 };
        let cell = g.dx() * g.dp();
        let (mut s0, mut sx, mut sp, mut sxx, mut spp) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for j in 0..g.np {
            let p = g.p(j);
            for i in 0..g.nx {
                let x = g.x(i);
                let w = self.get(i, j) * wx(i) * wp(j) * cell;
                s0 += w;
                sx += w * x;
                sp += w * p;
                sxx += w * x * x;
                spp += w * p * p;
            }
        }
        let mean_x = sx / s0;
        let mean_p = sp / s0;
        PhaseMoments {
            integral: s0,
            mean_x,
            mean_p,
            var_x: sxx / s0 - mean_x * mean_x,
            var_p: spp / s0 - mean_p * mean_p,
        }
    }

    pub fn check_normalization(&self) -> Result<(), WignerError> {
        let integral = self.moments().integral;
        if !((integral - 1.0).abs() <= NORMALIZATION_TOL) {
            return Err(WignerError::Normalization {
                integral,
                tolerance: NORMALIZATION_TOL,
            });
        }
        Ok(())
    }
}

/// Evaluates `W` over `grid` and checks that it integrates to one.
pub fn wigner(state: &QuantumState, frame: &OscillatorFrame, grid: &PhaseGrid) -> Result<WignerMap, WignerError> {
    let kernel = WignerKernel::new(state, *frame)?;
    let mut values = Vec::with_capacity(grid.nx * grid.np);
    for j in 0..grid.np {
        let p = grid.p(j);
        for i in 0..grid.nx {
            values.push(kernel.at(grid.x(i), p));
        }
    }
    let map = WignerMap::from_values(*grid, values)?;
    map.check_normalization()?;
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{FockSpace, SqueezeSpec, Truncation};

    fn state(dim: usize, alpha: Complex64, r: f64, phi: f64) -> QuantumState {
        let s = FockSpace::new(dim).unwrap();
        fock::squeezed_coherent_state(s, &SqueezeSpec::new(alpha, r, phi).unwrap(), Truncation::Enforce).unwrap()
    }

    /// Gaussian Wigner function of a displaced squeezed vacuum with real ξ.
    fn gaussian_oracle(frame: &OscillatorFrame, alpha: Complex64, r: f64, x: f64, p: f64) -> f64 {
        let vx = frame.vacuum_var_x() * (-2.0 * r).exp();
        let vp = frame.vacuum_var_p() * (2.0 * r).exp();
        let mx = 2.0 * frame.x_scale() * alpha.re;
        let mp = 2.0 * frame.p_scale() * alpha.im;
        let q = (x - mx).powi(2) / vx + (p - mp).powi(2) / vp;
        (-0.5 * q).exp() / (2.0 * PI * (vx * vp).sqrt())
    }

    #[test]
    fn vacuum_origin_value() {
        let frame = OscillatorFrame::default();
        let k = WignerKernel::new(&state(12, Complex64::zero(), 0.0, 0.0), frame).unwrap();
        assert!((k.at(0.0, 0.0) - 1.0 / PI).abs() < 1e-12);
        let frame = OscillatorFrame::new(0.5, 2.0, 3.0).unwrap();
        let k = WignerKernel::new(&state(12, Complex64::zero(), 0.0, 0.0), frame).unwrap();
        assert!((k.at(0.0, 0.0) - 1.0 / (PI * 0.5)).abs() < 1e-12);
    }

    #[test]
    fn matches_gaussian_for_displaced_squeezed_states() {
        let frame = OscillatorFrame::new(1.0, 1.3, 0.7).unwrap();
        let alpha = Complex64::new(0.8, -0.4);
        let st = state(60, alpha, 0.4, 0.0);
        let k = WignerKernel::new(&st, frame).unwrap();
        for &(x, p) in &[(0.0, 0.0), (1.1, -0.3), (-0.5, 0.9), (2.0, -1.5), (3.5, 2.5)] {
            let want = gaussian_oracle(&frame, alpha, 0.4, x, p);
            assert!((k.at(x, p) - want).abs() < 1e-10, "({x},{p}): {} vs {want}", k.at(x, p));
        }
    }

    #[test]
    fn stable_far_from_the_origin() {
        let frame = OscillatorFrame::default();
        let st = state(2 * fock::required_dim(0.0, 1.0), Complex64::zero(), 1.0, 0.0);
        let k = WignerKernel::new(&st, frame).unwrap();
        // |γ| ≈ 16 and 30 at the last two points; the doubled dim keeps the
        // state's own truncation error below the tolerance
        for &(x, p) in &[(0.0, 5.0), (0.2, 11.5), (1.5, 21.0)] {
            let want = gaussian_oracle(&frame, Complex64::zero(), 1.0, x, p);
            assert!((k.at(x, p) - want).abs() < 1e-10, "({x},{p}): {} vs {want}", k.at(x, p));
        }
    }

    #[test]
    fn squeezed_vacuum_moments_and_symmetry() {
        let frame = OscillatorFrame::default();
        let st = state(40, Complex64::zero(), 0.5, 0.0);
        let grid = PhaseGrid::covering(&st, &frame, 7.0, 81, 81).unwrap();
        let map = wigner(&st, &frame, &grid).unwrap();
        let rep = fock::variances(&st, &frame).unwrap();
        let m = map.moments();
        assert!((m.var_x / rep.var_x - 1.0).abs() < 1e-3);
        assert!((m.var_p / rep.var_p - 1.0).abs() < 1e-3);
        for j in 0..grid.np {
            for i in 0..grid.nx {
                let a = map.get(i, j);
                let b = map.get(grid.nx - 1 - i, grid.np - 1 - j);
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn narrow_grid_fails_normalization() {
        let frame = OscillatorFrame::default();
        let st = state(12, Complex64::zero(), 0.0, 0.0);
        let grid = PhaseGrid::new(-0.3, 0.3, 11, -0.3, 0.3, 11).unwrap();
        assert!(matches!(
            wigner(&st, &frame, &grid),
            Err(WignerError::Normalization { .. })
        ));
    }

    #[test]
    fn bad_grids_rejected() {
        assert!(PhaseGrid::new(1.0, 0.0, 10, 0.0, 1.0, 10).is_err());
        assert!(PhaseGrid::new(0.0, 1.0, 1, 0.0, 1.0, 10).is_err());
        assert!(PhaseGrid::new(0.0, f64::NAN, 10, 0.0, 1.0, 10).is_err());
    }
}
