//! Gaussian slowly varying envelope
//!
//! ```text
//! Ψ(x) = C · exp(−(x − x₀)² / (2w₀²) + i p₀ x)
//! ```
//!
//! with lengths in µm and `ħ = 1`, so `p₀` is in µm⁻¹.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_traits::Float;
use thiserror::Error;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WavePacketError {
    #[error("packet width w0 must be positive and finite, got {0}")]
    Width(f64),
    #[error("amplitude C must be non-negative and finite, got {0}")]
    Amplitude(f64),
    #[error("{0} must be finite")]
    NonFinite(&'static str),
    #[error("invalid grid: {0}")]
    Grid(&'static str),
    #[error("wavelength must be positive and finite, got {0} um")]
    Wavelength(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WavePacketParams {
    c: f64,
    x0: f64,
    w0: f64,
    p0: f64,
}

impl WavePacketParams {
    pub fn new(c: f64, x0: f64, w0: f64, p0: f64) -> Result<Self, WavePacketError> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(WavePacketError::Amplitude(c));
        }
        if !(w0 > 0.0 && w0.is_finite()) {
            return Err(WavePacketError::Width(w0));
        }
        if !x0.is_finite() {
            return Err(WavePacketError::NonFinite("x0"));
        }
        if !p0.is_finite() {
            return Err(WavePacketError::NonFinite("p0"));
        }
        Ok(Self { c, x0, w0, p0 })
    }

    /// Same packet with `C` set so that `∫|Ψ|² dx = 1`.
    pub fn normalized(&self) -> Self {
        Self {
            c: normalization_constant(self.w0),
            ..*self
        }
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn w0(&self) -> f64 {
        self.w0
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }
}

/// `(π w₀²)^(−1/4)`
pub fn normalization_constant(w0: f64) -> f64 {
    (PI * w0 * w0).powf(-0.25)
}

/// Uniform grid including both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DisplacementGrid {
    x_min: f64,
    x_max: f64,
    points: usize,
}

impl DisplacementGrid {
    pub fn new(x_min: f64, x_max: f64, points: usize) -> Result<Self, WavePacketError> {
        if !(x_min.is_finite() && x_max.is_finite()) {
            return Err(WavePacketError::Grid("bounds must be finite"));
        }
        if !(x_min < x_max) {
            return Err(WavePacketError::Grid("x_min must be below x_max"));
        }
        if points < 2 {
            return Err(WavePacketError::Grid("need at least 2 points"));
        }
        Ok(Self { x_min, x_max, points })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            self.x_max
        } else {
            self.x_min + (self.x_max - self.x_min) * i as f64 / (self.points - 1) as f64
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.x(i)).collect()
    }
}

pub fn evaluate_psi(params: &WavePacketParams, x: f64) -> Complex64 {
    let d = x - params.x0;
    let envelope = params.c * (-(d * d) / (2.0 * params.w0 * params.w0)).exp();
    Complex64::from_polar(envelope, params.p0 * x)
}

/// `|Ψ(x)|² = C² exp(−(x − x₀)²/w₀²)`, evaluated without the phase so the
/// result is bit-for-bit independent of `p₀`.
pub fn density(params: &WavePacketParams, x: f64) -> f64 {
    let d = x - params.x0;
    params.c * params.c * (-(d * d) / (params.w0 * params.w0)).exp()
}

pub fn density_profile(params: &WavePacketParams, grid: &DisplacementGrid) -> Vec<f64> {
    (0..grid.points()).map(|i| density(params, grid.x(i))).collect()
}

/// Narrows the envelope by `e^{−r}` (broadens for `r < 0`).
pub fn squeezed_width(params: &WavePacketParams, r: f64) -> Result<WavePacketParams, WavePacketError> {
    if !r.is_finite() {
        return Err(WavePacketError::NonFinite("r"));
    }
    WavePacketParams::new(params.c, params.x0, params.w0 * (-r).exp(), params.p0)
}

/// `ω = 2πc/λ` in rad/s for `λ` in µm.
pub fn angular_frequency(lambda_um: f64) -> Result<f64, WavePacketError> {
    if !(lambda_um > 0.0 && lambda_um.is_finite()) {
        return Err(WavePacketError::Wavelength(lambda_um));
    }
    Ok(TAU * SPEED_OF_LIGHT / (lambda_um * 1e-6))
}

/// Trapezoidal integral of uniformly spaced samples.
pub fn trapezoid(values: &[f64], spacing: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => spacing * (values[1..n - 1].iter().sum::<f64>() + 0.5 * (values[0] + values[n - 1])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(c: f64, x0: f64, w0: f64, p0: f64) -> WavePacketParams {
        WavePacketParams::new(c, x0, w0, p0).unwrap()
    }

    #[test]
    fn peak_value() {
        let p = params(3.0, 2.0, 0.7, 0.0);
        assert_eq!(evaluate_psi(&p, 2.0), Complex64::new(3.0, 0.0));
        let p = params(5.0, 1.0, 1.0, 0.4);
        assert!((evaluate_psi(&p, 1.0).norm_sqr() - 25.0).abs() < 1e-12);
        assert_eq!(density(&p, 1.0), 25.0);
    }

    #[test]
    fn one_width_offset() {
        let p = params(2.0, 0.0, 1.5, 0.0);
        let v = evaluate_psi(&p, 1.5);
        assert!((v.re - 2.0 * (-0.5f64).exp()).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn density_ignores_momentum() {
        let g = DisplacementGrid::new(0.0, 10.0, 101).unwrap();
        let a = density_profile(&params(5.0, 5.0, 1.0, 0.0), &g);
        let b = density_profile(&params(5.0, 5.0, 1.0, 10.0), &g);
        assert_eq!(a, b);
    }

    #[test]
    fn peak_on_default_grid() {
        let g = DisplacementGrid::new(0.0, 10.0, 1001).unwrap();
        let d = density_profile(&params(5.0, 5.0, 1.0, 0.0), &g);
        let (idx, max) = d
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
        assert_eq!(idx, 500);
        assert_eq!(g.x(idx), 5.0);
        assert_eq!(max, 25.0);
    }

    #[test]
    fn symmetric_about_center() {
        let g = DisplacementGrid::new(-4.0, 4.0, 801).unwrap();
        let d = density_profile(&params(1.3, 0.0, 0.9, 2.0), &g);
        for i in 0..d.len() {
            assert!((d[i] - d[d.len() - 1 - i]).abs() < 1e-12);
        }
    }

    #[test]
    fn normalized_integral() {
        let p = params(5.0, 5.0, 1.0, 0.0).normalized();
        let g = DisplacementGrid::new(0.0, 10.0, 1001).unwrap();
        let i = trapezoid(&density_profile(&p, &g), g.spacing());
        assert!((i - 1.0).abs() < 1e-6);
    }

    #[test]
    fn width_scaling() {
        let p = params(5.0, 5.0, 1.0, 0.0);
        assert_eq!(squeezed_width(&p, 0.0).unwrap(), p);
        assert!((squeezed_width(&p, 0.5).unwrap().w0() - 0.6065306597126334).abs() < 1e-15);
        assert!((squeezed_width(&p, -0.5).unwrap().w0() - 1.6487212707001282).abs() < 1e-15);
    }

    #[test]
    fn angular_frequency_values() {
        let w = angular_frequency(1.55).unwrap();
        // 2π · 299792458 / 1.55e-6
        assert!((w / 1.215259075683131e15 - 1.0).abs() < 1e-12);
        let contrived = TAU * SPEED_OF_LIGHT * 1e6;
        assert!((angular_frequency(contrived).unwrap() - 1.0).abs() < 1e-15);
        let back = w * 1.55e-6 / TAU;
        assert!((back / SPEED_OF_LIGHT - 1.0).abs() < 4.0 * f64::EPSILON);
        assert!(angular_frequency(0.0).is_err());
        assert!(angular_frequency(-1.0).is_err());
    }

    #[test]
    fn invalid_params() {
        assert!(WavePacketParams::new(5.0, 5.0, 0.0, 0.0).is_err());
        assert!(WavePacketParams::new(-1.0, 5.0, 1.0, 0.0).is_err());
        assert!(DisplacementGrid::new(1.0, 1.0, 10).is_err());
        assert!(DisplacementGrid::new(0.0, 1.0, 1).is_err());
    }
}
