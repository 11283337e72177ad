//! Matrix exponential by scaling and squaring with a truncated Taylor kernel.
//!
//! The kernel degree is picked a priori from the remainder bound
//!
//! ```text
//! ‖exp(B) − T_m(B)‖ ≤ ‖B‖^(m+1) / (m+1)! · 1 / (1 − ‖B‖/(m+2))
//! ```
//!
//! with `B = A / 2^s` and `‖B‖₁ ≤ 1`. Squaring `s` times amplifies a relative
//! kernel error by at most `2^s`, so the kernel is asked for `tol / 2^s`.
//! The polynomial is evaluated with the Paterson–Stockmeyer scheme.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Float, Zero};
use thiserror::Error;

use crate::linalg::{self, CMatrix};

/// Default absolute tolerance for [`matrix_exponential`].
pub const DEFAULT_TOL: f64 = 1e-13;

const SCALED_NORM: f64 = 1.0;
const ACTION_STEP_NORM: f64 = 2.0;
const MAX_DEGREE: usize = 64;
const MAX_SQUARINGS: i32 = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExpmError {
    #[error("matrix exponential needs a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("vector length {got} does not match matrix dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("input has non-finite entries")]
    NonFinite,
    #[error("tolerance {0} must be positive and finite")]
    BadTolerance(f64),
    #[error("1-norm {norm:e} overflows the exponential; tolerance cannot be met")]
    Overflow { norm: f64 },
}

/// Smallest Taylor degree whose remainder bound at `norm` is below `tol`.
fn taylor_degree(norm: f64, tol: f64) -> usize {
    if norm == 0.0 {
        return 0;
    }
    // term = norm^(m+1)/(m+1)!
    let mut term = norm;
    for m in 0..MAX_DEGREE {
        let k = (m + 1) as f64;
        if m > 0 {
            term *= norm / k;
        }
        let tail = if norm < k + 1.0 {
            term / (1.0 - norm / (k + 1.0))
        } else {
            f64::INFINITY
        };
        if tail <= tol {
            return m;
        }
    }
    MAX_DEGREE
}

/// `exp(A)` to absolute tolerance `tol` (entry-wise, relative to `‖exp(A)‖`).
pub fn matrix_exponential(a: &CMatrix, tol: f64) -> Result<CMatrix, ExpmError> {
    if !a.is_square() {
        return Err(ExpmError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(ExpmError::BadTolerance(tol));
    }
    if !a.is_finite() {
        return Err(ExpmError::NonFinite);
    }
    let n = a.rows();
    let norm = a.norm_1();
    if norm == 0.0 {
        return Ok(CMatrix::identity(n));
    }
    let squarings = if norm > SCALED_NORM {
        (norm / SCALED_NORM).log2().ceil() as i32
    } else {
        0
    };
    if squarings > MAX_SQUARINGS {
        return Err(ExpmError::Overflow { norm });
    }
    let scale = 2f64.powi(-squarings);
    let b = a.scale(Complex64::new(scale, 0.0));
    let kernel_tol = tol * scale;
    let degree = taylor_degree(norm * scale, kernel_tol);
    let mut out = taylor_paterson_stockmeyer(&b, degree);
    for _ in 0..squarings {
        out = out.matmul(&out);
    }
    if !out.is_finite() {
        return Err(ExpmError::Overflow { norm });
    }
    Ok(out)
}

fn taylor_paterson_stockmeyer(b: &CMatrix, degree: usize) -> CMatrix {
    let n = b.rows();
    if degree == 0 {
        return CMatrix::identity(n);
    }
    let coeffs: Vec<f64> = {
        let mut c = Vec::with_capacity(degree + 1);
        let mut f = 1.0;
        for k in 0..=degree {
            if k > 0 {
                f /= k as f64;
            }
            c.push(f);
        }
        c
    };
    let q = ((degree as f64).sqrt().ceil() as usize).max(1);
    // powers[i] = B^i for i in 0..=q
    let mut powers = Vec::with_capacity(q + 1);
    powers.push(CMatrix::identity(n));
    powers.push(b.clone());
    for i in 2..=q {
        let next = powers[i - 1].matmul(b);
        powers.push(next);
    }
    let blocks = degree / q;
    let block = |j: usize| {
        let mut acc = CMatrix::zeros(n, n);
        for i in 0..q {
            let k = j * q + i;
            if k > degree {
                break;
            }
            acc.axpy(Complex64::new(coeffs[k], 0.0), &powers[i]);
        }
        acc
    };
    let mut acc = block(blocks);
    for j in (0..blocks).rev() {
        acc = acc.matmul(&powers[q]);
        acc = acc.add(&block(j));
    }
    acc
}

/// `exp(A) v` without forming `exp(A)`.
///
/// Splits `A` into `s` substeps of 1-norm at most 2 and sums each substep's
/// Taylor series, stopping at the a-priori degree or earlier once two
/// consecutive terms fall below the substep tolerance.
pub fn expm_action(a: &CMatrix, v: &[Complex64], tol: f64) -> Result<Vec<Complex64>, ExpmError> {
    if !a.is_square() {
        return Err(ExpmError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if v.len() != a.rows() {
        return Err(ExpmError::LengthMismatch {
            expected: a.rows(),
            got: v.len(),
        });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(ExpmError::BadTolerance(tol));
    }
    if !a.is_finite() || v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(ExpmError::NonFinite);
    }
    let norm = a.norm_1();
    if norm == 0.0 {
        return Ok(v.to_vec());
    }
    let steps = (norm / ACTION_STEP_NORM).ceil().max(1.0);
    if steps > 1e9 {
        return Err(ExpmError::Overflow { norm });
    }
    let steps = steps as usize;
    let h = 1.0 / steps as f64;
    let step_tol = tol / steps as f64;
    let degree = taylor_degree(norm * h, step_tol).max(1);
    let spans = row_spans(a);
    let mut x = v.to_vec();
    let mut term = alloc::vec![Complex64::zero(); x.len()];
    for _ in 0..steps {
        let mut acc = x.clone();
        term.copy_from_slice(&x);
        let mut small_run = 0;
        for k in 1..=degree {
            let next = banded_matvec(a, &spans, &term);
            let f = h / k as f64;
            for (t, nv) in term.iter_mut().zip(&next) {
                *t = nv * f;
            }
            for (s, t) in acc.iter_mut().zip(&term) {
                *s += t;
            }
            let tn = linalg::norm_sqr(&term).sqrt();
            let an = linalg::norm_sqr(&acc).sqrt();
            if tn <= step_tol * an.max(1.0) {
                small_run += 1;
                if small_run == 2 {
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        x = acc;
    }
    if x.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(ExpmError::Overflow { norm });
    }
    Ok(x)
}

/// Column range `[lo, hi)` holding the nonzeros of each row.
fn row_spans(a: &CMatrix) -> Vec<(usize, usize)> {
    (0..a.rows())
        .map(|i| {
            let row = a.row(i);
            let lo = row.iter().position(|z| !z.is_zero()).unwrap_or(0);
            let hi = row.iter().rposition(|z| !z.is_zero()).map_or(0, |p| p + 1);
            (lo, hi.max(lo))
        })
        .collect()
}

fn banded_matvec(a: &CMatrix, spans: &[(usize, usize)], v: &[Complex64]) -> Vec<Complex64> {
    spans
        .iter()
        .enumerate()
        .map(|(i, &(lo, hi))| {
            a.row(i)[lo..hi]
                .iter()
                .zip(&v[lo..hi])
                .fold(Complex64::zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::{E, FRAC_PI_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Plain power series, summed until terms vanish. Only for small norms.
    fn series_oracle(a: &CMatrix) -> CMatrix {
        let n = a.rows();
        let mut sum = CMatrix::identity(n);
        let mut term = CMatrix::identity(n);
        for k in 1..200 {
            term = term.matmul(a).scale(c(1.0 / k as f64, 0.0));
            sum = sum.add(&term);
            if term.norm_max() < 1e-300 {
                break;
            }
        }
        sum
    }

    #[test]
    fn zero_matrix_is_identity() {
        let z = CMatrix::zeros(3, 3);
        assert_eq!(matrix_exponential(&z, DEFAULT_TOL).unwrap(), CMatrix::identity(3));
    }

    #[test]
    fn diagonal_exponentiates_entrywise() {
        let a = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]);
        let e = matrix_exponential(&a, DEFAULT_TOL).unwrap();
        assert!((e[(0, 0)] - c(E, 0.0)).norm() < 1e-13);
        assert!((e[(1, 1)] - c(E * E, 0.0)).norm() < 1e-13);
        assert!(e[(0, 1)].norm() < 1e-15 && e[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn rotation_generator() {
        let t = FRAC_PI_2;
        let a = CMatrix::from_real_rows(&[&[0.0, -t], &[t, 0.0]]);
        let e = matrix_exponential(&a, DEFAULT_TOL).unwrap();
        let want = CMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert!(e.max_abs_diff(&want) < 1e-13);
    }

    #[test]
    fn matches_power_series() {
        let a = CMatrix::from_rows(&[
            vec![c(0.3, -0.2), c(1.1, 0.4), c(-0.5, 0.0)],
            vec![c(0.0, 0.9), c(-0.7, 0.1), c(0.2, 0.2)],
            vec![c(0.6, 0.0), c(0.1, -1.3), c(0.4, 0.5)],
        ]);
        let e = matrix_exponential(&a, DEFAULT_TOL).unwrap();
        assert!(e.max_abs_diff(&series_oracle(&a)) < DEFAULT_TOL);
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        let a = CMatrix::zeros(2, 3);
        assert_eq!(
            matrix_exponential(&a, DEFAULT_TOL),
            Err(ExpmError::NotSquare { rows: 2, cols: 3 })
        );
        let mut b = CMatrix::zeros(2, 2);
        b[(0, 0)] = c(f64::NAN, 0.0);
        assert_eq!(matrix_exponential(&b, DEFAULT_TOL), Err(ExpmError::NonFinite));
    }

    #[test]
    fn overflow_is_reported() {
        let a = CMatrix::from_real_rows(&[&[1000.0]]);
        assert!(matches!(
            matrix_exponential(&a, DEFAULT_TOL),
            Err(ExpmError::Overflow { .. })
        ));
    }

    #[test]
    fn action_agrees_with_dense_exponential() {
        let a = CMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(2.0, 1.0), c(0.0, 0.0)],
            vec![c(-2.0, 1.0), c(0.0, 0.5), c(1.5, 0.0)],
            vec![c(0.0, 0.0), c(-1.5, 0.0), c(0.0, -0.3)],
        ]);
        let v = [c(1.0, 0.0), c(0.0, -0.5), c(0.25, 0.25)];
        let dense = matrix_exponential(&a, DEFAULT_TOL).unwrap().matvec(&v);
        let act = expm_action(&a, &v, DEFAULT_TOL).unwrap();
        for (x, y) in dense.iter().zip(&act) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}
