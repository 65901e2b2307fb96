use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Result, WitnessError};
use crate::states::{MeasurementSettings, WitnessParams};

/// The quadratic form `sum_{i != j} n_i^T B n_j` that the witness combination
/// reduces to on product states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum QuadraticForm {
    Planar {
        a_zz: f64,
        a_zx: f64,
        a_xx: f64,
        lambda_z: f64,
        lambda_x: f64,
    },
    General {
        b: [[f64; 3]; 3],
        /// ascending
        eigenvalues: [f64; 3],
    },
}

impl QuadraticForm {
    pub fn lambda_min(&self) -> f64 {
        match *self {
            QuadraticForm::Planar { lambda_z, .. } => lambda_z,
            QuadraticForm::General { eigenvalues, .. } => eigenvalues[0],
        }
    }

    pub fn lambda_max(&self) -> f64 {
        match *self {
            QuadraticForm::Planar { lambda_x, .. } => lambda_x,
            QuadraticForm::General { eigenvalues, .. } => eigenvalues[2],
        }
    }

    /// The 3x3 matrix in `(x, y, z)` coordinates; planar forms live in the xz-plane.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        match *self {
            QuadraticForm::Planar { a_zz, a_zx, a_xx, .. } => [
                [a_xx, 0.0, 0.5 * a_zx],
                [0.0, 0.0, 0.0],
                [0.5 * a_zx, 0.0, a_zz],
            ],
            QuadraticForm::General { b, .. } => b,
        }
    }
}

/// Eigenvalues `(lambda_z, lambda_x)` of `A_zz z^2 + A_zx z x + A_xx x^2`.
fn planar_eigenvalues(a_zz: f64, a_zx: f64, a_xx: f64) -> (f64, f64) {
    let half_trace = 0.5 * (a_zz + a_xx);
    let d = a_zz - a_xx;
    let radius = 0.5 * (d * d + a_zx * a_zx).sqrt();
    (half_trace - radius, half_trace + radius)
}

/// Planar coefficients for directions at angle `theta` (`cos theta = c`, `sin theta = s >= 0`).
fn planar_coefficients(p: &WitnessParams, c: f64, s: f64) -> (f64, f64, f64) {
    let a_zz = 0.5 * p.alpha + p.beta * c + 0.5 * p.gamma * c * c;
    let a_zx = p.beta * s + p.gamma * s * c;
    let a_xx = 0.5 * p.gamma * s * s;
    (a_zz, a_zx, a_xx)
}

pub fn quad_form(params: &WitnessParams, meas: &MeasurementSettings) -> QuadraticForm {
    match *meas {
        MeasurementSettings::Planar { theta } => {
            let (s, c) = theta.sin_cos();
            let (a_zz, a_zx, a_xx) = planar_coefficients(params, c, s);
            let (lambda_z, lambda_x) = planar_eigenvalues(a_zz, a_zx, a_xx);
            QuadraticForm::Planar {
                a_zz,
                a_zx,
                a_xx,
                lambda_z,
                lambda_x,
            }
        }
        MeasurementSettings::General { .. } => {
            let (m0, m1) = meas.directions();
            let mut b = [[0.0; 3]; 3];
            for (i, row) in b.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = 0.5 * params.alpha * m0[i] * m0[j]
                        + 0.5 * params.beta * (m0[i] * m1[j] + m1[i] * m0[j])
                        + 0.5 * params.gamma * m1[i] * m1[j];
                }
            }
            let eig = SymmetricEigen::new(Matrix3::from_fn(|i, j| b[i][j]));
            let mut eigenvalues = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]];
            eigenvalues.sort_by(f64::total_cmp);
            QuadraticForm::General { b, eigenvalues }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `(N^2 - N) lambda_max`: every qubit along the top eigenvector.
    Aligned,
    /// `-N lambda_min`: half the qubits along, half against the bottom eigenvector.
    AntiAligned,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparableBound {
    pub value: f64,
    pub active_branch: Branch,
}

pub(crate) fn bound_from_extremes(lambda_min: f64, lambda_max: f64, n: usize) -> SeparableBound {
    let nf = n as f64;
    let aligned = (nf * nf - nf) * lambda_max;
    let anti = -nf * lambda_min;
    if aligned >= anti {
        SeparableBound {
            value: aligned,
            active_branch: Branch::Aligned,
        }
    } else {
        SeparableBound {
            value: anti,
            active_branch: Branch::AntiAligned,
        }
    }
}

/// `F = max{-N lambda_min, (N^2 - N) lambda_max}`.
///
/// In general mode `lambda` ranges over all three eigenvalues of `B`,
/// including the zero eigenvalue normal to the measurement plane; the result
/// coincides with the planar expression whenever both apply.
pub fn separable_bound(
    params: &WitnessParams,
    meas: &MeasurementSettings,
    n: usize,
) -> SeparableBound {
    let q = quad_form(params, meas);
    bound_from_extremes(q.lambda_min(), q.lambda_max(), n)
}

/// Closed-form `F` from the overlap `c = m0 . m1` alone.
///
/// `B` is supported on `span(m0, m1)`; in an orthonormal basis of that plane it
/// is the planar form with `cos theta = c`, so its spectrum is the planar pair
/// plus a zero. Used in optimizer hot loops.
#[inline]
pub fn bound_value(params: &WitnessParams, overlap: f64, n: usize) -> f64 {
    let c = overlap.clamp(-1.0, 1.0);
    let s = (1.0 - c * c).max(0.0).sqrt();
    let (a_zz, a_zx, a_xx) = planar_coefficients(params, c, s);
    let (lz, lx) = planar_eigenvalues(a_zz, a_zx, a_xx);
    let nf = n as f64;
    (-nf * lz).max((nf * nf - nf) * lx)
}

/// Bounds at or below this value are rejected as degenerate.
pub fn degeneracy_threshold(params: &WitnessParams, n: usize) -> f64 {
    1e-9 * params.max_abs() * (n * n) as f64
}

pub(crate) fn checked_bound(
    params: &WitnessParams,
    meas: &MeasurementSettings,
    n: usize,
) -> Result<SeparableBound> {
    let bound = separable_bound(params, meas, n);
    let threshold = degeneracy_threshold(params, n);
    if !(bound.value > threshold) {
        return Err(WitnessError::DegenerateBound {
            alpha: params.alpha,
            beta: params.beta,
            gamma: params.gamma,
            n,
            bound: bound.value,
            threshold,
        });
    }
    Ok(bound)
}
