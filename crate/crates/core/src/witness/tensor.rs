use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bound::{bound_value, degeneracy_threshold};
use crate::error::{Result, WitnessError};
use crate::states::{dot, MeasurementSettings, SymmetricState, Vec3, WitnessParams};

/// `(<S00>, <S01>, <S11>)`, coordinates in correlation space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationPoint {
    pub s00: f64,
    pub s01: f64,
    pub s11: f64,
}

impl CorrelationPoint {
    pub const ORIGIN: CorrelationPoint = CorrelationPoint {
        s00: 0.0,
        s01: 0.0,
        s11: 0.0,
    };

    pub fn as_array(&self) -> [f64; 3] {
        [self.s00, self.s01, self.s11]
    }

    pub fn norm(&self) -> f64 {
        self.s00.hypot(self.s01).hypot(self.s11)
    }

    /// `(alpha/2) s00 + beta s01 + (gamma/2) s11`.
    pub fn combination(&self, p: &WitnessParams) -> f64 {
        0.5 * p.alpha * self.s00 + p.beta * self.s01 + 0.5 * p.gamma * self.s11
    }
}

/// `C_pq = <sum_{i != j} sigma_p^(i) sigma_q^(j)>` for `p, q` in `{x, y, z}`.
///
/// Every two-body correlator with measurement directions `m_a`, `m_b` is the
/// bilinear form `m_a^T C m_b`, so a state enters the witness only through
/// this symmetric 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTensor(pub [[f64; 3]; 3]);

impl CorrelationTensor {
    pub fn bilinear(&self, a: &Vec3, b: &Vec3) -> f64 {
        let c = &self.0;
        let mut acc = 0.0;
        for p in 0..3 {
            acc += a[p] * (c[p][0] * b[0] + c[p][1] * b[1] + c[p][2] * b[2]);
        }
        acc
    }

    pub fn point(&self, meas: &MeasurementSettings) -> CorrelationPoint {
        let (m0, m1) = meas.directions();
        CorrelationPoint {
            s00: self.bilinear(&m0, &m0),
            s01: self.bilinear(&m0, &m1),
            s11: self.bilinear(&m1, &m1),
        }
    }

    pub fn symmetrized(&self) -> Self {
        let c = &self.0;
        let mut out = [[0.0; 3]; 3];
        for p in 0..3 {
            for q in 0..3 {
                out[p][q] = 0.5 * (c[p][q] + c[q][p]);
            }
        }
        Self(out)
    }

    /// Via collective spin moments: `C_pq = 2 <J_p J_q + J_q J_p> - N delta_pq`.
    pub fn from_symmetric_state(state: &SymmetricState) -> Self {
        let n = state.n_qubits();
        let psi = state.amplitudes();
        let nf = n as f64;
        let zero = Complex64::new(0.0, 0.0);
        let mut jx = vec![zero; n + 1];
        let mut jy = vec![zero; n + 1];
        let mut jz = vec![zero; n + 1];
        for k in 0..=n {
            let kf = k as f64;
            // J+ |k> = sqrt(k (N-k+1)) |k-1>,  J- |k> = sqrt((k+1)(N-k)) |k+1>
            if k > 0 {
                let up = (kf * (nf - kf + 1.0)).sqrt() * psi[k];
                jx[k - 1] += 0.5 * up;
                jy[k - 1] += Complex64::new(0.0, -0.5) * up;
            }
            if k < n {
                let down = ((kf + 1.0) * (nf - kf)).sqrt() * psi[k];
                jx[k + 1] += 0.5 * down;
                jy[k + 1] += Complex64::new(0.0, 0.5) * down;
            }
            jz[k] = (0.5 * nf - kf) * psi[k];
        }
        let vs = [jx, jy, jz];
        let mut c = [[0.0; 3]; 3];
        for p in 0..3 {
            for q in p..3 {
                let inner: f64 = vs[p]
                    .iter()
                    .zip(&vs[q])
                    .map(|(a, b)| (a.conj() * b).re)
                    .sum();
                let v = 4.0 * inner - if p == q { nf } else { 0.0 };
                c[p][q] = v;
                c[q][p] = v;
            }
        }
        Self(c)
    }
}

/// Anything with a two-body correlation tensor: pure symmetric states,
/// thermal states, brute-force full-space states.
pub trait CorrelationSource {
    fn n_qubits(&self) -> usize;
    fn correlation_tensor(&self) -> CorrelationTensor;
}

impl CorrelationSource for SymmetricState {
    fn n_qubits(&self) -> usize {
        SymmetricState::n_qubits(self)
    }

    fn correlation_tensor(&self) -> CorrelationTensor {
        CorrelationTensor::from_symmetric_state(self)
    }
}

/// `<A> = 1 - ((alpha/2) s00 + beta s01 + (gamma/2) s11) / F`.
pub fn expectation_from_point(
    point: &CorrelationPoint,
    params: &WitnessParams,
    meas: &MeasurementSettings,
    n: usize,
) -> Result<f64> {
    let f = bound_value(params, meas.overlap(), n);
    let threshold = degeneracy_threshold(params, n);
    if !(f > threshold) {
        return Err(WitnessError::DegenerateBound {
            alpha: params.alpha,
            beta: params.beta,
            gamma: params.gamma,
            n,
            bound: f,
            threshold,
        });
    }
    Ok(1.0 - point.combination(params) / f)
}

/// `<A>` on the maximally mixed state; all two-body correlators vanish there.
pub const MAXIMALLY_MIXED_EXPECTATION: f64 = 1.0;

/// White-noise fraction `P* = Q / (Q + 1)` at which a detection `<A> = -Q` is lost.
pub fn white_noise_threshold(q: f64) -> Result<f64> {
    if !(q >= 0.0) || !q.is_finite() {
        return Err(WitnessError::domain(format!(
            "detection depth Q must be finite and non-negative, got {q}"
        )));
    }
    Ok(q / (q + 1.0))
}

pub(crate) fn unit_check(v: &Vec3, name: &str) -> Result<()> {
    let norm = dot(v, v).sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(WitnessError::domain(format!(
            "{name} must be a unit vector, has norm {norm}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noise_thresholds() {
        assert!((white_noise_threshold(0.5).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(white_noise_threshold(1.0).unwrap(), 0.5);
        assert_eq!(white_noise_threshold(0.0).unwrap(), 0.0);
        assert!(white_noise_threshold(-0.1).is_err());
    }

    #[test]
    fn dicke_tensor_is_diagonal() {
        let s = crate::states::dicke(4, 2).unwrap();
        let c = CorrelationTensor::from_symmetric_state(&s).0;
        // j = 2, m = 0: <Jx^2> = <Jy^2> = 3, <Jz^2> = 0
        assert!((c[0][0] - 8.0).abs() < 1e-12);
        assert!((c[1][1] - 8.0).abs() < 1e-12);
        assert!((c[2][2] + 4.0).abs() < 1e-12);
        assert!(c[0][1].abs() < 1e-12 && c[0][2].abs() < 1e-12 && c[1][2].abs() < 1e-12);
    }
}
