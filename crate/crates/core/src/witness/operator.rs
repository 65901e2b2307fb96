use num_complex::Complex64;

use super::bound::checked_bound;
use super::tensor::{unit_check, CorrelationPoint};
use crate::banded::BandMatrix;
use crate::error::{Result, WitnessError};
use crate::states::{dot, MeasurementSettings, SymmetricState, Vec3, WitnessParams};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// A permutation-symmetric operator restricted to the symmetric subspace,
/// written in the Dicke basis `|D^0_N>, ..., |D^N_N>`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceOperator {
    n: usize,
    matrix: BandMatrix,
}

impl SubspaceOperator {
    pub(crate) fn new(n: usize, matrix: BandMatrix) -> Self {
        debug_assert_eq!(matrix.dim(), n + 1);
        Self { n, matrix }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &BandMatrix {
        &self.matrix
    }

    /// Entry `<D^k_N| O |D^k'_N>`.
    pub fn entry(&self, k: usize, k_prime: usize) -> Complex64 {
        self.matrix.get(k, k_prime)
    }

    pub fn expectation(&self, state: &SymmetricState) -> Result<f64> {
        if state.n_qubits() != self.n {
            return Err(WitnessError::DimensionMismatch {
                expected: self.n,
                found: state.n_qubits(),
            });
        }
        Ok(self.matrix.quadratic_form(state.amplitudes()))
    }

    /// Smallest eigenvalue and its normalized eigenvector.
    pub fn min_eigenpair(&self) -> Result<(f64, SymmetricState)> {
        let (value, vector) = self.matrix.smallest_eigenpair();
        Ok((value, SymmetricState::normalized(self.n, vector)?))
    }
}

/// Spin-`N/2` collective operators `(J_x, J_y, J_z)` with `J_z |D^k> = (N/2 - k) |D^k>`.
pub fn collective_spin(n: usize) -> (SubspaceOperator, SubspaceOperator, SubspaceOperator) {
    let nf = n as f64;
    let dim = n + 1;
    let mut jx = BandMatrix::zeros(dim, 1);
    let mut jy = BandMatrix::zeros(dim, 1);
    let mut jz = BandMatrix::zeros(dim, 1);
    for k in 0..dim {
        let kf = k as f64;
        jz.set(k, k, Complex64::new(0.5 * nf - kf, 0.0));
        if k > 0 {
            // <k-1| J+ |k>
            let c = (kf * (nf - kf + 1.0)).sqrt();
            jx.set(k - 1, k, Complex64::new(0.5 * c, 0.0));
            jx.set(k, k - 1, Complex64::new(0.5 * c, 0.0));
            jy.set(k - 1, k, Complex64::new(0.0, -0.5 * c));
            jy.set(k, k - 1, Complex64::new(0.0, 0.5 * c));
        }
    }
    (
        SubspaceOperator::new(n, jx),
        SubspaceOperator::new(n, jy),
        SubspaceOperator::new(n, jz),
    )
}

fn directional(spin: &(SubspaceOperator, SubspaceOperator, SubspaceOperator), m: &Vec3) -> BandMatrix {
    spin.0
        .matrix
        .scale(Complex64::new(m[0], 0.0))
        .add_scaled(&spin.1.matrix, Complex64::new(m[1], 0.0))
        .add_scaled(&spin.2.matrix, Complex64::new(m[2], 0.0))
}

fn correlation_with_spin(
    n: usize,
    spin: &(SubspaceOperator, SubspaceOperator, SubspaceOperator),
    m_a: &Vec3,
    m_b: &Vec3,
) -> SubspaceOperator {
    let ja = directional(spin, m_a);
    let jb = directional(spin, m_b);
    let anti = ja.mul(&jb).add_scaled(&jb.mul(&ja), ONE);
    let shift = BandMatrix::identity(n + 1).scale(Complex64::new(-(n as f64) * dot(m_a, m_b), 0.0));
    let m = anti
        .scale(Complex64::new(2.0, 0.0))
        .add_scaled(&shift, ONE)
        .hermitian_part();
    SubspaceOperator::new(n, m)
}

/// `sum_{i != j} (m_a . sigma)^(i) (m_b . sigma)^(j)` on the symmetric subspace,
/// built as `2 (J_a J_b + J_b J_a) - N (m_a . m_b) I`.
pub fn correlation_operator(n: usize, m_a: &Vec3, m_b: &Vec3) -> Result<SubspaceOperator> {
    unit_check(m_a, "m_a")?;
    unit_check(m_b, "m_b")?;
    let spin = collective_spin(n);
    Ok(correlation_with_spin(n, &spin, m_a, m_b))
}

/// The three correlation operators `(S00, S01, S11)` for a measurement setting.
pub fn correlation_operators(
    n: usize,
    meas: &MeasurementSettings,
) -> Result<[SubspaceOperator; 3]> {
    let (m0, m1) = meas.directions();
    unit_check(&m0, "m0")?;
    unit_check(&m1, "m1")?;
    let spin = collective_spin(n);
    Ok([
        correlation_with_spin(n, &spin, &m0, &m0),
        correlation_with_spin(n, &spin, &m0, &m1),
        correlation_with_spin(n, &spin, &m1, &m1),
    ])
}

/// `A = I - ((alpha/2) S00 + beta S01 + (gamma/2) S11) / F`.
pub fn witness_operator(
    n: usize,
    params: &WitnessParams,
    meas: &MeasurementSettings,
) -> Result<SubspaceOperator> {
    let f = checked_bound(params, meas, n)?.value;
    let [s00, s01, s11] = correlation_operators(n, meas)?;
    let numerator = s00
        .matrix
        .scale(Complex64::new(0.5 * params.alpha, 0.0))
        .add_scaled(&s01.matrix, Complex64::new(params.beta, 0.0))
        .add_scaled(&s11.matrix, Complex64::new(0.5 * params.gamma, 0.0));
    let m = BandMatrix::identity(n + 1)
        .add_scaled(&numerator, Complex64::new(-1.0 / f, 0.0))
        .hermitian_part();
    Ok(SubspaceOperator::new(n, m))
}

/// `<psi| A |psi>` through the subspace operator.
pub fn witness_expectation(
    state: &SymmetricState,
    params: &WitnessParams,
    meas: &MeasurementSettings,
) -> Result<f64> {
    witness_operator(state.n_qubits(), params, meas)?.expectation(state)
}

/// Expectations of the three correlation operators.
pub fn correlation_point(state: &SymmetricState, meas: &MeasurementSettings) -> Result<CorrelationPoint> {
    let [s00, s01, s11] = correlation_operators(state.n_qubits(), meas)?;
    Ok(CorrelationPoint {
        s00: s00.expectation(state)?,
        s01: s01.expectation(state)?,
        s11: s11.expectation(state)?,
    })
}
