//! Pure permutation-symmetric states, product-state Bloch configurations and
//! the witness parameter types shared by every other module.
//!
//! Amplitudes of a [`SymmetricState`] are indexed by the excitation number `k`
//! of the Dicke basis vector `|D^k_N>` (k qubits in `|1>`), so `k = 0` is the
//! all-`|0>` state with collective `J_z = N/2`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WitnessError};

pub const NORM_TOL: f64 = 1e-12;

pub type Vec3 = [f64; 3];

/// Complex amplitude vector over the Dicke basis of `N` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricState {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl SymmetricState {
    pub fn new(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if n < 2 {
            return Err(WitnessError::domain(format!(
                "symmetric states need N >= 2, got {n}"
            )));
        }
        if amplitudes.len() != n + 1 {
            return Err(WitnessError::DimensionMismatch {
                expected: n + 1,
                found: amplitudes.len(),
            });
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(WitnessError::domain(format!(
                "amplitudes have squared norm {norm}, expected 1"
            )));
        }
        Ok(Self { n, amplitudes })
    }

    /// Normalizes the given amplitudes before validating them.
    pub fn normalized(n: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(WitnessError::domain("cannot normalize a zero vector"));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(n, amplitudes)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &SymmetricState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }
}

pub fn dicke(n: usize, k: usize) -> Result<SymmetricState> {
    if n < 2 {
        return Err(WitnessError::domain(format!("Dicke state needs N >= 2, got {n}")));
    }
    if k > n {
        return Err(WitnessError::domain(format!(
            "Dicke excitation k = {k} outside valid range 0..={n}"
        )));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); n + 1];
    amps[k] = Complex64::new(1.0, 0.0);
    SymmetricState::new(n, amps)
}

pub fn ghz(n: usize) -> Result<SymmetricState> {
    if n < 3 {
        return Err(WitnessError::domain(format!("GHZ state needs N >= 3, got {n}")));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); n + 1];
    amps[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[n] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    SymmetricState::new(n, amps)
}

/// `ln(k!)` for `k = 0..=n`.
pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..=n {
        acc += (i as f64).ln();
        out.push(acc);
    }
    out
}

/// One-axis twisted coherent state `2^{-N/2} sum_k sqrt(C(N,k)) e^{-i chi (k-N/2)^2} |D^k_N>`.
pub fn spin_squeezed(n: usize, chi: f64) -> Result<SymmetricState> {
    if n < 2 {
        return Err(WitnessError::domain(format!(
            "spin-squeezed state needs N >= 2, got {n}"
        )));
    }
    let lf = ln_factorials(n);
    let half = n as f64 / 2.0;
    let ln2 = std::f64::consts::LN_2;
    let amps: Vec<Complex64> = (0..=n)
        .map(|k| {
            let ln_weight = lf[n] - lf[k] - lf[n - k] - n as f64 * ln2;
            let magnitude = (0.5 * ln_weight).exp();
            let d = k as f64 - half;
            Complex64::from_polar(magnitude, -chi * d * d)
        })
        .collect();
    SymmetricState::normalized(n, amps)
}

/// `cos(omega) |D^2_N> + sin(omega) |GHZ_N>`.
pub fn dicke_ghz_superposition(n: usize, omega: f64) -> Result<SymmetricState> {
    if n < 3 {
        return Err(WitnessError::domain(format!(
            "Dicke-GHZ superposition needs N >= 3, got {n}"
        )));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); n + 1];
    let (s, c) = omega.sin_cos();
    amps[2] = Complex64::new(c, 0.0);
    amps[0] += Complex64::new(s * FRAC_1_SQRT_2, 0.0);
    amps[n] += Complex64::new(s * FRAC_1_SQRT_2, 0.0);
    SymmetricState::new(n, amps)
}

/// Bloch vectors of a pure or mixed product state, one per qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochConfig {
    vectors: Vec<Vec3>,
}

impl BlochConfig {
    pub fn new(vectors: Vec<Vec3>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(WitnessError::domain("Bloch configuration is empty"));
        }
        for (i, v) in vectors.iter().enumerate() {
            let norm = dot(v, v).sqrt();
            if !norm.is_finite() || norm > 1.0 + NORM_TOL {
                return Err(WitnessError::domain(format!(
                    "Bloch vector {i} has norm {norm} > 1"
                )));
            }
        }
        Ok(Self { vectors })
    }

    pub fn n_qubits(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec3] {
        &self.vectors
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Planar,
    General,
}

/// The two local measurement directions `m0`, `m1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum MeasurementSettings {
    /// `m0 = z`, `m1 = (sin theta, 0, cos theta)`.
    Planar { theta: f64 },
    /// Spherical angles of both directions.
    General {
        theta0: f64,
        phi0: f64,
        theta1: f64,
        phi1: f64,
    },
}

impl MeasurementSettings {
    pub fn planar(theta: f64) -> Self {
        MeasurementSettings::Planar { theta }
    }

    pub fn general(theta0: f64, phi0: f64, theta1: f64, phi1: f64) -> Self {
        MeasurementSettings::General {
            theta0,
            phi0,
            theta1,
            phi1,
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            MeasurementSettings::Planar { .. } => Mode::Planar,
            MeasurementSettings::General { .. } => Mode::General,
        }
    }

    /// The same directions expressed in general form.
    pub fn to_general(&self) -> Self {
        match *self {
            MeasurementSettings::Planar { theta } => Self::general(0.0, 0.0, theta, 0.0),
            general => general,
        }
    }

    pub fn directions(&self) -> (Vec3, Vec3) {
        match *self {
            MeasurementSettings::Planar { theta } => {
                ([0.0, 0.0, 1.0], [theta.sin(), 0.0, theta.cos()])
            }
            MeasurementSettings::General {
                theta0,
                phi0,
                theta1,
                phi1,
            } => (spherical_unit(theta0, phi0), spherical_unit(theta1, phi1)),
        }
    }

    /// `m0 . m1`.
    pub fn overlap(&self) -> f64 {
        match *self {
            MeasurementSettings::Planar { theta } => theta.cos(),
            _ => {
                let (m0, m1) = self.directions();
                dot(&m0, &m1)
            }
        }
    }

    pub fn angles(&self) -> Vec<f64> {
        match *self {
            MeasurementSettings::Planar { theta } => vec![theta],
            MeasurementSettings::General {
                theta0,
                phi0,
                theta1,
                phi1,
            } => vec![theta0, phi0, theta1, phi1],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.angles().iter().any(|a| !a.is_finite()) {
            return Err(WitnessError::domain("measurement angles must be finite"));
        }
        Ok(())
    }
}

pub fn spherical_unit(theta: f64, phi: f64) -> Vec3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

pub(crate) fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Coefficients of `(alpha/2) S00 + beta S01 + (gamma/2) S11`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl WitnessParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let p = Self { alpha, beta, gamma };
        if ![alpha, beta, gamma].iter().all(|x| x.is_finite()) {
            return Err(WitnessError::domain("witness coefficients must be finite"));
        }
        if p.max_abs() == 0.0 {
            return Err(WitnessError::domain(
                "witness coefficients alpha, beta, gamma are all zero",
            ));
        }
        Ok(p)
    }

    /// Point on the unit sphere from polar and azimuthal angles.
    pub fn from_sphere(polar: f64, azimuth: f64) -> Self {
        let [beta, gamma, alpha] = spherical_unit(polar, azimuth);
        Self { alpha, beta, gamma }
    }

    pub fn max_abs(&self) -> f64 {
        self.alpha.abs().max(self.beta.abs()).max(self.gamma.abs())
    }

    pub fn norm(&self) -> f64 {
        (self.alpha * self.alpha + self.beta * self.beta + self.gamma * self.gamma).sqrt()
    }

    /// Canonical representative with `alpha^2 + beta^2 + gamma^2 = 1`.
    pub fn normalized(&self) -> Self {
        self.scaled(1.0 / self.norm())
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            alpha: self.alpha * c,
            beta: self.beta * c,
            gamma: self.gamma * c,
        }
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }
}

pub(crate) fn wrap_angle(x: f64) -> f64 {
    x.rem_euclid(2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: u64, k: u64) -> u128 {
        (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
    }

    #[test]
    fn dicke_is_basis_vector() {
        let s = dicke(2, 1).unwrap();
        let re: Vec<f64> = s.amplitudes().iter().map(|a| a.re).collect();
        assert_eq!(re, vec![0.0, 1.0, 0.0]);
        let s = dicke(4, 2).unwrap();
        let re: Vec<f64> = s.amplitudes().iter().map(|a| a.re).collect();
        assert_eq!(re, vec![0.0, 0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn dicke_rejects_out_of_range_k() {
        let err = dicke(3, 5).unwrap_err();
        assert!(err.to_string().contains("0..=3"), "{err}");
        assert!(dicke(1, 0).is_err());
    }

    #[test]
    fn ghz_definition() {
        let s = ghz(3).unwrap();
        let a = s.amplitudes();
        assert!((a[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((a[3].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(a[1].norm(), 0.0);
        assert_eq!(ghz(4).unwrap().amplitudes()[4].re, FRAC_1_SQRT_2);
        assert!(ghz(2).is_err());
    }

    #[test]
    fn spin_squeezed_small_cases() {
        let s = spin_squeezed(2, 0.0).unwrap();
        let a = s.amplitudes();
        assert!((a[0].re - 0.5).abs() < 1e-15);
        assert!((a[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((a[2].re - 0.5).abs() < 1e-15);

        // e^{-i pi (k-1)^2}: -1 at k = 0, 2
        let s = spin_squeezed(2, PI).unwrap();
        let a = s.amplitudes();
        assert!((a[0] - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
        assert!((a[1] - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((a[2] - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn spin_squeezed_large_n_norm() {
        let s = spin_squeezed(1000, 0.01).unwrap();
        // direct summation independent of the constructor's normalization pass
        let lf = ln_factorials(1000);
        let direct: f64 = (0..=1000)
            .map(|k| (lf[1000] - lf[k] - lf[1000 - k] - 1000.0 * std::f64::consts::LN_2).exp())
            .sum();
        assert!((direct - 1.0).abs() < 1e-10, "{direct}");
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spin_squeezed_matches_exact_binomials() {
        for n in 2..=30u64 {
            let s = spin_squeezed(n as usize, 0.0).unwrap();
            for k in 0..=n {
                let exact = (binomial(n, k) as f64 / 2f64.powi(n as i32)).sqrt();
                let a = s.amplitudes()[k as usize];
                assert!(a.im == 0.0 && a.re > 0.0);
                assert!((a.re - exact).abs() <= 1e-14 * exact.max(1e-300) + 1e-16);
            }
        }
    }

    #[test]
    fn superposition_limits() {
        let s = dicke_ghz_superposition(6, 0.0).unwrap();
        assert_eq!(s, dicke(6, 2).unwrap());
        let s = dicke_ghz_superposition(6, PI / 2.0).unwrap();
        for (a, b) in s.amplitudes().iter().zip(ghz(6).unwrap().amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        let s = dicke_ghz_superposition(10, 1.80).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(dicke_ghz_superposition(2, 0.3).is_err());
    }

    #[test]
    fn measurement_directions() {
        let m = MeasurementSettings::planar(0.3);
        let (m0, m1) = m.directions();
        assert_eq!(m0, [0.0, 0.0, 1.0]);
        assert!((dot(&m1, &m1) - 1.0).abs() < 1e-12);
        let g = m.to_general();
        let (g0, g1) = g.directions();
        for i in 0..3 {
            assert!((g0[i] - m0[i]).abs() < 1e-15 && (g1[i] - m1[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn params_validation() {
        assert!(WitnessParams::new(0.0, 0.0, 0.0).is_err());
        let p = WitnessParams::new(3.0, 0.0, 4.0).unwrap().normalized();
        assert!((p.norm() - 1.0).abs() < 1e-15);
        let q = WitnessParams::from_sphere(1.1, 2.3);
        assert!((q.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bloch_config_rejects_long_vectors() {
        assert!(BlochConfig::new(vec![[0.0, 0.0, 1.1]]).is_err());
        assert!(BlochConfig::new(vec![[0.6, 0.0, 0.8]]).is_ok());
    }

    proptest::proptest! {
        #[test]
        fn squeezed_magnitudes_independent_of_chi(n in 2usize..60, chi in -10.0f64..10.0) {
            let a = spin_squeezed(n, 0.0).unwrap();
            let b = spin_squeezed(n, chi).unwrap();
            for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
                proptest::prop_assert!((x.norm() - y.norm()).abs() < 1e-14);
            }
        }

        #[test]
        fn superposition_periodic(n in 3usize..40, omega in -7.0f64..7.0) {
            let a = dicke_ghz_superposition(n, omega).unwrap();
            let b = dicke_ghz_superposition(n, omega + 2.0 * PI).unwrap();
            for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
                proptest::prop_assert!((x - y).norm() < 1e-12);
            }
            proptest::prop_assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }
}
