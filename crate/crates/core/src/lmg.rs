//! Isotropic Lipkin-Meshkov-Glick model and its thermal states.
//!
//! `H = -(lambda/N) sum_{i<j} (X_i X_j + Y_i Y_j) + h sum_i Z_i` conserves the
//! number of excitations, so both `H` and every Gibbs state are block
//! diagonal in the Hamming weight of computational basis states. Each block
//! is diagonalized exactly; the blocks together are the full `2^N` problem.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WitnessError};
use crate::optimizer::{minimize_witness, OptOptions};
use crate::states::{MeasurementSettings, Mode, WitnessParams};
use crate::witness::{CorrelationPoint, CorrelationSource, CorrelationTensor};

pub const MAX_QUBITS: usize = 12;

/// Relative gap below which the lowest levels count as degenerate.
const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LmgParams {
    pub n: usize,
    pub lambda: f64,
    pub h: f64,
}

impl LmgParams {
    pub fn new(n: usize, lambda: f64, h: f64) -> Result<Self> {
        if n == 0 {
            return Err(WitnessError::domain("LMG model needs at least one qubit"));
        }
        if n > MAX_QUBITS {
            return Err(WitnessError::SizeLimit { n, max: MAX_QUBITS });
        }
        if !lambda.is_finite() || !h.is_finite() {
            return Err(WitnessError::domain("LMG couplings must be finite"));
        }
        Ok(Self { n, lambda, h })
    }

    /// `lambda / N >= h > 0`, where the ground state is the central Dicke state.
    pub fn dicke_ground_regime(&self) -> bool {
        self.h > 0.0 && self.lambda / self.n as f64 >= self.h
    }
}

/// Computational basis states of fixed Hamming weight, ascending.
fn weight_states(n: usize, w: usize) -> Vec<u32> {
    (0u32..1 << n).filter(|s| s.count_ones() as usize == w).collect()
}

#[derive(Debug, Clone)]
struct Sector {
    weight: usize,
    states: Vec<u32>,
    matrix: DMatrix<f64>,
    energies: DVector<f64>,
    vectors: DMatrix<f64>,
}

/// `H` for the LMG model, stored and diagonalized per excitation sector.
#[derive(Debug, Clone)]
pub struct LmgHamiltonian {
    params: LmgParams,
    sectors: Vec<Sector>,
}

pub fn lmg_hamiltonian(params: &LmgParams) -> Result<LmgHamiltonian> {
    let p = LmgParams::new(params.n, params.lambda, params.h)?;
    let n = p.n;
    let hop = -2.0 * p.lambda / n as f64;
    let sectors = (0..=n)
        .map(|w| {
            let states = weight_states(n, w);
            let dim = states.len();
            let diag = p.h * (n as f64 - 2.0 * w as f64);
            let mut m = DMatrix::from_diagonal_element(dim, dim, diag);
            for (a, &s) in states.iter().enumerate() {
                for i in 0..n {
                    for j in (i + 1)..n {
                        if (s >> i) & 1 != (s >> j) & 1 {
                            let t = s ^ (1 << i) ^ (1 << j);
                            let b = states.binary_search(&t).expect("same weight");
                            m[(a, b)] += hop;
                        }
                    }
                }
            }
            let eig = SymmetricEigen::new(m.clone());
            Sector {
                weight: w,
                states,
                matrix: m,
                energies: eig.eigenvalues,
                vectors: eig.eigenvectors,
            }
        })
        .collect();
    Ok(LmgHamiltonian { params: p, sectors })
}

impl LmgHamiltonian {
    pub fn params(&self) -> &LmgParams {
        &self.params
    }

    pub fn n_qubits(&self) -> usize {
        self.params.n
    }

    /// The full `2^N x 2^N` matrix in the computational basis.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let dim = 1usize << self.params.n;
        let mut out = DMatrix::zeros(dim, dim);
        for sec in &self.sectors {
            for (a, &s) in sec.states.iter().enumerate() {
                for (b, &t) in sec.states.iter().enumerate() {
                    out[(s as usize, t as usize)] = sec.matrix[(a, b)];
                }
            }
        }
        out
    }

    /// All energies, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.sectors.iter().flat_map(|s| s.energies.iter().copied()).collect();
        e.sort_by(f64::total_cmp);
        e
    }

    pub fn ground_energy(&self) -> f64 {
        self.sectors
            .iter()
            .flat_map(|s| s.energies.iter().copied())
            .fold(f64::INFINITY, f64::min)
    }

    fn tolerance(&self) -> f64 {
        DEGENERACY_TOL * self.params.lambda.abs().max(self.params.h.abs() * self.params.n as f64).max(1.0)
    }

    /// Levels within the degeneracy tolerance of the ground energy, as `(sector, column)`.
    fn ground_levels(&self) -> Vec<(usize, usize)> {
        let e0 = self.ground_energy();
        let tol = self.tolerance();
        let mut out = Vec::new();
        for (si, sec) in self.sectors.iter().enumerate() {
            for (c, &e) in sec.energies.iter().enumerate() {
                if e - e0 <= tol {
                    out.push((si, c));
                }
            }
        }
        out
    }

    /// Ground energy and the full-space ground vector; errors on degeneracy.
    pub fn ground_state(&self) -> Result<(f64, DVector<f64>)> {
        let levels = self.ground_levels();
        if levels.len() != 1 {
            return Err(WitnessError::DegenerateGround(levels.len()));
        }
        let (si, c) = levels[0];
        let sec = &self.sectors[si];
        let mut v = DVector::zeros(1 << self.params.n);
        for (a, &s) in sec.states.iter().enumerate() {
            v[s as usize] = sec.vectors[(a, c)];
        }
        Ok((sec.energies[c], v))
    }
}

/// A density matrix that is block diagonal in the excitation number.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    blocks: Vec<DensityBlock>,
}

#[derive(Debug, Clone, PartialEq)]
struct DensityBlock {
    weight: usize,
    states: Vec<u32>,
    matrix: DMatrix<f64>,
}

impl DensityMatrix {
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn trace(&self) -> f64 {
        self.blocks.iter().map(|b| b.matrix.trace()).sum()
    }

    /// Smallest eigenvalue over all blocks.
    pub fn min_eigenvalue(&self) -> f64 {
        self.blocks
            .iter()
            .filter(|b| !b.states.is_empty())
            .map(|b| SymmetricEigen::new(b.matrix.clone()).eigenvalues.min())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n;
        let mut out = DMatrix::zeros(dim, dim);
        for b in &self.blocks {
            for (x, &s) in b.states.iter().enumerate() {
                for (y, &t) in b.states.iter().enumerate() {
                    out[(s as usize, t as usize)] = Complex64::new(b.matrix[(x, y)], 0.0);
                }
            }
        }
        out
    }

    /// Population of each excitation sector.
    pub fn sector_weights(&self) -> Vec<(usize, f64)> {
        self.blocks.iter().map(|b| (b.weight, b.matrix.trace())).collect()
    }
}

impl CorrelationSource for DensityMatrix {
    fn n_qubits(&self) -> usize {
        self.n
    }

    /// Rotation symmetry about z makes the tensor `diag(c_perp, c_perp, c_z)`.
    fn correlation_tensor(&self) -> CorrelationTensor {
        let n = self.n;
        let nf = n as f64;
        let mut cz = 0.0;
        let mut cperp = 0.0;
        for b in &self.blocks {
            let m = nf - 2.0 * b.weight as f64;
            cz += (m * m - nf) * b.matrix.trace();
            for (x, &s) in b.states.iter().enumerate() {
                for i in 0..n {
                    for j in 0..n {
                        if i != j && (s >> i) & 1 != (s >> j) & 1 {
                            let t = s ^ (1 << i) ^ (1 << j);
                            let y = b.states.binary_search(&t).expect("same weight");
                            cperp += b.matrix[(x, y)];
                        }
                    }
                }
            }
        }
        CorrelationTensor([[cperp, 0.0, 0.0], [0.0, cperp, 0.0], [0.0, 0.0, cz]])
    }
}

/// Gibbs state `exp(-H/T) / Z`; `T = 0` gives the ground-state projector.
pub fn thermal_state(ham: &LmgHamiltonian, t: f64) -> Result<DensityMatrix> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(WitnessError::domain(format!(
            "temperature must be finite and non-negative, got {t}"
        )));
    }
    let n = ham.params.n;
    let e0 = ham.ground_energy();
    let ground = if t == 0.0 {
        let levels = ham.ground_levels();
        if levels.len() != 1 {
            return Err(WitnessError::DegenerateGround(levels.len()));
        }
        Some(levels[0])
    } else {
        None
    };
    let mut blocks = Vec::with_capacity(ham.sectors.len());
    let mut z = 0.0;
    for (si, sec) in ham.sectors.iter().enumerate() {
        let weights: Vec<f64> = sec
            .energies
            .iter()
            .enumerate()
            .map(|(c, &e)| match ground {
                Some(g) => f64::from(u8::from(g == (si, c))),
                None => (-(e - e0) / t).exp(),
            })
            .collect();
        z += weights.iter().sum::<f64>();
        let v = &sec.vectors;
        let scaled = DMatrix::from_fn(v.nrows(), v.ncols(), |r, c| v[(r, c)] * weights[c]);
        blocks.push(DensityBlock {
            weight: sec.weight,
            states: sec.states.clone(),
            matrix: &scaled * v.transpose(),
        });
    }
    for b in blocks.iter_mut() {
        b.matrix /= z;
        // symmetrize away rounding
        let sym = 0.5 * (&b.matrix + b.matrix.transpose());
        b.matrix = sym;
    }
    Ok(DensityMatrix { n, blocks })
}

pub fn thermal_correlation_point(rho: &DensityMatrix, meas: &MeasurementSettings) -> CorrelationPoint {
    rho.correlation_tensor().point(meas)
}

/// Minimum of `<A>` on the thermal state at one temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalRecord {
    pub t: f64,
    pub min_expectation: f64,
    /// Correlation point at the minimizing measurement settings.
    pub point: CorrelationPoint,
    pub params: WitnessParams,
    pub meas: MeasurementSettings,
}

/// `g(T)`: planar minimum of `Tr(rho_T A)` over all witness parameters.
pub fn thermal_minimum(ham: &LmgHamiltonian, t: f64, opts: &OptOptions) -> Result<ThermalRecord> {
    let rho = thermal_state(ham, t)?;
    let r = minimize_witness(&rho, Mode::Planar, opts)?;
    Ok(ThermalRecord {
        t,
        min_expectation: r.best_value,
        point: thermal_correlation_point(&rho, &r.best_meas),
        params: r.best_params,
        meas: r.best_meas,
    })
}

pub fn thermal_scan(ham: &LmgHamiltonian, temps: &[f64], opts: &OptOptions) -> Result<Vec<ThermalRecord>> {
    if temps.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(WitnessError::domain("temperatures must be strictly increasing"));
    }
    temps.iter().map(|&t| thermal_minimum(ham, t, opts)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TcritOptions {
    pub t_max: f64,
    /// Bisection stops once the bracket is this narrow.
    pub tol: f64,
    pub max_steps: usize,
    pub opt: OptOptions,
}

impl Default for TcritOptions {
    fn default() -> Self {
        Self {
            t_max: 10.0,
            tol: 1e-4,
            max_steps: 30,
            opt: OptOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalTemperature {
    pub t_crit: f64,
    /// `g(0)`, the optimized ground-state minimum.
    pub g_zero: f64,
    pub bracket: (f64, f64),
    pub steps: usize,
}

/// Temperature where the optimized thermal minimum crosses zero, with the
/// parameters re-optimized at every bisection step.
pub fn critical_temperature(params: &LmgParams, opts: &TcritOptions) -> Result<CriticalTemperature> {
    let ham = lmg_hamiltonian(params)?;
    let g = |t: f64| thermal_minimum(&ham, t, &opts.opt).map(|r| r.min_expectation);
    let g_zero = g(0.0)?;
    let (mut lo, mut hi) = (0.0, opts.t_max);
    if !(g_zero < 0.0) || !(g(hi)? >= 0.0) {
        return Err(WitnessError::NotFound { lo, hi });
    }
    let mut steps = 0;
    while hi - lo > opts.tol && steps < opts.max_steps {
        let mid = 0.5 * (lo + hi);
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        steps += 1;
    }
    Ok(CriticalTemperature {
        t_crit: 0.5 * (lo + hi),
        g_zero,
        bracket: (lo, hi),
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::dicke;

    fn ham(n: usize, h: f64) -> LmgHamiltonian {
        lmg_hamiltonian(&LmgParams::new(n, 1.0, h).unwrap()).unwrap()
    }

    #[test]
    fn two_qubit_matrix() {
        let m = ham(2, 0.3).to_dense();
        // basis |00>, |01>, |10>, |11> with bit 0 the first qubit
        assert!((m[(0, 0)] - 0.6).abs() < 1e-15);
        assert!((m[(3, 3)] + 0.6).abs() < 1e-15);
        assert!(m[(1, 1)].abs() < 1e-15 && m[(2, 2)].abs() < 1e-15);
        assert!((m[(1, 2)] + 1.0).abs() < 1e-15 && (m[(2, 1)] + 1.0).abs() < 1e-15);
        assert_eq!(m.iter().filter(|x| **x != 0.0).count(), 4);
    }

    #[test]
    fn hermitian_and_spectrum_matches_dense() {
        let h = ham(5, 0.07);
        let d = h.to_dense();
        assert!((&d - d.transpose()).amax() < 1e-14);
        let mut dense: Vec<f64> = SymmetricEigen::new(d).eigenvalues.iter().copied().collect();
        dense.sort_by(f64::total_cmp);
        for (a, b) in dense.iter().zip(h.spectrum()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn dicke_ground_state() {
        let p = LmgParams::new(4, 1.0, 0.01).unwrap();
        assert!(p.dicke_ground_regime());
        let h = lmg_hamiltonian(&p).unwrap();
        let (e0, v) = h.ground_state().unwrap();
        assert!((e0 + 2.0).abs() < 1e-12);
        let spectrum = h.spectrum();
        assert!(spectrum[1] - spectrum[0] > 1e-3);
        // equal weight on the six weight-2 strings
        let amp = 1.0 / 6f64.sqrt();
        let overlap: f64 = (0..16usize)
            .filter(|s| s.count_ones() == 2)
            .map(|s| v[s] * amp)
            .sum();
        assert!((overlap.abs() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ground_projector_correlations_match_dicke() {
        let rho = thermal_state(&ham(4, 0.01), 0.0).unwrap();
        let c = rho.correlation_tensor().0;
        let d = dicke(4, 2).unwrap().correlation_tensor().0;
        for p in 0..3 {
            for q in 0..3 {
                assert!((c[p][q] - d[p][q]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn thermal_normalization_and_limits() {
        let h = ham(4, 0.01);
        for t in [0.0, 0.05, 0.5, 3.0, 1e6] {
            let rho = thermal_state(&h, t).unwrap();
            assert!((rho.trace() - 1.0).abs() < 1e-12);
            assert!(rho.min_eigenvalue() > -1e-12);
        }
        let hot = thermal_state(&h, 1e6).unwrap().to_dense();
        let mixed = DMatrix::<Complex64>::identity(16, 16) / Complex64::new(16.0, 0.0);
        assert!((hot - mixed).camax() < 1e-6);
        let p = thermal_correlation_point(&thermal_state(&h, 1e6).unwrap(), &MeasurementSettings::planar(0.7));
        assert!(p.norm() < 1e-4);
    }

    #[test]
    fn thermal_state_commutes_with_hamiltonian() {
        let h = ham(4, 0.01);
        let hd = h.to_dense().map(|x| Complex64::new(x, 0.0));
        let rho = thermal_state(&h, 0.4).unwrap().to_dense();
        let comm = &hd * &rho - &rho * &hd;
        assert!(comm.camax() < 1e-10);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            LmgParams::new(13, 1.0, 0.01),
            Err(WitnessError::SizeLimit { n: 13, max: 12 })
        ));
        assert!(thermal_state(&ham(3, 0.01), -1.0).is_err());
        // no field, no coupling: everything is degenerate
        let flat = lmg_hamiltonian(&LmgParams::new(3, 0.0, 0.0).unwrap()).unwrap();
        assert!(matches!(thermal_state(&flat, 0.0), Err(WitnessError::DegenerateGround(8))));
    }

    #[test]
    fn correlation_norm_shrinks_with_temperature() {
        let h = ham(4, 0.01);
        let meas = MeasurementSettings::planar((2.0f64 / 3.0).acos());
        let mut last = f64::INFINITY;
        for i in 0..20 {
            let t = 0.1 * 1.5f64.powi(i);
            let norm = thermal_correlation_point(&thermal_state(&h, t).unwrap(), &meas).norm();
            assert!(norm <= last + 1e-12, "T={t}");
            last = norm;
        }
    }
}
