//! Brute-force references on the full `2^N`-dimensional Hilbert space.
//!
//! Everything here is deliberately naive: operators are literal Kronecker
//! products summed over ordered pairs of qubits. Qubit 0 is the leftmost
//! (most significant) tensor factor.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WitnessError};
use crate::states::{
    ln_factorials, BlochConfig, MeasurementSettings, SymmetricState, Vec3,
    WitnessParams,
};
use crate::lmg::{lmg_hamiltonian, thermal_correlation_point, thermal_state, LmgParams};
use crate::witness::{
    correlation_point, quad_form, saturating_config, separable_bound, separable_correlations,
    white_noise_threshold, witness_expectation, CorrelationPoint, CorrelationSource,
    CorrelationTensor, QuadraticForm, MAXIMALLY_MIXED_EXPECTATION,
};

pub const MAX_QUBITS: usize = 8;
pub const MAX_BRUTE_QUBITS: usize = 5;
pub const MIN_SAMPLES: usize = 1000;

type CMatrix = DMatrix<Complex64>;

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64 { re, im }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(WitnessError::domain("need at least one qubit"));
    }
    if n > MAX_QUBITS {
        return Err(WitnessError::SizeLimit { n, max: MAX_QUBITS });
    }
    Ok(())
}

/// `m . sigma` as a 2x2 matrix.
pub fn pauli_along(m: &Vec3) -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[
            c(m[2], 0.0),
            c(m[0], -m[1]),
            c(m[0], m[1]),
            c(-m[2], 0.0),
        ],
    )
}

/// `ops[0] (x) ops[1] (x) ...`
fn kron_all(ops: &[&CMatrix]) -> CMatrix {
    ops.iter()
        .skip(1)
        .fold(ops[0].clone(), |acc, op| acc.kronecker(op))
}

/// A pure state vector or a density matrix on `N <= 8` qubits.
#[derive(Debug, Clone, PartialEq)]
pub enum FullState {
    Pure { n: usize, amplitudes: Vec<Complex64> },
    Mixed { n: usize, rho: CMatrix },
}

impl FullState {
    pub fn pure(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_size(n)?;
        if amplitudes.len() != 1 << n {
            return Err(WitnessError::DimensionMismatch {
                expected: 1 << n,
                found: amplitudes.len(),
            });
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(WitnessError::domain(format!("state has squared norm {norm}")));
        }
        Ok(FullState::Pure { n, amplitudes })
    }

    pub fn mixed(n: usize, rho: CMatrix) -> Result<Self> {
        check_size(n)?;
        if rho.nrows() != 1 << n || rho.ncols() != 1 << n {
            return Err(WitnessError::DimensionMismatch {
                expected: 1 << n,
                found: rho.nrows(),
            });
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(WitnessError::domain(format!("density matrix has trace {tr}")));
        }
        Ok(FullState::Mixed { n, rho })
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            FullState::Pure { n, .. } | FullState::Mixed { n, .. } => *n,
        }
    }

    pub fn density_matrix(&self) -> CMatrix {
        match self {
            FullState::Pure { n, amplitudes } => {
                let v = CMatrix::from_column_slice(1 << n, 1, amplitudes);
                &v * v.adjoint()
            }
            FullState::Mixed { rho, .. } => rho.clone(),
        }
    }

    /// `Tr(rho O)`, real part.
    pub fn expectation(&self, op: &CMatrix) -> Result<f64> {
        let dim = 1usize << self.n_qubits();
        if op.nrows() != dim {
            return Err(WitnessError::DimensionMismatch {
                expected: dim,
                found: op.nrows(),
            });
        }
        Ok(match self {
            FullState::Pure { amplitudes, .. } => {
                let v = CMatrix::from_column_slice(dim, 1, amplitudes);
                (v.adjoint() * op * &v)[(0, 0)].re
            }
            FullState::Mixed { rho, .. } => (rho * op).trace().re,
        })
    }
}

/// Spread Dicke amplitudes evenly over the bitstrings of each weight.
pub fn embed_symmetric(state: &SymmetricState) -> Result<FullState> {
    let n = state.n_qubits();
    check_size(n)?;
    let lf = ln_factorials(n);
    let mut amps = vec![c(0.0, 0.0); 1 << n];
    for (s, a) in amps.iter_mut().enumerate() {
        let k = s.count_ones() as usize;
        let binom = (lf[n] - lf[k] - lf[n - k]).exp();
        *a = state.amplitudes()[k] / binom.sqrt();
    }
    FullState::pure(n, amps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairLabel {
    S00,
    S01,
    S11,
}

/// `sum_{i != j} (m_a . sigma)^(i) (m_b . sigma)^(j)` for arbitrary directions.
pub fn full_pair_operator(n: usize, m_a: &Vec3, m_b: &Vec3) -> Result<CMatrix> {
    check_size(n)?;
    let id = CMatrix::identity(2, 2);
    let a = pauli_along(m_a);
    let b = pauli_along(m_b);
    let dim = 1usize << n;
    let mut out = CMatrix::zeros(dim, dim);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let factors: Vec<&CMatrix> = (0..n)
                .map(|q| {
                    if q == i {
                        &a
                    } else if q == j {
                        &b
                    } else {
                        &id
                    }
                })
                .collect();
            out += kron_all(&factors);
        }
    }
    Ok(out)
}

pub fn full_correlation_operator(
    n: usize,
    meas: &MeasurementSettings,
    label: PairLabel,
) -> Result<CMatrix> {
    let (m0, m1) = meas.directions();
    match label {
        PairLabel::S00 => full_pair_operator(n, &m0, &m0),
        PairLabel::S01 => full_pair_operator(n, &m0, &m1),
        PairLabel::S11 => full_pair_operator(n, &m1, &m1),
    }
}

pub fn full_correlation_point(state: &FullState, meas: &MeasurementSettings) -> Result<CorrelationPoint> {
    let n = state.n_qubits();
    Ok(CorrelationPoint {
        s00: state.expectation(&full_correlation_operator(n, meas, PairLabel::S00)?)?,
        s01: state.expectation(&full_correlation_operator(n, meas, PairLabel::S01)?)?,
        s11: state.expectation(&full_correlation_operator(n, meas, PairLabel::S11)?)?,
    })
}

impl CorrelationSource for FullState {
    fn n_qubits(&self) -> usize {
        FullState::n_qubits(self)
    }

    /// Symmetrized pair sums along the coordinate axes.
    fn correlation_tensor(&self) -> CorrelationTensor {
        let n = self.n_qubits();
        let axes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let mut t = [[0.0; 3]; 3];
        for p in 0..3 {
            for q in p..3 {
                let op = full_pair_operator(n, &axes[p], &axes[q]).expect("size checked at construction");
                let v = self.expectation(&op).expect("matching dimension");
                t[p][q] = v;
                t[q][p] = v;
            }
        }
        CorrelationTensor(t).symmetrized()
    }
}

/// `(|00> + |11>)/sqrt2, (|00> - |11>)/sqrt2, (|01> + |10>)/sqrt2, (|01> - |10>)/sqrt2`.
fn bell_states() -> [CMatrix; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = |a: [f64; 4]| CMatrix::from_column_slice(4, 1, &a.map(|x| c(x * h, 0.0)));
    [
        v([1.0, 0.0, 0.0, 1.0]),
        v([1.0, 0.0, 0.0, -1.0]),
        v([0.0, 1.0, 1.0, 0.0]),
        v([0.0, 1.0, -1.0, 0.0]),
    ]
}

/// `(1/4) sum_mu |Psi_mu><Psi_mu|_{12} (x) |Psi_mu><Psi_mu|_{34}`.
pub fn smolin_state() -> FullState {
    let mut rho = CMatrix::zeros(16, 16);
    for b in bell_states() {
        let proj = &b * b.adjoint();
        rho += proj.kronecker(&proj) * c(0.25, 0.0);
    }
    FullState::Mixed { n: 4, rho }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BruteMax {
    pub value: f64,
    pub seed: u64,
    pub samples: usize,
}

/// Uniform point on the unit sphere.
pub fn random_direction(rng: &mut ChaCha8Rng) -> Vec3 {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * std::f64::consts::PI);
    let r = (1.0 - z * z).max(0.0).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

fn eigenvectors(q: &QuadraticForm) -> Vec<Vec3> {
    let b = q.matrix();
    let eig = nalgebra::SymmetricEigen::new(nalgebra::Matrix3::from_fn(|i, j| b[i][j]));
    (0..3)
        .map(|k| {
            let v = eig.eigenvectors.column(k);
            [v[0], v[1], v[2]]
        })
        .collect()
}

/// Largest `(alpha/2) s00 + beta s01 + (gamma/2) s11` found over pure product
/// states: structured configurations first, then `samples` random ones.
pub fn brute_max_separable(
    n: usize,
    params: &WitnessParams,
    meas: &MeasurementSettings,
    samples: usize,
    seed: u64,
) -> Result<BruteMax> {
    if !(2..=MAX_BRUTE_QUBITS).contains(&n) {
        return Err(WitnessError::SizeLimit {
            n,
            max: MAX_BRUTE_QUBITS,
        });
    }
    if samples < MIN_SAMPLES {
        return Err(WitnessError::domain(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let objective = |cfg: &BlochConfig| separable_correlations(cfg, meas).combination(params);
    let mut best = f64::NEG_INFINITY;
    let mut consider = |vectors: Vec<Vec3>| {
        if let Ok(cfg) = BlochConfig::new(vectors) {
            best = best.max(objective(&cfg));
        }
    };

    let (m0, m1) = meas.directions();
    let mut axes = vec![m0, m1, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    axes.extend(eigenvectors(&quad_form(params, meas)));
    for v in &axes {
        let neg = [-v[0], -v[1], -v[2]];
        consider(vec![*v; n]);
        for up in 1..n {
            consider((0..n).map(|i| if i < up { *v } else { neg }).collect());
        }
    }
    if let Ok(cfg) = saturating_config(params, meas, n) {
        consider(cfg.vectors().to_vec());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let vectors = (0..n).map(|_| random_direction(&mut rng)).collect();
        consider(vectors);
    }
    Ok(BruteMax {
        value: best,
        seed,
        samples,
    })
}

/// Separable bound checked against brute force; returns `(F, brute maximum)`.
pub fn bound_versus_brute(
    n: usize,
    params: &WitnessParams,
    meas: &MeasurementSettings,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let f = separable_bound(params, meas, n).value;
    Ok((f, brute_max_separable(n, params, meas, samples, seed)?.value))
}

/// Uniform random measurement settings in general form.
pub fn random_settings(rng: &mut ChaCha8Rng) -> MeasurementSettings {
    let polar = |rng: &mut ChaCha8Rng| rng.random_range(-1.0f64..=1.0).acos();
    let t0 = polar(rng);
    let p0 = rng.random_range(0.0..2.0 * std::f64::consts::PI);
    let t1 = polar(rng);
    let p1 = rng.random_range(0.0..2.0 * std::f64::consts::PI);
    MeasurementSettings::general(t0, p0, t1, p1)
}

/// Uniform random coefficient direction.
pub fn random_params(rng: &mut ChaCha8Rng) -> WitnessParams {
    let v = random_direction(rng);
    let polar = v[2].clamp(-1.0, 1.0).acos();
    let azimuth = v[1].atan2(v[0]);
    WitnessParams::from_sphere(polar, azimuth)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            cases: 0,
            max_deviation: 0.0,
            tolerance,
            passed: true,
        }
    }

    fn record(&mut self, deviation: f64) {
        self.cases += 1;
        self.max_deviation = self.max_deviation.max(deviation);
        self.passed = self.max_deviation <= self.tolerance;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub draws: usize,
    pub products: usize,
    pub max_n: usize,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Uniformly random symmetric pure state (normalized complex Gaussian amplitudes).
pub fn random_symmetric_state(n: usize, rng: &mut ChaCha8Rng) -> Result<SymmetricState> {
    let amps = (0..=n)
        .map(|_| {
            let gauss = |rng: &mut ChaCha8Rng| {
                let u: f64 = rng.random_range(f64::EPSILON..1.0);
                let v: f64 = rng.random_range(0.0..2.0 * std::f64::consts::PI);
                (-2.0 * u.ln()).sqrt() * v.cos()
            };
            c(gauss(rng), gauss(rng))
        })
        .collect();
    SymmetricState::normalized(n, amps)
}

fn point_gap(a: &CorrelationPoint, b: &CorrelationPoint) -> f64 {
    (a.s00 - b.s00)
        .abs()
        .max((a.s01 - b.s01).abs())
        .max((a.s11 - b.s11).abs())
}

/// Fast paths against brute force on random draws with `2 <= N <= max_n`,
/// plus the separable inequality on `products` random product states per
/// parameter draw for `2 <= N <= 7`.
pub fn verify_suite(max_n: usize, draws: usize, products: usize, seed: u64) -> Result<VerifyReport> {
    if !(2..=6).contains(&max_n) {
        return Err(WitnessError::SizeLimit { n: max_n, max: 6 });
    }
    if draws == 0 {
        return Err(WitnessError::domain("need at least one draw"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Check::new("correlation_point", 1e-9);
    let mut tensors = Check::new("correlation_tensor", 1e-9);
    let mut expectations = Check::new("witness_expectation", 1e-9);
    for _ in 0..draws {
        let n = rng.random_range(2..=max_n);
        let state = random_symmetric_state(n, &mut rng)?;
        let full = embed_symmetric(&state)?;
        let meas = random_settings(&mut rng);
        let params = random_params(&mut rng);

        let slow = full_correlation_point(&full, &meas)?;
        points.record(point_gap(&correlation_point(&state, &meas)?, &slow));

        let a = state.correlation_tensor().0;
        let b = full.correlation_tensor().0;
        let gap = (0..3)
            .flat_map(|p| (0..3).map(move |q| (p, q)))
            .map(|(p, q)| (a[p][q] - b[p][q]).abs())
            .fold(0.0, f64::max);
        tensors.record(gap);

        if let Ok(fast) = witness_expectation(&state, &params, &meas) {
            let f = separable_bound(&params, &meas, n).value;
            expectations.record((fast - (1.0 - slow.combination(&params) / f)).abs());
        }
    }

    let mut bounds = Check::new("separable_bound", 1e-9);
    for n in 2..=max_n.min(MAX_BRUTE_QUBITS) {
        for _ in 0..4 {
            let params = random_params(&mut rng);
            let meas = random_settings(&mut rng);
            let sample_seed = rng.random();
            let (f, brute) = bound_versus_brute(n, &params, &meas, MIN_SAMPLES, sample_seed)?;
            let excess = (brute - f).max(0.0);
            bounds.record(if n % 2 == 0 { (brute - f).abs() } else { excess });
        }
    }

    let mut inequality = Check::new("separable_inequality", 1e-9);
    let mut saturation = Check::new("even_saturation", 1e-9);
    for n in 2..=7 {
        for _ in 0..draws {
            let params = random_params(&mut rng);
            let meas = random_settings(&mut rng);
            let f = separable_bound(&params, &meas, n).value;
            let mut worst: f64 = 0.0;
            for _ in 0..products {
                let vectors = (0..n)
                    .map(|_| {
                        let r: f64 = rng.random_range(0.0..=1.0);
                        random_direction(&mut rng).map(|x| x * r.cbrt())
                    })
                    .collect();
                let v = separable_correlations(&BlochConfig::new(vectors)?, &meas).combination(&params);
                worst = worst.max(v - f);
            }
            inequality.record(worst);
            if n % 2 == 0 {
                let cfg = saturating_config(&params, &meas, n)?;
                saturation.record((separable_correlations(&cfg, &meas).combination(&params) - f).abs());
            }
        }
    }

    // axis correlators are exact here, so the origin is hit exactly
    let mut smolin = Check::new("smolin_origin", 0.0);
    let tensor = smolin_state().correlation_tensor();
    for _ in 0..8 {
        smolin.record(tensor.point(&random_settings(&mut rng)).norm());
    }

    let mut noise = Check::new("white_noise_threshold", 1e-10);
    for q in [0.1, 0.5, 1.0] {
        // zero of (1 - P)(-q) + P <A>_mixed by bisection
        let mixed = |p: f64| (1.0 - p) * -q + p * MAXIMALLY_MIXED_EXPECTATION;
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mixed(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        noise.record((white_noise_threshold(q)? - 0.5 * (lo + hi)).abs());
    }

    let mut thermal = Check::new("lmg_thermal_point", 1e-9);
    for n in 2..=max_n.min(6) {
        let h = rng.random_range(0.0..1.0);
        let ham = lmg_hamiltonian(&LmgParams::new(n, 1.0, h)?)?;
        let t = rng.random_range(0.05..2.0);
        let rho = thermal_state(&ham, t)?;
        let meas = random_settings(&mut rng);
        let full = FullState::mixed(n, rho.to_dense())?;
        thermal.record(point_gap(
            &thermal_correlation_point(&rho, &meas),
            &full_correlation_point(&full, &meas)?,
        ));
    }

    let checks = vec![
        points,
        tensors,
        expectations,
        bounds,
        inequality,
        saturation,
        smolin,
        noise,
        thermal,
    ];
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        seed,
        draws,
        products,
        max_n,
        checks,
        passed,
    })
}
