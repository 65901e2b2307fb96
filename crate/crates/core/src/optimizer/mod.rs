//! Parameter searches: multi-start grid plus simplex refinement, and the
//! one-dimensional scans built on top of it.

mod scan;
pub mod simplex;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::banded::RealSymBand;
use crate::error::{Result, WitnessError};
use crate::parallel::{map_indexed, with_workers};
use crate::states::{spherical_unit, wrap_angle, MeasurementSettings, Mode, SymmetricState, WitnessParams};
use crate::witness::{
    bound_value, checked_bound, correlation_operator, degeneracy_threshold, expectation_from_point,
    witness_operator, CorrelationSource,
};

pub use scan::{
    chi_minimum, chi_scan, dicke_sweep, omega_scan, omega_window, parity_trends, theta_curve,
    theta_window, DickeRecord, ParityTrends, ScanRecord, Window,
};
pub use simplex::{nelder_mead, SimplexResult};

/// Grid densities and refinement budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptOptions {
    /// Points per spherical angle for the `(alpha, beta, gamma)` direction.
    pub sphere_grid: usize,
    /// Planar `theta` points in `(0, pi)`.
    pub theta_grid: usize,
    /// Polar points per measurement direction on the upper hemisphere.
    pub polar_grid: usize,
    /// Azimuth points per measurement direction.
    pub azimuth_grid: usize,
    pub seeds: usize,
    pub max_evals: usize,
    pub tol: f64,
    /// Thread count; `None` uses the global pool. Never affects results.
    pub workers: Option<usize>,
}

impl Default for OptOptions {
    fn default() -> Self {
        Self {
            sphere_grid: 26,
            theta_grid: 64,
            polar_grid: 8,
            azimuth_grid: 16,
            seeds: 10,
            max_evals: 500,
            tol: 1e-8,
            workers: None,
        }
    }
}

impl OptOptions {
    fn validate(&self) -> Result<()> {
        if self.sphere_grid < 2
            || self.theta_grid < 1
            || self.polar_grid < 2
            || self.azimuth_grid < 1
            || self.seeds < 1
        {
            return Err(WitnessError::domain("optimizer grids and seed count must be positive"));
        }
        if !(self.tol >= 0.0) {
            return Err(WitnessError::domain("optimizer tolerance must be non-negative"));
        }
        Ok(())
    }
}

/// A refined local minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub value: f64,
    pub params: WitnessParams,
    pub meas: MeasurementSettings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub best_value: f64,
    pub best_params: WitnessParams,
    pub best_meas: MeasurementSettings,
    pub evaluations: usize,
    pub converged: bool,
    /// Best raw grid value, before refinement.
    pub grid_value: f64,
    /// Refined seeds ending within `1e-3` of the optimum.
    pub near_optimal: Vec<Candidate>,
}

/// Search coordinates: `[polar, azimuth, theta]` or `[polar, azimuth, theta0, phi0, theta1, phi1]`.
fn decode(mode: Mode, x: &[f64]) -> (WitnessParams, MeasurementSettings) {
    let p = WitnessParams::from_sphere(x[0], x[1]);
    let m = match mode {
        Mode::Planar => MeasurementSettings::planar(x[2]),
        Mode::General => MeasurementSettings::general(x[2], x[3], x[4], x[5]),
    };
    (p, m)
}

fn canonical_direction(theta: f64, phi: f64) -> (f64, f64) {
    let v = spherical_unit(theta, phi);
    let polar = v[2].clamp(-1.0, 1.0).acos();
    let azimuth = if v[0].abs() + v[1].abs() < 1e-15 {
        0.0
    } else {
        wrap_angle(v[1].atan2(v[0]))
    };
    (polar, azimuth)
}

fn canonical_meas(m: &MeasurementSettings) -> MeasurementSettings {
    match *m {
        MeasurementSettings::Planar { theta } => MeasurementSettings::planar(wrap_angle(theta)),
        MeasurementSettings::General {
            theta0,
            phi0,
            theta1,
            phi1,
        } => {
            let (t0, p0) = canonical_direction(theta0, phi0);
            let (t1, p1) = canonical_direction(theta1, phi1);
            MeasurementSettings::general(t0, p0, t1, p1)
        }
    }
}

fn sphere_grid(k: usize) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(k * k);
    for i in 0..k {
        let polar = (i as f64 + 0.5) * PI / k as f64;
        for j in 0..k {
            out.push([polar, j as f64 * 2.0 * PI / k as f64]);
        }
    }
    out
}

fn meas_grid(mode: Mode, opts: &OptOptions) -> Vec<Vec<f64>> {
    match mode {
        Mode::Planar => (0..opts.theta_grid)
            .map(|i| vec![(i as f64 + 0.5) * PI / opts.theta_grid as f64])
            .collect(),
        Mode::General => {
            // m -> -m is a sign flip of beta, already covered by the sphere of coefficients
            // closed upper hemisphere, pole counted once
            let mut dirs = vec![[0.0, 0.0]];
            for i in 1..opts.polar_grid {
                let polar = i as f64 * 0.5 * PI / (opts.polar_grid - 1) as f64;
                for j in 0..opts.azimuth_grid {
                    dirs.push([polar, j as f64 * 2.0 * PI / opts.azimuth_grid as f64]);
                }
            }
            let mut out = Vec::with_capacity(dirs.len() * dirs.len());
            for a in &dirs {
                for b in &dirs {
                    out.push(vec![a[0], a[1], b[0], b[1]]);
                }
            }
            out
        }
    }
}

fn simplex_steps(mode: Mode, opts: &OptOptions) -> Vec<f64> {
    let k = opts.sphere_grid as f64;
    let mut steps = vec![PI / k, 2.0 * PI / k];
    match mode {
        Mode::Planar => steps.push(PI / opts.theta_grid as f64),
        Mode::General => {
            let polar = 0.5 * PI / (opts.polar_grid - 1) as f64;
            let azimuth = 2.0 * PI / opts.azimuth_grid as f64;
            steps.extend([polar, azimuth, polar, azimuth]);
        }
    }
    steps
}

/// Grid search over coefficient directions and measurement angles, then
/// simplex refinement of the best seeds.
///
/// `prepare` does the per-setting work once and returns the objective in the
/// coefficients. The objective takes a cutoff: when the true value is at or
/// above it, any value at or above the cutoff may be returned. `None` marks a
/// degenerate point, which is skipped.
pub(crate) fn search<P, E>(mode: Mode, opts: &OptOptions, prepare: P) -> Result<OptResult>
where
    P: Fn(&MeasurementSettings) -> E + Sync + Send,
    E: Fn(&WitnessParams, f64) -> Option<f64>,
{
    opts.validate()?;
    let sphere = sphere_grid(opts.sphere_grid);
    let sphere_params: Vec<WitnessParams> = sphere
        .iter()
        .map(|a| WitnessParams::from_sphere(a[0], a[1]))
        .collect();
    let meas = meas_grid(mode, opts);
    let steps = simplex_steps(mode, opts);
    let point = |pi: usize, mi: usize| -> Vec<f64> {
        let mut x = sphere[pi].to_vec();
        x.extend_from_slice(&meas[mi]);
        x
    };
    let objective = |x: &[f64]| {
        let (p, m) = decode(mode, x);
        prepare(&m)(&p, f64::INFINITY).unwrap_or(f64::INFINITY)
    };

    let run = || {
        // best coefficient direction for every measurement grid point
        let per_meas: Vec<Option<(f64, usize)>> = map_indexed(meas.len(), |mi| {
            let (_, m) = decode(mode, &point(0, mi));
            let eval = prepare(&m);
            let mut best: Option<(f64, usize)> = None;
            for (pi, p) in sphere_params.iter().enumerate() {
                let cutoff = best.map_or(f64::INFINITY, |b| b.0);
                if let Some(v) = eval(p, cutoff) {
                    if best.is_none_or(|(b, _)| v < b) {
                        best = Some((v, pi));
                    }
                }
            }
            best
        });
        let grid_evals = meas.len() * sphere.len();
        let mut seeds: Vec<(f64, usize, usize)> = per_meas
            .iter()
            .enumerate()
            .filter_map(|(mi, b)| b.map(|(v, pi)| (v, mi, pi)))
            .collect();
        if seeds.is_empty() {
            return Err(WitnessError::OptimizationFailed(
                "every grid point has a degenerate separable bound".into(),
            ));
        }
        seeds.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        seeds.truncate(opts.seeds);
        let grid_value = seeds[0].0;

        let refined: Vec<SimplexResult> = map_indexed(seeds.len(), |s| {
            let (_, mi, pi) = seeds[s];
            nelder_mead(objective, &point(pi, mi), &steps, opts.max_evals, opts.tol)
        });

        let mut evaluations = grid_evals;
        let mut candidates = Vec::with_capacity(refined.len());
        for (r, &(v0, mi, pi)) in refined.iter().zip(&seeds) {
            evaluations += r.evaluations;
            // refinement never makes a seed worse
            let (x, value) = if r.value <= v0 { (r.x.clone(), r.value) } else { (point(pi, mi), v0) };
            let (p, m) = decode(mode, &x);
            candidates.push((value, p, canonical_meas(&m), r.converged));
        }
        let best = candidates
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0).then(a.0.cmp(&b.0)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (best_value, best_params, best_meas, converged) = candidates[best];
        let near_optimal = candidates
            .iter()
            .filter(|c| c.0 <= best_value + 1e-3)
            .map(|c| Candidate {
                value: c.0,
                params: c.1,
                meas: c.2,
            })
            .collect();
        Ok(OptResult {
            best_value,
            best_params,
            best_meas,
            evaluations,
            converged,
            grid_value,
            near_optimal,
        })
    };
    with_workers(opts.workers, run)?
}

/// Minimize `<A>` over coefficients and measurement directions for a fixed state.
pub fn minimize_witness<S>(source: &S, mode: Mode, opts: &OptOptions) -> Result<OptResult>
where
    S: CorrelationSource + ?Sized,
{
    let n = source.n_qubits();
    let tensor = source.correlation_tensor();
    let nf = n as f64;
    let mut result = search(mode, opts, |m| {
        let point = tensor.point(m);
        let overlap = m.overlap();
        move |p: &WitnessParams, _cutoff: f64| {
            let f = bound_value(p, overlap, n);
            if f > 1e-9 * p.max_abs() * nf * nf {
                Some(1.0 - point.combination(p) / f)
            } else {
                None
            }
        }
    })?;
    // re-evaluate canonical settings so the stored value is reproducible bit for bit
    for c in result.near_optimal.iter_mut() {
        c.value = expectation_from_point(&tensor.point(&c.meas), &c.params, &c.meas, n)?;
    }
    result.best_value =
        expectation_from_point(&tensor.point(&result.best_meas), &result.best_params, &result.best_meas, n)?;
    Ok(result)
}

/// Smallest eigenvalue of the witness on the symmetric subspace and its eigenvector.
pub fn min_eigen_witness(
    n: usize,
    params: &WitnessParams,
    meas: &MeasurementSettings,
) -> Result<(f64, SymmetricState)> {
    witness_operator(n, params, meas)?.min_eigenpair()
}

/// `S_zz`, `S_zx`, `S_xx`; every planar correlation operator is a combination of these.
struct PlanarBasis {
    n: usize,
    zz: RealSymBand,
    zx: RealSymBand,
    xx: RealSymBand,
}

impl PlanarBasis {
    fn new(n: usize) -> Result<Self> {
        let z = [0.0, 0.0, 1.0];
        let x = [1.0, 0.0, 0.0];
        let real = |a: &[f64; 3], b: &[f64; 3]| -> Result<RealSymBand> {
            let op = correlation_operator(n, a, b)?;
            RealSymBand::from_hermitian(op.matrix(), 1e-12)
                .ok_or_else(|| WitnessError::domain("planar correlation operator is not real"))
        };
        Ok(Self {
            n,
            zz: real(&z, &z)?,
            zx: real(&z, &x)?,
            xx: real(&x, &x)?,
        })
    }

    /// Smallest witness eigenvalue for planar settings at angle `theta`, or
    /// just `cutoff` when the eigenvalue is known to be no smaller.
    fn min_eigenvalue(&self, p: &WitnessParams, theta: f64, cutoff: f64) -> Option<f64> {
        let (s, c) = theta.sin_cos();
        let f = bound_value(p, c, self.n);
        if !(f > degeneracy_threshold(p, self.n)) {
            return None;
        }
        let a_zz = 0.5 * p.alpha + p.beta * c + 0.5 * p.gamma * c * c;
        let a_zx = p.beta * s + p.gamma * s * c;
        let a_xx = 0.5 * p.gamma * s * s;
        let k = RealSymBand::combination(&[
            (&self.zz, -a_zz / f),
            (&self.zx, -a_zx / f),
            (&self.xx, -a_xx / f),
        ]);
        if cutoff.is_finite() && k.count_below(cutoff - 1.0) == 0 {
            return Some(cutoff);
        }
        Some(1.0 + k.smallest_eigenvalue())
    }
}

/// Minimize the smallest witness eigenvalue over all parameters.
///
/// The spectrum is invariant under global rotations, and any pair of
/// directions can be rotated into the xz-plane, so general mode reduces to
/// the planar search at `theta = arccos(m0 . m1)`. General-mode results are
/// reported in general form.
pub fn minimize_eigen_witness(n: usize, mode: Mode, opts: &OptOptions) -> Result<OptResult> {
    if n < 2 {
        return Err(WitnessError::domain(format!("need at least 2 qubits, got {n}")));
    }
    let basis = PlanarBasis::new(n)?;
    let mut result = search(Mode::Planar, opts, |m| {
        let theta = m.angles()[0];
        let basis = &basis;
        move |p: &WitnessParams, cutoff: f64| basis.min_eigenvalue(p, theta, cutoff)
    })?;
    if mode == Mode::General {
        result.best_meas = result.best_meas.to_general();
        for c in result.near_optimal.iter_mut() {
            c.meas = c.meas.to_general();
        }
    }
    Ok(result)
}

/// `<A>` for any correlation source, rejecting degenerate bounds.
pub fn source_expectation<S>(
    source: &S,
    params: &WitnessParams,
    meas: &MeasurementSettings,
) -> Result<f64>
where
    S: CorrelationSource + ?Sized,
{
    let n = source.n_qubits();
    checked_bound(params, meas, n)?;
    expectation_from_point(&source.correlation_tensor().point(meas), params, meas, n)
}

#[cfg(test)]
mod tests;
