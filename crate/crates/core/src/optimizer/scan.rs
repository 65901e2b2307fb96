use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::{minimize_witness, OptOptions, OptResult};
use crate::error::{Result, WitnessError};
use crate::states::{dicke, dicke_ghz_superposition, spin_squeezed, MeasurementSettings, Mode, WitnessParams};
use crate::witness::{expectation_from_point, CorrelationSource};

/// Values at or above this count as "not detected".
pub const DETECTION_THRESHOLD: f64 = -1e-10;

const THETA_WINDOW_GRID: usize = 4096;

/// One point of a one-dimensional scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    /// The scanned quantity: theta, chi, Omega or T.
    pub variable: f64,
    pub min_expectation: f64,
    pub params: WitnessParams,
    pub meas: MeasurementSettings,
}

impl ScanRecord {
    fn from_result(variable: f64, r: &OptResult) -> Self {
        Self {
            variable,
            min_expectation: r.best_value,
            params: r.best_params,
            meas: r.best_meas,
        }
    }
}

/// Intervals where a scanned expectation is negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub intervals: Vec<(f64, f64)>,
    /// The interval holding the most negative scanned value.
    pub primary: Option<(f64, f64)>,
    /// `(variable, value)` at the most negative grid point.
    pub deepest: Option<(f64, f64)>,
}

impl Window {
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn width(&self) -> f64 {
        self.primary.map_or(0.0, |(lo, hi)| hi - lo)
    }
}

fn negative(v: f64) -> bool {
    v < DETECTION_THRESHOLD
}

/// Bisect between a negative and a non-negative abscissa down to `tol`.
fn bisect<F: FnMut(f64) -> f64>(f: &mut F, mut neg: f64, mut nonneg: f64, tol: f64) -> f64 {
    while (neg - nonneg).abs() > tol {
        let mid = 0.5 * (neg + nonneg);
        if negative(f(mid)) {
            neg = mid;
        } else {
            nonneg = mid;
        }
    }
    0.5 * (neg + nonneg)
}

/// Sign-change bracketing on a grid, then bisection of every endpoint.
pub(crate) fn locate_window<F>(grid: &[f64], values: &[f64], mut f: F, tol: f64) -> Window
where
    F: FnMut(f64) -> f64,
{
    let mut intervals = Vec::new();
    let mut primary = None;
    let deepest = values
        .iter()
        .enumerate()
        .filter(|(_, v)| negative(**v))
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i);
    let mut i = 0;
    while i < grid.len() {
        if !negative(values[i]) {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < grid.len() && negative(values[i + 1]) {
            i += 1;
        }
        let end = i;
        let lo = if start == 0 {
            grid[0]
        } else {
            bisect(&mut f, grid[start], grid[start - 1], tol)
        };
        let hi = if end + 1 == grid.len() {
            grid[end]
        } else {
            bisect(&mut f, grid[end], grid[end + 1], tol)
        };
        if deepest.is_some_and(|d| (start..=end).contains(&d)) {
            primary = Some((lo, hi));
        }
        intervals.push((lo, hi));
        i += 1;
    }
    Window {
        intervals,
        primary,
        deepest: deepest.map(|d| (grid[d], values[d])),
    }
}

/// `<A(theta)>` at fixed coefficients in planar mode; `None` where the bound degenerates.
pub fn theta_curve<S>(source: &S, params: &WitnessParams, thetas: &[f64]) -> Vec<Option<f64>>
where
    S: CorrelationSource + ?Sized,
{
    let n = source.n_qubits();
    let c = source.correlation_tensor();
    thetas
        .iter()
        .map(|&t| {
            let m = MeasurementSettings::planar(t);
            expectation_from_point(&c.point(&m), params, &m, n).ok()
        })
        .collect()
}

/// Negativity window of `<A(theta)>` on `[0, pi/2]` at fixed coefficients.
pub fn theta_window<S>(source: &S, params: &WitnessParams) -> Window
where
    S: CorrelationSource + ?Sized,
{
    let n = source.n_qubits();
    let c = source.correlation_tensor();
    let eval = |t: f64| {
        let m = MeasurementSettings::planar(t);
        expectation_from_point(&c.point(&m), params, &m, n).unwrap_or(f64::INFINITY)
    };
    let grid: Vec<f64> = (0..=THETA_WINDOW_GRID)
        .map(|i| i as f64 * FRAC_PI_2 / THETA_WINDOW_GRID as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&t| eval(t)).collect();
    locate_window(&grid, &values, eval, 1e-12)
}

fn check_grid(grid: &[f64], name: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(WitnessError::domain(format!("{name} grid is empty")));
    }
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(WitnessError::domain(format!(
            "{name} grid must be finite and strictly increasing"
        )));
    }
    Ok(())
}

/// General-mode minimum of `<A>` for each squeezing strength.
pub fn chi_scan(n: usize, chi_grid: &[f64], opts: &OptOptions) -> Result<Vec<ScanRecord>> {
    check_grid(chi_grid, "chi")?;
    chi_grid
        .iter()
        .map(|&chi| {
            let r = minimize_witness(&spin_squeezed(n, chi)?, Mode::General, opts)?;
            Ok(ScanRecord::from_result(chi, &r))
        })
        .collect()
}

/// Golden-section refinement of a scanned minimum inside its grid neighbours.
fn refine_minimum<F>(records: &[ScanRecord], mut f: F, tol: f64) -> Result<ScanRecord>
where
    F: FnMut(f64) -> Result<ScanRecord>,
{
    let (i, _) = records
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.min_expectation.total_cmp(&b.1.min_expectation).then(a.0.cmp(&b.0)))
        .ok_or_else(|| WitnessError::domain("empty scan"))?;
    let mut best = records[i];
    if records.len() < 2 {
        return Ok(best);
    }
    let mut a = records[i.saturating_sub(1)].variable;
    let mut b = records[(i + 1).min(records.len() - 1)].variable;
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut rc = f(c)?;
    let mut rd = f(d)?;
    for r in [rc, rd] {
        if r.min_expectation < best.min_expectation {
            best = r;
        }
    }
    while (b - a).abs() > tol {
        if rc.min_expectation < rd.min_expectation {
            b = d;
            d = c;
            rd = rc;
            c = b - ratio * (b - a);
            rc = f(c)?;
        } else {
            a = c;
            c = d;
            rc = rd;
            d = a + ratio * (b - a);
            rd = f(d)?;
        }
        for r in [rc, rd] {
            if r.min_expectation < best.min_expectation {
                best = r;
            }
        }
    }
    Ok(best)
}

/// Scan over `chi`, then refine around the best grid point.
pub fn chi_minimum(n: usize, chi_grid: &[f64], opts: &OptOptions) -> Result<(ScanRecord, Vec<ScanRecord>)> {
    let records = chi_scan(n, chi_grid, opts)?;
    let tol = 1e-6 * chi_grid.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-3);
    let best = refine_minimum(
        &records,
        |chi| {
            let r = minimize_witness(&spin_squeezed(n, chi)?, Mode::General, opts)?;
            Ok(ScanRecord::from_result(chi, &r))
        },
        tol,
    )?;
    Ok((best, records))
}

fn omega_point(n: usize, omega: f64, opts: &OptOptions) -> Result<ScanRecord> {
    let r = minimize_witness(&dicke_ghz_superposition(n, omega)?, Mode::Planar, opts)?;
    Ok(ScanRecord::from_result(omega, &r))
}

fn check_omega_n(n: usize) -> Result<()> {
    if n < 6 {
        return Err(WitnessError::domain(format!(
            "the superposition scan needs N >= 6, got {n}"
        )));
    }
    Ok(())
}

/// Planar minimum of `<A>` on `cos(Omega) D^2 + sin(Omega) GHZ` for each `Omega`.
pub fn omega_scan(n: usize, omega_grid: &[f64], opts: &OptOptions) -> Result<Vec<ScanRecord>> {
    check_omega_n(n)?;
    check_grid(omega_grid, "omega")?;
    omega_grid.iter().map(|&w| omega_point(n, w, opts)).collect()
}

/// Omega scan plus the bisected negativity window and a refined minimum.
pub fn omega_window(
    n: usize,
    omega_grid: &[f64],
    opts: &OptOptions,
) -> Result<(Window, ScanRecord, Vec<ScanRecord>)> {
    let records = omega_scan(n, omega_grid, opts)?;
    let values: Vec<f64> = records.iter().map(|r| r.min_expectation).collect();
    let mut failure = None;
    let window = locate_window(
        omega_grid,
        &values,
        |w| match omega_point(n, w, opts) {
            Ok(r) => r.min_expectation,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        1e-4,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let best = refine_minimum(&records, |w| omega_point(n, w, opts), 1e-4)?;
    Ok((window, best, records))
}

/// Optimized minimum for the central Dicke state `D^{ceil(N/2)}_N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DickeRecord {
    pub n: usize,
    pub k: usize,
    pub min_expectation: f64,
    pub params: WitnessParams,
    pub meas: MeasurementSettings,
}

pub fn dicke_sweep(n_min: usize, n_max: usize, mode: Mode, opts: &OptOptions) -> Result<Vec<DickeRecord>> {
    if n_min < 2 || n_min > n_max {
        return Err(WitnessError::domain(format!(
            "invalid qubit range {n_min}..={n_max}"
        )));
    }
    (n_min..=n_max)
        .map(|n| {
            let k = n.div_ceil(2);
            let r = minimize_witness(&dicke(n, k)?, mode, opts)?;
            Ok(DickeRecord {
                n,
                k,
                min_expectation: r.best_value,
                params: r.best_params,
                meas: r.best_meas,
            })
        })
        .collect()
}

/// Even/odd trends of a Dicke sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityTrends {
    pub all_negative: bool,
    /// `|min|` never grows along even `N`.
    pub even_nonincreasing: bool,
    /// `|min|` never shrinks along odd `N`.
    pub odd_nondecreasing: bool,
}

pub fn parity_trends(records: &[DickeRecord], slack: f64) -> ParityTrends {
    let mags = |parity: usize| -> Vec<f64> {
        records
            .iter()
            .filter(|r| r.n % 2 == parity)
            .map(|r| r.min_expectation.abs())
            .collect()
    };
    let even = mags(0);
    let odd = mags(1);
    ParityTrends {
        all_negative: records.iter().all(|r| r.min_expectation < 0.0),
        even_nonincreasing: even.windows(2).all(|w| w[1] <= w[0] + slack),
        odd_nondecreasing: odd.windows(2).all(|w| w[1] >= w[0] - slack),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_from_synthetic_curve() {
        // negative on (0.3, 0.5) and deeper on (0.7, 0.9)
        let f = |x: f64| {
            if (0.3..0.5).contains(&x) {
                -0.1
            } else if (0.7..0.9).contains(&x) {
                -1.0
            } else {
                1.0
            }
        };
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
        let w = locate_window(&grid, &values, f, 1e-9);
        assert_eq!(w.intervals.len(), 2);
        let (lo, hi) = w.primary.unwrap();
        assert!((lo - 0.7).abs() < 1e-8 && (hi - 0.9).abs() < 1e-8);
        assert_eq!(w.deepest.unwrap().1, -1.0);
    }

    #[test]
    fn window_touching_domain_edge() {
        let f = |x: f64| x - 0.25;
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
        let w = locate_window(&grid, &values, f, 1e-12);
        let (lo, hi) = w.primary.unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - 0.25).abs() < 1e-9);
    }

    #[test]
    fn empty_window() {
        let grid = [0.0, 1.0, 2.0];
        let w = locate_window(&grid, &[0.0, 1.0, 0.5], |_| 1.0, 1e-6);
        assert!(w.is_empty() && w.primary.is_none() && w.width() == 0.0);
    }

    #[test]
    fn parity_trend_detection() {
        let rec = |n: usize, v: f64| DickeRecord {
            n,
            k: n.div_ceil(2),
            min_expectation: v,
            params: WitnessParams::new(1.0, 0.0, 0.0).unwrap(),
            meas: MeasurementSettings::planar(0.0),
        };
        let good = [rec(3, -0.33), rec(4, -0.66), rec(5, -0.4), rec(6, -0.6)];
        let t = parity_trends(&good, 1e-3);
        assert!(t.all_negative && t.even_nonincreasing && t.odd_nondecreasing);
        let bad = [rec(4, -0.5), rec(6, -0.6)];
        assert!(!parity_trends(&bad, 1e-3).even_nonincreasing);
    }
}
