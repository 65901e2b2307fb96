//! Correlation space `(s00, s01, s11)`: witness half-spaces, the classical
//! polytope and support-function comparisons between the two.

mod hull;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WitnessError};
use crate::parallel::map_indexed;
use crate::report;
use crate::states::{MeasurementSettings, Vec3, WitnessParams};
use crate::witness::{separable_bound, CorrelationPoint};

pub use hull::{extreme_points, IPoint};

pub const MAX_POLYTOPE_QUBITS: usize = 200;
pub const MIN_DIRECTIONS: usize = 6;
pub const PROTRUSION_TOL: f64 = 1e-9;

/// `normal . c <= offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Vec3,
    pub offset: f64,
}

impl HalfSpace {
    pub fn value(&self, c: &Vec3) -> f64 {
        self.normal[0] * c[0] + self.normal[1] * c[1] + self.normal[2] * c[2]
    }

    pub fn contains(&self, c: &Vec3) -> bool {
        self.value(c) <= self.offset
    }

    /// Containment up to `tol * max(1, |offset|)`.
    pub fn contains_within(&self, c: &Vec3, tol: f64) -> bool {
        self.value(c) <= self.offset + tol * self.offset.abs().max(1.0)
    }

    /// Rescaled to a unit normal.
    pub fn normalized(&self) -> Self {
        let len = self.normal.iter().map(|x| x * x).sum::<f64>().sqrt();
        Self {
            normal: self.normal.map(|x| x / len),
            offset: self.offset / len,
        }
    }
}

pub fn witness_halfspace(params: &WitnessParams, meas: &MeasurementSettings, n: usize) -> HalfSpace {
    HalfSpace {
        normal: [params.alpha / 2.0, params.beta, params.gamma / 2.0],
        offset: separable_bound(params, meas, n).value,
    }
}

/// Coefficients whose half-space normal is exactly `d`.
pub fn params_for_normal(d: &Vec3) -> WitnessParams {
    WitnessParams {
        alpha: 2.0 * d[0],
        beta: d[1],
        gamma: 2.0 * d[2],
    }
}

/// `count` nearly uniform unit vectors on a golden-angle spiral.
pub fn fibonacci_sphere(count: usize) -> Vec<Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

fn check_directions(direction_count: usize) -> Result<()> {
    if direction_count < MIN_DIRECTIONS {
        return Err(WitnessError::domain(format!(
            "need at least {MIN_DIRECTIONS} directions, got {direction_count}"
        )));
    }
    Ok(())
}

/// One witness half-space per Fibonacci direction.
pub fn sample_region(n: usize, meas: &MeasurementSettings, direction_count: usize) -> Result<Vec<HalfSpace>> {
    check_directions(direction_count)?;
    Ok(fibonacci_sphere(direction_count)
        .iter()
        .map(|d| witness_halfspace(&params_for_normal(d), meas, n))
        .collect())
}

/// Correlation points of deterministic local strategies. Each vertex keeps
/// one generating count `(n1, n2, n3, n4)` of the strategies
/// `(M0, M1) = (+,+), (+,-), (-,+), (-,-)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeVertexSet {
    pub n_qubits: usize,
    pub vertices: Vec<IPoint>,
    pub counts: Vec<[usize; 4]>,
}

/// `(A^2 - N, AB - D, B^2 - N)` for a strategy count.
pub fn strategy_point(counts: &[usize; 4]) -> IPoint {
    let [n1, n2, n3, n4] = counts.map(|c| c as i64);
    let n = n1 + n2 + n3 + n4;
    let a = n1 + n2 - n3 - n4;
    let b = n1 - n2 + n3 - n4;
    let d = n1 - n2 - n3 + n4;
    [a * a - n, a * b - d, b * b - n]
}

pub fn classical_polytope_vertices(n: usize, reduce_hull: bool) -> Result<PolytopeVertexSet> {
    if n == 0 {
        return Err(WitnessError::domain("need at least one qubit"));
    }
    if n > MAX_POLYTOPE_QUBITS {
        return Err(WitnessError::SizeLimit {
            n,
            max: MAX_POLYTOPE_QUBITS,
        });
    }
    let mut seen: BTreeMap<IPoint, [usize; 4]> = BTreeMap::new();
    for n1 in 0..=n {
        for n2 in 0..=n - n1 {
            for n3 in 0..=n - n1 - n2 {
                let counts = [n1, n2, n3, n - n1 - n2 - n3];
                seen.entry(strategy_point(&counts)).or_insert(counts);
            }
        }
    }
    let (mut vertices, mut counts): (Vec<IPoint>, Vec<[usize; 4]>) = seen.into_iter().unzip();
    if reduce_hull {
        // for fixed (A, B) the point moves along the s01 axis with D, so only
        // the two ends of that segment can be extreme
        let mut ends: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            let e = ends.entry(ab_key(&counts[i])).or_insert((i, i));
            if v[1] < vertices[e.0][1] {
                e.0 = i;
            }
            if v[1] > vertices[e.1][1] {
                e.1 = i;
            }
        }
        let mut keep: Vec<usize> = ends.values().flat_map(|&(a, b)| [a, b]).collect();
        keep.sort_unstable();
        keep.dedup();
        let pts: Vec<IPoint> = keep.iter().map(|&i| vertices[i]).collect();
        if let Some(ext) = extreme_points(&pts) {
            let chosen: Vec<usize> = ext.iter().map(|&j| keep[j]).collect();
            vertices = chosen.iter().map(|&i| vertices[i]).collect();
            counts = chosen.iter().map(|&i| counts[i]).collect();
        }
    }
    Ok(PolytopeVertexSet {
        n_qubits: n,
        vertices,
        counts,
    })
}

/// `(A, B)` packed into one key; both lie in `[-N, N]`.
fn ab_key(counts: &[usize; 4]) -> i64 {
    let [n1, n2, n3, n4] = counts.map(|c| c as i64);
    let a = n1 + n2 - n3 - n4;
    let b = n1 - n2 + n3 - n4;
    a * 1024 + b
}

impl PolytopeVertexSet {
    /// Recompute every vertex from its generating count.
    pub fn validate(&self) -> Result<()> {
        if self.vertices.len() != self.counts.len() {
            return Err(WitnessError::DimensionMismatch {
                expected: self.vertices.len(),
                found: self.counts.len(),
            });
        }
        let n = self.n_qubits as i64;
        let hi = n * n - n;
        for (v, c) in self.vertices.iter().zip(&self.counts) {
            if c.iter().sum::<usize>() != self.n_qubits || strategy_point(c) != *v {
                return Err(WitnessError::domain(format!("vertex {v:?} does not match counts {c:?}")));
            }
            if !(-n..=hi).contains(&v[0]) || !(-n..=hi).contains(&v[2]) || !(-hi..=hi).contains(&v[1]) {
                return Err(WitnessError::domain(format!("vertex {v:?} outside the bounding box")));
            }
        }
        Ok(())
    }

    /// `max_v d . v`.
    pub fn support(&self, d: &Vec3) -> f64 {
        self.vertices
            .iter()
            .map(|v| d[0] * v[0] as f64 + d[1] * v[1] as f64 + d[2] * v[2] as f64)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Protrusion {
    pub index: usize,
    pub direction: Vec3,
    pub witness_support: f64,
    pub polytope_support: f64,
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportReport {
    pub n_qubits: usize,
    pub meas: MeasurementSettings,
    pub direction_count: usize,
    pub vertex_count: usize,
    /// Largest `F(d) - h(d)` over all sampled directions, protruding or not.
    pub max_excess: f64,
    pub protrusions: Vec<Protrusion>,
}

/// Compare `F(d)` with the polytope support along Fibonacci directions `d`.
pub fn support_compare(n: usize, meas: &MeasurementSettings, direction_count: usize) -> Result<SupportReport> {
    let poly = classical_polytope_vertices(n, false)?;
    support_compare_with(&poly, meas, direction_count)
}

pub fn support_compare_with(
    poly: &PolytopeVertexSet,
    meas: &MeasurementSettings,
    direction_count: usize,
) -> Result<SupportReport> {
    check_directions(direction_count)?;
    meas.validate()?;
    let n = poly.n_qubits;
    let dirs = fibonacci_sphere(direction_count);
    let rows = map_indexed(dirs.len(), |i| {
        let d = dirs[i];
        let f = separable_bound(&params_for_normal(&d), meas, n).value;
        let h = poly.support(&d);
        Protrusion {
            index: i,
            direction: d,
            witness_support: f,
            polytope_support: h,
            excess: f - h,
        }
    });
    let max_excess = rows.iter().map(|r| r.excess).fold(f64::NEG_INFINITY, f64::max);
    Ok(SupportReport {
        n_qubits: n,
        meas: *meas,
        direction_count,
        vertex_count: poly.vertices.len(),
        max_excess,
        protrusions: rows.into_iter().filter(|r| r.excess > PROTRUSION_TOL).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub label: String,
    pub point: Vec3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionExport {
    pub n_qubits: usize,
    pub meas: MeasurementSettings,
    pub halfspaces: Vec<HalfSpace>,
    pub polytope_vertices: Vec<IPoint>,
    pub states: Vec<LabeledPoint>,
}

impl RegionExport {
    pub fn new(
        n_qubits: usize,
        meas: MeasurementSettings,
        halfspaces: Vec<HalfSpace>,
        polytope_vertices: Vec<IPoint>,
    ) -> Self {
        Self {
            n_qubits,
            meas,
            halfspaces,
            polytope_vertices,
            states: Vec::new(),
        }
    }

    pub fn with_state(mut self, label: impl Into<String>, point: &CorrelationPoint) -> Self {
        self.states.push(LabeledPoint {
            label: label.into(),
            point: point.as_array(),
        });
        self
    }

    pub fn to_json(&self) -> Result<String> {
        if self.halfspaces.is_empty() {
            return Err(WitnessError::domain("region export needs at least one half-space"));
        }
        report::to_json_string(self)
    }
}

pub fn export_region(region: &RegionExport, path: &Path) -> Result<()> {
    report::write_text(path, &region.to_json()?)
}

pub fn load_region(path: &Path) -> Result<RegionExport> {
    let text = std::fs::read_to_string(path).map_err(|e| WitnessError::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{dicke, ghz};
    use crate::witness::correlation_point;
    use std::f64::consts::PI;

    #[test]
    fn halfspace_examples() {
        let h = witness_halfspace(&WitnessParams::new(1.0, 0.0, 0.0).unwrap(), &MeasurementSettings::planar(0.0), 4);
        assert_eq!(h.normal, [0.5, 0.0, 0.0]);
        assert!((h.offset - 6.0).abs() < 1e-12);
        let p = WitnessParams::new(0.3, -1.2, 0.7).unwrap();
        let m = MeasurementSettings::planar(1.1);
        let a = witness_halfspace(&p, &m, 5).normalized();
        let b = witness_halfspace(&p.scaled(3.7), &m, 5).normalized();
        for i in 0..3 {
            assert!((a.normal[i] - b.normal[i]).abs() < 1e-12);
        }
        assert!((a.offset - b.offset).abs() < 1e-12);
    }

    #[test]
    fn sampled_region() {
        assert!(sample_region(4, &MeasurementSettings::planar(0.5), 5).is_err());
        let theta = (2.0f64 / 3.0).acos();
        let m = MeasurementSettings::planar(theta);
        let hs = sample_region(4, &m, 2000).unwrap();
        assert!(hs.iter().all(|h| h.contains(&[0.0; 3])));
        let d = correlation_point(&dicke(4, 2).unwrap(), &m).unwrap().as_array();
        assert!(hs.iter().any(|h| !h.contains(&d)));
        for theta in [0.2, PI / 3.0, 1.3] {
            let m = MeasurementSettings::planar(theta);
            let g = correlation_point(&ghz(4).unwrap(), &m).unwrap().as_array();
            assert!(sample_region(4, &m, 2000).unwrap().iter().all(|h| h.contains_within(&g, 1e-12)));
        }
    }

    #[test]
    fn small_vertex_examples() {
        assert_eq!(strategy_point(&[2, 0, 0, 0]), [2, 2, 2]);
        assert_eq!(strategy_point(&[1, 0, 0, 1]), [-2, -2, -2]);
        for n in 1..=6 {
            let poly = classical_polytope_vertices(n, false).unwrap();
            poly.validate().unwrap();
            // reversing the counts maps (A, B, D) to (-A, -B, D)
            for c in &poly.counts {
                let flipped = [c[3], c[2], c[1], c[0]];
                assert_eq!(strategy_point(&flipped), strategy_point(c));
            }
        }
        assert!(matches!(
            classical_polytope_vertices(201, false),
            Err(WitnessError::SizeLimit { .. })
        ));
    }

    #[test]
    fn hull_reduction_keeps_support() {
        for n in [2, 3, 4, 7, 10] {
            let full = classical_polytope_vertices(n, false).unwrap();
            let reduced = classical_polytope_vertices(n, true).unwrap();
            reduced.validate().unwrap();
            assert!(reduced.vertices.len() <= full.vertices.len());
            for d in fibonacci_sphere(300) {
                assert!((full.support(&d) - reduced.support(&d)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn containment_for_even_n_and_protrusion_for_odd() {
        for theta in [PI / 6.0, PI / 3.0, 4.0 * PI / 9.0] {
            let r = support_compare(4, &MeasurementSettings::planar(theta), 1000).unwrap();
            assert!(r.protrusions.is_empty(), "theta {theta}: {}", r.max_excess);
        }
        let r3 = support_compare(3, &MeasurementSettings::planar(PI / 3.0), 1000).unwrap();
        let r5 = support_compare(5, &MeasurementSettings::planar(PI / 3.0), 1000).unwrap();
        assert!(!r3.protrusions.is_empty());
        assert!(r5.max_excess < r3.max_excess);
    }

    #[test]
    fn export_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("region.json");
        let m = MeasurementSettings::planar(0.3);
        let hs = sample_region(4, &m, 50).unwrap();
        let poly = classical_polytope_vertices(4, true).unwrap();
        let region = RegionExport::new(4, m, hs, poly.vertices)
            .with_state("dicke(4,2)", &correlation_point(&dicke(4, 2).unwrap(), &m).unwrap());
        export_region(&region, &path).unwrap();
        assert_eq!(load_region(&path).unwrap(), region);

        let empty = RegionExport::new(4, m, sample_region(4, &m, 6).unwrap(), vec![]);
        export_region(&empty, &path).unwrap();
        assert!(load_region(&path).unwrap().polytope_vertices.is_empty());

        assert!(RegionExport::new(4, m, vec![], vec![]).to_json().is_err());
        assert!(matches!(
            export_region(&region, &dir.path().join("missing/region.json")),
            Err(WitnessError::Io { .. })
        ));
    }
}
