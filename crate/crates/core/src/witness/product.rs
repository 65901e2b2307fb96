use nalgebra::{Matrix3, SymmetricEigen, Vector3};

use super::bound::{checked_bound, quad_form, Branch, QuadraticForm};
use super::tensor::CorrelationPoint;
use crate::error::{Result, WitnessError};
use crate::states::{dot, BlochConfig, MeasurementSettings, Vec3, WitnessParams};

/// Correlation point of a product state from its Bloch vectors:
/// `s_ab = (sum_i m_a . n_i)(sum_j m_b . n_j) - sum_i (m_a . n_i)(m_b . n_i)`.
pub fn separable_correlations(config: &BlochConfig, meas: &MeasurementSettings) -> CorrelationPoint {
    let (m0, m1) = meas.directions();
    let (mut sum0, mut sum1) = (0.0, 0.0);
    let (mut sq00, mut sq01, mut sq11) = (0.0, 0.0, 0.0);
    for v in config.vectors() {
        let a = dot(&m0, v);
        let b = dot(&m1, v);
        sum0 += a;
        sum1 += b;
        sq00 += a * a;
        sq01 += a * b;
        sq11 += b * b;
    }
    CorrelationPoint {
        s00: sum0 * sum0 - sq00,
        s01: sum0 * sum1 - sq01,
        s11: sum1 * sum1 - sq11,
    }
}

/// Flip so the first nonzero component is positive.
fn canonical_sign(mut v: Vec3) -> Vec3 {
    if let Some(first) = v.iter().copied().find(|x| x.abs() > 1e-14) {
        if first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    v
}

/// Unit eigenvectors for the smallest and largest eigenvalue of the form.
fn extreme_eigenvectors(q: &QuadraticForm) -> (Vec3, Vec3) {
    match *q {
        QuadraticForm::Planar {
            a_zz,
            a_zx,
            a_xx,
            lambda_z,
            lambda_x,
        } => {
            // symmetric 2x2 in (z, x) coordinates: [[a_zz, a_zx/2], [a_zx/2, a_xx]]
            let off = 0.5 * a_zx;
            let eigvec = |lambda: f64| -> Vec3 {
                let r1 = (off, lambda - a_zz);
                let r2 = (lambda - a_xx, off);
                let (z, x) = if r1.0.hypot(r1.1) >= r2.0.hypot(r2.1) { r1 } else { r2 };
                let norm = z.hypot(x);
                if norm < 1e-300 {
                    // multiple of the identity
                    return if lambda == lambda_z { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
                }
                canonical_sign([x / norm, 0.0, z / norm])
            };
            if (lambda_x - lambda_z).abs() <= 1e-15 * lambda_x.abs().max(1.0) {
                return ([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]);
            }
            (eigvec(lambda_z), eigvec(lambda_x))
        }
        QuadraticForm::General { b, .. } => {
            let eig = SymmetricEigen::new(Matrix3::from_fn(|i, j| b[i][j]));
            let mut order = [0usize, 1, 2];
            order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
            let col = |i: usize| -> Vec3 {
                let v: Vector3<f64> = eig.eigenvectors.column(i).into_owned();
                let v = v.normalize();
                canonical_sign([v[0], v[1], v[2]])
            };
            (col(order[0]), col(order[2]))
        }
    }
}

/// A product configuration attaining the separable bound.
///
/// The aligned branch puts every qubit along the top eigenvector of the
/// form; the anti-aligned branch splits the qubits evenly between the two
/// signs of the bottom eigenvector, which requires even `N`.
pub fn saturating_config(
    params: &WitnessParams,
    meas: &MeasurementSettings,
    n: usize,
) -> Result<BlochConfig> {
    let bound = checked_bound(params, meas, n)?;
    let q = quad_form(params, meas);
    let (v_min, v_max) = extreme_eigenvectors(&q);
    let vectors = match bound.active_branch {
        Branch::Aligned => vec![v_max; n],
        Branch::AntiAligned => {
            if n % 2 == 1 {
                return Err(WitnessError::NotSaturable(n));
            }
            let neg = [-v_min[0], -v_min[1], -v_min[2]];
            (0..n).map(|i| if i < n / 2 { v_min } else { neg }).collect()
        }
    };
    BlochConfig::new(vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::bound::separable_bound;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn simple_configurations() {
        let n = 6;
        for theta in [0.0, 0.5, 1.3] {
            let m = MeasurementSettings::planar(theta);
            let up = BlochConfig::new(vec![[0.0, 0.0, 1.0]; n]).unwrap();
            let p = separable_correlations(&up, &m);
            let full = (n * n - n) as f64;
            assert!((p.s00 - full).abs() < 1e-12);
            assert!((p.s01 - full * theta.cos()).abs() < 1e-12);
            assert!((p.s11 - full * theta.cos().powi(2)).abs() < 1e-12);

            let half: Vec<Vec3> = (0..n)
                .map(|i| if i < n / 2 { [0.0, 0.0, 1.0] } else { [0.0, 0.0, -1.0] })
                .collect();
            let p = separable_correlations(&BlochConfig::new(half).unwrap(), &m);
            assert!((p.s00 + n as f64).abs() < 1e-12);

            let xs = BlochConfig::new(vec![[1.0, 0.0, 0.0]; n]).unwrap();
            let p = separable_correlations(&xs, &m);
            assert!(p.s00.abs() < 1e-12 && p.s01.abs() < 1e-12);
            assert!((p.s11 - full * theta.sin().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn saturating_examples() {
        let m = MeasurementSettings::planar(0.0);
        let p = WitnessParams::new(1.0, 0.0, 0.0).unwrap();
        let c = saturating_config(&p, &m, 4).unwrap();
        assert!(c.vectors().iter().all(|v| *v == [0.0, 0.0, 1.0]));
        assert!((separable_correlations(&c, &m).combination(&p) - 6.0).abs() < 1e-12);

        let p = WitnessParams::new(-2.0, 0.0, 0.0).unwrap();
        let c = saturating_config(&p, &m, 4).unwrap();
        let z: Vec<f64> = c.vectors().iter().map(|v| v[2]).collect();
        assert_eq!(z, vec![1.0, 1.0, -1.0, -1.0]);
        assert!((separable_correlations(&c, &m).combination(&p) - 4.0).abs() < 1e-12);
        assert!(matches!(
            saturating_config(&p, &m, 5),
            Err(WitnessError::NotSaturable(5))
        ));

        let p = WitnessParams::new(1.0, 1.13, -1.14).unwrap();
        let m = MeasurementSettings::planar(0.1);
        let c = saturating_config(&p, &m, 6).unwrap();
        let f = separable_bound(&p, &m, 6).value;
        assert!((separable_correlations(&c, &m).combination(&p) - f).abs() < 1e-9);
    }

    fn arb_params() -> impl Strategy<Value = WitnessParams> {
        (0.0f64..PI, 0.0f64..2.0 * PI).prop_map(|(a, b)| WitnessParams::from_sphere(a, b))
    }

    fn arb_meas() -> impl Strategy<Value = MeasurementSettings> {
        prop_oneof![
            (0.0f64..PI).prop_map(MeasurementSettings::planar),
            (0.0f64..PI, 0.0f64..6.3, 0.0f64..PI, 0.0f64..6.3)
                .prop_map(|(a, b, c, d)| MeasurementSettings::general(a, b, c, d)),
        ]
    }

    proptest! {
        #[test]
        fn even_n_saturation(p in arb_params(), m in arb_meas(), half in 1usize..5) {
            let n = 2 * half;
            let c = saturating_config(&p, &m, n).unwrap();
            let f = separable_bound(&p, &m, n).value;
            let got = separable_correlations(&c, &m).combination(&p);
            prop_assert!((got - f).abs() < 1e-9, "{} vs {}", got, f);
        }

        #[test]
        fn product_points_obey_bound(
            p in arb_params(), m in arb_meas(),
            dirs in proptest::collection::vec((0.0f64..PI, 0.0f64..6.3), 2..8),
        ) {
            let vectors: Vec<Vec3> = dirs.iter().map(|&(t, f)| crate::states::spherical_unit(t, f)).collect();
            let n = vectors.len();
            let c = BlochConfig::new(vectors).unwrap();
            let f = separable_bound(&p, &m, n).value;
            prop_assert!(separable_correlations(&c, &m).combination(&p) <= f + 1e-9);
        }
    }
}
