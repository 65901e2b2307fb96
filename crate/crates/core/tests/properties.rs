use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symwit::geometry::{classical_polytope_vertices, fibonacci_sphere, params_for_normal};
use symwit::lmg::{lmg_hamiltonian, thermal_correlation_point, thermal_minimum, thermal_state, LmgParams};
use symwit::optimizer::OptOptions;
use symwit::oracle::{full_correlation_point, random_symmetric_state, verify_suite, FullState};
use symwit::witness::{correlation_operator, correlation_point, separable_bound, witness_expectation};
use symwit::{dicke, dicke_ghz_superposition, ghz, spin_squeezed, MeasurementSettings, SymmetricState, WitnessParams};

fn arb_params() -> impl Strategy<Value = WitnessParams> {
    (0.0..PI, 0.0..2.0 * PI).prop_map(|(p, a)| WitnessParams::from_sphere(p, a))
}

fn arb_meas() -> impl Strategy<Value = MeasurementSettings> {
    prop_oneof![
        (0.0..PI).prop_map(MeasurementSettings::planar),
        (0.0..PI, 0.0..2.0 * PI, 0.0..PI, 0.0..2.0 * PI)
            .prop_map(|(a, b, c, d)| MeasurementSettings::general(a, b, c, d)),
    ]
}

fn arb_state() -> impl Strategy<Value = SymmetricState> {
    (2usize..40, 0usize..4, -3.0f64..3.0, any::<u64>()).prop_map(|(n, family, x, seed)| match family {
        0 => dicke(n, seed as usize % (n + 1)).unwrap(),
        1 => spin_squeezed(n, x).unwrap(),
        2 => dicke_ghz_superposition(n.max(3), x).unwrap(),
        _ => random_symmetric_state(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn constructors_are_normalized(s in arb_state()) {
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expectation_is_scale_invariant(s in arb_state(), p in arb_params(), m in arb_meas()) {
        if let Ok(base) = witness_expectation(&s, &p, &m) {
            for c in [0.5, 3.0, 17.0] {
                let scaled = witness_expectation(&s, &p.scaled(c), &m).unwrap();
                prop_assert!((scaled - base).abs() < 1e-12, "{scaled} vs {base}");
            }
        }
    }

    #[test]
    fn correlation_operators_are_pentadiagonal_and_hermitian(
        n in 1usize..30,
        a in (0.0..PI, 0.0..2.0 * PI),
        b in (0.0..PI, 0.0..2.0 * PI),
    ) {
        let ma = symwit::states::spherical_unit(a.0, a.1);
        let mb = symwit::states::spherical_unit(b.0, b.1);
        let op = correlation_operator(n, &ma, &mb).unwrap();
        prop_assert!(op.matrix().effective_bandwidth() <= 2);
        prop_assert!(op.matrix().hermiticity_residual() < 1e-12);
    }

    #[test]
    fn symmetric_points_lie_in_the_bounding_box(s in arb_state(), m in arb_meas()) {
        let n = s.n_qubits() as f64;
        let hi = n * n - n;
        let p = correlation_point(&s, &m).unwrap();
        for x in p.as_array() {
            prop_assert!(x >= -hi - 1e-9 && x <= hi + 1e-9);
        }
    }
}

#[test]
fn even_n_witness_region_stays_inside_the_polytope() {
    let dirs = fibonacci_sphere(1000);
    for n in [2usize, 4, 6, 8] {
        let poly = classical_polytope_vertices(n, true).unwrap();
        for theta in [0.1, 0.7, PI / 2.0, 2.4] {
            let m = MeasurementSettings::planar(theta);
            for d in &dirs {
                let f = separable_bound(&params_for_normal(d), &m, n).value;
                assert!(f <= poly.support(d) + 1e-9, "N={n} theta={theta} d={d:?}");
            }
        }
    }
}

#[test]
fn polytope_is_independent_of_measurements() {
    // vertices come from fixed +-1 outcomes only; the API takes no angles
    let a = classical_polytope_vertices(5, false).unwrap();
    let b = classical_polytope_vertices(5, false).unwrap();
    assert_eq!(a, b);
    a.validate().unwrap();
}

#[test]
fn fast_paths_match_brute_force() {
    let r = verify_suite(6, 100, 1000, 99).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn thermal_points_match_full_space() {
    for n in 2..=6 {
        let ham = lmg_hamiltonian(&LmgParams::new(n, 1.0, 0.05 * n as f64).unwrap()).unwrap();
        for t in [0.1, 0.8, 3.0] {
            let rho = thermal_state(&ham, t).unwrap();
            let full = FullState::mixed(n, rho.to_dense()).unwrap();
            let m = MeasurementSettings::general(0.4, 1.1, 2.0, 5.0);
            let fast = thermal_correlation_point(&rho, &m);
            let slow = full_correlation_point(&full, &m).unwrap();
            assert!((fast.s00 - slow.s00).abs() < 1e-9);
            assert!((fast.s01 - slow.s01).abs() < 1e-9);
            assert!((fast.s11 - slow.s11).abs() < 1e-9);
        }
    }
}

#[test]
fn thermal_minimum_is_continuous_and_changes_sign() {
    let ham = lmg_hamiltonian(&LmgParams::new(4, 1.0, 0.01).unwrap()).unwrap();
    let opts = OptOptions::default();
    let temps: Vec<f64> = (0..=40).map(|i| 0.05 * i as f64).collect();
    let g: Vec<f64> = temps
        .iter()
        .map(|&t| thermal_minimum(&ham, t, &opts).unwrap().min_expectation)
        .collect();
    assert!(g[0] < 0.0 && *g.last().unwrap() > 0.0);
    let steps: Vec<f64> = g.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    for i in 1..steps.len() - 1 {
        let local = steps[i - 1].max(steps[i + 1]).max(1e-6);
        assert!(steps[i] <= 10.0 * local, "jump at T={}", temps[i]);
    }
}

#[test]
fn ghz_sits_on_the_witness_boundary() {
    for n in [3usize, 4, 7] {
        for theta in [0.3, 1.0, 2.0] {
            let m = MeasurementSettings::planar(theta);
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..50 {
                let p = symwit::oracle::random_params(&mut rng);
                if let Ok(v) = witness_expectation(&ghz(n).unwrap(), &p, &m) {
                    assert!(v >= -1e-12, "{v}");
                }
            }
        }
    }
}
