use super::*;
use crate::states::{dicke, ghz, spin_squeezed};
use crate::witness::witness_expectation;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_opts() -> OptOptions {
    OptOptions {
        sphere_grid: 12,
        theta_grid: 24,
        polar_grid: 4,
        azimuth_grid: 8,
        ..OptOptions::default()
    }
}

#[test]
fn central_dicke_minima() {
    for (n, want) in [(3usize, -1.0 / 3.0), (4, -2.0 / 3.0), (6, -0.6)] {
        let s = dicke(n, n.div_ceil(2)).unwrap();
        let r = minimize_witness(&s, Mode::Planar, &OptOptions::default()).unwrap();
        assert!((r.best_value - want).abs() < 1e-4, "N={n}: {}", r.best_value);
    }
}

#[test]
fn result_is_reproducible_from_its_parameters() {
    let s = dicke(8, 3).unwrap();
    for mode in [Mode::Planar, Mode::General] {
        let r = minimize_witness(&s, mode, &small_opts()).unwrap();
        assert!(r.best_value <= r.grid_value + 1e-12);
        let again = witness_expectation(&s, &r.best_params, &r.best_meas).unwrap();
        assert!((again - r.best_value).abs() < 1e-10);
        assert!(r.near_optimal.iter().all(|c| c.value <= r.best_value + 1e-3));
        assert_eq!(r.best_meas.mode(), mode);
    }
}

#[test]
fn deterministic_across_runs_and_workers() {
    let s = spin_squeezed(5, 0.4).unwrap();
    let a = minimize_witness(&s, Mode::General, &small_opts()).unwrap();
    let b = minimize_witness(&s, Mode::General, &small_opts()).unwrap();
    let c = minimize_witness(
        &s,
        Mode::General,
        &OptOptions {
            workers: Some(1),
            ..small_opts()
        },
    )
    .unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn ghz_is_not_detected() {
    let s = ghz(10).unwrap();
    for mode in [Mode::Planar, Mode::General] {
        let r = minimize_witness(&s, mode, &small_opts()).unwrap();
        assert!(r.best_value >= -1e-6 && r.best_value <= 1e-3, "{}", r.best_value);
    }
}

#[test]
fn eigen_minimum_bounds_every_dicke_state() {
    let n = 9;
    let p = WitnessParams::new(-1.0, -1.13, 1.14).unwrap();
    let m = MeasurementSettings::planar(0.2);
    let (value, state) = min_eigen_witness(n, &p, &m).unwrap();
    let rayleigh = witness_expectation(&state, &p, &m).unwrap();
    assert!((rayleigh - value).abs() < 1e-10);
    for k in 0..=n {
        assert!(value <= witness_expectation(&dicke(n, k).unwrap(), &p, &m).unwrap() + 1e-12);
    }
}

#[test]
fn general_spectrum_matches_planar_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 7;
    let basis = PlanarBasis::new(n).unwrap();
    for _ in 0..20 {
        let p = WitnessParams::from_sphere(rng.random_range(0.0..PI), rng.random_range(0.0..2.0 * PI));
        let m = MeasurementSettings::general(
            rng.random_range(0.0..PI),
            rng.random_range(0.0..2.0 * PI),
            rng.random_range(0.0..PI),
            rng.random_range(0.0..2.0 * PI),
        );
        let Ok((general, _)) = min_eigen_witness(n, &p, &m) else {
            continue;
        };
        let planar = basis
            .min_eigenvalue(&p, m.overlap().clamp(-1.0, 1.0).acos(), f64::INFINITY)
            .unwrap();
        assert!((general - planar).abs() < 1e-9, "{general} vs {planar}");
    }
}

#[test]
fn eigen_minimum_is_below_state_minimum() {
    let opts = small_opts();
    let n = 4;
    let eig = minimize_eigen_witness(n, Mode::General, &opts).unwrap();
    let state = minimize_witness(&dicke(4, 2).unwrap(), Mode::Planar, &opts).unwrap();
    assert!(eig.best_value <= state.best_value + 1e-9);
    assert!(eig.best_value >= -1.0 - 1e-6);
    assert_eq!(eig.best_meas.mode(), Mode::General);
}

#[test]
fn random_parameters_respect_the_floor() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let p = WitnessParams::from_sphere(rng.random_range(0.0..PI), rng.random_range(0.0..2.0 * PI));
        let m = MeasurementSettings::planar(rng.random_range(0.0..PI));
        if let Ok((v, _)) = min_eigen_witness(4, &p, &m) {
            assert!(v >= -1.0 - 1e-6, "{v}");
        }
    }
}

#[test]
fn theta_window_at_moderate_n() {
    let s = dicke(100, 50).unwrap();
    let w = theta_window(&s, &WitnessParams::new(-1.0, -1.13, 1.14).unwrap());
    let (lo, hi) = w.primary.unwrap();
    // <A(0)> is exactly zero, so the window opens just above 0
    assert!(lo.abs() < 1e-4, "{lo}");
    assert!((hi - 0.196).abs() < 0.005, "{hi}");
    let literal = theta_window(&s, &WitnessParams::new(1.0, 1.13, -1.14).unwrap());
    assert!(literal.is_empty());
    assert!(theta_window(&ghz(6).unwrap(), &WitnessParams::new(1.0, 0.5, 0.2).unwrap()).is_empty());
}

#[test]
fn all_degenerate_grid_fails() {
    let opts = small_opts();
    let err = search(Mode::Planar, &opts, |_| |_: &WitnessParams, _: f64| None).unwrap_err();
    assert!(matches!(err, WitnessError::OptimizationFailed(_)));
}

#[test]
fn canonical_angles() {
    let m = canonical_meas(&MeasurementSettings::general(-0.3, 0.1, 3.5, -1.0));
    let MeasurementSettings::General {
        theta0,
        phi0,
        theta1,
        phi1,
    } = m
    else {
        unreachable!()
    };
    for t in [theta0, theta1] {
        assert!((0.0..=PI).contains(&t));
    }
    for p in [phi0, phi1] {
        assert!((0.0..2.0 * PI).contains(&p));
    }
    let before = MeasurementSettings::general(-0.3, 0.1, 3.5, -1.0).directions();
    let after = m.directions();
    for i in 0..3 {
        assert!((before.0[i] - after.0[i]).abs() < 1e-12);
        assert!((before.1[i] - after.1[i]).abs() < 1e-12);
    }
}
