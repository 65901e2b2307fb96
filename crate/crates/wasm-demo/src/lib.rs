//! Browser bindings: each function takes plain numbers and returns JSON text.

use serde_json::json;
use wasm_bindgen::prelude::*;

use symwit::geometry::support_compare;
use symwit::optimizer::{minimize_witness, theta_curve as curve, OptOptions};
use symwit::{dicke, dicke_ghz_superposition, ghz, spin_squeezed, MeasurementSettings, Mode, SymmetricState, WitnessParams};

const MAX_DEMO_QUBITS: usize = 2000;

fn err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn state(family: &str, n: usize, x: f64) -> Result<SymmetricState, JsError> {
    if n > MAX_DEMO_QUBITS {
        return Err(err(format!("demo is limited to N <= {MAX_DEMO_QUBITS}")));
    }
    match family {
        "dicke" => dicke(n, x.max(0.0) as usize),
        "ghz" => ghz(n),
        "squeezed" => spin_squeezed(n, x),
        "superposition" => dicke_ghz_superposition(n, x),
        other => return Err(err(format!("unknown state family {other:?}"))),
    }
    .map_err(err)
}

/// `<A(theta)>` on `points` angles in `[0, pi/2]`; `null` where the bound degenerates.
#[wasm_bindgen]
pub fn theta_curve(
    family: &str,
    n: usize,
    x: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    points: usize,
) -> Result<String, JsError> {
    let s = state(family, n, x)?;
    let p = WitnessParams::new(alpha, beta, gamma).map_err(err)?;
    let points = points.clamp(2, 2000);
    let thetas: Vec<f64> = (0..points)
        .map(|i| std::f64::consts::FRAC_PI_2 * i as f64 / (points - 1) as f64)
        .collect();
    let values = curve(&s, &p, &thetas);
    Ok(json!({ "theta": thetas, "value": values }).to_string())
}

/// Minimum of `<A>` over coefficients and measurement directions.
#[wasm_bindgen]
pub fn optimize(family: &str, n: usize, x: f64, general: bool) -> Result<String, JsError> {
    let s = state(family, n, x)?;
    let mode = if general { Mode::General } else { Mode::Planar };
    let r = minimize_witness(&s, mode, &OptOptions::default()).map_err(err)?;
    Ok(json!({
        "value": r.best_value,
        "params": r.best_params,
        "meas": r.best_meas,
        "evaluations": r.evaluations,
    })
    .to_string())
}

/// Witness-region support minus polytope support along sampled directions.
#[wasm_bindgen]
pub fn support_profile(n: usize, theta: f64, directions: usize) -> Result<String, JsError> {
    if n > 60 {
        return Err(err("demo polytope is limited to N <= 60"));
    }
    let r = support_compare(n, &MeasurementSettings::planar(theta), directions.clamp(6, 5000)).map_err(err)?;
    Ok(json!({
        "n": n,
        "theta": theta,
        "directions": r.direction_count,
        "vertices": r.vertex_count,
        "max_excess": r.max_excess,
        "protrusions": r.protrusions.iter().map(|p| json!({
            "direction": p.direction,
            "excess": p.excess,
        })).collect::<Vec<_>>(),
    })
    .to_string())
}
