//! Nelder-Mead downhill simplex.

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// The spread of function values fell below the tolerance before the budget ran out.
    pub converged: bool,
}

/// Minimize `f` starting from `x0` with initial edge lengths `steps`.
///
/// Non-finite function values are treated as `+inf`, so infeasible points are
/// simply rejected by the simplex moves.
pub fn nelder_mead<F>(f: F, x0: &[f64], steps: &[f64], max_evals: usize, tol: f64) -> SimplexResult
where
    F: Fn(&[f64]) -> f64,
{
    let dim = x0.len();
    assert_eq!(dim, steps.len(), "one step per coordinate");
    let evals = std::cell::Cell::new(0usize);
    let call = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    pts.push(x0.to_vec());
    for i in 0..dim {
        let mut p = x0.to_vec();
        p[i] += steps[i];
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| call(p)).collect();

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut converged = false;
    let mut order: Vec<usize> = (0..=dim).collect();
    loop {
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        let best = order[0];
        let worst = order[dim];
        let second = order[dim - 1];
        if (vals[worst] - vals[best]).abs() <= tol
            || (vals[best].is_finite() && vals[worst] == vals[best])
        {
            converged = true;
            break;
        }
        if evals.get() >= max_evals {
            break;
        }

        let mut centroid = vec![0.0; dim];
        for &i in &order[..dim] {
            for (c, x) in centroid.iter_mut().zip(&pts[i]) {
                *c += x / dim as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&pts[worst])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(alpha);
        let fr = call(&xr);
        if fr < vals[best] {
            let xe = along(gamma);
            let fe = call(&xe);
            if fe < fr {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
            continue;
        }
        if fr < vals[second] {
            pts[worst] = xr;
            vals[worst] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[worst] {
            let xc = along(rho);
            let fc = call(&xc);
            (xc, fc)
        } else {
            let xc = along(-rho);
            let fc = call(&xc);
            (xc, fc)
        };
        if fc < vals[worst].min(fr) {
            pts[worst] = xc;
            vals[worst] = fc;
            continue;
        }
        // shrink toward the best vertex
        let anchor = pts[best].clone();
        for &i in &order[1..] {
            for (x, a) in pts[i].iter_mut().zip(&anchor) {
                *x = a + sigma * (*x - a);
            }
            vals[i] = call(&pts[i]);
        }
    }

    let best = (0..=dim)
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .unwrap_or(0);
    SimplexResult {
        x: pts[best].clone(),
        value: vals[best],
        evaluations: evals.get(),
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let r = nelder_mead(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2),
            &[0.0, 0.0],
            &[0.5, 0.5],
            2000,
            1e-14,
        );
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] + 2.0).abs() < 1e-5);
    }

    #[test]
    fn rosenbrock() {
        let r = nelder_mead(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            &[-1.2, 1.0],
            &[0.1, 0.1],
            5000,
            1e-16,
        );
        assert!(r.value < 1e-8, "{r:?}");
    }

    #[test]
    fn kinked_objective_and_infeasible_region() {
        let r = nelder_mead(
            |x| if x[0] < -1.0 { f64::NAN } else { (x[0] - 0.3).abs() + x[1].abs() },
            &[2.0, 1.0],
            &[0.4, 0.4],
            3000,
            1e-12,
        );
        assert!(r.value < 1e-5);
    }

    #[test]
    fn budget_is_respected() {
        let r = nelder_mead(|x| x.iter().map(|v| v * v).sum(), &[5.0; 4], &[1.0; 4], 30, 0.0);
        assert!(!r.converged);
        // a shrink step may overshoot by at most `dim` evaluations
        assert!(r.evaluations <= 30 + 4);
    }
}
