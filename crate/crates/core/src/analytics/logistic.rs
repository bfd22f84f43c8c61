//! Two-parameter logistic `y = 1 / (1 + exp(a (x - b)))` fitted by least
//! squares.
//!
//! Each start point is refined with a damped (Levenberg-Marquardt) descent on
//! the sum of squared residuals; large damping makes a step a scaled gradient
//! step, small damping a Gauss-Newton step. Starts run in parallel and the
//! lowest SSE wins.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::par::{self, Execution};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticFit {
    pub a: f64,
    pub b: f64,
    pub sse: f64,
}

impl LogisticFit {
    pub fn predict(&self, x: f64) -> f64 {
        logistic(self.a, self.b, x)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("point {0} is not finite or has y outside [0, 1]")]
    InvalidPoint(usize),
    #[error("data cannot identify a curve (constant y or constant x)")]
    DegenerateData,
    #[error("no start converged; best estimate a={}, b={}, sse={}", best.a, best.b, best.sse)]
    NonConvergence { best: LogisticFit },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Convergence needs both the gradient norm and the last step norm below this.
    pub tolerance: f64,
    pub execution: Execution,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { max_iterations: 2000, tolerance: 1e-10, execution: Execution::Parallel }
    }
}

pub fn logistic(a: f64, b: f64, x: f64) -> f64 {
    1.0 / (1.0 + (a * (x - b)).exp())
}

pub fn sse(a: f64, b: f64, points: &[(f64, f64)]) -> f64 {
    points.iter().map(|&(x, y)| (logistic(a, b, x) - y).powi(2)).sum()
}

/// Analytic gradient `[dSSE/da, dSSE/db]`.
pub fn sse_gradient(a: f64, b: f64, points: &[(f64, f64)]) -> [f64; 2] {
    let mut g = [0.0; 2];
    for &(x, y) in points {
        let f = logistic(a, b, x);
        let slope = f * (1.0 - f);
        let twice_res = 2.0 * (f - y);
        g[0] += twice_res * -slope * (x - b);
        g[1] += twice_res * slope * a;
    }
    g
}

pub fn fit_logistic(points: &[(f64, f64)]) -> Result<LogisticFit, FitError> {
    fit_logistic_with(points, &FitOptions::default())
}

pub fn fit_logistic_with(points: &[(f64, f64)], options: &FitOptions) -> Result<LogisticFit, FitError> {
    if points.len() < 3 {
        return Err(FitError::TooFewPoints(points.len()));
    }
    if let Some(i) = points.iter().position(|&(x, y)| !x.is_finite() || !(0.0..=1.0).contains(&y)) {
        return Err(FitError::InvalidPoint(i));
    }
    // canonical order makes the result independent of input order
    let mut data = points.to_vec();
    data.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));

    let (x_min, x_max) = (data[0].0, data[data.len() - 1].0);
    let y0 = data[0].1;
    if x_min == x_max || data.iter().all(|p| p.1 == y0) {
        return Err(FitError::DegenerateData);
    }

    let starts = start_points(&data);
    let runs = par::map(options.execution, &starts, |&(a, b)| refine(a, b, &data, options));

    let best = runs.iter().min_by(|p, q| p.0.sse.total_cmp(&q.0.sse)).map(|r| r.0).expect("at least one start");
    let best_converged = runs.iter().filter(|r| r.1).min_by(|p, q| p.0.sse.total_cmp(&q.0.sse)).map(|r| r.0);
    match best_converged {
        Some(fit) if fit.sse <= best.sse * (1.0 + 1e-9) + 1e-18 => Ok(fit),
        _ => Err(FitError::NonConvergence { best }),
    }
}

fn start_points(data: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let (x_min, x_max) = (data[0].0, data[data.len() - 1].0);
    let span = x_max - x_min;
    let mean = data.iter().map(|p| p.0).sum::<f64>() / data.len() as f64;

    let mut centers = vec![x_min, x_min + span / 4.0, mean, x_min + 3.0 * span / 4.0, x_max];
    // linear interpolation where y crosses one half
    for w in data.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if (y0 - 0.5) * (y1 - 0.5) <= 0.0 && y0 != y1 {
            centers.push(x0 + (0.5 - y0) * (x1 - x0) / (y1 - y0));
            break;
        }
    }

    let unit = 4.0 / span;
    let mut starts = Vec::new();
    for &scale in &[0.25, 1.0, 4.0] {
        for sign in [1.0, -1.0] {
            for &b in &centers {
                starts.push((sign * scale * unit, b));
            }
        }
    }
    starts
}

/// Damped least-squares descent from one start. Returns the final estimate
/// and whether the convergence test passed.
fn refine(a0: f64, b0: f64, data: &[(f64, f64)], options: &FitOptions) -> (LogisticFit, bool) {
    let (mut a, mut b) = (a0, b0);
    let mut cost = sse(a, b, data);
    let mut damping = 1e-3;
    let mut last_step = f64::INFINITY;

    for _ in 0..options.max_iterations {
        // J^T J and J^T r for residuals f - y
        let (mut jaa, mut jab, mut jbb, mut ga, mut gb) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(x, y) in data {
            let f = logistic(a, b, x);
            let slope = f * (1.0 - f);
            let da = -slope * (x - b);
            let db = slope * a;
            let res = f - y;
            jaa += da * da;
            jab += da * db;
            jbb += db * db;
            ga += da * res;
            gb += db * res;
        }
        let grad_norm = 2.0 * ga.hypot(gb);
        if grad_norm < options.tolerance && last_step < options.tolerance {
            return (LogisticFit { a, b, sse: cost }, true);
        }

        let mut accepted = false;
        while damping < 1e20 {
            let maa = jaa + damping * jaa.max(1e-12);
            let mbb = jbb + damping * jbb.max(1e-12);
            let det = maa * mbb - jab * jab;
            if det > 0.0 && det.is_finite() {
                let step_a = (-ga * mbb + gb * jab) / det;
                let step_b = (-gb * maa + ga * jab) / det;
                let (na, nb) = (a + step_a, b + step_b);
                let new_cost = sse(na, nb, data);
                if new_cost.is_finite() && new_cost <= cost {
                    let moved = new_cost < cost || step_a != 0.0 || step_b != 0.0;
                    last_step = step_a.hypot(step_b);
                    (a, b, cost) = (na, nb, new_cost);
                    damping = (damping / 3.0).max(1e-15);
                    accepted = moved;
                    break;
                }
            }
            damping *= 4.0;
        }
        if !accepted {
            // no descent direction left at machine precision
            let converged = grad_norm < options.tolerance;
            return (LogisticFit { a, b, sse: cost }, converged);
        }
    }
    (LogisticFit { a, b, sse: cost }, false)
}
