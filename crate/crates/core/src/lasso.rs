//! Penalized least squares by cyclic coordinate descent.
//!
//! Objective: `(1/n) Σ (z_t - θ₀ - a_tᵀθ)² + 2λ‖θ‖₁`, with θ₀ free, penalized
//! like the slopes, or absent. Each coordinate update is the exact 1-D
//! minimizer (a soft-threshold); convergence is certified by the KKT residual.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;
pub const DEFAULT_ZERO_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Intercept {
    /// Fitted and not penalized.
    #[default]
    Free,
    /// Fitted and included in the ℓ₁ penalty.
    Penalized,
    /// Fixed at zero.
    None,
}

#[derive(Debug, Clone)]
pub struct LassoProblem {
    pub design: Matrix,
    pub responses: Vec<f64>,
    pub lambda: f64,
    pub intercept: Intercept,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LassoFit {
    pub theta0: f64,
    pub theta: Vec<f64>,
    pub iterations: usize,
    pub kkt_residual: f64,
    pub converged: bool,
}

impl LassoProblem {
    pub fn new(design: Matrix, responses: Vec<f64>, lambda: f64, intercept: Intercept) -> Result<Self> {
        if design.rows() != responses.len() {
            return Err(Error::LengthMismatch { expected: design.rows(), found: responses.len() });
        }
        if !(0.0..f64::INFINITY).contains(&lambda) {
            return Err(Error::OutOfRange { what: "lambda", value: lambda });
        }
        Ok(Self { design, responses, lambda, intercept })
    }

    pub fn n(&self) -> usize {
        self.responses.len()
    }

    pub fn d(&self) -> usize {
        self.design.cols()
    }

    fn residuals(&self, theta0: f64, theta: &[f64]) -> Vec<f64> {
        (0..self.n())
            .map(|t| {
                let fit: f64 = self.design.row(t).iter().zip(theta).map(|(a, b)| a * b).sum();
                self.responses[t] - theta0 - fit
            })
            .collect()
    }

    /// Value of the penalized objective at `(theta0, theta)`.
    pub fn objective(&self, theta0: f64, theta: &[f64]) -> f64 {
        let n = self.n() as f64;
        let rss: f64 = self.residuals(theta0, theta).iter().map(|r| r * r).sum();
        let mut l1: f64 = theta.iter().map(|v| libm::fabs(*v)).sum();
        if self.intercept == Intercept::Penalized {
            l1 += libm::fabs(theta0);
        }
        rss / n + 2.0 * self.lambda * l1
    }
}

pub fn soft_threshold(z: f64, gamma: f64) -> f64 {
    if z > gamma {
        z - gamma
    } else if z < -gamma {
        z + gamma
    } else {
        0.0
    }
}

pub fn fit_lasso(problem: &LassoProblem, tol: f64, max_iter: usize) -> Result<LassoFit> {
    fit_lasso_traced(problem, tol, max_iter, |_, _| {})
}

/// As [`fit_lasso`], calling `on_sweep(theta0, theta)` after every sweep.
pub fn fit_lasso_traced<F>(problem: &LassoProblem, tol: f64, max_iter: usize, mut on_sweep: F) -> Result<LassoFit>
where
    F: FnMut(f64, &[f64]),
{
    let n = problem.n();
    let d = problem.d();
    if n == 0 {
        return Err(Error::InvalidDimension("LASSO needs at least one observation"));
    }
    if problem.responses.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("responses"));
    }
    let nf = n as f64;
    let lambda = problem.lambda;

    // Column-major copy for cache-friendly coordinate sweeps.
    let mut cols = vec![0.0; n * d];
    for t in 0..n {
        for (i, &a) in problem.design.row(t).iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::NonFinite("design"));
            }
            cols[i * n + t] = a;
        }
    }
    let scale: Vec<f64> = (0..d).map(|i| cols[i * n..(i + 1) * n].iter().map(|a| a * a).sum::<f64>() / nf).collect();

    let mut theta0 = 0.0;
    let mut theta = vec![0.0; d];
    let mut resid = problem.responses.clone();
    let mut iterations = 0;
    let mut kkt = kkt_from_residuals(problem, &cols, &resid, theta0, &theta);

    while kkt > tol && iterations < max_iter {
        iterations += 1;
        match problem.intercept {
            Intercept::None => {}
            Intercept::Free | Intercept::Penalized => {
                let rho = resid.iter().sum::<f64>() / nf + theta0;
                let new = if problem.intercept == Intercept::Free { rho } else { soft_threshold(rho, lambda) };
                let delta = new - theta0;
                if delta != 0.0 {
                    resid.iter_mut().for_each(|r| *r -= delta);
                    theta0 = new;
                }
            }
        }
        for i in 0..d {
            let col = &cols[i * n..(i + 1) * n];
            let new = if scale[i] > 0.0 {
                let rho = col.iter().zip(&resid).map(|(a, r)| a * r).sum::<f64>() / nf + scale[i] * theta[i];
                soft_threshold(rho, lambda) / scale[i]
            } else {
                0.0
            };
            let delta = new - theta[i];
            if delta != 0.0 {
                for (r, a) in resid.iter_mut().zip(col) {
                    *r -= delta * a;
                }
                theta[i] = new;
            }
        }
        // Refresh residuals periodically to stop rounding drift.
        if iterations % 64 == 0 {
            resid = problem.residuals(theta0, &theta);
        }
        on_sweep(theta0, &theta);
        kkt = kkt_from_residuals(problem, &cols, &resid, theta0, &theta);
    }
    let resid = problem.residuals(theta0, &theta);
    let kkt = kkt_from_residuals(problem, &cols, &resid, theta0, &theta);
    Ok(LassoFit { theta0, theta, iterations, kkt_residual: kkt, converged: kkt <= tol })
}

fn coordinate_violation(g: f64, value: f64, lambda: f64) -> f64 {
    if value != 0.0 {
        libm::fabs(g - lambda * libm::copysign(1.0, value))
    } else {
        (libm::fabs(g) - lambda).max(0.0)
    }
}

fn kkt_from_residuals(problem: &LassoProblem, cols: &[f64], resid: &[f64], theta0: f64, theta: &[f64]) -> f64 {
    let n = problem.n();
    let nf = n as f64;
    let lambda = problem.lambda;
    let mut worst = match problem.intercept {
        Intercept::None => 0.0,
        Intercept::Free => libm::fabs(resid.iter().sum::<f64>() / nf),
        Intercept::Penalized => coordinate_violation(resid.iter().sum::<f64>() / nf, theta0, lambda),
    };
    for (i, &v) in theta.iter().enumerate() {
        let g = cols[i * n..(i + 1) * n].iter().zip(resid).map(|(a, r)| a * r).sum::<f64>() / nf;
        worst = worst.max(coordinate_violation(g, v, lambda));
    }
    worst
}

/// Largest violation of the stationarity system
/// `Aᵀ(Z - Aθ) = λ·sign(θ)` on the support and `|Aᵀ(Z - Aθ)| ≤ λ` off it,
/// where `A` is the design (with intercept column) scaled by `1/√n`.
pub fn kkt_residual(fit: &LassoFit, problem: &LassoProblem) -> f64 {
    let n = problem.n();
    let d = problem.d();
    let mut cols = vec![0.0; n * d];
    for t in 0..n {
        for (i, &a) in problem.design.row(t).iter().enumerate() {
            cols[i * n + t] = a;
        }
    }
    let resid = problem.residuals(fit.theta0, &fit.theta);
    kkt_from_residuals(problem, &cols, &resid, fit.theta0, &fit.theta)
}

/// Indices of slopes with `|θ_i| > zero_tol`. The intercept is never included.
pub fn support(fit: &LassoFit, zero_tol: f64) -> Vec<usize> {
    fit.theta.iter().enumerate().filter(|(_, v)| libm::fabs(**v) > zero_tol).map(|(i, _)| i).collect()
}
