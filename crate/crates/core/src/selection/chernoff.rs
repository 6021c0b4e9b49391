//! Chernoff-bound voting optimization and the worst-case allocation of
//! observations across bins.

use alloc::vec::Vec;

use super::MisidModel;
use crate::{Error, Result};

/// Minimizer of the Chernoff bound on a wrong vote outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ChernoffSolution {
    pub eta: f64,
    pub weights: Vec<f64>,
    pub value: f64,
}

/// `V(η, w) = exp{Σ_j (e^{η w_j} - 1) p_j - η ξ}`.
pub fn chernoff_objective(eta: f64, weights: &[f64], p: &[f64], xi: f64) -> f64 {
    let s: f64 = weights.iter().zip(p).map(|(w, pj)| (libm::exp(eta * w) - 1.0) * pj).sum();
    libm::exp(s - eta * xi)
}

/// Closed-form minimizer of [`chernoff_objective`] over `η ≥ 0` and the
/// weight simplex. Bins with `p_j ≥ ξ` get zero weight. With no such bin the
/// optimum is `η = 0`, `V = 1`, and uniform weights are returned.
pub fn optimal_chernoff(p: &[f64], xi: f64) -> Result<ChernoffSolution> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::OutOfRange { what: "xi", value: xi });
    }
    if p.is_empty() {
        return Err(Error::InvalidDimension("need at least one bin"));
    }
    if let Some(&bad) = p.iter().find(|&&v| !(v > 0.0 && v <= 1.0)) {
        return Err(Error::OutOfRange { what: "misidentification probability", value: bad });
    }
    let active = |pj: f64| pj < xi;
    let log_ratio: Vec<f64> =
        p.iter().map(|&pj| if active(pj) { libm::log(xi) - libm::log(pj) } else { 0.0 }).collect();
    let eta: f64 = log_ratio.iter().sum();
    if eta <= 0.0 {
        let m = p.len() as f64;
        return Ok(ChernoffSolution { eta: 0.0, weights: alloc::vec![1.0 / m; p.len()], value: 1.0 });
    }
    let weights = log_ratio.iter().map(|l| l / eta).collect();
    let exponent: f64 = p
        .iter()
        .filter(|&&pj| active(pj))
        .map(|&pj| xi - xi * libm::log(xi) - pj + xi * libm::log(pj))
        .sum();
    Ok(ChernoffSolution { eta, weights, value: libm::exp(exponent) })
}

/// `V(n)`: the optimal Chernoff value when bin `j` holds `counts[j]`
/// observations.
pub fn allocation_value(counts: &[u64], model: &MisidModel, h: f64, xi: f64) -> f64 {
    let h4 = h * h * h * h;
    let exponent: f64 = counts
        .iter()
        .map(|&n| model.b0 * libm::exp(-model.b1 * n as f64 * h4))
        .filter(|&pj| pj < xi)
        .map(|pj| xi - pj - xi * libm::log(xi) + xi * libm::log(pj))
        .sum();
    libm::exp(exponent)
}

/// Worst-case allocation of `n` observations over `m_bins` bins (the equal
/// split, remainder to the leading bins) and the bound
/// `exp{ξ(m(1 + log b0 - log ξ) - b1·n·h⁴)}` on its value.
pub fn worst_case_allocation(n: u64, m_bins: usize, model: &MisidModel, h: f64, xi: f64) -> Result<(Vec<u64>, f64)> {
    if m_bins == 0 {
        return Err(Error::InvalidDimension("need at least one bin"));
    }
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::OutOfRange { what: "xi", value: xi });
    }
    let m = m_bins as u64;
    let (base, extra) = (n / m, n % m);
    let allocation = (0..m).map(|j| base + u64::from(j < extra)).collect();
    let h4 = h * h * h * h;
    let bound = libm::exp(
        xi * (m_bins as f64 * (1.0 + libm::log(model.b0) - libm::log(xi)) - model.b1 * n as f64 * h4),
    );
    Ok((allocation, bound))
}
