use alloc::vec::Vec;

use super::{BinVote, DEFAULT_XI};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightScheme {
    /// `w_j ∝ log(ξ/p_j)` over bins with `p_j ≤ ξ`, with ξ fixed at 0.5.
    PropGlobal,
    /// `w_j ∝ log(ξ(1-p_j) / (p_j(1-ξ)))` over bins with `p_j ≤ ξ`.
    SmallXi,
    /// `w_j = n_j / Σ n_k`.
    CountProportional,
}

/// Aggregated scores, the weights that produced them, and the selected set
/// `{i : score_i ≥ xi}` (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionOutcome {
    pub scores: Vec<f64>,
    pub weights: Vec<f64>,
    pub xi: f64,
    pub selected_set: Vec<usize>,
}

impl SelectionOutcome {
    pub fn new(scores: Vec<f64>, weights: Vec<f64>, xi: f64) -> Self {
        let selected_set = threshold_select(&scores, xi);
        Self { scores, weights, xi, selected_set }
    }

    /// Bit `i` set when variable `i` (0-based) is selected.
    pub fn bitmask(&self) -> u64 {
        self.selected_set.iter().filter(|&&i| i < 64).fold(0, |m, &i| m | (1 << i))
    }
}

pub fn voting_weights(votes: &[BinVote], xi: f64, scheme: WeightScheme) -> Result<Vec<f64>> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::OutOfRange { what: "xi", value: xi });
    }
    let raw: Vec<f64> = match scheme {
        WeightScheme::PropGlobal => {
            let xi = DEFAULT_XI;
            votes
                .iter()
                .map(|v| if v.p_j <= xi { libm::log(xi) - libm::log(v.p_j) } else { 0.0 })
                .collect()
        }
        WeightScheme::SmallXi => votes
            .iter()
            .map(|v| {
                if v.p_j <= xi {
                    libm::log(xi) + libm::log(1.0 - v.p_j) - libm::log(v.p_j) - libm::log(1.0 - xi)
                } else {
                    0.0
                }
            })
            .collect(),
        WeightScheme::CountProportional => votes.iter().map(|v| v.n_j as f64).collect(),
    };
    let total: f64 = raw.iter().sum();
    if total.is_nan() || total <= 0.0 || total.is_infinite() {
        return Err(Error::NoEligibleBins);
    }
    Ok(raw.into_iter().map(|w| w / total).collect())
}

/// `score_i = Σ_j w_j·1{bin j voted for i}`.
pub fn aggregate_votes(votes: &[BinVote], weights: &[f64]) -> Result<Vec<f64>> {
    if votes.len() != weights.len() {
        return Err(Error::LengthMismatch { expected: votes.len(), found: weights.len() });
    }
    let d = votes.first().map_or(0, |v| v.selected.len());
    let mut scores = alloc::vec![0.0; d];
    for (v, w) in votes.iter().zip(weights) {
        for (s, &sel) in scores.iter_mut().zip(&v.selected) {
            if sel {
                *s += w;
            }
        }
    }
    // Rounding in the normalized weights can push a unanimous score past 1.
    scores.iter_mut().for_each(|s| *s = s.clamp(0.0, 1.0));
    Ok(scores)
}

/// `{i : scores_i ≥ xi}`; ties select.
pub fn threshold_select(scores: &[f64], xi: f64) -> Vec<usize> {
    scores.iter().enumerate().filter(|(_, &s)| s >= xi).map(|(i, _)| i).collect()
}

/// Weights, aggregation and thresholding in one step.
pub fn select(votes: &[BinVote], xi: f64, scheme: WeightScheme) -> Result<SelectionOutcome> {
    let weights = voting_weights(votes, xi, scheme)?;
    let scores = aggregate_votes(votes, &weights)?;
    Ok(SelectionOutcome::new(scores, weights, xi))
}
