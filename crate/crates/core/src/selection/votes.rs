use alloc::vec;
use alloc::vec::Vec;

use super::MisidModel;
use crate::bins::{BinGrid, BinIndex};
use crate::lasso::{fit_lasso, support, Intercept, LassoFit, LassoProblem, DEFAULT_MAX_ITER, DEFAULT_TOL, DEFAULT_ZERO_TOL};
use crate::linalg::Matrix;
use crate::{Error, Result};

/// One phase-1 observation: covariate `x` and noisy reward `z` under the
/// fixed decision.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub x: Vec<f64>,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionParams {
    pub lambda: f64,
    pub zero_tol: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// When absent every `p_j` is reported as 1.
    pub misid: Option<MisidModel>,
}

impl SelectionParams {
    pub fn new(lambda: f64) -> Self {
        Self { lambda, zero_tol: DEFAULT_ZERO_TOL, tol: DEFAULT_TOL, max_iter: DEFAULT_MAX_ITER, misid: None }
    }

    pub fn with_misid(mut self, model: MisidModel) -> Self {
        self.misid = Some(model);
        self
    }
}

/// A single bin's vote.
#[derive(Debug, Clone, PartialEq)]
pub struct BinVote {
    pub bin: BinIndex,
    pub n_j: usize,
    pub selected: Vec<bool>,
    pub p_j: f64,
    pub fit: Option<LassoFit>,
}

impl BinVote {
    fn abstain(bin: BinIndex, n_j: usize, d_x: usize) -> Self {
        Self { bin, n_j, selected: vec![false; d_x], p_j: 1.0, fit: None }
    }
}

/// Runs the localized LASSO in every bin of `grid` and returns one vote per
/// bin in flat-index order. Bins with fewer than `d_x + 2` observations
/// abstain (empty vote, `p_j = 1`).
pub fn localized_select(observations: &[Observation], grid: &BinGrid, params: &SelectionParams) -> Result<Vec<BinVote>> {
    let d = grid.d_x();
    let h = grid.side();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); grid.bin_count()];
    for (t, obs) in observations.iter().enumerate() {
        if !obs.z.is_finite() {
            return Err(Error::NonFinite("response"));
        }
        members[grid.locate_flat(&obs.x)?].push(t);
    }

    let mut votes = Vec::with_capacity(members.len());
    for (flat, idx) in members.iter().enumerate() {
        let bin = grid.from_flat(flat)?;
        let n_j = idx.len();
        if n_j < d + 2 {
            votes.push(BinVote::abstain(bin, n_j, d));
            continue;
        }
        let center = grid.bin_center(&bin)?;
        let mut design = Vec::with_capacity(n_j * d);
        let mut z = Vec::with_capacity(n_j);
        for &t in idx {
            let obs = &observations[t];
            design.extend(obs.x.iter().zip(&center).map(|(v, c)| (v - c) / h));
            z.push(obs.z);
        }
        let problem = LassoProblem::new(Matrix::from_row_major(n_j, d, design), z, params.lambda, Intercept::Free)?;
        let fit = fit_lasso(&problem, params.tol, params.max_iter)?;
        let mut selected = vec![false; d];
        for i in support(&fit, params.zero_tol) {
            selected[i] = true;
        }
        let p_j = params.misid.map_or(1.0, |m| m.misid_prob(n_j, h));
        votes.push(BinVote { bin, n_j, selected, p_j, fit: Some(fit) });
    }
    Ok(votes)
}
