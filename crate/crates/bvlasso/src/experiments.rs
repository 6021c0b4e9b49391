//! The four experiment commands. Each returns plain tables; `output` turns
//! them into CSV.

use anyhow::{ensure, Context, Result};
use bvlasso_core::bandit::{run_benchmark, RunConfig, Variant};
use bvlasso_core::bins::{BinGrid, BinIndex};
use bvlasso_core::diagnostics::{
    augment_with_intercept, check_assumption_regular, empirical_covariance, event_alpha, event_delta,
    population_covariance_uniform, row_norms_squared,
};
use bvlasso_core::envsim::{make_env, EnvKind};
use bvlasso_core::linalg::Matrix;
use bvlasso_core::rng::Stream;
use bvlasso_core::selection::{
    allocation_value, chernoff_objective, integer_root, localized_select, optimal_chernoff, select,
    worst_case_allocation, ConstantsBundle, MisidModel, Observation, SelectionOutcome, SelectionParams, WeightScheme,
};
use rayon::prelude::*;

use crate::config::{ConstantsConfig, ExperimentConfig, RegretMode};
use crate::stats::{mean_ci, Interval};

/// Inputs of one selection trial.
#[derive(Debug, Clone, Copy)]
pub struct SelectionTrial {
    pub env: EnvKind,
    pub d_x: usize,
    pub sigma: f64,
    pub c_lambda: f64,
    pub n: u64,
    pub seed: u64,
    pub xi: f64,
    pub scheme: WeightScheme,
    pub fixed_y: Option<f64>,
    pub bins_per_axis: Option<usize>,
    pub misid: Option<MisidModel>,
}

/// Bins per axis used for a phase-1 sample of size `n`:
/// `floor(n^{1/(2 d_x + 4)})`, at least 1.
pub fn bins_for_sample(n: u64, d_x: usize) -> usize {
    (integer_root(n, 2 * d_x as u32 + 4) as usize).max(1)
}

/// Draws `n` phase-1 observations and runs binning-and-voting selection.
pub fn run_selection_trial(t: &SelectionTrial) -> Result<SelectionOutcome> {
    let mut env = make_env(t.env, t.d_x, t.sigma, t.seed)?;
    let y = t.fixed_y.unwrap_or_else(|| env.default_fixed_decision());
    let obs: Vec<Observation> = (0..t.n)
        .map(|_| {
            let (x, z) = env.step(y);
            Observation { x, z }
        })
        .collect();
    let k = t.bins_per_axis.unwrap_or_else(|| bins_for_sample(t.n, t.d_x));
    let grid = BinGrid::new(t.d_x, k)?;
    let h = grid.side();
    let mut params = SelectionParams::new(t.c_lambda * h * h);
    params.misid = t.misid;
    let votes = localized_select(&obs, &grid, &params)?;
    Ok(select(&votes, t.xi, t.scheme)?)
}

fn misid_for(c: Option<&ConstantsConfig>, d_x: usize, sigma: f64) -> Result<Option<MisidModel>> {
    c.map(|c| {
        let bundle = ConstantsBundle::new(d_x, c.mu_m, c.mu_big_m, c.l, c.l_mu, sigma, c.c)?;
        Ok(bundle.misid_model())
    })
    .transpose()
}

/// Seed of trial `i`.
pub fn trial_seed(base: u64, i: usize) -> u64 {
    base.wrapping_add(i as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectTrialRow {
    pub trial: usize,
    pub n: u64,
    pub sigma: f64,
    pub c_lambda: f64,
    pub scheme: &'static str,
    pub scores: Vec<f64>,
    pub bitmask: u64,
}

/// Per-n score summaries for each (σ, c_λ) combination.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectReport {
    pub d_x: usize,
    /// `(sigma, c_lambda)` in output order.
    pub combos: Vec<(f64, f64)>,
    pub n: Vec<u64>,
    /// `summary[combo][n_index][variable]`.
    pub summary: Vec<Vec<Vec<Interval>>>,
    pub trials: Vec<SelectTrialRow>,
}

pub fn cmd_select(cfg: &ExperimentConfig) -> Result<SelectReport> {
    let combos: Vec<(f64, f64)> =
        cfg.sigma.iter().flat_map(|&s| cfg.c_lambda.iter().map(move |&c| (s, c))).collect();
    let mut summary = Vec::with_capacity(combos.len());
    let mut trials = Vec::new();
    for &(sigma, c_lambda) in &combos {
        let misid = misid_for(cfg.constants.as_ref(), cfg.d_x, sigma)?;
        let mut per_n = Vec::with_capacity(cfg.n.len());
        for &n in &cfg.n {
            log::info!("select: sigma={sigma} c_lambda={c_lambda} n={n}");
            let outcomes: Vec<SelectionOutcome> = (0..cfg.trials)
                .into_par_iter()
                .map(|i| {
                    run_selection_trial(&SelectionTrial {
                        env: cfg.env.into(),
                        d_x: cfg.d_x,
                        sigma,
                        c_lambda,
                        n,
                        seed: trial_seed(cfg.seed, i),
                        xi: cfg.xi,
                        scheme: cfg.scheme.into(),
                        fixed_y: cfg.fixed_y,
                        bins_per_axis: cfg.bins_per_axis,
                        misid,
                    })
                    .with_context(|| format!("selection trial {i} (n={n}, sigma={sigma})"))
                })
                .collect::<Result<_>>()?;
            let intervals = (0..cfg.d_x)
                .map(|v| mean_ci(&outcomes.iter().map(|o| o.scores[v]).collect::<Vec<_>>()))
                .collect();
            per_n.push(intervals);
            trials.extend(outcomes.into_iter().enumerate().map(|(i, o)| SelectTrialRow {
                trial: i,
                n,
                sigma,
                c_lambda,
                scheme: cfg.scheme.label(),
                bitmask: o.bitmask(),
                scores: o.scores,
            }));
        }
        summary.push(per_n);
    }
    Ok(SelectReport { d_x: cfg.d_x, combos, n: cfg.n.clone(), summary, trials })
}

pub const REGRET_VARIANTS: [Variant; 3] = [Variant::Ua, Variant::Bv, Variant::St];

#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrialRow {
    pub horizon: u64,
    pub variant: Variant,
    pub trial: usize,
    pub cumulative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegretReport {
    pub horizons: Vec<u64>,
    /// `summary[variant][horizon_index]`, variants in [`REGRET_VARIANTS`] order.
    pub summary: Vec<Vec<Interval>>,
    pub trials: Vec<RegretTrialRow>,
}

impl RegretReport {
    pub fn mean(&self, variant: Variant, horizon_index: usize) -> f64 {
        let v = REGRET_VARIANTS.iter().position(|&x| x == variant).expect("reported variant");
        self.summary[v][horizon_index].mean
    }
}

/// Cumulative regret of one variant at every listed horizon.
fn regret_curve(cfg: &ExperimentConfig, variant: Variant, seed: u64, misid: Option<MisidModel>) -> Result<Vec<f64>> {
    let run_cfg = RunConfig {
        xi: cfg.xi,
        c_lambda: cfg.c_lambda[0],
        scheme: cfg.scheme.into(),
        fixed_y: cfg.fixed_y,
        seed,
        selection_periods: None,
        bins_per_axis: cfg.bins_per_axis,
        misid,
        ..RunConfig::default()
    };
    let run = |horizon| -> Result<_> {
        let mut env = make_env(cfg.env.into(), cfg.d_x, cfg.sigma[0], seed)?;
        Ok(run_benchmark(&mut env, horizon, variant, &run_cfg)?)
    };
    match cfg.regret_mode {
        RegretMode::Separate => cfg.horizons.iter().map(|&t| Ok(run(t)?.total())).collect(),
        RegretMode::Prefix => {
            let trace = run(*cfg.horizons.last().expect("validated non-empty"))?;
            Ok(cfg.horizons.iter().map(|&t| trace.cumulative_at(t).expect("within horizon")).collect())
        }
    }
}

pub fn cmd_regret(cfg: &ExperimentConfig) -> Result<RegretReport> {
    let misid = misid_for(cfg.constants.as_ref(), cfg.d_x, cfg.sigma[0])?;
    // curves[trial][variant][horizon]
    let curves: Vec<Vec<Vec<f64>>> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let seed = trial_seed(cfg.seed, i);
            log::info!("regret: trial {i} (seed {seed})");
            REGRET_VARIANTS
                .iter()
                .map(|&v| regret_curve(cfg, v, seed, misid).with_context(|| format!("{v} trial {i}")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let summary = (0..REGRET_VARIANTS.len())
        .map(|v| {
            (0..cfg.horizons.len())
                .map(|t| mean_ci(&curves.iter().map(|c| c[v][t]).collect::<Vec<_>>()))
                .collect()
        })
        .collect();
    let mut trials = Vec::new();
    for (t, &horizon) in cfg.horizons.iter().enumerate() {
        for (v, &variant) in REGRET_VARIANTS.iter().enumerate() {
            for (i, c) in curves.iter().enumerate() {
                trials.push(RegretTrialRow { horizon, variant, trial: i, cumulative: c[v][t] });
            }
        }
    }
    Ok(RegretReport { horizons: cfg.horizons.clone(), summary, trials })
}

/// Ordered key/value report lines.
pub type Report = Vec<(String, String)>;

fn push(report: &mut Report, key: impl Into<String>, value: impl ToString) {
    report.push((key.into(), value.to_string()));
}

pub fn cmd_diagnose(cfg: &ExperimentConfig) -> Result<Report> {
    let dcfg = cfg.diagnose.clone().unwrap_or_default();
    let d = cfg.d_x;
    let grid = BinGrid::new(d, dcfg.bins_per_axis)?;
    ensure!(dcfg.bin < grid.bin_count(), "diagnose.bin {} out of range ({} bins)", dcfg.bin, grid.bin_count());
    let bin: BinIndex = grid.from_flat(dcfg.bin)?;
    let lower = grid.bin_lower(&bin)?;
    let h = grid.side();
    let mut rng = Stream::new(cfg.seed, 0);
    let mut u = Vec::with_capacity(dcfg.samples * d);
    for _ in 0..dcfg.samples {
        let x: Vec<f64> = lower.iter().map(|l| l + h * rng.uniform()).collect();
        u.extend(grid.normalize(&bin, &x)?);
    }
    let ubar = augment_with_intercept(&Matrix::from_row_major(dcfg.samples, d, u));
    let support: Vec<usize> = std::iter::once(0).chain(dcfg.relevant.iter().map(|i| i + 1)).collect();
    let cov = empirical_covariance(&ubar, &support)?;
    let pop = population_covariance_uniform(d)?;
    let mut max_dev = 0.0f64;
    for i in 0..=d {
        for j in 0..=d {
            max_dev = max_dev.max((cov.psi_hat[(i, j)] - pop[(i, j)]).abs());
        }
    }
    let max_norm = row_norms_squared(&ubar).into_iter().fold(0.0, f64::max);
    let gamma = dcfg.gamma;
    let alpha = event_alpha(gamma);
    let delta = event_delta(gamma);
    let regular =
        check_assumption_regular(&cov.psi_hat, &support, (1.0 - alpha) / 12.0, 1.0 + alpha, (1.0 + delta) * gamma)?;

    let mut r = Report::new();
    push(&mut r, "d_x", d);
    push(&mut r, "samples", dcfg.samples);
    push(&mut r, "bins_per_axis", dcfg.bins_per_axis);
    push(&mut r, "bin", dcfg.bin);
    push(&mut r, "lambda_min", fmt_num(cov.lambda_min));
    push(&mut r, "lambda_max", fmt_num(cov.lambda_max));
    push(&mut r, "max_abs_dev_from_population", fmt_num(max_dev));
    push(&mut r, "max_row_norm_sq", fmt_num(max_norm));
    push(&mut r, "row_norm_sq_bound", fmt_num(1.0 + d as f64 / 4.0));
    push(&mut r, "offdiag_max_j_jc", fmt_num(cov.offdiag_max_j_jc));
    push(&mut r, "gamma_implied", fmt_num(cov.gamma_implied));
    push(&mut r, "gamma", fmt_num(gamma));
    push(&mut r, "alpha", fmt_num(alpha));
    push(&mut r, "delta", fmt_num(delta));
    push(&mut r, "covariance_events_hold", regular.holds);
    for i in 0..=d {
        for j in 0..=d {
            push(&mut r, format!("psi_{i}_{j}"), fmt_num(cov.psi_hat[(i, j)]));
        }
    }
    Ok(r)
}

/// Grid minimum of the Chernoff objective over `η` and the weight simplex
/// (2 or 3 bins), used to cross-check the closed form.
pub fn chernoff_brute_force(p: &[f64], xi: f64, eta_max: f64) -> f64 {
    let eta_steps = 300;
    let w_steps = if p.len() == 2 { 200 } else { 40 };
    let mut best = f64::INFINITY;
    let mut visit = |w: &[f64]| {
        for e in 0..=eta_steps {
            let eta = eta_max * e as f64 / eta_steps as f64;
            best = best.min(chernoff_objective(eta, w, p, xi));
        }
    };
    for a in 0..=w_steps {
        let w0 = a as f64 / w_steps as f64;
        if p.len() == 2 {
            visit(&[w0, 1.0 - w0]);
        } else {
            for b in 0..=w_steps - a {
                let w1 = b as f64 / w_steps as f64;
                visit(&[w0, w1, (1.0 - w0 - w1).max(0.0)]);
            }
        }
    }
    best
}

pub fn cmd_chernoff(cfg: &ExperimentConfig) -> Result<Report> {
    let c = cfg.chernoff.as_ref().context("missing [chernoff] table")?;
    let mut r = Report::new();
    push(&mut r, "xi", fmt_num(cfg.xi));
    if let Some(p) = &c.p {
        let sol = optimal_chernoff(p, cfg.xi)?;
        push(&mut r, "eta", fmt_num(sol.eta));
        for (j, w) in sol.weights.iter().enumerate() {
            push(&mut r, format!("w_{}", j + 1), fmt_num(*w));
        }
        push(&mut r, "value", fmt_num(sol.value));
        if c.brute_force {
            let grid = chernoff_brute_force(p, cfg.xi, 1.5 * sol.eta + 1.0);
            push(&mut r, "brute_force_value", fmt_num(grid));
            push(&mut r, "brute_force_agrees", grid >= sol.value - 1e-3 && grid <= sol.value + 1e-3);
        }
    }
    if let (Some(n), Some(m), Some(h), Some(b0), Some(b1)) = (c.n, c.m_bins, c.h, c.b0, c.b1) {
        let model = MisidModel { b0, b1 };
        let (alloc, bound) = worst_case_allocation(n, m, &model, h, cfg.xi)?;
        for (j, a) in alloc.iter().enumerate() {
            push(&mut r, format!("n_{}", j + 1), a);
        }
        push(&mut r, "allocation_value", fmt_num(allocation_value(&alloc, &model, h, cfg.xi)));
        push(&mut r, "allocation_bound", fmt_num(bound));
    }
    Ok(r)
}

/// Fixed six-decimal rendering; `-0` prints as `0`.
pub fn fmt_num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}
