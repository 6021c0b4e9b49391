//! Uniform-discretization contextual bandit and the two-phase policy.
//!
//! The context space (restricted to the selected coordinates) and the decision
//! interval are both split uniformly at rate `horizon^{1/(d*+3)}`; each context
//! cell runs UCB1 over the decision midpoints.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bins::BinGrid;
use crate::envsim::Environment;
use crate::lasso::{fit_lasso, support, Intercept, LassoProblem, DEFAULT_MAX_ITER, DEFAULT_TOL, DEFAULT_ZERO_TOL};
use crate::linalg::Matrix;
use crate::selection::{
    hyperparams, integer_root, localized_select, select, MisidModel, Observation, SelectionOutcome, SelectionParams,
    WeightScheme, DEFAULT_XI,
};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct PolicyState {
    selected_dims: Vec<usize>,
    context_grid: Option<BinGrid>,
    arm_count: usize,
    pulls: Vec<u64>,
    reward_sums: Vec<f64>,
    visits: Vec<u64>,
    t: u64,
}

/// `max(1, floor(horizon^{1/(d_star+3)}))`.
pub fn discretization(horizon: u64, d_star: usize) -> usize {
    (integer_root(horizon, d_star as u32 + 3) as usize).max(1)
}

pub fn uniform_policy_new(selected_dims: &[usize], horizon: u64, d_star: usize) -> Result<PolicyState> {
    if horizon == 0 {
        return Err(Error::HorizonTooSmall(0));
    }
    let k = discretization(horizon, d_star);
    let context_grid = if selected_dims.is_empty() { None } else { Some(BinGrid::new(selected_dims.len(), k)?) };
    let cells = context_grid.map_or(1, |g| g.bin_count());
    Ok(PolicyState {
        selected_dims: selected_dims.to_vec(),
        context_grid,
        arm_count: k,
        pulls: vec![0; cells * k],
        reward_sums: vec![0.0; cells * k],
        visits: vec![0; cells],
        t: 0,
    })
}

impl PolicyState {
    pub fn selected_dims(&self) -> &[usize] {
        &self.selected_dims
    }

    pub fn context_grid(&self) -> Option<&BinGrid> {
        self.context_grid.as_ref()
    }

    pub fn arm_count(&self) -> usize {
        self.arm_count
    }

    pub fn context_cells(&self) -> usize {
        self.visits.len()
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    /// Decision value of arm `a`: the midpoint of its sub-interval.
    pub fn arm_value(&self, a: usize) -> f64 {
        (a as f64 + 0.5) / self.arm_count as f64
    }

    pub fn context_cell(&self, x: &[f64]) -> Result<usize> {
        match &self.context_grid {
            None => Ok(0),
            Some(g) => {
                let mut proj = Vec::with_capacity(self.selected_dims.len());
                for &i in &self.selected_dims {
                    proj.push(*x.get(i).ok_or(Error::LengthMismatch { expected: i + 1, found: x.len() })?);
                }
                g.locate_flat(&proj)
            }
        }
    }

    pub fn pulls(&self, cell: usize, arm: usize) -> u64 {
        self.pulls[cell * self.arm_count + arm]
    }

    pub fn mean(&self, cell: usize, arm: usize) -> Option<f64> {
        let i = cell * self.arm_count + arm;
        (self.pulls[i] > 0).then(|| self.reward_sums[i] / self.pulls[i] as f64)
    }

    pub fn visits(&self, cell: usize) -> u64 {
        self.visits[cell]
    }

    /// Arm index UCB1 would play in `cell`: the lowest unpulled arm, else the
    /// maximizer of `mean + sqrt(2 ln t_cell / pulls)` with ties to the lowest
    /// index.
    pub fn choose_arm(&self, cell: usize) -> usize {
        let base = cell * self.arm_count;
        let pulls = &self.pulls[base..base + self.arm_count];
        if let Some(a) = pulls.iter().position(|&p| p == 0) {
            return a;
        }
        let log_t = libm::log(self.visits[cell] as f64);
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (a, &p) in pulls.iter().enumerate() {
            let pf = p as f64;
            let score = self.reward_sums[base + a] / pf + libm::sqrt(2.0 * log_t / pf);
            if score > best_score {
                best_score = score;
                best = a;
            }
        }
        best
    }

    pub fn choose(&self, x: &[f64]) -> Result<f64> {
        let cell = self.context_cell(x)?;
        Ok(self.arm_value(self.choose_arm(cell)))
    }

    pub fn update(&mut self, x: &[f64], y: f64, z: f64) -> Result<()> {
        let cell = self.context_cell(x)?;
        let a = libm::round(y * self.arm_count as f64 - 0.5);
        if !(a >= 0.0 && a < self.arm_count as f64) || libm::fabs(self.arm_value(a as usize) - y) > 1e-12 {
            return Err(Error::UnknownArm(y));
        }
        self.record(cell, a as usize, z);
        Ok(())
    }

    fn record(&mut self, cell: usize, arm: usize, z: f64) {
        let i = cell * self.arm_count + arm;
        self.pulls[i] += 1;
        self.reward_sums[i] += z;
        self.visits[cell] += 1;
        self.t += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Selection by binning and voting, then the uniform policy on the selection.
    Bv,
    /// Uniform policy on all covariates from the first period.
    Ua,
    /// Selection by one global LASSO on raw covariates.
    St,
    /// Uniform policy on the true relevant set.
    Oracle,
}

impl Variant {
    pub fn label(&self) -> &'static str {
        match self {
            Variant::Bv => "BV",
            Variant::Ua => "UA",
            Variant::St => "ST",
            Variant::Oracle => "ORACLE",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Per-period regret `f*(X_t) - f(X_t, Y_t)` of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    pub variant: Variant,
    pub seed: u64,
    /// Coordinates the learning phase conditioned on.
    pub selected_dims: Vec<usize>,
    /// Number of leading periods played at the fixed decision.
    pub selection_periods: u64,
    pub instantaneous: Vec<f64>,
    pub cumulative: Vec<f64>,
}

impl RegretTrace {
    fn new(variant: Variant, seed: u64, horizon: u64) -> Self {
        Self {
            variant,
            seed,
            selected_dims: Vec::new(),
            selection_periods: 0,
            instantaneous: Vec::with_capacity(horizon as usize),
            cumulative: Vec::with_capacity(horizon as usize),
        }
    }

    fn push(&mut self, r: f64) {
        let prev = self.cumulative.last().copied().unwrap_or(0.0);
        self.instantaneous.push(r);
        self.cumulative.push(prev + r);
    }

    pub fn horizon(&self) -> u64 {
        self.instantaneous.len() as u64
    }

    /// Cumulative regret after `t` periods (`t = 0` gives 0).
    pub fn cumulative_at(&self, t: u64) -> Option<f64> {
        if t == 0 {
            return Some(0.0);
        }
        self.cumulative.get(t as usize - 1).copied()
    }

    pub fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub xi: f64,
    pub c_lambda: f64,
    pub scheme: WeightScheme,
    /// Phase-1 decision; the environment's default when absent.
    pub fixed_y: Option<f64>,
    /// Recorded on the trace.
    pub seed: u64,
    /// Overrides the scheduled phase-1 length.
    pub selection_periods: Option<u64>,
    /// Overrides the scheduled bins per axis.
    pub bins_per_axis: Option<usize>,
    pub zero_tol: f64,
    pub misid: Option<MisidModel>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            xi: DEFAULT_XI,
            c_lambda: 0.22,
            scheme: WeightScheme::CountProportional,
            fixed_y: None,
            seed: 0,
            selection_periods: None,
            bins_per_axis: None,
            zero_tol: DEFAULT_ZERO_TOL,
            misid: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BvRun {
    pub selection: SelectionOutcome,
    pub trace: RegretTrace,
    /// True when nothing was selected and phase 2 ran without context.
    pub empty_selection: bool,
}

struct PhasePlan {
    n: u64,
    k: usize,
    lambda: f64,
    fixed_y: f64,
}

fn plan(env: &Environment, horizon: u64, config: &RunConfig) -> Result<PhasePlan> {
    let schedule = hyperparams(horizon, env.d_x())?;
    let n = config.selection_periods.unwrap_or(schedule.n);
    let k = config.bins_per_axis.unwrap_or(schedule.k);
    if n >= horizon {
        return Err(Error::HorizonTooSmall(horizon));
    }
    if k == 0 {
        return Err(Error::InvalidDimension("bins per axis must be at least 1"));
    }
    let h = 1.0 / k as f64;
    let fixed_y = config.fixed_y.unwrap_or_else(|| env.default_fixed_decision());
    if !(0.0..=1.0).contains(&fixed_y) {
        return Err(Error::OutOfRange { what: "fixed decision", value: fixed_y });
    }
    Ok(PhasePlan { n, k, lambda: config.c_lambda * h * h, fixed_y })
}

fn collect_phase_one(env: &mut Environment, n: u64, y: f64, trace: &mut RegretTrace) -> Vec<Observation> {
    let mut obs = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let x = env.draw_x();
        let z = env.reward(&x, y);
        trace.push(env.optimal(&x).f_star - env.f(&x, y));
        obs.push(Observation { x, z });
    }
    trace.selection_periods = n;
    obs
}

fn run_learning(env: &mut Environment, dims: &[usize], periods: u64, trace: &mut RegretTrace) -> Result<()> {
    if periods == 0 {
        return Ok(());
    }
    let mut policy = uniform_policy_new(dims, periods, dims.len())?;
    for _ in 0..periods {
        let x = env.draw_x();
        let cell = policy.context_cell(&x)?;
        let arm = policy.choose_arm(cell);
        let y = policy.arm_value(arm);
        let z = env.reward(&x, y);
        trace.push(env.optimal(&x).f_star - env.f(&x, y));
        policy.record(cell, arm, z);
    }
    trace.selected_dims = dims.to_vec();
    Ok(())
}

/// Two-phase policy: `n` periods at a fixed decision, BV-LASSO selection,
/// then the uniform policy on the selected coordinates for `T - n` periods.
pub fn run_bv_lasso_and_learning(env: &mut Environment, horizon: u64, config: &RunConfig) -> Result<BvRun> {
    let plan = plan(env, horizon, config)?;
    let mut trace = RegretTrace::new(Variant::Bv, config.seed, horizon);
    let obs = collect_phase_one(env, plan.n, plan.fixed_y, &mut trace);
    let grid = BinGrid::new(env.d_x(), plan.k)?;
    let mut params = SelectionParams::new(plan.lambda);
    params.zero_tol = config.zero_tol;
    params.misid = config.misid;
    let votes = localized_select(&obs, &grid, &params)?;
    let selection = select(&votes, config.xi, config.scheme)?;
    let dims = selection.selected_set.clone();
    run_learning(env, &dims, horizon - plan.n, &mut trace)?;
    Ok(BvRun { empty_selection: dims.is_empty(), selection, trace })
}

/// Support of one LASSO on the raw covariates with a free intercept.
pub fn standard_lasso_select(obs: &[Observation], lambda: f64, zero_tol: f64) -> Result<Vec<usize>> {
    let d = obs.first().map_or(0, |o| o.x.len());
    let design = Matrix::from_row_major(obs.len(), d, obs.iter().flat_map(|o| o.x.iter().copied()).collect());
    let z = obs.iter().map(|o| o.z).collect();
    let problem = LassoProblem::new(design, z, lambda, Intercept::Free)?;
    let fit = fit_lasso(&problem, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    Ok(support(&fit, zero_tol))
}

pub fn run_benchmark(env: &mut Environment, horizon: u64, variant: Variant, config: &RunConfig) -> Result<RegretTrace> {
    let mut trace = RegretTrace::new(variant, config.seed, horizon);
    match variant {
        Variant::Bv => return Ok(run_bv_lasso_and_learning(env, horizon, config)?.trace),
        Variant::Ua => {
            let dims: Vec<usize> = (0..env.d_x()).collect();
            run_learning(env, &dims, horizon, &mut trace)?;
        }
        Variant::Oracle => {
            let dims = env.relevant().to_vec();
            run_learning(env, &dims, horizon, &mut trace)?;
        }
        Variant::St => {
            let plan = plan(env, horizon, config)?;
            let obs = collect_phase_one(env, plan.n, plan.fixed_y, &mut trace);
            let dims = standard_lasso_select(&obs, plan.lambda, config.zero_tol)?;
            run_learning(env, &dims, horizon - plan.n, &mut trace)?;
        }
    }
    Ok(trace)
}
