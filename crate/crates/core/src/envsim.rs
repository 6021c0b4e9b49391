//! Synthetic reward environments `Z_t = f(X_t, Y_t) + ε_t` with covariates
//! uniform on `[0,1]^d` and Gaussian noise.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::rng::Stream;
use crate::{Error, Result};

const COVARIATE_STREAM: u64 = 0;
const NOISE_STREAM: u64 = 1;
/// Decision grid used when a custom environment has no closed-form optimum.
pub const ORACLE_GRID_POINTS: usize = 401;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvKind {
    /// `exp(-10(x₁-0.5)² - 15(x₁-y)²)`
    F1,
    /// `3(1-2x₁)y + 3x₁`
    F2,
    Custom,
}

impl FromStr for EnvKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f1" | "F1" => Ok(EnvKind::F1),
            "f2" | "F2" => Ok(EnvKind::F2),
            "custom" | "CUSTOM" => Ok(EnvKind::Custom),
            _ => Err(Error::InvalidDimension("unknown environment kind")),
        }
    }
}

impl fmt::Display for EnvKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnvKind::F1 => "f1",
            EnvKind::F2 => "f2",
            EnvKind::Custom => "custom",
        })
    }
}

pub type RewardFn = Arc<dyn Fn(&[f64], f64) -> f64 + Send + Sync>;
/// Returns `(y*, f*)` for a covariate.
pub type OptimumFn = Arc<dyn Fn(&[f64]) -> (f64, f64) + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub y_star: f64,
    pub f_star: f64,
    /// True when found by grid search rather than in closed form.
    pub approximate: bool,
}

#[derive(Clone)]
pub struct Environment {
    kind: EnvKind,
    d_x: usize,
    relevant: Vec<usize>,
    sigma: f64,
    seed: u64,
    custom_f: Option<RewardFn>,
    custom_opt: Option<OptimumFn>,
    covariates: Stream,
    noise: Stream,
}

impl fmt::Debug for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Environment")
            .field("kind", &self.kind)
            .field("d_x", &self.d_x)
            .field("relevant", &self.relevant)
            .field("sigma", &self.sigma)
            .field("seed", &self.seed)
            .finish_non_exhaustive()
    }
}

fn check_common(d_x: usize, sigma: f64) -> Result<()> {
    if d_x == 0 {
        return Err(Error::InvalidDimension("d_x must be at least 1"));
    }
    if !(0.0..f64::INFINITY).contains(&sigma) {
        return Err(Error::OutOfRange { what: "sigma", value: sigma });
    }
    Ok(())
}

/// One of the built-in environments. Only `x₁` (index 0) is relevant.
pub fn make_env(kind: EnvKind, d_x: usize, sigma: f64, seed: u64) -> Result<Environment> {
    check_common(d_x, sigma)?;
    if kind == EnvKind::Custom {
        return Err(Error::InvalidDimension("custom environments are built with Environment::custom"));
    }
    Ok(Environment {
        kind,
        d_x,
        relevant: alloc::vec![0],
        sigma,
        seed,
        custom_f: None,
        custom_opt: None,
        covariates: Stream::new(seed, COVARIATE_STREAM),
        noise: Stream::new(seed, NOISE_STREAM),
    })
}

impl Environment {
    /// User-defined reward. Without `optimum`, `f*` is found by a
    /// 401-point grid search over `y` and flagged approximate.
    pub fn custom(
        d_x: usize,
        relevant: Vec<usize>,
        sigma: f64,
        seed: u64,
        f: RewardFn,
        optimum: Option<OptimumFn>,
    ) -> Result<Self> {
        check_common(d_x, sigma)?;
        if let Some(&bad) = relevant.iter().find(|&&i| i >= d_x) {
            return Err(Error::OutOfRange { what: "relevant index", value: bad as f64 });
        }
        Ok(Self {
            kind: EnvKind::Custom,
            d_x,
            relevant,
            sigma,
            seed,
            custom_f: Some(f),
            custom_opt: optimum,
            covariates: Stream::new(seed, COVARIATE_STREAM),
            noise: Stream::new(seed, NOISE_STREAM),
        })
    }

    pub fn kind(&self) -> EnvKind {
        self.kind
    }

    pub fn d_x(&self) -> usize {
        self.d_x
    }

    /// Ground-truth relevant set (0-based).
    pub fn relevant(&self) -> &[usize] {
        &self.relevant
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Fixed decision for the selection phase. `f2` uses `y = 0`, where
    /// `|∂f/∂x₁| = 3`; at `y = 0.5` it would vanish.
    pub fn default_fixed_decision(&self) -> f64 {
        match self.kind {
            EnvKind::F2 => 0.0,
            EnvKind::F1 | EnvKind::Custom => 0.5,
        }
    }

    /// Noise-free reward.
    pub fn f(&self, x: &[f64], y: f64) -> f64 {
        match self.kind {
            EnvKind::F1 => {
                let a = x[0] - 0.5;
                let b = x[0] - y;
                libm::exp(-10.0 * a * a - 15.0 * b * b)
            }
            EnvKind::F2 => 3.0 * (1.0 - 2.0 * x[0]) * y + 3.0 * x[0],
            EnvKind::Custom => (self.custom_f.as_ref().expect("custom reward"))(x, y),
        }
    }

    pub fn optimal(&self, x: &[f64]) -> Optimum {
        match self.kind {
            EnvKind::F1 => {
                let a = x[0] - 0.5;
                Optimum { y_star: x[0], f_star: libm::exp(-10.0 * a * a), approximate: false }
            }
            EnvKind::F2 => {
                if x[0] < 0.5 {
                    Optimum { y_star: 1.0, f_star: 3.0 - 3.0 * x[0], approximate: false }
                } else {
                    Optimum { y_star: 0.0, f_star: 3.0 * x[0], approximate: false }
                }
            }
            EnvKind::Custom => match &self.custom_opt {
                Some(opt) => {
                    let (y_star, f_star) = opt(x);
                    Optimum { y_star, f_star, approximate: false }
                }
                None => {
                    let mut best = Optimum { y_star: 0.0, f_star: f64::NEG_INFINITY, approximate: true };
                    for i in 0..ORACLE_GRID_POINTS {
                        let y = i as f64 / (ORACLE_GRID_POINTS - 1) as f64;
                        let v = self.f(x, y);
                        if v > best.f_star {
                            best.y_star = y;
                            best.f_star = v;
                        }
                    }
                    best
                }
            },
        }
    }

    /// Draws the next covariate, uniform on the unit cube.
    pub fn draw_x(&mut self) -> Vec<f64> {
        (0..self.d_x).map(|_| self.covariates.uniform()).collect()
    }

    /// Noisy reward for decision `y` at covariate `x`.
    pub fn reward(&mut self, x: &[f64], y: f64) -> f64 {
        let eps = if self.sigma > 0.0 { self.noise.normal(self.sigma) } else { 0.0 };
        self.f(x, y) + eps
    }

    /// Draws a covariate and returns it with the noisy reward for `y`.
    pub fn step(&mut self, y: f64) -> (Vec<f64>, f64) {
        let x = self.draw_x();
        let z = self.reward(&x, y);
        (x, z)
    }
}
