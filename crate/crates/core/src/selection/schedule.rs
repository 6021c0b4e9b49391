use crate::{Error, Result};

/// Hyperparameters for a horizon `T`: phase-1 length `n` and bins per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub n: u64,
    /// `round((ln T)^{2 + 4/d_x})` before capping.
    pub n_uncapped: u64,
    /// True when `n` was capped at `floor(T^{1 - 1/(d_x+3)})`.
    pub capped: bool,
    pub k: usize,
}

impl Schedule {
    pub fn h(&self) -> f64 {
        1.0 / self.k as f64
    }

    /// `λ = c_λ·h²`.
    pub fn lambda(&self, c_lambda: f64) -> f64 {
        c_lambda * self.h() * self.h()
    }
}

/// Largest `r` with `r^root ≤ x`.
pub fn integer_root(x: u64, root: u32) -> u64 {
    if root == 0 {
        return x;
    }
    let mut r = libm::floor(libm::pow(x as f64, 1.0 / root as f64)) as u64;
    let fits = |r: u64| (r as u128).checked_pow(root).is_some_and(|v| v <= x as u128);
    while r > 0 && !fits(r) {
        r -= 1;
    }
    while fits(r + 1) {
        r += 1;
    }
    r
}

/// `n = round((ln T)^{2+4/d_x})`, capped at `floor(T^{1-1/(d_x+3)})`;
/// `k = floor(n^{1/(2 d_x + 4)})`.
pub fn hyperparams(horizon: u64, d_x: usize) -> Result<Schedule> {
    if d_x == 0 {
        return Err(Error::InvalidDimension("d_x must be at least 1"));
    }
    if horizon < 3 {
        return Err(Error::HorizonTooSmall(horizon));
    }
    let d = d_x as f64;
    let ln_t = libm::log(horizon as f64);
    let n_uncapped = libm::round(libm::pow(ln_t, 2.0 + 4.0 / d)) as u64;
    let cap = libm::floor(libm::pow(horizon as f64, 1.0 - 1.0 / (d + 3.0))) as u64;
    let (n, capped) = if n_uncapped > cap { (cap, true) } else { (n_uncapped, false) };
    let k = integer_root(n, 2 * d_x as u32 + 4) as usize;
    if k == 0 {
        return Err(Error::HorizonTooSmall(horizon));
    }
    Ok(Schedule { n, n_uncapped, capped, k })
}
