use crate::{Error, Result};

/// Model constants and the derived rate constants `b0..b3` of the per-bin
/// misidentification bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantsBundle {
    pub d_x: usize,
    pub mu_m: f64,
    pub mu_big_m: f64,
    pub l: f64,
    pub l_mu: f64,
    pub sigma: f64,
    pub c: f64,
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

/// The pair `(b0, b1)` in `p_j = min(1, b0·exp(-b1·n_j·h⁴))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MisidModel {
    pub b0: f64,
    pub b1: f64,
}

impl ConstantsBundle {
    /// `sigma` may be zero; every other input must be positive.
    pub fn new(d_x: usize, mu_m: f64, mu_big_m: f64, l: f64, l_mu: f64, sigma: f64, c: f64) -> Result<Self> {
        if d_x == 0 {
            return Err(Error::InvalidDimension("d_x must be at least 1"));
        }
        for (what, v) in [("mu_m", mu_m), ("mu_M", mu_big_m), ("L", l), ("L_mu", l_mu), ("C", c)] {
            if v.is_nan() || v <= 0.0 || v.is_infinite() {
                return Err(Error::OutOfRange { what, value: v });
            }
        }
        if !(0.0..f64::INFINITY).contains(&sigma) {
            return Err(Error::OutOfRange { what: "sigma", value: sigma });
        }
        let d = d_x as f64;
        let b0 = 2.0 * f64::max(2.0 * (d + 1.0), d * d / 4.0);
        let s2 = sigma * sigma;
        // The two σ-dependent terms are +∞ at σ = 0, leaving the σ-free ones.
        let b1 = [
            11.0 * mu_m / (1e4 * (1.0 + d / 4.0)),
            mu_m * mu_m / (4608.0 * d * d),
            64.0 * l * l * d * d / (2.0 * s2),
            22400.0 * mu_big_m * l * l * d * d * d / s2,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
        let b2 = 64.0 * libm::sqrt(7.0 * mu_big_m / 3.0) * l * d;
        let b3 = f64::min(c * mu_m / (768.0 * libm::sqrt(21.0 * mu_m * d)), mu_m * mu_m / (3.0 * d * l_mu));
        Ok(Self { d_x, mu_m, mu_big_m, l, l_mu, sigma, c, b0, b1, b2, b3 })
    }

    pub fn misid_model(&self) -> MisidModel {
        MisidModel { b0: self.b0, b1: self.b1 }
    }

    pub fn misid_prob(&self, n_j: usize, h: f64) -> f64 {
        self.misid_model().misid_prob(n_j, h)
    }

    /// Penalty `b2·h²` prescribed by the theory.
    pub fn lambda_for(&self, h: f64) -> f64 {
        self.b2 * h * h
    }

    pub fn p_q(&self) -> f64 {
        compute_pq(self.mu_m, self.c, self.l, self.d_x)
    }
}

impl MisidModel {
    /// Modeled probability that a bin with `n_j` observations votes wrongly,
    /// clamped to `(0, 1]`.
    pub fn misid_prob(&self, n_j: usize, h: f64) -> f64 {
        let p = self.b0 * libm::exp(-self.b1 * n_j as f64 * h * h * h * h);
        p.clamp(f64::MIN_POSITIVE, 1.0)
    }
}

/// Lower bound `μ_m (C / 3L)^{d_x}` on the mass of the informative area,
/// clamped to 1. Valid for `h ≤ C/(3L)`, which the caller checks.
pub fn compute_pq(mu_m: f64, c: f64, l: f64, d_x: usize) -> f64 {
    (mu_m * libm::pow(c / (3.0 * l), d_x as f64)).min(1.0)
}
