//! Checks on the design covariance and on the events under which a bin-level
//! LASSO fit recovers the sign pattern of the local linear coefficients.
//!
//! Index conventions: coordinate 0 is the intercept column of `Ū = (1, U)`,
//! coordinate `i + 1` is covariate `i`. Supports passed to this module use
//! these augmented indices.

use alloc::vec::Vec;

use crate::linalg::{symmetric_eigenvalues, Matrix};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceReport {
    pub psi_hat: Matrix,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// `max |Ψ̂_ij|` over `i ∈ J`, `j ∉ J`; zero when either side is empty.
    pub offdiag_max_j_jc: f64,
    /// Smallest γ for which the cross-covariance condition holds with
    /// `λ_lo = λ_min`: `offdiag_max · |J| / λ_min`.
    pub gamma_implied: f64,
}

/// Prepends the intercept column to rows of normalized covariates.
pub fn augment_with_intercept(u: &Matrix) -> Matrix {
    let (n, d) = (u.rows(), u.cols());
    let mut data = Vec::with_capacity(n * (d + 1));
    for i in 0..n {
        data.push(1.0);
        data.extend_from_slice(u.row(i));
    }
    Matrix::from_row_major(n, d + 1, data)
}

fn gram(rows: &Matrix, scale: f64) -> Matrix {
    let p = rows.cols();
    let mut psi = Matrix::zeros(p, p);
    for r in 0..rows.rows() {
        let row = rows.row(r);
        for i in 0..p {
            for j in 0..=i {
                psi[(i, j)] += row[i] * row[j];
            }
        }
    }
    for i in 0..p {
        for j in 0..=i {
            let v = psi[(i, j)] * scale;
            psi[(i, j)] = v;
            psi[(j, i)] = v;
        }
    }
    psi
}

fn complement(p: usize, support: &[usize]) -> Vec<usize> {
    (0..p).filter(|i| !support.contains(i)).collect()
}

fn check_support(p: usize, support: &[usize]) -> Result<()> {
    match support.iter().find(|&&i| i >= p) {
        Some(&i) => Err(Error::LengthMismatch { expected: p, found: i + 1 }),
        None => Ok(()),
    }
}

fn max_cross(psi: &Matrix, support: &[usize], rest: &[usize]) -> f64 {
    let mut m = 0.0f64;
    for &i in support {
        for &j in rest {
            m = m.max(libm::fabs(psi[(i, j)]));
        }
    }
    m
}

/// `Ψ̂ = (1/n) Σ Ū_i Ū_iᵀ` of rows that already carry the leading 1-column,
/// with cross-covariance summaries for the augmented support `support`.
pub fn empirical_covariance(rows: &Matrix, support: &[usize]) -> Result<CovarianceReport> {
    if rows.rows() == 0 || rows.cols() == 0 {
        return Err(Error::InvalidDimension("covariance needs at least one row and column"));
    }
    check_support(rows.cols(), support)?;
    let psi_hat = gram(rows, 1.0 / rows.rows() as f64);
    let eigenvalues = symmetric_eigenvalues(&psi_hat);
    let lambda_min = eigenvalues[0];
    let lambda_max = eigenvalues[eigenvalues.len() - 1];
    let rest = complement(rows.cols(), support);
    let offdiag_max_j_jc = max_cross(&psi_hat, support, &rest);
    let gamma_implied = if offdiag_max_j_jc == 0.0 {
        0.0
    } else {
        offdiag_max_j_jc * support.len() as f64 / lambda_min
    };
    Ok(CovarianceReport { psi_hat, eigenvalues, lambda_min, lambda_max, offdiag_max_j_jc, gamma_implied })
}

/// Population covariance of `Ū` for covariates uniform on a bin:
/// `blockdiag(1, I/12)`.
pub fn population_covariance_uniform(d_x: usize) -> Result<Matrix> {
    if d_x == 0 {
        return Err(Error::InvalidDimension("d_x must be at least 1"));
    }
    let mut m = Matrix::identity(d_x + 1);
    for i in 1..=d_x {
        m[(i, i)] = 1.0 / 12.0;
    }
    Ok(m)
}

/// `‖Ū‖²` of each row, which is also `λ_max(Ū Ūᵀ)`.
pub fn row_norms_squared(rows: &Matrix) -> Vec<f64> {
    (0..rows.rows()).map(|i| rows.row(i).iter().map(|v| v * v).sum()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    MinEigenvalue { value: f64, bound: f64 },
    MaxEigenvalue { value: f64, bound: f64 },
    CrossCovariance { i: usize, j: usize, value: f64, bound: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityCheck {
    pub holds: bool,
    pub violations: Vec<Violation>,
}

/// Regular-covariates condition: `λ_lo ≤ λ_min(Ψ) ≤ λ_max(Ψ) ≤ λ_hi` and
/// `|Ψ_ij| ≤ γ λ_lo / |J|` for `i ∈ J`, `j ∉ J`.
pub fn check_assumption_regular(
    psi: &Matrix,
    support: &[usize],
    lambda_lo: f64,
    lambda_hi: f64,
    gamma: f64,
) -> Result<RegularityCheck> {
    if !psi.is_square() {
        return Err(Error::InvalidDimension("covariance must be square"));
    }
    check_support(psi.rows(), support)?;
    let eig = symmetric_eigenvalues(psi);
    let mut violations = Vec::new();
    if let (Some(&lo), Some(&hi)) = (eig.first(), eig.last()) {
        if lo < lambda_lo {
            violations.push(Violation::MinEigenvalue { value: lo, bound: lambda_lo });
        }
        if hi > lambda_hi {
            violations.push(Violation::MaxEigenvalue { value: hi, bound: lambda_hi });
        }
    }
    if !support.is_empty() {
        let bound = gamma * lambda_lo / support.len() as f64;
        for &i in support {
            for j in complement(psi.rows(), support) {
                let value = libm::fabs(psi[(i, j)]);
                if value > bound {
                    violations.push(Violation::CrossCovariance { i, j, value, bound });
                }
            }
        }
    }
    Ok(RegularityCheck { holds: violations.is_empty(), violations })
}

/// Eigenvalue margin `α = (1 − γ) / (2(1 + γ))`.
pub fn event_alpha(gamma: f64) -> f64 {
    (1.0 - gamma) / (2.0 * (1.0 + gamma))
}

/// Cross-covariance margin `δ = (1 − γ) / (4γ)`.
pub fn event_delta(gamma: f64) -> f64 {
    (1.0 - gamma) / (4.0 * gamma)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventConstants {
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub gamma: f64,
}

/// Per-event slack; non-negative exactly when the event holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventMargins {
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: Option<f64>,
    pub omega4: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventReport {
    pub omega1: bool,
    pub omega2: bool,
    /// `None` when `Ψ̂_11` is singular.
    pub omega3: Option<bool>,
    pub omega4: Option<bool>,
    pub margins: EventMargins,
    pub alpha: f64,
    pub delta: f64,
}

impl EventReport {
    pub fn all_hold(&self) -> bool {
        self.omega1 && self.omega2 && self.omega3 == Some(true) && self.omega4 == Some(true)
    }
}

/// Evaluates the four sign-consistency events for the scaled problem
/// `Z = A θ* + ρ` with `A = Ū/√n`, whose LASSO objective
/// `‖Z − Aθ‖² + 2λ‖θ‖₁` penalizes every coordinate including the intercept.
///
/// `support` is the augmented index set `J` of nonzero entries of `θ*`.
/// The cross-covariance bound uses `|J|` as the sparsity level.
pub fn check_events(
    design: &Matrix,
    theta_star: &[f64],
    rho: &[f64],
    support: &[usize],
    lambda: f64,
    constants: &EventConstants,
) -> Result<EventReport> {
    let (n, p) = (design.rows(), design.cols());
    if theta_star.len() != p {
        return Err(Error::LengthMismatch { expected: p, found: theta_star.len() });
    }
    if rho.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: rho.len() });
    }
    check_support(p, support)?;
    let gamma = constants.gamma;
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::OutOfRange { what: "gamma", value: gamma });
    }
    let alpha = event_alpha(gamma);
    let delta = event_delta(gamma);
    let rest = complement(p, support);

    let psi = gram(design, 1.0);
    let eig = symmetric_eigenvalues(&psi);
    let (lo, hi) = (eig[0], eig[p - 1]);
    let psi11 = psi.select(support, support);
    let psi11_inv = if support.is_empty() { Some(Matrix::zeros(0, 0)) } else { psi11.inverse() };

    let omega1_margin = (lo - (1.0 - alpha) * constants.lambda_lo).min((1.0 + alpha) * constants.lambda_hi - hi);
    let omega1 = omega1_margin >= 0.0 && psi11_inv.is_some();

    let cross_bound = if support.is_empty() {
        f64::INFINITY
    } else {
        (1.0 + delta) * gamma * constants.lambda_lo / support.len() as f64
    };
    let omega2_margin = cross_bound - max_cross(&psi, support, &rest);

    // W = Aᵀρ.
    let w = design.transpose().mul_vec(rho);
    let (omega3_margin, omega4_margin) = match &psi11_inv {
        None => (None, None),
        Some(inv) => {
            let w1: Vec<f64> = support.iter().map(|&i| w[i]).collect();
            let signs: Vec<f64> = support.iter().map(|&i| sign(theta_star[i])).collect();
            let inv_w1 = inv.mul_vec(&w1);
            let inv_s = inv.mul_vec(&signs);
            let mut m3 = f64::INFINITY;
            for (k, &j) in support.iter().enumerate() {
                m3 = m3.min(libm::fabs(theta_star[j]) - libm::fabs(inv_w1[k] - lambda * inv_s[k]));
            }
            let psi21 = psi.select(&rest, support);
            let proj = psi21.mul_vec(&inv_w1);
            let mut m4 = f64::INFINITY;
            for (k, &j) in rest.iter().enumerate() {
                m4 = m4.min((1.0 - gamma) * lambda / 2.0 - libm::fabs(proj[k] - w[j]));
            }
            (Some(m3), Some(m4))
        }
    };

    Ok(EventReport {
        omega1,
        omega2: omega2_margin >= 0.0,
        omega3: omega3_margin.map(|m| m >= 0.0),
        omega4: omega4_margin.map(|m| m >= 0.0),
        margins: EventMargins {
            omega1: omega1_margin,
            omega2: omega2_margin,
            omega3: omega3_margin,
            omega4: omega4_margin,
        },
        alpha,
        delta,
    })
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;
    use alloc::vec;

    #[test]
    fn single_row_covariance() {
        let rows = Matrix::from_rows(&[vec![1.0, 0.0, 0.0]]);
        let r = empirical_covariance(&rows, &[0]).unwrap();
        assert_eq!(r.psi_hat[(0, 0)], 1.0);
        assert!(r.lambda_min.abs() < 1e-15);
        assert!((r.lambda_max - 1.0).abs() < 1e-15);
        assert_eq!(r.offdiag_max_j_jc, 0.0);
    }

    #[test]
    fn duplicated_rows_leave_covariance_unchanged() {
        let a = Matrix::from_rows(&[vec![1.0, 0.2, -0.3], vec![1.0, -0.4, 0.1]]);
        let b = Matrix::from_rows(&[
            vec![1.0, 0.2, -0.3],
            vec![1.0, -0.4, 0.1],
            vec![1.0, 0.2, -0.3],
            vec![1.0, -0.4, 0.1],
        ]);
        let ra = empirical_covariance(&a, &[0, 1]).unwrap();
        let rb = empirical_covariance(&b, &[0, 1]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((ra.psi_hat[(i, j)] - rb.psi_hat[(i, j)]).abs() < 1e-15);
            }
        }
        assert!(empirical_covariance(&Matrix::zeros(0, 3), &[]).is_err());
    }

    #[test]
    fn uniform_rows_approach_population_covariance() {
        let d = 3;
        let n = 100_000;
        let mut s = Stream::new(5, 0);
        let mut data = Vec::with_capacity(n * (d + 1));
        for _ in 0..n {
            data.extend(core::iter::once(1.0).chain((0..d).map(|_| s.uniform() - 0.5)));
        }
        let rows = Matrix::from_row_major(n, d + 1, data);
        let r = empirical_covariance(&rows, &[0, 1]).unwrap();
        let pop = population_covariance_uniform(d).unwrap();
        for i in 0..=d {
            for j in 0..=d {
                assert!((r.psi_hat[(i, j)] - pop[(i, j)]).abs() < 0.02);
            }
        }
        assert!(r.psi_hat.max_abs_asymmetry() == 0.0);
        assert!(r.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        assert!(row_norms_squared(&rows).iter().all(|&v| v <= 1.0 + d as f64 / 4.0));
    }

    #[test]
    fn population_covariance_examples() {
        let m = population_covariance_uniform(1).unwrap();
        assert_eq!(m, Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0 / 12.0]]));
        let eig = symmetric_eigenvalues(&population_covariance_uniform(3).unwrap());
        assert!((eig[0] - 1.0 / 12.0).abs() < 1e-15 && (eig[3] - 1.0).abs() < 1e-15);
        assert!(population_covariance_uniform(0).is_err());
        let c = check_assumption_regular(&m, &[1], 1.0 / 12.0, 1.0, 0.0).unwrap();
        assert!(c.holds, "{:?}", c.violations);
    }

    #[test]
    fn regularity_violations() {
        let psi = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]);
        let c = check_assumption_regular(&psi, &[1], 1.0 / 12.0, 2.0, 0.9).unwrap();
        assert!(!c.holds);
        assert!(matches!(c.violations[0], Violation::CrossCovariance { i: 1, j: 0, .. }));
        let pop = population_covariance_uniform(2).unwrap();
        let c = check_assumption_regular(&pop, &[], 0.1, 1.0, 0.5).unwrap();
        assert_eq!(c.violations, vec![Violation::MinEigenvalue { value: 1.0 / 12.0, bound: 0.1 }]);
    }

    #[test]
    fn orthonormal_noiseless_design_satisfies_all_events() {
        // Columns of A orthonormal, so Ψ̂ = I and W = 0.
        let a = Matrix::from_rows(&[
            vec![0.5, 0.5, 0.5],
            vec![0.5, -0.5, 0.5],
            vec![0.5, 0.5, -0.5],
            vec![0.5, -0.5, -0.5],
        ]);
        let theta = [1.0, -0.8, 0.0];
        let rho = [0.0; 4];
        let c = EventConstants { lambda_lo: 1.0, lambda_hi: 1.0, gamma: 0.5 };
        let r = check_events(&a, &theta, &rho, &[0, 1], 0.1, &c).unwrap();
        assert!(r.all_hold(), "{r:?}");
        assert!(r.margins.omega3.unwrap() > 0.0 && r.margins.omega4.unwrap() > 0.0);
    }

    #[test]
    fn margins_agree_with_flags() {
        let a = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]);
        let c = EventConstants { lambda_lo: 0.5, lambda_hi: 2.0, gamma: 0.5 };
        let r = check_events(&a, &[0.1, 0.0], &[0.3, -0.2, 0.5], &[0], 0.05, &c).unwrap();
        assert_eq!(r.omega1, r.margins.omega1 >= 0.0);
        assert_eq!(r.omega2, r.margins.omega2 >= 0.0);
        assert_eq!(r.omega3, r.margins.omega3.map(|m| m >= 0.0));
        assert_eq!(r.omega4, r.margins.omega4.map(|m| m >= 0.0));
    }

    #[test]
    fn singular_block_is_indeterminate() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0, 0.0], vec![1.0, 1.0, 0.0]]);
        let c = EventConstants { lambda_lo: 0.1, lambda_hi: 10.0, gamma: 0.5 };
        let r = check_events(&a, &[1.0, 1.0, 0.0], &[0.0, 0.0], &[0, 1], 0.1, &c).unwrap();
        assert!(!r.omega1);
        assert_eq!(r.omega3, None);
        assert_eq!(r.omega4, None);
        assert!(!r.all_hold());
    }

    #[test]
    fn margin_parameters_vanish_as_gamma_approaches_one() {
        assert!((event_alpha(0.5) - 1.0 / 6.0).abs() < 1e-15);
        assert!((event_delta(0.5) - 0.25).abs() < 1e-15);
        assert!(event_alpha(1.0 - 1e-9) < 1e-9 && event_delta(1.0 - 1e-9) < 1e-9);
        let a = Matrix::identity(2);
        let c = EventConstants { lambda_lo: 1.0, lambda_hi: 1.0, gamma: 1.0 };
        assert!(check_events(&a, &[1.0, 0.0], &[0.0, 0.0], &[0], 0.1, &c).is_err());
    }
}
