//! L²-optimal linear approximation of a known function on one bin.
//!
//! Coefficients are expressed in bin-centered coordinates `u = x - C_B`, so
//! `theta0` is the bin mean of `f` and each slope decouples:
//! `theta_i = ∫(f - theta0) u_i / ∫u_i²`. Slopes are in original `x` units.

use alloc::vec;
use alloc::vec::Vec;

use crate::bins::{BinGrid, BinIndex};
use crate::quadrature::{for_each_box_node, GaussLegendre};
use crate::{Error, Result};

pub const DEFAULT_QUAD_POINTS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct LinProjection {
    pub theta0: f64,
    pub slopes: Vec<f64>,
    pub bin: BinIndex,
    center: Vec<f64>,
}

impl LinProjection {
    pub fn center(&self) -> &[f64] {
        &self.center
    }

    /// `theta0 + slopesᵀ (x - C_B)`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.theta0
            + self.slopes.iter().zip(x.iter().zip(&self.center)).map(|(s, (v, c))| s * (v - c)).sum::<f64>()
    }

    /// Coefficients on the normalized scale `U = (x - C_B)/h`, intercept
    /// first: `(theta0, h·theta_1, …, h·theta_d)`.
    pub fn normalized_coefficients(&self, h: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.slopes.len() + 1);
        out.push(self.theta0);
        out.extend(self.slopes.iter().map(|s| s * h));
        out
    }
}

pub fn project_linear<F>(
    f: F,
    grid: &BinGrid,
    bin: &BinIndex,
    y_fixed: f64,
    quad_points_per_axis: usize,
) -> Result<LinProjection>
where
    F: Fn(&[f64], f64) -> f64,
{
    if quad_points_per_axis < 2 {
        return Err(Error::InvalidDimension("need at least 2 quadrature points per axis"));
    }
    let d = grid.d_x();
    let h = grid.side();
    let lower = grid.bin_lower(bin)?;
    let center = grid.bin_center(bin)?;
    let rule = GaussLegendre::new(quad_points_per_axis);

    let mut mean = 0.0;
    let mut moments = vec![0.0; d];
    let mut bad = false;
    for_each_box_node(&rule, &lower, h, |p, w| {
        let v = f(p, y_fixed);
        if !v.is_finite() {
            bad = true;
            return;
        }
        mean += w * v;
        for i in 0..d {
            moments[i] += w * v * (p[i] - center[i]);
        }
    });
    if bad {
        return Err(Error::NonFinite("function value"));
    }
    // ∫u_i (f - θ₀) = ∫u_i f because ∫u_i = 0; mean of u_i² over the bin is h²/12.
    let second = h * h / 12.0;
    let slopes = moments.iter().map(|m| m / second).collect();
    Ok(LinProjection { theta0: mean, slopes, bin: bin.clone(), center })
}

/// `(4√3 + 1)·L·d_x·h²`, the sup-norm bound on the projection residual.
pub fn residual_bound(l: f64, d_x: usize, h: f64) -> f64 {
    (4.0 * libm::sqrt(3.0) + 1.0) * l * d_x as f64 * h * h
}

/// Maximum of `|f(x) - proj(x)|` over a regular probe grid (endpoints
/// included) on the bin.
pub fn max_residual<F>(
    f: F,
    proj: &LinProjection,
    grid: &BinGrid,
    y_fixed: f64,
    probe_points_per_axis: usize,
) -> Result<f64>
where
    F: Fn(&[f64], f64) -> f64,
{
    if probe_points_per_axis < 3 {
        return Err(Error::InvalidDimension("need at least 3 probe points per axis"));
    }
    let lower = grid.bin_lower(&proj.bin)?;
    let h = grid.side();
    let mut worst = 0.0f64;
    for_each_probe(&lower, h, probe_points_per_axis, |p| {
        worst = worst.max(libm::fabs(f(p, y_fixed) - proj.eval(p)));
    });
    Ok(worst)
}

/// Visits the `m^d` points of a regular grid (endpoints included) on the box
/// `[lower, lower + side]`.
pub fn for_each_probe<F: FnMut(&[f64])>(lower: &[f64], side: f64, m: usize, mut visit: F) {
    let d = lower.len();
    let mut idx = vec![0usize; d];
    let mut p = vec![0.0; d];
    let step = side / (m - 1) as f64;
    loop {
        for a in 0..d {
            p[a] = if idx[a] == m - 1 { lower[a] + side } else { lower[a] + step * idx[a] as f64 };
        }
        visit(&p);
        let mut a = 0;
        loop {
            if a == d {
                return;
            }
            idx[a] += 1;
            if idx[a] < m {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
}

/// Integrated squared error `mean_B (f - θ₀ - slopesᵀu)²` by quadrature.
pub fn integrated_squared_error<F>(
    f: F,
    grid: &BinGrid,
    bin: &BinIndex,
    y_fixed: f64,
    theta0: f64,
    slopes: &[f64],
    quad_points_per_axis: usize,
) -> Result<f64>
where
    F: Fn(&[f64], f64) -> f64,
{
    let lower = grid.bin_lower(bin)?;
    let center = grid.bin_center(bin)?;
    let rule = GaussLegendre::new(quad_points_per_axis);
    let mut acc = 0.0;
    for_each_box_node(&rule, &lower, grid.side(), |p, w| {
        let lin: f64 = slopes.iter().zip(p.iter().zip(&center)).map(|(s, (v, c))| s * (v - c)).sum();
        let r = f(p, y_fixed) - theta0 - lin;
        acc += w * r * r;
    });
    Ok(acc)
}
