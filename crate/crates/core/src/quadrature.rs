//! Gauss–Legendre rules and their tensor products over axis-aligned boxes.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`, exact for polynomials of
/// degree `2n - 1`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a quadrature rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi's initial guess, then Newton on P_n.
            let mut x = libm::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if libm::fabs(step) < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Calls `visit(point, weight)` for every node of the tensor-product rule on
/// the box `[lower_i, lower_i + side]^d`. Weights are normalized to sum to 1,
/// so summing `weight * g(point)` gives the mean of `g` over the box.
pub fn for_each_box_node<F>(rule: &GaussLegendre, lower: &[f64], side: f64, mut visit: F)
where
    F: FnMut(&[f64], f64),
{
    let d = lower.len();
    let m = rule.len();
    let mut idx = vec![0usize; d];
    let mut point = vec![0.0; d];
    loop {
        let mut w = 1.0;
        for a in 0..d {
            point[a] = lower[a] + side * 0.5 * (rule.nodes[idx[a]] + 1.0);
            w *= 0.5 * rule.weights[idx[a]];
        }
        visit(&point, w);
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in 1..=12 {
            let r = GaussLegendre::new(n);
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
        }
    }

    #[test]
    fn exact_up_to_degree_2n_minus_1() {
        for n in 1..=10 {
            let r = GaussLegendre::new(n);
            for deg in 0..2 * n {
                let q: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg} q={q}");
            }
        }
    }

    #[test]
    fn known_two_point_rule() {
        let r = GaussLegendre::new(2);
        let x = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + x).abs() < 1e-15 && (r.nodes[1] - x).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn box_mean_of_product() {
        // mean of x*y^2 over [0,1]x[1,2] = (1/2)*(7/3)
        let r = GaussLegendre::new(4);
        let mut acc = 0.0;
        let mut wsum = 0.0;
        for_each_box_node(&r, &[0.0, 1.0], 1.0, |p, w| {
            acc += w * p[0] * p[1] * p[1];
            wsum += w;
        });
        assert!((wsum - 1.0).abs() < 1e-14);
        assert!((acc - 7.0 / 6.0).abs() < 1e-13);
    }
}
