mod common;

use bvlasso_core::diagnostics::{augment_with_intercept, check_events, EventConstants};
use bvlasso_core::lasso::{fit_lasso, Intercept, LassoProblem};
use bvlasso_core::linalg::Matrix;
use common::SplitMix;

fn sign(v: f64) -> i8 {
    if v > 1e-9 {
        1
    } else if v < -1e-9 {
        -1
    } else {
        0
    }
}

#[test]
fn events_imply_sign_recovery() {
    let mut rng = SplitMix(31);
    let (d, support) = (4usize, [0usize, 1, 2]);
    let constants = EventConstants { lambda_lo: 1.0 / 12.0, lambda_hi: 1.0, gamma: 0.5 };
    let mut all_hold = 0;
    for case in 0..200 {
        let n = 200 + rng.below(1801) as usize;
        let sigma = (rng.range(0.01f64.ln(), 0.5f64.ln())).exp();
        let lambda = (rng.range(0.002f64.ln(), 0.1f64.ln())).exp();
        let mut theta = vec![0.0; d + 1];
        for &j in &support {
            let mag = rng.range(0.2, 2.0);
            theta[j] = if rng.uniform() < 0.5 { -mag } else { mag };
        }
        let u: Vec<f64> = (0..n * d).map(|_| rng.range(-0.5, 0.5)).collect();
        let u = Matrix::from_row_major(n, d, u);
        let ubar = augment_with_intercept(&u);
        let noise: Vec<f64> = (0..n).map(|_| sigma * rng.normal()).collect();
        let z: Vec<f64> =
            (0..n).map(|t| ubar.row(t).iter().zip(&theta).map(|(a, b)| a * b).sum::<f64>() + noise[t]).collect();

        let scale = 1.0 / (n as f64).sqrt();
        let a = Matrix::from_row_major(n, d + 1, (0..n).flat_map(|t| ubar.row(t).to_vec()).map(|v| v * scale).collect());
        let rho: Vec<f64> = noise.iter().map(|e| e * scale).collect();
        let report = check_events(&a, &theta, &rho, &support, lambda, &constants).unwrap();
        if !report.all_hold() {
            continue;
        }
        all_hold += 1;
        let problem = LassoProblem::new(u, z, lambda, Intercept::Penalized).unwrap();
        let fit = fit_lasso(&problem, 1e-12, 100_000).unwrap();
        let mut est = vec![sign(fit.theta0)];
        est.extend(fit.theta.iter().map(|&v| sign(v)));
        let truth: Vec<i8> = theta.iter().map(|&v| sign(v)).collect();
        assert_eq!(est, truth, "case {case}: events hold but signs differ");
    }
    eprintln!("{all_hold} of 200 instances satisfied every event");
    assert!(all_hold >= 20, "only {all_hold} instances satisfied every event");
}
