//! Reference implementations used only to check the library: brute-force or
//! textbook methods that share no code with the crate under test.
#![allow(dead_code)]

/// Dense Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let pivot_row = a[col].clone();
        for r in col + 1..n {
            let f = a[r][col] / pivot_row[col];
            for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleIntercept {
    Free,
    Penalized,
    Absent,
}

/// `(1/n)Σ(z − θ₀ − aᵀθ)² + 2λ(‖θ‖₁ [+ |θ₀|])`.
pub fn lasso_objective(rows: &[Vec<f64>], z: &[f64], lambda: f64, icpt: OracleIntercept, t0: f64, t: &[f64]) -> f64 {
    let n = z.len() as f64;
    let rss: f64 = rows
        .iter()
        .zip(z)
        .map(|(a, zi)| {
            let r = zi - t0 - a.iter().zip(t).map(|(x, y)| x * y).sum::<f64>();
            r * r
        })
        .sum();
    let mut l1: f64 = t.iter().map(|v| v.abs()).sum();
    if icpt == OracleIntercept::Penalized {
        l1 += t0.abs();
    }
    rss / n + 2.0 * lambda * l1
}

/// Exact LASSO minimum by enumerating sign patterns: for each pattern solve
/// the stationarity equations on its active set and keep sign-consistent
/// solutions. Returns `(objective, θ₀, θ)` of the best candidate.
pub fn lasso_oracle(rows: &[Vec<f64>], z: &[f64], lambda: f64, icpt: OracleIntercept) -> (f64, f64, Vec<f64>) {
    let n = z.len();
    let d = rows.first().map_or(0, Vec::len);
    let nf = n as f64;
    // Augmented coordinates: index d is the intercept.
    let col = |i: usize, t: usize| if i == d { 1.0 } else { rows[t][i] };
    let coords = d + usize::from(icpt != OracleIntercept::Absent);
    let mut best: Option<(f64, f64, Vec<f64>)> = None;
    for code in 0..3usize.pow(coords as u32) {
        let mut signs = vec![0i8; coords];
        let mut c = code;
        for s in signs.iter_mut() {
            *s = (c % 3) as i8 - 1;
            c /= 3;
        }
        if icpt == OracleIntercept::Free && coords > d && signs[d] == 0 {
            // The free intercept is always active; use pattern 1 as "active".
            continue;
        }
        if icpt == OracleIntercept::Free && coords > d && signs[d] == -1 {
            continue;
        }
        let active: Vec<usize> = (0..coords).filter(|&i| signs[i] != 0).collect();
        let k = active.len();
        let mut a = vec![vec![0.0; k]; k];
        let mut b = vec![0.0; k];
        for (r, &i) in active.iter().enumerate() {
            for (s, &j) in active.iter().enumerate() {
                a[r][s] = (0..n).map(|t| col(i, t) * col(j, t)).sum::<f64>() / nf;
            }
            let penalized = i < d || icpt == OracleIntercept::Penalized;
            b[r] = (0..n).map(|t| col(i, t) * z[t]).sum::<f64>() / nf
                - if penalized { lambda * f64::from(signs[i]) } else { 0.0 };
        }
        let Some(sol) = gauss_solve(a, b) else { continue };
        let consistent = active.iter().zip(&sol).all(|(&i, &v)| {
            let free = i == d && icpt == OracleIntercept::Free;
            free || v * f64::from(signs[i]) > 0.0
        });
        if !consistent {
            continue;
        }
        let mut theta = vec![0.0; d];
        let mut t0 = 0.0;
        for (&i, &v) in active.iter().zip(&sol) {
            if i == d {
                t0 = v;
            } else {
                theta[i] = v;
            }
        }
        let obj = lasso_objective(rows, z, lambda, icpt, t0, &theta);
        if best.as_ref().is_none_or(|b| obj < b.0) {
            best = Some((obj, t0, theta));
        }
    }
    best.expect("the all-zero pattern is always a candidate")
}

/// Chernoff objective `exp{Σ(e^{ηw_j} − 1)p_j − ηξ}`.
pub fn chernoff_v(eta: f64, w: &[f64], p: &[f64], xi: f64) -> f64 {
    (w.iter().zip(p).map(|(wj, pj)| ((eta * wj).exp() - 1.0) * pj).sum::<f64>() - eta * xi).exp()
}

/// Grid minimum of the Chernoff objective over `η ∈ [0, eta_max]` and the
/// weight simplex (2 or 3 bins).
pub fn chernoff_grid_min(p: &[f64], xi: f64, eta_max: f64, eta_steps: usize, w_steps: usize) -> f64 {
    let mut best = f64::INFINITY;
    let mut visit = |w: &[f64]| {
        for e in 0..=eta_steps {
            let eta = eta_max * e as f64 / eta_steps as f64;
            best = best.min(chernoff_v(eta, w, p, xi));
        }
    };
    match p.len() {
        2 => {
            for a in 0..=w_steps {
                let w0 = a as f64 / w_steps as f64;
                visit(&[w0, 1.0 - w0]);
            }
        }
        3 => {
            for a in 0..=w_steps {
                for b in 0..=w_steps - a {
                    let w0 = a as f64 / w_steps as f64;
                    let w1 = b as f64 / w_steps as f64;
                    visit(&[w0, w1, (1.0 - w0 - w1).max(0.0)]);
                }
            }
        }
        _ => panic!("grid oracle supports 2 or 3 bins"),
    }
    best
}

/// All compositions of `n` into `m` positive parts.
pub fn compositions(n: u64, m: usize) -> Vec<Vec<u64>> {
    fn rec(left: u64, parts: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if parts == 1 {
            if left >= 1 {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for first in 1..=left.saturating_sub(parts as u64 - 1) {
            cur.push(first);
            rec(left - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, m, &mut Vec::new(), &mut out);
    out
}

/// `V(n)` written directly from its definition.
pub fn allocation_v(counts: &[u64], b0: f64, b1: f64, h: f64, xi: f64) -> f64 {
    let s: f64 = counts
        .iter()
        .map(|&c| b0 * (-b1 * c as f64 * h.powi(4)).exp())
        .filter(|&p| p < xi)
        .map(|p| xi - p - xi * xi.ln() + xi * p.ln())
        .sum();
    s.exp()
}

/// Half the largest induced ∞-norm of the Hessian of `g` over a probe grid
/// on the box, by central finite differences.
pub fn hessian_constant<G: Fn(&[f64]) -> f64>(g: G, lower: &[f64], side: f64, probes: usize) -> f64 {
    let d = lower.len();
    let eps = 1e-4 * side.max(1e-3);
    let mut worst = 0.0f64;
    let mut idx = vec![0usize; d];
    loop {
        let x: Vec<f64> = (0..d).map(|i| lower[i] + side * idx[i] as f64 / (probes - 1) as f64).collect();
        for i in 0..d {
            let mut row = 0.0;
            for j in 0..d {
                let at = |si: f64, sj: f64| {
                    let mut y = x.clone();
                    y[i] += si * eps;
                    y[j] += sj * eps;
                    g(&y)
                };
                let hij = (at(1.0, 1.0) - at(1.0, -1.0) - at(-1.0, 1.0) + at(-1.0, -1.0)) / (4.0 * eps * eps);
                row += hij.abs();
            }
            worst = worst.max(row);
        }
        let mut k = 0;
        loop {
            if k == d {
                return worst / 2.0;
            }
            idx[k] += 1;
            if idx[k] < probes {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// L2 projection onto `span{1, x − c}` by the midpoint rule with `m^d`
/// cells and dense normal equations. Returns `(θ₀, slopes)`.
pub fn projection_oracle<G: Fn(&[f64]) -> f64>(g: G, lower: &[f64], side: f64, m: usize) -> (f64, Vec<f64>) {
    let d = lower.len();
    let center: Vec<f64> = lower.iter().map(|l| l + side / 2.0).collect();
    let mut gram = vec![vec![0.0; d + 1]; d + 1];
    let mut rhs = vec![0.0; d + 1];
    let mut idx = vec![0usize; d];
    'outer: loop {
        let x: Vec<f64> = (0..d).map(|i| lower[i] + side * (idx[i] as f64 + 0.5) / m as f64).collect();
        let mut basis = vec![1.0];
        basis.extend((0..d).map(|i| x[i] - center[i]));
        let v = g(&x);
        for r in 0..=d {
            rhs[r] += basis[r] * v;
            for c in 0..=d {
                gram[r][c] += basis[r] * basis[c];
            }
        }
        let mut k = 0;
        loop {
            if k == d {
                break 'outer;
            }
            idx[k] += 1;
            if idx[k] < m {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
    let sol = gauss_solve(gram, rhs).expect("basis is independent");
    (sol[0], sol[1..].to_vec())
}

/// SplitMix64, a tiny seeded generator independent of the crate's streams.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform().max(f64::MIN_POSITIVE);
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}
