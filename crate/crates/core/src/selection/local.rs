use super::MisidModel;

/// False-positive and false-negative bounds for small-ξ voting under local
/// relevance. `*_raw` keep the unclamped values, which may exceed 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalBounds {
    pub false_pos: f64,
    pub false_neg: f64,
    pub false_pos_raw: f64,
    pub false_neg_raw: f64,
}

pub fn local_relevance_bounds(model: &MisidModel, p_q: f64, n: u64, h: f64, xi: f64, d_x: usize) -> LocalBounds {
    let ln = libm::log;
    let bins = libm::pow(h, -(d_x as f64));
    let rate = model.b1 * h * h * h * h * n as f64;
    let lb0 = ln(model.b0);
    let fp = libm::exp((2.0 * xi * lb0 - 2.0 * xi * ln(xi) - (1.0 - xi) * ln(1.0 - xi)) * bins - xi * rate);
    let fn_ = libm::exp(
        (2.0 * (1.0 - xi) * lb0 - xi * ln(xi) + xi * ln(1.0 - xi)) * bins - (2.0 * p_q / 3.0 - xi) * rate,
    ) + libm::exp(-(2.0 / 9.0) * p_q * p_q * n as f64);
    LocalBounds { false_pos: fp.min(1.0), false_neg: fn_.min(1.0), false_pos_raw: fp, false_neg_raw: fn_ }
}
