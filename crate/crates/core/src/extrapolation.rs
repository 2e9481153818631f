//! Pointwise extrapolation of consecutive multilevel iterates with a rate
//! estimated from their errors.

use crate::error::{Error, Result};

/// Algebraic rate `β` in `E ≈ K · N^{−β}` between two levels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateEstimate {
    pub beta: f64,
    /// `N_curr / N_prev`.
    pub node_ratio: f64,
}

impl RateEstimate {
    /// `r^β`, the factor by which the error is assumed to shrink.
    pub fn amplification(&self) -> f64 {
        self.node_ratio.powf(self.beta)
    }
}

/// `β = −(log E_curr − log E_prev) / (log N_curr − log N_prev)`.
pub fn estimate_beta(
    error_prev: f64,
    error_curr: f64,
    nodes_prev: usize,
    nodes_curr: usize,
) -> Result<RateEstimate> {
    if error_prev == 0.0 || error_curr == 0.0 {
        return Err(Error::Extrapolation("zero error"));
    }
    if !(error_prev > 0.0 && error_curr > 0.0) || !error_prev.is_finite() || !error_curr.is_finite()
    {
        return Err(Error::Extrapolation("errors must be positive and finite"));
    }
    if nodes_prev == 0 || nodes_curr <= nodes_prev {
        return Err(Error::Extrapolation("node counts must increase"));
    }
    let (n1, n2) = (nodes_prev as f64, nodes_curr as f64);
    let beta = -(error_curr.ln() - error_prev.ln()) / (n2.ln() - n1.ln());
    Ok(RateEstimate { beta, node_ratio: n2 / n1 })
}

/// `(r^β u_curr − u_prev) / (r^β − 1)` pointwise.
pub fn extrapolate_values(u_prev: &[f64], u_curr: &[f64], rate: &RateEstimate) -> Result<Vec<f64>> {
    if u_prev.len() != u_curr.len() {
        return Err(Error::DimensionMismatch { expected: u_prev.len(), found: u_curr.len() });
    }
    let amp = rate.amplification();
    let denom = amp - 1.0;
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::Extrapolation("r^beta equals 1"));
    }
    Ok(u_prev
        .iter()
        .zip(u_curr)
        .map(|(&p, &c)| (amp * c - p) / denom)
        .collect())
}
