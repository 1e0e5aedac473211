//! The degenerate Gustafson integral over one even row.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::log_gamma;
use super::integrand::gustafson_lhs;
use super::quadrature::{integrate, Decay, QuadratureGrid};
use super::NumericError;

#[derive(Debug, Clone, PartialEq)]
pub struct GustafsonReport {
    pub k: usize,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub relative_error: f64,
    /// Quadrature error estimate of the left side.
    pub error_estimate: f64,
}

/// The parameters `a_i` of the identity: `lower/(ic) + 1/2` then `-upper/(ic) + 1/2`.
fn induced(lower: &[Complex64], upper: &[Complex64], c: f64) -> Vec<Complex64> {
    let inv_ic = Complex64::new(0.0, -1.0 / c);
    let half = Complex64::new(0.5, 0.0);
    lower.iter().map(|g| g * inv_ic + half).chain(upper.iter().map(|g| -g * inv_ic + half)).collect()
}

/// Closed-form right side
/// `c^k (2 pi)^k 2^k k! prod Gamma(..+1)` of the identity.
pub fn gustafson_rhs(lower: &[Complex64], upper: &[Complex64], c: f64) -> Result<Complex64, NumericError> {
    let k = lower.len();
    let inv_ic = Complex64::new(0.0, -1.0 / c);
    let one = Complex64::new(1.0, 0.0);
    let mut l = Complex64::new(k as f64 * libm::log(c * 2.0 * PI * 2.0), 0.0);
    l += (1..=k).map(|j| libm::log(j as f64)).sum::<f64>();
    for r in 0..k {
        for s in r + 1..k {
            l += log_gamma((lower[r] + lower[s]) * inv_ic + one)?;
        }
        for u in upper {
            l += log_gamma((lower[r] - u) * inv_ic + one)?;
        }
    }
    for r in 0..upper.len() {
        for s in r + 1..upper.len() {
            l += log_gamma(-(upper[r] + upper[s]) * inv_ic + one)?;
        }
    }
    Ok(l.exp())
}

/// Integrates the left side over row `2k` (with `k = lower.len()`) and compares
/// with the closed form. `upper` holds `k + 1` values.
pub fn check_gustafson(
    lower: &[Complex64],
    upper: &[Complex64],
    c: f64,
    grid: &QuadratureGrid,
) -> Result<GustafsonReport, NumericError> {
    let k = lower.len();
    if !(1..=2).contains(&k) {
        return Err(NumericError::InvalidParams(alloc::format!("k = {k} outside 1..=2")));
    }
    for (i, a) in induced(lower, upper, c).iter().enumerate() {
        if a.re <= 0.0 {
            return Err(NumericError::Positivity { index: i + 1, re: a.re });
        }
    }
    let spec = gustafson_lhs(lower, upper, c)?;
    let max_abs = lower.iter().chain(upper).fold(0.0f64, |m, g| m.max(g.norm()));
    let decay = Decay { rate: (PI - 0.1) / c, core: 5.0 * c + 5.0 * max_abs };
    let q = integrate(&spec, grid, decay)?;
    let rhs = gustafson_rhs(lower, upper, c)?;
    Ok(GustafsonReport {
        k,
        lhs: q.value,
        rhs,
        relative_error: (q.value - rhs).norm() / rhs.norm(),
        error_estimate: q.error_estimate,
    })
}
