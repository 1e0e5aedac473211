//! Finite-difference check of the Toda eigen-equation.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::integrand::SpectralParams;
use super::wave::{wave_value, Route, WaveOptions};
use super::NumericError;

/// Which form of the spectral problem is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    /// `H = sum(-d_k^2 + (2n-2k+1) d_k) + potential` on `Psi`, eigenvalue
    /// `sum g^2/c^2 + n(2n-1)(2n+1)/12`.
    AsPrinted,
    /// `-sum d_k^2 + potential` on `e^{-(rho, x)} Psi`, eigenvalue `sum g^2/c^2`.
    Tilde,
}

impl Gauge {
    pub fn name(self) -> &'static str {
        match self {
            Gauge::AsPrinted => "printed",
            Gauge::Tilde => "tilde",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "printed" | "as-printed" => Some(Gauge::AsPrinted),
            "tilde" => Some(Gauge::Tilde),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TodaCheckSpec {
    pub params: SpectralParams,
    pub x: Vec<f64>,
    /// Finite-difference step; `None` means `c / 100`.
    pub fd_step: Option<f64>,
    pub gauge: Gauge,
    pub route: Route,
}

impl TodaCheckSpec {
    pub fn new(params: SpectralParams, x: Vec<f64>, gauge: Gauge) -> Self {
        TodaCheckSpec { params, x, fd_step: None, gauge, route: Route::Direct }
    }

    /// `rho = (n - 1/2, .., 1/2)`.
    pub fn rho(&self) -> Vec<f64> {
        let n = self.params.rank();
        (1..=n).map(|k| (n - k) as f64 + 0.5).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TodaReport {
    pub gauge: Gauge,
    pub x: Vec<f64>,
    pub eigenvalue: f64,
    /// The (gauge-transformed) wave at the base point.
    pub value: Complex64,
    pub h_value: Complex64,
    /// `|H f - E f| / |E f|` with step `h`.
    pub residual: f64,
    /// The same residual with step `2h` (Richardson check).
    pub residual_doubled: f64,
    pub fd_step: f64,
}

/// 4th-order central second and first derivatives from samples at
/// `-2h, -h, 0, h, 2h`.
fn stencil(f: &[Complex64; 5], h: f64) -> (Complex64, Complex64) {
    let d2 = (-f[0] + f[1] * 16.0 - f[2] * 30.0 + f[3] * 16.0 - f[4]) / (12.0 * h * h);
    let d1 = (f[0] - f[1] * 8.0 + f[3] * 8.0 - f[4]) / (12.0 * h);
    (d2, d1)
}

/// Applies the Toda Hamiltonian by finite differences to sampled wave values
/// and reports the eigen-residual.
pub fn check_toda_equation(spec: &TodaCheckSpec, opts: &WaveOptions) -> Result<TodaReport, NumericError> {
    let params = &spec.params;
    params.validate()?;
    let n = params.rank();
    if n > 2 {
        return Err(NumericError::RankUnsupported { route: "toda check", n, max: 2 });
    }
    if spec.x.len() != n {
        return Err(NumericError::InvalidParams(format!("position has {} entries, rank is {n}", spec.x.len())));
    }
    let h = spec.fd_step.unwrap_or(params.c / 100.0);
    if !(h > 0.0 && h.is_finite()) {
        return Err(NumericError::InvalidParams(format!("finite-difference step {h} must be positive")));
    }
    let rho = spec.rho();
    let gauge_factor = |x: &[f64]| -> f64 {
        match spec.gauge {
            Gauge::AsPrinted => 1.0,
            Gauge::Tilde => libm::exp(-x.iter().zip(&rho).map(|(a, b)| a * b).sum::<f64>()),
        }
    };
    let sample = |x: &[f64]| -> Result<Complex64, NumericError> {
        Ok(wave_value(params, x, spec.route, opts)? * gauge_factor(x))
    };
    let center = sample(&spec.x)?;
    // offsets -4h..4h along each axis (the 2h stencil reuses the odd ones)
    let mut axis_samples: Vec<[Complex64; 9]> = Vec::with_capacity(n);
    for k in 0..n {
        let mut row = [center; 9];
        for (slot, j) in (-4i32..=4).enumerate() {
            if j == 0 {
                continue;
            }
            let mut y = spec.x.clone();
            y[k] += j as f64 * h;
            row[slot] = sample(&y)?;
        }
        axis_samples.push(row);
    }
    let c2 = params.c * params.c;
    let mut potential = 0.0;
    for k in 0..n.saturating_sub(1) {
        potential += 2.0 / c2 * libm::exp(spec.x[k] - spec.x[k + 1]);
    }
    potential += libm::exp(spec.x[n - 1]) / c2;
    let eigenvalue = match spec.gauge {
        Gauge::AsPrinted => params.toda_eigenvalue(),
        Gauge::Tilde => params.sum_sq_over_c2(),
    };
    let apply = |step: usize| -> Complex64 {
        let hh = h * step as f64;
        let mut acc = center * potential;
        for (k, row) in axis_samples.iter().enumerate() {
            let pick = |j: i32| row[(4 + j * step as i32) as usize];
            let f = [pick(-2), pick(-1), pick(0), pick(1), pick(2)];
            let (d2, d1) = stencil(&f, hh);
            acc -= d2;
            if spec.gauge == Gauge::AsPrinted {
                acc += d1 * (2.0 * (n - k - 1) as f64 + 1.0);
            }
        }
        acc
    };
    let scale = (center * eigenvalue).norm();
    let h_value = apply(1);
    let residual = (h_value - center * eigenvalue).norm() / scale;
    let residual_doubled = (apply(2) - center * eigenvalue).norm() / scale;
    Ok(TodaReport {
        gauge: spec.gauge,
        x: spec.x.clone(),
        eigenvalue,
        value: center,
        h_value,
        residual,
        residual_doubled,
        fd_step: h,
    })
}
