//! Floating-point evaluation of the Mellin-Barnes wave integrals, the
//! degenerate Gustafson identity and finite-difference Toda checks.

pub mod gamma;
pub mod gustafson;
pub mod integrand;
pub mod quadrature;
pub mod toda;
pub mod wave;

use alloc::string::String;
use alloc::vec::Vec;

pub use gamma::{gamma, log_gamma, log_recip_gamma_pair, log_recip_gamma_pair_shifted, GammaError};
pub use gustafson::{check_gustafson, gustafson_rhs, GustafsonReport};
pub use integrand::{
    build_integrand, direct_wave, gustafson_lhs, gustafson_offsets, gustafson_wave, kernel_integrand, log_dn,
    phi_integrand, Factor, FactorKind, FormulaId, IntegrandSpec, SpectralParams,
};
pub use quadrature::{
    decay_profile, estimate, integrate, integrate_fn, integrate_fn_value, integrate_value, pairwise_sum, Decay, Quadrature,
    QuadratureGrid,
};
pub use toda::{check_toda_equation, Gauge, TodaCheckSpec, TodaReport};
pub use wave::{
    c_power_forms, compare_routes, eval_wave, kernel_x_exponent_forms, wave_decay, wave_value, RecursiveWave, Route,
    RouteComparison, WaveOptions, WaveSample,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid quadrature grid: {0}")]
    InvalidGrid(String),
    #[error("Gamma pole on the integration contour in factor {factor}")]
    PoleOnContour { factor: String },
    #[error("non-finite integrand value at grid point {point:?}")]
    NonFinite { point: Vec<f64> },
    #[error("grid budget exceeded: about {required:.3e} operations needed, budget {budget:.3e}")]
    BudgetExceeded { required: f64, budget: f64 },
    #[error("truncation bound {bound:.3e} exceeds tolerance {epsilon:.3e}; enlarge L")]
    TruncationTooLarge { bound: f64, epsilon: f64 },
    #[error("route {route} supports rank at most {max}, got {n}")]
    RankUnsupported { route: &'static str, n: usize, max: usize },
    #[error("Gustafson parameter a_{index} has real part {re} <= 0; the identity needs positive real parts")]
    Positivity { index: usize, re: f64 },
    #[error("unsupported integrand structure: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Gamma(#[from] GammaError),
}
