//! Wave-function evaluation along three independent routes.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::log_gamma;
use super::integrand::{direct_wave, gustafson_offsets, gustafson_wave, kernel_integrand, SpectralParams};
use super::quadrature::{estimate, integrate_value, integrate_value_seeded, Decay, QuadratureGrid};
use super::NumericError;

/// Evaluation route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Route {
    /// The full integral over all Gelfand-Tsetlin rows.
    Direct,
    /// One recursion step on top of a tabulated rank `n - 1` wave.
    Recursive,
    /// The Gustafson-reduced integral over the odd rows on shifted contours.
    Gustafson,
}

impl Route {
    pub const ALL: [Route; 3] = [Route::Direct, Route::Recursive, Route::Gustafson];

    pub fn name(self) -> &'static str {
        match self {
            Route::Direct => "direct",
            Route::Recursive => "recursive",
            Route::Gustafson => "gustafson",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Route::ALL.into_iter().find(|r| r.name() == s)
    }

    /// Largest rank the route evaluates at desk scale.
    pub fn max_rank(self) -> usize {
        match self {
            Route::Direct => 2,
            Route::Recursive => 2,
            Route::Gustafson => 3,
        }
    }
}

/// Settings shared by all routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveOptions {
    pub grid: QuadratureGrid,
    /// Multiplies the default Gustafson contour heights.
    pub offset_scale: f64,
    /// Spacing of the interpolation table of the recursive route.
    pub table_step: f64,
}

impl WaveOptions {
    pub fn for_params(params: &SpectralParams) -> Self {
        WaveOptions {
            grid: QuadratureGrid::for_wave(params.c, params.max_abs()),
            offset_scale: 1.0,
            table_step: 0.02,
        }
    }
}

/// One evaluated wave-function value.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveSample {
    pub params: SpectralParams,
    pub x: Vec<f64>,
    pub route: Route,
    pub value: Complex64,
    pub error_estimate: f64,
    pub grid: QuadratureGrid,
}

/// Decay model of the wave integrands used for truncation bounds.
pub fn wave_decay(params: &SpectralParams) -> Decay {
    Decay {
        rate: (PI - 0.1) / (params.c * params.rank() as f64),
        core: 5.0 * params.c + 5.0 * params.max_abs(),
    }
}

fn check_rank(params: &SpectralParams, route: Route) -> Result<(), NumericError> {
    let n = params.rank();
    if n > route.max_rank() {
        return Err(NumericError::RankUnsupported { route: route.name(), n, max: route.max_rank() });
    }
    Ok(())
}

/// `Psi(x)` at a single grid, without error estimate.
pub fn wave_value(params: &SpectralParams, x: &[f64], route: Route, opts: &WaveOptions) -> Result<Complex64, NumericError> {
    params.validate()?;
    check_rank(params, route)?;
    let n = params.rank();
    match route {
        Route::Direct => integrate_value(&direct_wave(params, x)?, &opts.grid),
        Route::Recursive if n == 1 => integrate_value(&direct_wave(params, x)?, &opts.grid),
        Route::Recursive => RecursiveWave::new(params, opts, x[0] - x[1], x[0] - x[1])?.value(x),
        Route::Gustafson => {
            let offsets = gustafson_offsets(n, opts.offset_scale);
            integrate_value(&gustafson_wave(params, x, &offsets)?, &opts.grid)
        }
    }
}

/// `Psi(x)` with a step-halving error estimate.
pub fn eval_wave(params: &SpectralParams, x: &[f64], route: Route, opts: &WaveOptions) -> Result<WaveSample, NumericError> {
    let value = wave_value(params, x, route, opts)?;
    let fine = WaveOptions { grid: opts.grid.halved(), ..*opts };
    let refined = wave_value(params, x, route, &fine)?;
    let dim = params.rank() * params.rank();
    let q = estimate(value, refined, dim, &opts.grid, wave_decay(params), 0.0)?;
    Ok(WaveSample {
        params: params.clone(),
        x: x.to_vec(),
        route,
        value: q.value,
        error_estimate: q.error_estimate,
        grid: opts.grid,
    })
}

/// The rank-2 wave as one recursion step over a tabulated rank-1 wave.
///
/// The rank-1 wave `Psi_{g}(y)` is tabulated for every spectral node `g` of the
/// quadrature grid on a uniform grid in `y` and interpolated with cubic
/// Lagrange polynomials.
pub struct RecursiveWave {
    params: SpectralParams,
    grid: QuadratureGrid,
    y0: f64,
    dy: f64,
    /// `table[j][a]` is the rank-1 wave with spectral parameter at node `a`,
    /// evaluated at `y0 + j dy`.
    table: Vec<Vec<Complex64>>,
}

impl RecursiveWave {
    /// Tabulates the inner wave on a range covering `[y_min, y_max]`.
    pub fn new(params: &SpectralParams, opts: &WaveOptions, y_min: f64, y_max: f64) -> Result<Self, NumericError> {
        params.validate()?;
        if params.rank() != 2 {
            return Err(NumericError::RankUnsupported { route: "recursive", n: params.rank(), max: 2 });
        }
        if opts.table_step.partial_cmp(&0.0) != Some(core::cmp::Ordering::Greater) || y_max < y_min {
            return Err(NumericError::InvalidParams(format!("bad table range [{y_min}, {y_max}] / step {}", opts.table_step)));
        }
        let grid = opts.grid;
        grid.validate()?;
        let c = params.c;
        let (ts, ws) = grid.nodes();
        let m = ts.len();
        let dy = opts.table_step;
        let y0 = libm::floor(y_min / dy) * dy - 2.0 * dy;
        let count = libm::ceil((y_max - y0) / dy) as usize + 3;
        let cost = (m * m) as f64 * (count as f64 + 2.0);
        if cost > grid.budget {
            return Err(NumericError::BudgetExceeded { required: cost, budget: grid.budget });
        }
        let inv_ic = Complex64::new(0.0, -1.0 / c);
        let half = Complex64::new(0.5, 0.0);
        let lc = libm::log(c);
        // g[a][b]: weight of inner node b for outer node a
        let mut g = vec![Complex64::new(0.0, 0.0); m * m];
        for a in 0..m {
            let ga = Complex64::new(ts[a], 0.0) * inv_ic;
            for b in 0..m {
                let tb = Complex64::new(ts[b], 0.0) * inv_ic;
                let l = log_gamma(ga + tb + half)? + log_gamma(-ga + tb + half)? + tb * (2.0 * lc) + libm::log(ws[b]);
                g[a * m + b] = l.exp();
            }
        }
        let mut table = Vec::with_capacity(count);
        for j in 0..count {
            let y = y0 + j as f64 * dy;
            let phase: Vec<Complex64> = ts.iter().map(|&t| (Complex64::new(t, 0.0) * inv_ic * (-y)).exp()).collect();
            let row: Vec<Complex64> = (0..m)
                .map(|a| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for b in 0..m {
                        acc += g[a * m + b] * phase[b];
                    }
                    acc
                })
                .collect();
            table.push(row);
        }
        Ok(RecursiveWave { params: params.clone(), grid, y0, dy, table })
    }

    /// Interpolated inner wave at `y` for every spectral node.
    fn inner(&self, y: f64) -> Result<Vec<Complex64>, NumericError> {
        let u = (y - self.y0) / self.dy;
        let j = libm::floor(u) as i64 - 1;
        if j < 0 || j as usize + 3 >= self.table.len() {
            return Err(NumericError::InvalidParams(format!("y = {y} outside the tabulated range")));
        }
        let j = j as usize;
        let s = u - (j as f64 + 1.0);
        // cubic Lagrange weights on nodes -1, 0, 1, 2
        let w = [
            -s * (s - 1.0) * (s - 2.0) / 6.0,
            (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
            -(s + 1.0) * s * (s - 2.0) / 2.0,
            (s + 1.0) * s * (s - 1.0) / 6.0,
        ];
        let m = self.table[0].len();
        Ok((0..m)
            .map(|a| (0..4).map(|k| self.table[j + k][a] * w[k]).sum())
            .collect())
    }

    pub fn value(&self, x: &[f64]) -> Result<Complex64, NumericError> {
        if x.len() != 2 {
            return Err(NumericError::InvalidParams(format!("position has {} entries, rank is 2", x.len())));
        }
        let inner = self.inner(x[0] - x[1])?;
        let kernel = kernel_integrand(&self.params, x[1])?;
        integrate_value_seeded(&kernel, &self.grid, Some(&inner))
    }
}

/// Pairwise comparison of the routes at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteComparison {
    pub samples: Vec<WaveSample>,
    /// `(route a, route b, |a - b| / |a|)`.
    pub differences: Vec<(Route, Route, f64)>,
}

/// Evaluates every route that supports the rank and compares them pairwise.
/// At rank 1 the routes coincide and a single sample is reported.
pub fn compare_routes(params: &SpectralParams, x: &[f64], opts: &WaveOptions) -> Result<RouteComparison, NumericError> {
    if params.rank() == 1 {
        let s = eval_wave(params, x, Route::Direct, opts)?;
        let differences = vec![
            (Route::Direct, Route::Recursive, 0.0),
            (Route::Direct, Route::Gustafson, 0.0),
            (Route::Recursive, Route::Gustafson, 0.0),
        ];
        return Ok(RouteComparison { samples: vec![s], differences });
    }
    let mut samples = Vec::new();
    for r in Route::ALL {
        samples.push(eval_wave(params, x, r, opts)?);
    }
    let mut differences = Vec::new();
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            let (a, b) = (&samples[i], &samples[j]);
            differences.push((a.route, b.route, (a.value - b.value).norm() / a.value.norm()));
        }
    }
    Ok(RouteComparison { samples, differences })
}

/// Coefficients of `delta_{2k-1}/(ic)` in the exponent of `c`, `k = 1..n`:
/// first from the product of the pair factors, then as printed in the
/// integral. They agree for every `n`.
pub fn c_power_forms(n: usize) -> (Vec<i64>, Vec<i64>) {
    let mut product = vec![0i64; n];
    for k in 1..n {
        product[k - 1] += 2 * k as i64;
        product[k] -= 2 * k as i64;
    }
    if n > 0 {
        product[n - 1] += 2 * n as i64;
    }
    (product, vec![2; n])
}

/// The coefficient of `x_n` in the recursion prefactor, as `(n-1) + sum_{k<=n-2} k`
/// and as `n(n-1)/2`.
pub fn kernel_x_exponent_forms(n: usize) -> (i64, i64) {
    let n = n as i64;
    let a = (n - 1) + (1..=n - 2).sum::<i64>();
    (a, n * (n - 1) / 2)
}
