//! Truncated tensor trapezoid rule on horizontal contours.
//!
//! Integrands built by [`super::integrand`] factor along a chain of variable
//! blocks, so the tensor sum is evaluated as a sequence of block-to-block
//! transfers: the cost is governed by the two largest neighbouring blocks
//! rather than the full dimension. Every partial sum is accumulated in a fixed
//! order, which keeps results bit-reproducible with or without threads.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::integrand::IntegrandSpec;
use super::NumericError;

/// Grid of a truncated trapezoid rule: nodes `-L, -L + step, .., L` on every axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGrid {
    pub half_width: f64,
    pub step: f64,
    /// Largest tolerated truncation bound, relative to the integral.
    pub epsilon: f64,
    /// Largest number of elementary operations one evaluation may take.
    pub budget: f64,
}

impl QuadratureGrid {
    pub const DEFAULT_EPSILON: f64 = 1e-10;
    pub const DEFAULT_BUDGET: f64 = 4e9;

    pub fn new(half_width: f64, step: f64) -> Result<Self, NumericError> {
        let g = QuadratureGrid { half_width, step, epsilon: Self::DEFAULT_EPSILON, budget: Self::DEFAULT_BUDGET };
        g.validate()?;
        Ok(g)
    }

    /// Default grid for a wave function: `L = 25c + 5 max|g|`, `step = c/8`.
    pub fn for_wave(c: f64, max_abs_gamma: f64) -> Self {
        let step = c / 8.0;
        let raw = 25.0 * c + 5.0 * max_abs_gamma;
        let half_width = libm::ceil(raw / step) * step;
        QuadratureGrid { half_width, step, epsilon: Self::DEFAULT_EPSILON, budget: Self::DEFAULT_BUDGET }
    }

    /// The same grid with `L` rounded up to a multiple of `step`.
    pub fn with_step(self, step: f64) -> Result<Self, NumericError> {
        let half_width = libm::ceil(self.half_width / step - 1e-9) * step;
        let g = QuadratureGrid { half_width, step, ..self };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), NumericError> {
        if !(self.half_width.is_finite() && self.half_width > 0.0) {
            return Err(NumericError::InvalidGrid(format!("half-width L = {} must be positive", self.half_width)));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(NumericError::InvalidGrid(format!("step = {} must be positive", self.step)));
        }
        let ratio = self.half_width / self.step;
        if (ratio - libm::round(ratio)).abs() > 1e-9 * ratio.max(1.0) {
            return Err(NumericError::InvalidGrid(format!(
                "L / step = {ratio} must be an integer"
            )));
        }
        Ok(())
    }

    /// Number of nodes per axis.
    pub fn nodes_per_axis(&self) -> usize {
        2 * libm::round(self.half_width / self.step) as usize + 1
    }

    /// Node abscissae and trapezoid weights.
    pub fn nodes(&self) -> (Vec<f64>, Vec<f64>) {
        let m = libm::round(self.half_width / self.step) as i64;
        let xs: Vec<f64> = (-m..=m).map(|i| i as f64 * self.step).collect();
        let mut ws = vec![self.step; xs.len()];
        ws[0] = self.step / 2.0;
        let last = ws.len() - 1;
        ws[last] = self.step / 2.0;
        (xs, ws)
    }

    /// The grid with half the step.
    pub fn halved(&self) -> Self {
        QuadratureGrid { step: self.step / 2.0, ..*self }
    }
}

/// Exponential decay model of an integrand: beyond `|t| > core` every axis
/// decays at least like `exp(-rate |t|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decay {
    pub rate: f64,
    pub core: f64,
}

impl Decay {
    /// Relative truncation bound of a `dim`-dimensional integral cut at `L`.
    pub fn truncation_bound(&self, dim: usize, half_width: f64) -> f64 {
        let beyond = (half_width - self.core).max(0.0);
        let tail = libm::exp(-self.rate * beyond);
        dim as f64 * tail * (1.0 + 1.0 / (self.rate * half_width.max(1e-300)))
    }
}

/// Result of a quadrature with error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    /// `|value(step) - value(step/2)| + truncation bound`.
    pub error_estimate: f64,
    pub halving_difference: f64,
    pub truncation_bound: f64,
    pub evaluations: f64,
}

/// Sums in a balanced binary tree over fixed-size leaves.
pub fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        let mut acc = Complex64::new(0.0, 0.0);
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

#[cfg(feature = "parallel")]
fn map_indices<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_indices<T, F: Fn(usize) -> T>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

fn exp_checked(log: Complex64, at: impl FnOnce() -> Vec<f64>) -> Result<Complex64, NumericError> {
    if log.re == f64::NEG_INFINITY {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let v = log.exp();
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(NumericError::NonFinite { point: at() })
    }
}

/// Block structure of an integrand, resolved against its factor list.
struct ChainPlan {
    /// Factor indices depending on one variable, per variable.
    single: Vec<Vec<usize>>,
    /// Factor indices depending on several variables of one block, per block.
    local: Vec<Vec<usize>>,
    /// For each link `b -> b+1`: `(u, v, factor indices)` with `u` in block `b`.
    links: Vec<Vec<(usize, usize, Vec<usize>)>>,
}

impl ChainPlan {
    fn new(spec: &IntegrandSpec) -> Result<Self, NumericError> {
        let owner = spec.block_of();
        if owner.contains(&usize::MAX) {
            return Err(NumericError::Unsupported("some variable belongs to no block".into()));
        }
        let nb = spec.blocks.len();
        let mut local = vec![Vec::new(); nb];
        let mut single = vec![Vec::new(); spec.dim()];
        let mut links: Vec<Vec<(usize, usize, Vec<usize>)>> = vec![Vec::new(); nb.saturating_sub(1)];
        for (k, f) in spec.factors.iter().enumerate() {
            let mut bs: Vec<usize> = f.coeffs.iter().map(|&(v, _)| owner[v]).collect();
            bs.sort_unstable();
            bs.dedup();
            match bs.as_slice() {
                [] => return Err(NumericError::Unsupported(format!("factor {} has no variables", f.label))),
                [_] if f.coeffs.len() == 1 => single[f.coeffs[0].0].push(k),
                [b] => local[*b].push(k),
                [b0, b1] if *b1 == *b0 + 1 && f.coeffs.len() == 2 => {
                    let (u, v) = if owner[f.coeffs[0].0] == *b0 {
                        (f.coeffs[0].0, f.coeffs[1].0)
                    } else {
                        (f.coeffs[1].0, f.coeffs[0].0)
                    };
                    match links[*b0].iter_mut().find(|(a, b, _)| *a == u && *b == v) {
                        Some(entry) => entry.2.push(k),
                        None => links[*b0].push((u, v, vec![k])),
                    }
                }
                _ => {
                    return Err(NumericError::Unsupported(format!(
                        "factor {} couples blocks that are not neighbours",
                        f.label
                    )))
                }
            }
        }
        Ok(ChainPlan { single, local, links })
    }

    /// Rough operation count of one evaluation with `m` nodes per axis.
    fn cost(&self, spec: &IntegrandSpec, m: f64) -> f64 {
        let sizes: Vec<f64> = spec.blocks.iter().map(|b| libm::pow(m, b.len() as f64)).collect();
        let mut total = 0.0;
        for (b, s) in sizes.iter().enumerate() {
            total += s * (1.0 + self.local[b].len() as f64) + m * spec.blocks[b].iter().map(|&v| self.single[v].len() as f64).sum::<f64>();
        }
        for b in 0..self.links.len() {
            total += sizes[b + 1] * sizes[b];
            total += self.links[b].len() as f64 * m * m;
        }
        total
    }
}

/// Multi-index enumeration in row-major order (last variable fastest).
fn unravel(mut idx: usize, m: usize, len: usize, out: &mut [usize]) {
    for slot in out[..len].iter_mut().rev() {
        *slot = idx % m;
        idx /= m;
    }
}

/// Evaluates the truncated trapezoid sum of `spec` on `grid`.
pub fn integrate_value(spec: &IntegrandSpec, grid: &QuadratureGrid) -> Result<Complex64, NumericError> {
    integrate_value_seeded(spec, grid, None)
}

/// As [`integrate_value`], with the first block's weights multiplied by
/// `seed` (one entry per node tuple of that block, row-major).
pub(crate) fn integrate_value_seeded(
    spec: &IntegrandSpec,
    grid: &QuadratureGrid,
    seed: Option<&[Complex64]>,
) -> Result<Complex64, NumericError> {
    grid.validate()?;
    let plan = ChainPlan::new(spec)?;
    let (xs, ws) = grid.nodes();
    let m = xs.len();
    let cost = plan.cost(spec, m as f64);
    if cost > grid.budget {
        return Err(NumericError::BudgetExceeded { required: cost, budget: grid.budget });
    }
    let dim = spec.dim();
    let log_w: Vec<f64> = ws.iter().map(|w| libm::log(*w)).collect();
    let coord = |v: usize, a: usize| Complex64::new(xs[a], spec.offsets[v] * spec.c);

    // per-variable log weights: trapezoid weight, linear exponent, one-variable factors
    let mut axis_logs: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for v in 0..dim {
        let row: Result<Vec<Complex64>, NumericError> = map_indices(m, |a| {
            let mut point = vec![Complex64::new(0.0, 0.0); dim];
            point[v] = coord(v, a);
            Ok(spec.log_eval_subset(&plan.single[v], &[v], &point)? + log_w[a])
        })
        .into_iter()
        .collect();
        axis_logs.push(row?);
    }

    let block_weights = |b: usize| -> Result<Vec<Complex64>, NumericError> {
        let vars = &spec.blocks[b];
        let len = vars.len();
        let size = m.pow(len as u32);
        map_indices(size, |flat| {
            let mut idx = [0usize; 8];
            unravel(flat, m, len, &mut idx);
            let mut l = Complex64::new(0.0, 0.0);
            for (p, &v) in vars.iter().enumerate() {
                l += axis_logs[v][idx[p]];
            }
            if !plan.local[b].is_empty() {
                let mut point = vec![Complex64::new(0.0, 0.0); dim];
                for (p, &v) in vars.iter().enumerate() {
                    point[v] = coord(v, idx[p]);
                }
                l += spec.log_eval_subset(&plan.local[b], &[], &point)?;
            }
            exp_checked(l, || vars.iter().zip(&idx).map(|(_, &a)| xs[a]).collect())
        })
        .into_iter()
        .collect()
    };

    if spec.blocks.iter().any(|b| b.len() > 8) {
        return Err(NumericError::Unsupported("blocks of more than 8 variables".into()));
    }

    let mut acc = block_weights(0)?;
    if let Some(seed) = seed {
        if seed.len() != acc.len() {
            return Err(NumericError::InvalidParams(format!(
                "seed has {} entries, first block has {}",
                seed.len(),
                acc.len()
            )));
        }
        for (a, s) in acc.iter_mut().zip(seed) {
            *a *= s;
        }
    }
    for b in 0..plan.links.len() {
        let from = &spec.blocks[b];
        let to = &spec.blocks[b + 1];
        // pair matrices stored target-major: P[a' * m + a]
        let mut mats: Vec<(usize, usize, Vec<Complex64>)> = Vec::new();
        for (u, v, fs) in &plan.links[b] {
            let mat: Result<Vec<Complex64>, NumericError> = map_indices(m * m, |flat| {
                let (a2, a) = (flat / m, flat % m);
                let mut point = vec![Complex64::new(0.0, 0.0); dim];
                point[*u] = coord(*u, a);
                point[*v] = coord(*v, a2);
                let l = spec.log_eval_subset(fs, &[], &point)?;
                exp_checked(l, || vec![xs[a], xs[a2]])
            })
            .into_iter()
            .collect();
            mats.push((*u, *v, mat?));
        }
        let weights = block_weights(b + 1)?;
        let from_len = from.len();
        let to_len = to.len();
        if from_len == 1 && !mats.is_empty() {
            // fold the incoming vector into the first link matrix
            let first = &mut mats[0].2;
            for row in first.chunks_exact_mut(m) {
                for (slot, v) in row.iter_mut().zip(acc.iter()) {
                    *slot *= v;
                }
            }
            let cols: Vec<usize> = mats
                .iter()
                .map(|(_, v, _)| to.iter().position(|x| x == v).expect("link target in block"))
                .collect();
            let mats = &mats;
            let next: Vec<Complex64> = map_indices(weights.len(), |flat| {
                if weights[flat] == Complex64::new(0.0, 0.0) {
                    return Complex64::new(0.0, 0.0);
                }
                let mut idx = [0usize; 8];
                unravel(flat, m, to_len, &mut idx);
                let rows: Vec<&[Complex64]> =
                    mats.iter().zip(&cols).map(|((_, _, mat), &p)| &mat[idx[p] * m..(idx[p] + 1) * m]).collect();
                weights[flat] * product_sum(&rows)
            });
            acc = next;
            continue;
        }
        let prev = &acc;
        let next: Vec<Complex64> = map_indices(weights.len(), |flat| {
            if weights[flat] == Complex64::new(0.0, 0.0) {
                return Complex64::new(0.0, 0.0);
            }
            let mut idx = [0usize; 8];
            unravel(flat, m, to_len, &mut idx);
            // q[p][a] = prod over v of P_{u_p v}[a][idx_v]
            let mut q = vec![Complex64::new(1.0, 0.0); from_len * m];
            for (u, v, mat) in &mats {
                let p = from.iter().position(|x| x == u).expect("link source in block");
                let col = idx[to.iter().position(|x| x == v).expect("link target in block")];
                let row = &mut q[p * m..(p + 1) * m];
                for (slot, entry) in row.iter_mut().zip(&mat[col * m..(col + 1) * m]) {
                    *slot *= entry;
                }
            }
            weights[flat] * contract(prev, &q, m, from_len)
        });
        acc = next;
    }
    Ok(pairwise_sum(&acc) * spec.log_const.exp())
}

/// `sum_a prod_i rows[i][a]`.
fn product_sum(rows: &[&[Complex64]]) -> Complex64 {
    match rows {
        [r] => r.iter().sum(),
        [r0, r1] => {
            let (mut re, mut im) = (0.0, 0.0);
            for (a, b) in r0.iter().zip(r1.iter()) {
                re += a.re * b.re - a.im * b.im;
                im += a.re * b.im + a.im * b.re;
            }
            Complex64::new(re, im)
        }
        _ => {
            let m = rows[0].len();
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..m {
                let mut p = rows[0][a];
                for r in &rows[1..] {
                    p *= r[a];
                }
                acc += p;
            }
            acc
        }
    }
}

/// `sum_tau t[tau] prod_p q[p][tau_p]` for a row-major tensor with `len` axes.
fn contract(t: &[Complex64], q: &[Complex64], m: usize, len: usize) -> Complex64 {
    if len == 1 {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..m {
            acc += t[a] * q[a];
        }
        return acc;
    }
    // contract the last axis first
    let last = &q[(len - 1) * m..len * m];
    let reduced: Vec<Complex64> = t
        .chunks_exact(m)
        .map(|chunk| {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..m {
                acc += chunk[a] * last[a];
            }
            acc
        })
        .collect();
    contract(&reduced, q, m, len - 1)
}

/// Integrates `spec` with a step-halving error estimate and the truncation
/// bound of its decay model.
pub fn integrate(spec: &IntegrandSpec, grid: &QuadratureGrid, decay: Decay) -> Result<Quadrature, NumericError> {
    let plan = ChainPlan::new(spec)?;
    let fine = grid.halved();
    let m_fine = fine.nodes_per_axis() as f64;
    let evaluations = plan.cost(spec, m_fine) + plan.cost(spec, grid.nodes_per_axis() as f64);
    if evaluations > grid.budget {
        return Err(NumericError::BudgetExceeded { required: evaluations, budget: grid.budget });
    }
    let value = integrate_value(spec, grid)?;
    let refined = integrate_value(spec, &fine)?;
    estimate(value, refined, spec.dim(), grid, decay, evaluations)
}

/// Combines a value at `grid` and at the halved grid into a [`Quadrature`].
pub fn estimate(
    value: Complex64,
    refined: Complex64,
    dim: usize,
    grid: &QuadratureGrid,
    decay: Decay,
    evaluations: f64,
) -> Result<Quadrature, NumericError> {
    let rel = decay.truncation_bound(dim, grid.half_width);
    if rel > grid.epsilon {
        return Err(NumericError::TruncationTooLarge { bound: rel, epsilon: grid.epsilon });
    }
    let halving_difference = (value - refined).norm();
    let truncation_bound = rel * value.norm().max(refined.norm());
    Ok(Quadrature {
        value,
        error_estimate: halving_difference + truncation_bound,
        halving_difference,
        truncation_bound,
        evaluations,
    })
}

/// Tensor trapezoid sum of a plain function over `[-L, L]^dim` on the real axes.
pub fn integrate_fn_value<F>(dim: usize, f: &F, grid: &QuadratureGrid) -> Result<Complex64, NumericError>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    grid.validate()?;
    let (xs, ws) = grid.nodes();
    let m = xs.len();
    let total = libm::pow(m as f64, dim as f64);
    if total > grid.budget {
        return Err(NumericError::BudgetExceeded { required: total, budget: grid.budget });
    }
    let outer = m.pow(dim.saturating_sub(1) as u32);
    let partial: Result<Vec<Complex64>, NumericError> = map_indices(outer, |o| {
        let mut idx = vec![0usize; dim];
        if dim > 1 {
            unravel_vec(o, m, &mut idx[..dim - 1]);
        }
        let mut point = vec![0.0; dim];
        let mut row = Vec::with_capacity(m);
        for a in 0..m {
            if dim > 0 {
                idx[dim - 1] = a;
            }
            let mut w = 1.0;
            for (p, &i) in idx.iter().enumerate() {
                point[p] = xs[i];
                w *= ws[i];
            }
            let v = f(&point);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(NumericError::NonFinite { point: point.clone() });
            }
            row.push(v * w);
        }
        Ok(pairwise_sum(&row))
    })
    .into_iter()
    .collect();
    Ok(pairwise_sum(&partial?))
}

fn unravel_vec(mut idx: usize, m: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = idx % m;
        idx /= m;
    }
}

/// [`integrate_fn_value`] with step-halving error estimate.
pub fn integrate_fn<F>(dim: usize, f: &F, grid: &QuadratureGrid, decay: Decay) -> Result<Quadrature, NumericError>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    let value = integrate_fn_value(dim, f, grid)?;
    let refined = integrate_fn_value(dim, f, &grid.halved())?;
    let evaluations = libm::pow(grid.nodes_per_axis() as f64, dim as f64) + libm::pow(grid.halved().nodes_per_axis() as f64, dim as f64);
    estimate(value, refined, dim, grid, decay, evaluations)
}

/// `ln |integrand|` along axis `v` with every other variable at the origin of
/// its contour, at the abscissae `ts`.
pub fn decay_profile(spec: &IntegrandSpec, v: usize, ts: &[f64]) -> Result<Vec<f64>, NumericError> {
    let mut out = Vec::with_capacity(ts.len());
    let mut s = vec![0.0; spec.dim()];
    for &t in ts {
        s[v] = t;
        let p = spec.contour_point(&s);
        out.push(spec.log_eval(&p)?.re);
    }
    Ok(out)
}
