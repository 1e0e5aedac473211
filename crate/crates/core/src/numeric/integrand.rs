//! Compiled Mellin-Barnes integrands.
//!
//! An [`IntegrandSpec`] is a product of Gamma-type factors whose arguments are
//! affine in the integration variables, times an exponential of a linear form.
//! Each variable runs over a horizontal line `Im t = eta * c`. The variables
//! are grouped into blocks (one block per Gelfand-Tsetlin row) arranged in a
//! chain, so that every factor touches at most two neighbouring blocks.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{log_gamma, log_recip_gamma_pair, log_recip_gamma_pair_shifted};
use super::NumericError;

/// Which formula an integrand was compiled from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaId {
    /// The full `n^2`-dimensional wave-function integral.
    DirectG5,
    /// The kernel of the one-step recursion, integrated against a rank `n - 1` wave.
    KernelG9,
    /// The `n(n-1)/2`-dimensional `GL(n)` integral after the contour shift.
    Phi,
    /// The wave function assembled from `Phi` over the top odd row.
    PsiFromPhi,
    /// Left side of the degenerate Gustafson identity.
    GustafsonLhs,
    /// Rank-one wave integrand.
    ExampleN1,
    /// Rank-two wave integrand.
    ExampleN2,
}

impl FormulaId {
    pub fn name(self) -> &'static str {
        match self {
            FormulaId::DirectG5 => "direct",
            FormulaId::KernelG9 => "kernel",
            FormulaId::Phi => "phi",
            FormulaId::PsiFromPhi => "psi_from_phi",
            FormulaId::GustafsonLhs => "gustafson_lhs",
            FormulaId::ExampleN1 => "example_n1",
            FormulaId::ExampleN2 => "example_n2",
        }
    }
}

/// Spectral data of a rank-`n` wave function: the top row `g_{2n,1..n}` and
/// the coupling `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralParams {
    pub gamma: Vec<f64>,
    pub c: f64,
}

impl SpectralParams {
    pub fn new(gamma: Vec<f64>, c: f64) -> Result<Self, NumericError> {
        let p = SpectralParams { gamma, c };
        p.validate()?;
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.gamma.len()
    }

    pub fn validate(&self) -> Result<(), NumericError> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(NumericError::InvalidParams(format!("coupling c = {} must be positive", self.c)));
        }
        if self.gamma.is_empty() {
            return Err(NumericError::InvalidParams("rank must be at least 1".into()));
        }
        if let Some(g) = self.gamma.iter().find(|g| !g.is_finite()) {
            return Err(NumericError::InvalidParams(format!("spectral parameter {g} is not finite")));
        }
        Ok(())
    }

    /// Pairs of entries with coinciding absolute values. The integrand has no
    /// singularity there, so these are only reported.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in 0..self.gamma.len() {
            for j in i + 1..self.gamma.len() {
                if (self.gamma[i].abs() - self.gamma[j].abs()).abs() < 1e-12 {
                    out.push(format!("spectral entries {} and {} have equal modulus", i + 1, j + 1));
                }
            }
            if self.gamma[i] == 0.0 {
                out.push(format!("spectral entry {} is zero", i + 1));
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.gamma.iter().fold(0.0f64, |m, g| m.max(g.abs()))
    }

    /// The eigenvalue `sum g^2 / c^2 + n(2n-1)(2n+1)/12` of the Toda Hamiltonian.
    pub fn toda_eigenvalue(&self) -> f64 {
        let n = self.rank() as f64;
        self.sum_sq_over_c2() + n * (2.0 * n - 1.0) * (2.0 * n + 1.0) / 12.0
    }

    /// The eigenvalue `sum g^2 / c^2` of the gauge-transformed problem.
    pub fn sum_sq_over_c2(&self) -> f64 {
        self.gamma.iter().map(|g| g * g).sum::<f64>() / (self.c * self.c)
    }
}

/// Kind of a Gamma-type factor `F(z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    /// `Gamma(z)`.
    Gamma,
    /// `1 / Gamma(z)`.
    InvGamma,
    /// `1 / (Gamma(z) Gamma(-z))`, the analytic continuation of `|Gamma(z)|^{-2}` off
    /// the imaginary axis.
    RecipPair,
    /// `1 / (Gamma(1 + z) Gamma(1 - z))`.
    RecipPairShifted,
}

/// A factor `F(z)` with `z = (sum_v a_v t_v) / (ic) + z0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub kind: FactorKind,
    pub coeffs: Vec<(usize, f64)>,
    pub z0: Complex64,
    /// Human-readable description used in error messages.
    pub label: String,
}

impl Factor {
    fn argument(&self, point: &[Complex64], inv_ic: Complex64) -> Complex64 {
        let mut lin = Complex64::new(0.0, 0.0);
        for &(v, a) in &self.coeffs {
            lin += point[v] * a;
        }
        lin * inv_ic + self.z0
    }

    fn log_value(&self, z: Complex64) -> Result<Complex64, NumericError> {
        Ok(match self.kind {
            FactorKind::Gamma => log_gamma(z).map_err(|_| NumericError::PoleOnContour {
                factor: self.label.clone(),
            })?,
            FactorKind::InvGamma => match log_gamma(z) {
                Ok(v) => -v,
                Err(_) => Complex64::new(f64::NEG_INFINITY, 0.0),
            },
            FactorKind::RecipPair => log_recip_gamma_pair(z),
            FactorKind::RecipPairShifted => log_recip_gamma_pair_shifted(z),
        })
    }
}

/// A compiled integrand.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrandSpec {
    pub formula: FormulaId,
    pub c: f64,
    /// Contour offset of each variable, in units of `c`.
    pub offsets: Vec<f64>,
    /// Variable groups in chain order.
    pub blocks: Vec<Vec<usize>>,
    pub factors: Vec<Factor>,
    /// `exp(sum_v linear[v] * t_v)`.
    pub linear: Vec<Complex64>,
    /// Logarithm of the constant prefactor.
    pub log_const: Complex64,
}

impl IntegrandSpec {
    pub fn new(formula: FormulaId, c: f64, blocks: Vec<Vec<usize>>, offsets: Vec<f64>) -> Self {
        let dim = offsets.len();
        IntegrandSpec {
            formula,
            c,
            offsets,
            blocks,
            factors: Vec::new(),
            linear: vec![Complex64::new(0.0, 0.0); dim],
            log_const: Complex64::new(0.0, 0.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.offsets.len()
    }

    pub fn inv_ic(&self) -> Complex64 {
        Complex64::new(0.0, -1.0 / self.c)
    }

    pub fn push(&mut self, kind: FactorKind, coeffs: Vec<(usize, f64)>, z0: Complex64, label: String) {
        self.factors.push(Factor { kind, coeffs, z0, label });
    }

    /// Adds `c^{a t_v / (ic)}`.
    pub fn add_c_power(&mut self, v: usize, a: f64) {
        let lc = libm::log(self.c);
        let d = self.inv_ic() * (a * lc);
        self.linear[v] += d;
    }

    /// Adds `exp(a t_v / (ic))`.
    pub fn add_exp(&mut self, v: usize, a: f64) {
        let d = self.inv_ic() * a;
        self.linear[v] += d;
    }

    /// The point of the contour with real coordinates `s`.
    pub fn contour_point(&self, s: &[f64]) -> Vec<Complex64> {
        s.iter().zip(&self.offsets).map(|(&x, &eta)| Complex64::new(x, eta * self.c)).collect()
    }

    /// Logarithm of the integrand at a point of the contour (complex
    /// coordinates). A real part of `-inf` denotes an exact zero.
    pub fn log_eval(&self, point: &[Complex64]) -> Result<Complex64, NumericError> {
        let inv_ic = self.inv_ic();
        let mut acc = self.log_const;
        for (v, l) in self.linear.iter().enumerate() {
            acc += l * point[v];
        }
        for f in &self.factors {
            acc += f.log_value(f.argument(point, inv_ic))?;
        }
        Ok(acc)
    }

    /// Log of the product of the factors and linear terms that involve only the
    /// variables in `vars`, evaluated at `point` (indexed by variable).
    pub(crate) fn log_eval_subset(
        &self,
        factors: &[usize],
        linear_vars: &[usize],
        point: &[Complex64],
    ) -> Result<Complex64, NumericError> {
        let inv_ic = self.inv_ic();
        let mut acc = Complex64::new(0.0, 0.0);
        for &v in linear_vars {
            acc += self.linear[v] * point[v];
        }
        for &k in factors {
            let f = &self.factors[k];
            acc += f.log_value(f.argument(point, inv_ic))?;
        }
        Ok(acc)
    }

    /// Checks that no Gamma factor has a pole on the contour. Along the contour
    /// the real part of each argument is constant, so a collision happens
    /// exactly when that real part is a nonpositive integer.
    pub fn check_contour(&self) -> Result<(), NumericError> {
        for f in &self.factors {
            if f.kind != FactorKind::Gamma {
                continue;
            }
            let re: f64 = f.coeffs.iter().map(|&(v, a)| a * self.offsets[v]).sum::<f64>() + f.z0.re;
            let moving = f.coeffs.iter().any(|&(_, a)| a != 0.0);
            let near_pole = re <= 1e-12 && (re - libm::round(re)).abs() < 1e-12;
            if near_pole && (moving || f.z0.im == 0.0) {
                return Err(NumericError::PoleOnContour { factor: f.label.clone() });
            }
        }
        Ok(())
    }

    /// Block index of every variable.
    pub(crate) fn block_of(&self) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.dim()];
        for (b, vars) in self.blocks.iter().enumerate() {
            for &v in vars {
                out[v] = b;
            }
        }
        out
    }

    /// The decay rate `(pi - eps)/(c n)` along each axis used for truncation
    /// bounds, with `n` the number of blocks that carry a Gelfand-Tsetlin row.
    pub fn decay_rate(&self, rank: usize) -> f64 {
        (PI - 0.1) / (self.c * rank.max(1) as f64)
    }
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Contour-row layout of the wave integrals: row `r` (1-based) of a rank-`n`
/// array holds `ceil(r/2)` variables.
struct Layout {
    rows: Vec<Vec<usize>>,
    offsets: Vec<f64>,
    block_rows: Vec<usize>,
}

impl Layout {
    fn new(rows: &[(usize, f64)]) -> Self {
        let mut next = 0;
        let mut out = Vec::new();
        let mut offsets = Vec::new();
        let mut block_rows = Vec::new();
        for &(r, eta) in rows {
            let len = r.div_ceil(2);
            out.push((next..next + len).collect::<Vec<_>>());
            offsets.extend(core::iter::repeat_n(eta, len));
            block_rows.push(r);
            next += len;
        }
        Layout { rows: out, offsets, block_rows }
    }

    fn row(&self, r: usize) -> &[usize] {
        let b = self.block_rows.iter().position(|&x| x == r).expect("row present in layout");
        &self.rows[b]
    }
}

fn half() -> Complex64 {
    c64(0.5, 0.0)
}

/// Adds the measure of row `r` over `vars`.
fn push_measure(spec: &mut IntegrandSpec, r: usize, vars: &[usize]) {
    for (a, &u) in vars.iter().enumerate() {
        for &v in &vars[a + 1..] {
            spec.push(
                FactorKind::RecipPair,
                vec![(u, 1.0), (v, -1.0)],
                c64(0.0, 0.0),
                format!("|Gamma((g[{r},{}] - g[{r},{}])/ic)|^-2", u, v),
            );
            let kind = if r.is_multiple_of(2) { FactorKind::RecipPair } else { FactorKind::RecipPairShifted };
            spec.push(kind, vec![(u, 1.0), (v, 1.0)], c64(0.0, 0.0), format!("row {r} sum measure"));
        }
        if r.is_multiple_of(2) {
            spec.push(FactorKind::RecipPair, vec![(u, 2.0)], c64(0.0, 0.0), format!("|Gamma(2 g[{r}]/ic)|^-2"));
        }
    }
}

/// `Gamma((+-a + b)/ic + 1/2)` for a pair of contour variables with `sign_b`
/// multiplying the odd-row variable.
fn push_link(spec: &mut IntegrandSpec, even: usize, odd: usize, sign_odd: f64, r: usize) {
    for s in [1.0, -1.0] {
        spec.push(
            FactorKind::Gamma,
            vec![(even, s), (odd, sign_odd)],
            half(),
            format!("Gamma(({}g[{r}] {} g[{}])/ic + 1/2)", if s > 0.0 { "+" } else { "-" }, if sign_odd > 0.0 { "+" } else { "-" }, r + 1),
        );
    }
}

/// The direct wave integrand over all rows `1..=2n-1`.
pub fn direct_wave(params: &SpectralParams, x: &[f64]) -> Result<IntegrandSpec, NumericError> {
    params.validate()?;
    let n = params.rank();
    check_position(n, x)?;
    let rows: Vec<(usize, f64)> = (1..2 * n).map(|r| (r, 0.0)).collect();
    let layout = Layout::new(&rows);
    let formula = match n {
        1 => FormulaId::ExampleN1,
        2 => FormulaId::ExampleN2,
        _ => FormulaId::DirectG5,
    };
    let mut spec = IntegrandSpec::new(formula, params.c, layout.rows.clone(), layout.offsets.clone());
    for r in 1..2 * n {
        push_measure(&mut spec, r, layout.row(r));
    }
    for k in 1..n {
        let even = layout.row(2 * k).to_vec();
        for &e in &even {
            for &o in layout.row(2 * k - 1) {
                push_link(&mut spec, e, o, 1.0, 2 * k);
            }
            for &o in layout.row(2 * k + 1) {
                push_link(&mut spec, e, o, -1.0, 2 * k);
            }
        }
    }
    push_top_links(&mut spec, params, layout.row(2 * n - 1), half());
    push_position_weights(&mut spec, &layout, n, x, 2.0);
    // e^{(k-1) x_k}
    spec.log_const += c64(x.iter().enumerate().map(|(k, xk)| k as f64 * xk).sum(), 0.0);
    spec.check_contour()?;
    Ok(spec)
}

/// `Gamma((+-g_{2n,i} + t)/ic + shift)` for every top-row parameter and every
/// variable of the last odd row.
fn push_top_links(spec: &mut IntegrandSpec, params: &SpectralParams, top: &[usize], shift: Complex64) {
    let inv_ic = spec.inv_ic();
    for &v in top {
        for (i, &g) in params.gamma.iter().enumerate() {
            for s in [1.0, -1.0] {
                spec.push(
                    FactorKind::Gamma,
                    vec![(v, 1.0)],
                    inv_ic * (s * g) + shift,
                    format!("Gamma(({}g_top[{}] + g[{v}])/ic + {})", if s > 0.0 { "+" } else { "-" }, i + 1, shift.re),
                );
            }
        }
    }
}

/// The odd-row weights `c^{p delta_{2k-1}/ic} exp(delta_{2k-1}(x_{k+1} - x_k)/ic)`
/// with `x_{n+1} = 0`.
fn push_position_weights(spec: &mut IntegrandSpec, layout: &Layout, n: usize, x: &[f64], c_power: f64) {
    for k in 1..=n {
        let dx = if k < n { x[k] - x[k - 1] } else { -x[k - 1] };
        for &v in layout.row(2 * k - 1) {
            spec.add_c_power(v, c_power);
            spec.add_exp(v, dx);
        }
    }
}

fn check_position(n: usize, x: &[f64]) -> Result<(), NumericError> {
    if x.len() != n {
        return Err(NumericError::InvalidParams(format!("position has {} entries, rank is {n}", x.len())));
    }
    if let Some(v) = x.iter().find(|v| !v.is_finite()) {
        return Err(NumericError::InvalidParams(format!("position entry {v} is not finite")));
    }
    Ok(())
}

/// `ln d_n = sum_{k<n} ln(c^k (2 pi)^k 2^k k!)`.
pub fn log_dn(n: usize, c: f64) -> f64 {
    let mut acc = 0.0;
    let mut fact = 0.0;
    for k in 1..n {
        let kf = k as f64;
        fact += libm::log(kf);
        acc += kf * libm::log(c * 2.0 * PI * 2.0) + fact;
    }
    acc
}

/// Default contour heights `eta_{2k-1} = (n-k+1)/(n+1)` (units of `c`),
/// multiplied by `scale`.
pub fn gustafson_offsets(n: usize, scale: f64) -> Vec<f64> {
    (1..=n).map(|k| (n - k + 1) as f64 / (n + 1) as f64 * scale).collect()
}

/// The Gustafson-reduced wave integrand over the odd rows `1, 3, .., 2n-1`,
/// with the rows lifted to the contours given by `offsets` (one per odd row,
/// units of `c`). Includes `d_n`, `e^{(rho, x)}` and the constant
/// `c^{-n(n+1)(2n+1)/6}` produced by the contour shift.
pub fn gustafson_wave(params: &SpectralParams, x: &[f64], offsets: &[f64]) -> Result<IntegrandSpec, NumericError> {
    params.validate()?;
    let n = params.rank();
    check_position(n, x)?;
    if offsets.len() != n {
        return Err(NumericError::InvalidParams(format!("need {n} contour offsets, got {}", offsets.len())));
    }
    let rows: Vec<(usize, f64)> = (1..=n).map(|k| (2 * k - 1, offsets[k - 1])).collect();
    let layout = Layout::new(&rows);
    let mut spec = IntegrandSpec::new(FormulaId::PsiFromPhi, params.c, layout.rows.clone(), layout.offsets.clone());
    let zero = c64(0.0, 0.0);
    for k in 1..=n {
        let row = layout.row(2 * k - 1).to_vec();
        for (a, &u) in row.iter().enumerate() {
            for &v in &row[a + 1..] {
                spec.push(FactorKind::RecipPair, vec![(u, 1.0), (v, -1.0)], zero, format!("|Gamma((g[{}] - g[{}])/ic)|^-2", u, v));
            }
        }
        if k < n {
            for &i in &row {
                for &j in layout.row(2 * k + 1) {
                    spec.push(FactorKind::Gamma, vec![(i, 1.0), (j, -1.0)], zero, format!("Gamma((g[{i}] - g[{j}])/ic)"));
                    spec.add_c_power(i, 1.0);
                    spec.add_c_power(j, -1.0);
                }
            }
        }
    }
    let top = layout.row(2 * n - 1).to_vec();
    push_top_links(&mut spec, params, &top, zero);
    for (a, &u) in top.iter().enumerate() {
        for &v in &top[a + 1..] {
            spec.push(FactorKind::InvGamma, vec![(u, 1.0), (v, 1.0)], zero, format!("1/Gamma((g[{u}] + g[{v}])/ic)"));
        }
        spec.add_c_power(u, (n + 1) as f64);
    }
    push_position_weights(&mut spec, &layout, n, x, 0.0);
    let nf = n as f64;
    let rho_x: f64 = x.iter().enumerate().map(|(k, xk)| (nf - k as f64 - 0.5) * xk).sum();
    let c_shift = -(nf * (nf + 1.0) * (2.0 * nf + 1.0) / 6.0) * libm::log(params.c);
    spec.log_const += c64(log_dn(n, params.c) + rho_x + c_shift, 0.0);
    spec.check_contour()?;
    Ok(spec)
}

/// The `GL(n)` integral over rows `1, 3, .., 2n-3` at fixed top odd row
/// `top` (the values `g_{2n-1,1..n}`, possibly complex).
pub fn phi_integrand(top: &[Complex64], c: f64, x: &[f64], offsets: &[f64]) -> Result<IntegrandSpec, NumericError> {
    let n = top.len();
    check_position(n, x)?;
    if n < 2 {
        return Err(NumericError::InvalidParams("phi needs at least two top variables".into()));
    }
    if offsets.len() != n - 1 {
        return Err(NumericError::InvalidParams(format!("need {} contour offsets, got {}", n - 1, offsets.len())));
    }
    let rows: Vec<(usize, f64)> = (1..n).map(|k| (2 * k - 1, offsets[k - 1])).collect();
    let layout = Layout::new(&rows);
    let mut spec = IntegrandSpec::new(FormulaId::Phi, c, layout.rows.clone(), layout.offsets.clone());
    let zero = c64(0.0, 0.0);
    let inv_ic = spec.inv_ic();
    let lc = libm::log(c);
    for k in 1..n {
        let row = layout.row(2 * k - 1).to_vec();
        for (a, &u) in row.iter().enumerate() {
            for &v in &row[a + 1..] {
                spec.push(FactorKind::RecipPair, vec![(u, 1.0), (v, -1.0)], zero, format!("|Gamma((g[{u}] - g[{v}])/ic)|^-2"));
            }
        }
        for &i in &row {
            if k + 1 < n {
                for &j in layout.row(2 * k + 1) {
                    spec.push(FactorKind::Gamma, vec![(i, 1.0), (j, -1.0)], zero, format!("Gamma((g[{i}] - g[{j}])/ic)"));
                    spec.add_c_power(i, 1.0);
                    spec.add_c_power(j, -1.0);
                }
            } else {
                for (j, &t) in top.iter().enumerate() {
                    spec.push(FactorKind::Gamma, vec![(i, 1.0)], -t * inv_ic, format!("Gamma((g[{i}] - g_top[{}])/ic)", j + 1));
                    spec.add_c_power(i, 1.0);
                    spec.log_const -= t * inv_ic * lc;
                }
            }
        }
    }
    for k in 1..n {
        let dx = x[k] - x[k - 1];
        for &v in layout.row(2 * k - 1) {
            spec.add_exp(v, dx);
        }
    }
    let delta_top: Complex64 = top.iter().sum();
    let nf = n as f64;
    let rho_x: f64 = x.iter().enumerate().map(|(k, xk)| (nf - k as f64 - 0.5) * xk).sum();
    spec.log_const += -delta_top * inv_ic * x[n - 1] + rho_x;
    spec.check_contour()?;
    Ok(spec)
}

/// The recursion kernel at rank `n` as an integrand over rows `2n-2` and
/// `2n-1`, without the inner wave function.
pub fn kernel_integrand(params: &SpectralParams, xn: f64) -> Result<IntegrandSpec, NumericError> {
    params.validate()?;
    let n = params.rank();
    if n < 2 {
        return Err(NumericError::InvalidParams("the recursion kernel needs rank at least 2".into()));
    }
    let layout = Layout::new(&[(2 * n - 2, 0.0), (2 * n - 1, 0.0)]);
    let mut spec = IntegrandSpec::new(FormulaId::KernelG9, params.c, layout.rows.clone(), layout.offsets.clone());
    push_measure(&mut spec, 2 * n - 2, layout.row(2 * n - 2));
    push_measure(&mut spec, 2 * n - 1, layout.row(2 * n - 1));
    let even = layout.row(2 * n - 2).to_vec();
    for &e in &even {
        for &o in layout.row(2 * n - 1) {
            push_link(&mut spec, e, o, -1.0, 2 * n - 2);
        }
    }
    push_top_links(&mut spec, params, layout.row(2 * n - 1), half());
    for &v in layout.row(2 * n - 1) {
        spec.add_c_power(v, 2.0);
        spec.add_exp(v, -xn);
    }
    let nf = n as f64;
    spec.log_const += c64(nf * (nf - 1.0) / 2.0 * xn, 0.0);
    spec.check_contour()?;
    Ok(spec)
}

/// Left side of the degenerate Gustafson identity over row `2k`, with the
/// neighbouring odd rows fixed to `lower` (`k` values) and `upper` (`k + 1`
/// values).
pub fn gustafson_lhs(lower: &[Complex64], upper: &[Complex64], c: f64) -> Result<IntegrandSpec, NumericError> {
    let k = lower.len();
    if k == 0 || upper.len() != k + 1 {
        return Err(NumericError::InvalidParams(format!(
            "need k >= 1 lower and k + 1 upper parameters, got {} and {}",
            lower.len(),
            upper.len()
        )));
    }
    let vars: Vec<usize> = (0..k).collect();
    let mut spec = IntegrandSpec::new(FormulaId::GustafsonLhs, c, vec![vars.clone()], vec![0.0; k]);
    push_measure(&mut spec, 2 * k, &vars);
    let inv_ic = spec.inv_ic();
    for &v in &vars {
        for s in [1.0, -1.0] {
            for (j, &g) in lower.iter().enumerate() {
                spec.push(FactorKind::Gamma, vec![(v, s)], g * inv_ic + half(), format!("Gamma((+-g[{v}] + lower[{}])/ic + 1/2)", j + 1));
            }
            for (j, &g) in upper.iter().enumerate() {
                spec.push(FactorKind::Gamma, vec![(v, s)], -g * inv_ic + half(), format!("Gamma((+-g[{v}] - upper[{}])/ic + 1/2)", j + 1));
            }
        }
    }
    spec.check_contour()?;
    Ok(spec)
}

/// Builds the integrand of `formula`. Formulas that need more than the
/// spectral data and position (`Phi`, `GustafsonLhs`) have dedicated
/// constructors and are rejected here.
pub fn build_integrand(formula: FormulaId, params: &SpectralParams, x: &[f64]) -> Result<IntegrandSpec, NumericError> {
    match formula {
        FormulaId::DirectG5 | FormulaId::ExampleN1 | FormulaId::ExampleN2 => {
            let want = match formula {
                FormulaId::ExampleN1 => Some(1),
                FormulaId::ExampleN2 => Some(2),
                _ => None,
            };
            if let Some(w) = want {
                if params.rank() != w {
                    return Err(NumericError::InvalidParams(format!("{} needs rank {w}", formula.name())));
                }
            }
            direct_wave(params, x)
        }
        FormulaId::PsiFromPhi => gustafson_wave(params, x, &gustafson_offsets(params.rank(), 1.0)),
        FormulaId::KernelG9 => {
            check_position(params.rank(), x)?;
            kernel_integrand(params, x[params.rank() - 1])
        }
        FormulaId::Phi | FormulaId::GustafsonLhs => Err(NumericError::InvalidParams(format!(
            "{} is built from odd-row data, use its dedicated constructor",
            formula.name()
        ))),
    }
}
