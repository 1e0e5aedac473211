//! Mapping of each subcommand onto the core library.

use anyhow::{anyhow, bail, Result};
use clap::ValueEnum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zs_toda_core::algebra::Scalar;
use zs_toda_core::gt::{self, CheckReport};
use zs_toda_core::numeric::{
    check_gustafson, check_toda_equation, compare_routes, eval_wave, Gauge, NumericError, QuadratureGrid, Route,
    SpectralParams, TodaCheckSpec, WaveOptions,
};
use zs_toda_core::whittaker::{self, EigenReport};

use crate::report::{GridInfo, Record, Report};
use crate::settings::Settings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Serre,
    Tau,
    LemmaA1,
    Whittaker,
    JAction,
    Cartan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalTarget {
    Wave,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckTarget {
    Toda,
    Gustafson,
    A8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompareTarget {
    Routes,
}

/// A resolved command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Verify(Suite),
    Eval(EvalTarget),
    Check(CheckTarget),
    Compare(CompareTarget),
}

impl Task {
    pub fn name(self) -> String {
        let (group, what) = match self {
            Task::Verify(s) => ("verify", s.to_possible_value()),
            Task::Eval(s) => ("eval", s.to_possible_value()),
            Task::Check(s) => ("check", s.to_possible_value()),
            Task::Compare(s) => ("compare", s.to_possible_value()),
        };
        format!("{group} {}", what.expect("no skipped variants").get_name())
    }
}

/// Runs `task` and fills a report. `Err` means the request itself was invalid.
pub fn execute(task: Task, cfg: &Settings) -> Result<Report> {
    let mut report = Report::new(task.name(), cfg.clone());
    match task {
        Task::Verify(suite) => verify(suite, cfg, &mut report)?,
        Task::Eval(EvalTarget::Wave) => eval_wave_cmd(cfg, &mut report)?,
        Task::Check(CheckTarget::Toda) => toda(cfg, &mut report)?,
        Task::Check(CheckTarget::Gustafson) => gustafson(cfg, &mut report)?,
        Task::Check(CheckTarget::A8) => a8(cfg, &mut report)?,
        Task::Compare(CompareTarget::Routes) => routes(cfg, &mut report)?,
    }
    Ok(report)
}

fn push_checks(report: &mut Report, r: CheckReport) {
    for c in r.records {
        report.push(Record::check(c.id, c.expected, c.computed, c.pass));
    }
}

fn push_eigen(report: &mut Report, reports: Vec<EigenReport>) {
    for r in reports {
        report.push(Record::check(r.id(), r.expected.to_string(), r.computed.to_string(), r.pass));
    }
}

fn verify(suite: Suite, cfg: &Settings, report: &mut Report) -> Result<()> {
    match suite {
        Suite::Serre => push_checks(report, gt::verify_serre(cfg.n.unwrap_or(5))?),
        Suite::Tau => push_checks(report, gt::verify_tau(cfg.n.unwrap_or(5))?),
        Suite::LemmaA1 => push_checks(report, gt::verify_lemma_a1(cfg.n.unwrap_or(2))?),
        Suite::Whittaker => push_eigen(report, whittaker::verify_whittaker_eigen(cfg.n.unwrap_or(2))?),
        Suite::JAction => push_eigen(report, whittaker::verify_j_action(cfg.n.unwrap_or(2))?),
        Suite::Cartan => push_eigen(report, whittaker::verify_cartan_action(cfg.n.unwrap_or(2))?),
    }
    Ok(())
}

fn default_gamma(n: usize) -> Result<Vec<f64>> {
    match n {
        1 => Ok(vec![0.7]),
        2 => Ok(vec![0.6, 1.1]),
        3 => Ok(vec![0.6, 1.1, 1.7]),
        _ => bail!("rank {n} has no default spectral parameters; pass --gamma"),
    }
}

/// Spectral parameters and position, with rank consistency checks.
fn spectral(cfg: &Settings) -> Result<(SpectralParams, Vec<f64>)> {
    let gamma = match (&cfg.gamma, cfg.n) {
        (Some(g), Some(n)) if g.len() as i64 != n => {
            bail!("--gamma has {} entries but --rank is {n}", g.len())
        }
        (Some(g), _) => g.clone(),
        (None, Some(n)) if n >= 1 => default_gamma(n as usize)?,
        (None, Some(n)) => bail!("rank {n} must be positive"),
        (None, None) => default_gamma(1)?,
    };
    let params = SpectralParams::new(gamma, cfg.c.unwrap_or(1.0))?;
    let x = cfg.x.clone().unwrap_or_else(|| vec![0.0; params.rank()]);
    if x.len() != params.rank() {
        bail!("--x has {} entries, rank is {}", x.len(), params.rank());
    }
    if x.iter().any(|v| !v.is_finite()) {
        bail!("--x entries must be finite");
    }
    Ok((params, x))
}

fn wave_options(cfg: &Settings, params: &SpectralParams) -> Result<WaveOptions> {
    let mut opts = WaveOptions::for_params(params);
    if let Some(step) = cfg.grid_step {
        opts.grid = opts.grid.with_step(step)?;
    }
    if let Some(l) = cfg.grid_l {
        opts.grid = QuadratureGrid { half_width: l, ..opts.grid };
        opts.grid.validate()?;
    }
    if let Some(s) = cfg.offset_scale {
        if !(s.is_finite() && s > 0.0) {
            bail!("--offset-scale must be positive, got {s}");
        }
        opts.offset_scale = s;
    }
    Ok(opts)
}

fn grid_info(opts: &WaveOptions, with_offsets: bool) -> GridInfo {
    GridInfo {
        half_width: opts.grid.half_width,
        step: opts.grid.step,
        epsilon: opts.grid.epsilon,
        budget: opts.grid.budget,
        offset_scale: with_offsets.then_some(opts.offset_scale),
    }
}

fn route(cfg: &Settings) -> Result<Route> {
    match &cfg.route {
        None => Ok(Route::Direct),
        Some(s) => Route::parse(s).ok_or_else(|| anyhow!("unknown route {s:?}; expected direct, recursive or gustafson")),
    }
}

/// Errors caused by the request rather than by the computation.
fn is_usage(e: &NumericError) -> bool {
    matches!(
        e,
        NumericError::InvalidParams(_)
            | NumericError::InvalidGrid(_)
            | NumericError::RankUnsupported { .. }
            | NumericError::Positivity { .. }
            | NumericError::Unsupported(_)
    )
}

/// A failed evaluation becomes a failing record; an invalid request aborts.
fn failed(id: String, e: NumericError) -> Result<Record> {
    if is_usage(&e) {
        return Err(e.into());
    }
    Ok(Record::check(id, "finite value", format!("error: {e}"), false))
}

fn fmt_c(z: Complex64) -> String {
    format!("{:e}{:+e}i", z.re, z.im)
}

fn fmt_x(x: &[f64]) -> String {
    x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn eval_wave_cmd(cfg: &Settings, report: &mut Report) -> Result<()> {
    let (params, x) = spectral(cfg)?;
    let route = route(cfg)?;
    let opts = wave_options(cfg, &params)?;
    report.grid = Some(grid_info(&opts, route == Route::Gustafson));
    report.warnings = params.warnings();
    let points: Vec<Vec<f64>> = match &cfg.scan {
        None => vec![x],
        Some(s) => {
            let [start, end, count] = s[..] else {
                bail!("--scan takes start,end,points");
            };
            if !(start.is_finite() && end.is_finite()) || count < 1.0 || count.fract() != 0.0 {
                bail!("--scan needs finite bounds and a positive integer point count");
            }
            let count = count as usize;
            (0..count)
                .map(|i| {
                    let t = if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 };
                    let mut p = x.clone();
                    p[0] = start + t * (end - start);
                    p
                })
                .collect()
        }
    };
    for p in points {
        let id = format!("psi[{}](x={})", route.name(), fmt_x(&p));
        match eval_wave(&params, &p, route, &opts) {
            Ok(s) => {
                let mut r = Record::check(id, "finite value", fmt_c(s.value), s.value.is_finite());
                r.x = Some(p);
                r.re = Some(s.value.re);
                r.im = Some(s.value.im);
                r.err = Some(s.error_estimate);
                report.push(r);
            }
            Err(e) => report.push(failed(id, e)?),
        }
    }
    Ok(())
}

fn toda(cfg: &Settings, report: &mut Report) -> Result<()> {
    let (params, x) = spectral(cfg)?;
    let gauge = match &cfg.gauge {
        None => Gauge::AsPrinted,
        Some(s) => Gauge::parse(s).ok_or_else(|| anyhow!("unknown gauge {s:?}; expected printed or tilde"))?,
    };
    let opts = wave_options(cfg, &params)?;
    let route = route(cfg)?;
    report.grid = Some(grid_info(&opts, route == Route::Gustafson));
    report.warnings = params.warnings();
    let tol = cfg.tol.unwrap_or(if params.rank() == 1 { 1e-4 } else { 1e-3 });
    let mut spec = TodaCheckSpec::new(params, x.clone(), gauge);
    spec.fd_step = cfg.fd_step;
    spec.route = route;
    let id = format!("toda[{}](x={})", gauge.name(), fmt_x(&x));
    match check_toda_equation(&spec, &opts) {
        Ok(r) => {
            let rec = Record::check(
                id,
                format!("H psi = {} psi, residual < {tol:e}", r.eigenvalue),
                format!("residual {:e} (step {}), {:e} at doubled step", r.residual, r.fd_step, r.residual_doubled),
                r.residual < tol,
            )
            .with_residual(r.residual);
            report.push(rec);
        }
        Err(e) => report.push(failed(id, e)?),
    }
    Ok(())
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let (re, im) = match s.split_once(':') {
        Some((a, b)) => (a.trim().parse::<f64>()?, b.trim().parse::<f64>()?),
        None => (s.trim().parse::<f64>()?, 0.0),
    };
    Ok(Complex64::new(re, im))
}

fn gustafson(cfg: &Settings, report: &mut Report) -> Result<()> {
    let parse = |v: &Option<Vec<String>>, default: &[&str]| -> Result<Vec<Complex64>> {
        match v {
            Some(items) => items.iter().map(|s| parse_complex(s)).collect(),
            None => default.iter().map(|s| parse_complex(s)).collect(),
        }
    };
    let lower = parse(&cfg.lower, &["0.4"])?;
    let upper_default: &[&str] = if lower.len() == 2 { &["-0.5", "0.9", "0.2"] } else { &["-0.5", "0.9"] };
    let upper = parse(&cfg.upper, upper_default)?;
    if upper.len() != lower.len() + 1 {
        bail!("the identity needs k lower and k+1 upper parameters, got {} and {}", lower.len(), upper.len());
    }
    let c = cfg.c.unwrap_or(1.0);
    let max_abs = lower.iter().chain(&upper).fold(0.0f64, |m, z| m.max(z.norm()));
    let params = SpectralParams::new(vec![max_abs], c)?;
    let opts = wave_options(cfg, &params)?;
    report.grid = Some(grid_info(&opts, false));
    let tol = cfg.tol.unwrap_or(if lower.len() == 1 { 1e-6 } else { 1e-4 });
    let id = format!("gustafson[k={}]", lower.len());
    match check_gustafson(&lower, &upper, c, &opts.grid) {
        Ok(r) => report.push(
            Record::check(
                id,
                format!("{} (closed form), relative error < {tol:e}", fmt_c(r.rhs)),
                format!("{} (quadrature, error estimate {:e})", fmt_c(r.lhs), r.error_estimate),
                r.relative_error < tol,
            )
            .with_residual(r.relative_error),
        ),
        Err(e) => report.push(failed(id, e)?),
    }
    Ok(())
}

fn a8(cfg: &Settings, report: &mut Report) -> Result<()> {
    let max_m = cfg.m.unwrap_or(6);
    if max_m == 0 {
        bail!("--m must be at least 1");
    }
    let samples = cfg.samples.unwrap_or(100);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.unwrap_or(0));
    let scalar = |rng: &mut ChaCha8Rng| {
        Scalar::gaussian(
            (rng.gen_range(-20..=20), rng.gen_range(1..=7)),
            (rng.gen_range(-20..=20), rng.gen_range(1..=7)),
        )
    };
    for m in 1..=max_m {
        let mut bad = 0usize;
        for _ in 0..samples {
            let mut xs: Vec<Scalar> = Vec::with_capacity(m);
            while xs.len() < m {
                let s = scalar(&mut rng);
                if !xs.contains(&s) {
                    xs.push(s);
                }
            }
            let ys: Vec<Scalar> = (1..m).map(|_| scalar(&mut rng)).collect();
            if !gt::check_partial_fraction_identity(m, &xs, &ys)? {
                bad += 1;
            }
        }
        report.push(Record::check(
            format!("a8[m={m}]"),
            format!("sum equals 1 for {samples} samples"),
            format!("{} of {samples} samples equal 1", samples - bad),
            bad == 0,
        ));
    }
    Ok(())
}

fn routes(cfg: &Settings, report: &mut Report) -> Result<()> {
    let (params, x) = spectral(cfg)?;
    let opts = wave_options(cfg, &params)?;
    report.grid = Some(grid_info(&opts, true));
    report.warnings = params.warnings();
    let tol = cfg.tol.unwrap_or(1e-3);
    match compare_routes(&params, &x, &opts) {
        Ok(cmp) => {
            for s in &cmp.samples {
                let mut r = Record::check(format!("psi[{}](x={})", s.route.name(), fmt_x(&x)), "finite value", fmt_c(s.value), s.value.is_finite());
                r.x = Some(x.clone());
                r.re = Some(s.value.re);
                r.im = Some(s.value.im);
                r.err = Some(s.error_estimate);
                report.push(r);
            }
            for (a, b, d) in cmp.differences {
                report.push(
                    Record::check(
                        format!("{} vs {}", a.name(), b.name()),
                        format!("relative difference < {tol:e}"),
                        format!("{d:e}"),
                        d < tol,
                    )
                    .with_residual(d),
                );
            }
        }
        Err(e) => report.push(failed(String::from("compare routes"), e)?),
    }
    Ok(())
}
