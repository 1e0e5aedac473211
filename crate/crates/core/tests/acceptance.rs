//! Acceptance run: one line per criterion, exit status 1 if any fails.
//!
//! Runs as its own binary (no libtest harness) so the summary is always printed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zs_toda_core::algebra::{ratfun_equal, RationalFunction, Scalar, ShiftVec};
use zs_toda_core::gt::{check_partial_fraction_identity, verify_lemma_a1, verify_serre, verify_tau};
use zs_toda_core::numeric::*;
use zs_toda_core::whittaker::{
    eigen_reports_for, verify_cartan_action, verify_j_action, verify_whittaker_eigen, Frame, Side, WhittakerCocycle,
};

const GUSTAFSON_K1_TOL: f64 = 1e-6;
const GUSTAFSON_K2_TOL: f64 = 1e-4;
const TODA_N1_TOL: f64 = 1e-4;
const TODA_N2_TOL: f64 = 1e-3;
const ROUTE_TOL: f64 = 1e-3;

type Criterion = (&'static str, fn() -> Outcome, Duration);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn p(gamma: &[f64], c: f64) -> SpectralParams {
    SpectralParams::new(gamma.to_vec(), c).expect("valid parameters")
}

fn serre() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 3..=7 {
        let r = verify_serre(n).expect("rank in range");
        count += r.records.len();
        bad.extend(r.failures().map(|f| format!("so({n}) {}", f.id)));
    }
    outcome(bad.is_empty(), format!("{count} relations, failing: {bad:?}"))
}

fn tau() -> Outcome {
    let mut bad = Vec::new();
    for n in 3..=7 {
        bad.extend(verify_tau(n).expect("rank in range").failures().map(|f| format!("so({n}) {}", f.id)));
    }
    outcome(bad.is_empty(), format!("failing: {bad:?}"))
}

fn lemma_a1() -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=3 {
        bad.extend(verify_lemma_a1(n).expect("rank in range").failures().map(|f| f.id.clone()));
    }
    outcome(bad.is_empty(), format!("failing: {bad:?}"))
}

fn theorem() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 1..=3 {
        let reports = verify_whittaker_eigen(n).expect("rank in range");
        count += reports.len();
        bad.extend(reports.iter().filter(|r| !r.pass).map(|r| format!("{} = {}", r.id(), r.computed)));
    }
    // every exponential prefactor matters
    let mut mutation_ok = true;
    for n in 2..=3 {
        let base = WhittakerCocycle::build(n, Side::Left, Frame::Gamma).expect("rank in range");
        let good = eigen_reports_for(&base).expect("rank in range");
        for index in 0..base.phases().len() {
            let bad_w = base.clone().with_flipped_phase(index).expect("index in range");
            let mutated = eigen_reports_for(&bad_w).expect("rank in range");
            let changed = good.iter().zip(&mutated).any(|(a, b)| !ratfun_equal(&a.computed, &b.computed));
            mutation_ok &= changed;
        }
    }
    outcome(
        bad.is_empty() && mutation_ok,
        format!("{count} relations, mutation detected: {mutation_ok}, failing: {bad:?}"),
    )
}

fn j_action() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 1..=3 {
        let reports = verify_j_action(n).expect("rank in range");
        count += reports.len();
        bad.extend(reports.iter().filter(|r| !r.pass).map(|r| r.id()));
    }
    outcome(bad.is_empty(), format!("{count} relations, failing: {bad:?}"))
}

fn cartan() -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=3 {
        let reports = verify_cartan_action(n).expect("rank in range");
        bad.extend(reports.iter().filter(|r| !r.pass).map(|r| r.id()));
    }
    outcome(bad.is_empty(), format!("failing: {bad:?}"))
}

fn partial_fractions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut scalar = || {
        Scalar::gaussian(
            (rng.gen_range(-20..=20), rng.gen_range(1..=7)),
            (rng.gen_range(-20..=20), rng.gen_range(1..=7)),
        )
    };
    let mut failures = 0;
    for m in 1..=6 {
        for _ in 0..100 {
            let mut xs: Vec<Scalar> = Vec::new();
            while xs.len() < m {
                let s = scalar();
                if !xs.contains(&s) {
                    xs.push(s);
                }
            }
            let ys: Vec<Scalar> = (1..m).map(|_| scalar()).collect();
            if !check_partial_fraction_identity(m, &xs, &ys).expect("distinct nodes") {
                failures += 1;
            }
        }
    }
    outcome(failures == 0, format!("600 samples, {failures} failures"))
}

fn gustafson() -> Outcome {
    let k1 = check_gustafson(
        &[C::new(0.4, 0.0)],
        &[C::new(-0.5, 0.0), C::new(0.9, 0.0)],
        1.0,
        &QuadratureGrid::for_wave(1.0, 0.9),
    );
    let k2 = check_gustafson(
        &[C::new(0.4, 0.0), C::new(-0.7, 0.0)],
        &[C::new(-0.5, 0.0), C::new(0.9, 0.0), C::new(0.2, 0.0)],
        1.0,
        &QuadratureGrid::for_wave(1.0, 1.2),
    );
    match (k1, k2) {
        (Ok(a), Ok(b)) => outcome(
            a.relative_error < GUSTAFSON_K1_TOL && b.relative_error < GUSTAFSON_K2_TOL,
            format!("k=1 rel {:.2e} (< {GUSTAFSON_K1_TOL:e}), k=2 rel {:.2e} (< {GUSTAFSON_K2_TOL:e})", a.relative_error, b.relative_error),
        ),
        (a, b) => outcome(false, format!("{:?} / {:?}", a.err(), b.err())),
    }
}

fn toda() -> Outcome {
    let mut worst1: f64 = 0.0;
    let mut worst2: f64 = 0.0;
    let mut errors = Vec::new();
    let one = p(&[0.7], 1.0);
    let two = p(&[0.6, 1.1], 1.0);
    for gauge in [Gauge::AsPrinted, Gauge::Tilde] {
        for x in [-1.0, -0.3, 0.0, 0.5, 1.2] {
            match check_toda_equation(&TodaCheckSpec::new(one.clone(), vec![x], gauge), &WaveOptions::for_params(&one)) {
                Ok(r) => worst1 = worst1.max(r.residual),
                Err(e) => errors.push(e.to_string()),
            }
        }
        for x in [[0.2, -0.4], [-0.5, 0.3]] {
            match check_toda_equation(&TodaCheckSpec::new(two.clone(), x.to_vec(), gauge), &WaveOptions::for_params(&two)) {
                Ok(r) => worst2 = worst2.max(r.residual),
                Err(e) => errors.push(e.to_string()),
            }
        }
    }
    outcome(
        errors.is_empty() && worst1 < TODA_N1_TOL && worst2 < TODA_N2_TOL,
        format!(
            "n=1 worst {worst1:.2e} (< {TODA_N1_TOL:e}), n=2 worst {worst2:.2e} (< {TODA_N2_TOL:e}), both gauges; errors {errors:?}"
        ),
    )
}

fn routes() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut errors = Vec::new();
    for (params, x) in [(p(&[0.6, 1.1], 1.0), [0.2, -0.4]), (p(&[0.3, 0.9], 0.8), [-0.5, 0.3])] {
        match compare_routes(&params, &x, &WaveOptions::for_params(&params)) {
            Ok(cmp) => {
                for (_, _, d) in cmp.differences {
                    worst = worst.max(d);
                }
            }
            Err(e) => errors.push(e.to_string()),
        }
    }
    outcome(
        errors.is_empty() && worst < ROUTE_TOL,
        format!("worst pairwise relative difference {worst:.2e} (< {ROUTE_TOL:e}); errors {errors:?}"),
    )
}

fn properties() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    // reality and halving consistency
    let cases = [(p(&[0.7], 1.0), vec![-0.3]), (p(&[0.6, 1.1], 1.0), vec![0.2, -0.4])];
    for (params, x) in &cases {
        let opts = WaveOptions::for_params(params);
        let s = eval_wave(params, x, Route::Direct, &opts).expect("evaluable");
        let real = s.value.im.abs() <= s.error_estimate.max(1e-15);
        pass &= real;
        notes.push(format!("n={} Im {:.1e} err {:.1e}", params.rank(), s.value.im, s.error_estimate));
        if params.rank() == 1 {
            let half = WaveOptions { grid: opts.grid.halved(), ..opts };
            let quarter = WaveOptions { grid: half.grid.halved(), ..opts };
            let a = wave_value(params, x, Route::Direct, &half).expect("evaluable");
            let b = wave_value(params, x, Route::Direct, &quarter).expect("evaluable");
            let ok = (a - b).norm() <= s.error_estimate;
            pass &= ok;
            notes.push(format!("halving {:.1e}", (a - b).norm()));
        }
    }

    // Weyl group of B_2 acting on the spectral parameters
    let x = [0.3, -0.2];
    let sample = |g: [f64; 2]| {
        let params = p(&g, 1.0);
        eval_wave(&params, &x, Route::Direct, &WaveOptions::for_params(&params)).expect("evaluable")
    };
    let base = sample([0.6, 1.1]);
    let mut weyl = 0.0f64;
    for g in [[1.1, 0.6], [-0.6, 1.1]] {
        let s = sample(g);
        let d = (s.value - base.value).norm();
        pass &= d <= 2.0 * (s.error_estimate + base.error_estimate) + 1e-12 * base.value.norm();
        weyl = weyl.max(d);
    }
    notes.push(format!("Weyl {weyl:.1e}"));

    // cocycle consistency
    let mut cocycle = true;
    for n in 1..=3 {
        for side in [Side::Left, Side::Right] {
            for frame in [Frame::Gamma, Frame::Nu] {
                let w = WhittakerCocycle::build(n, side, frame).expect("rank in range");
                for (v, (up, down)) in w.ratios().expect("ratios") {
                    let back = &up * &down.shift(&ShiftVec::unit(v, 1));
                    cocycle &= ratfun_equal(&back, &RationalFunction::one());
                }
            }
        }
    }
    pass &= cocycle;
    notes.push(format!("cocycle {cocycle}"));
    outcome(pass, notes.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("serre relations, so(3)..so(7)", serre, Duration::from_secs(300)),
        ("tau conjugation, so(3)..so(7)", tau, Duration::from_secs(300)),
        ("non-simple generators via P and J, n=1..3", lemma_a1, Duration::from_secs(300)),
        ("Whittaker eigen-relations and phase mutation, n=1..3", theorem, Duration::from_secs(300)),
        ("J action on w_n, n=1..3", j_action, Duration::from_secs(300)),
        ("Cartan action, both frames, n=1..3", cartan, Duration::from_secs(300)),
        ("partial-fraction identity, m=1..6", partial_fractions, Duration::from_secs(300)),
        ("degenerate Gustafson integral, k=1,2", gustafson, Duration::from_secs(60)),
        ("Toda eigen-equation, n=1 and n=2, both gauges", toda, Duration::from_secs(1200)),
        ("route equivalence at n=2", routes, Duration::from_secs(600)),
        ("reality, Weyl invariance, cocycle, halving", properties, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let pass = o.pass && elapsed <= *limit;
        if !pass {
            failed += 1;
        }
        println!(
            "[{}] {:>2}. {name}: {} ({:.1} s, limit {} s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
