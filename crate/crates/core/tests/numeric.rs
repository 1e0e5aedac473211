use core::f64::consts::PI;

use num_complex::Complex64 as C;
use proptest::prelude::*;
use zs_toda_core::numeric::*;

fn close(a: C, b: C, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

// (z, ln Gamma(z)) computed with mpmath at 40 digits.
#[allow(clippy::approx_constant, clippy::excessive_precision)]
#[allow(clippy::type_complexity)]
const LOG_GAMMA_ORACLE: &[((f64, f64), (f64, f64))] = &[
    ((0.3, 2.0), (-2.3594493559375710212, -0.91690761351866975555)),
    ((-2.7, 0.4), (-0.84963045007744143538, -9.5102062715457042796)),
    ((-7.3, -15.2), (-44.500388583748915003, -11.992039773871401234)),
    ((120.5, -800.0), (-453.11772859946314146, -4727.2184421477671195)),
    ((0.5, -300.0), (-470.31995950526431303, -1411.1348812858392276)),
    ((3.0, 0.0), (0.69314718055994530942, 0.0)),
    ((1e-3, 1e-3), (6.5606044738375526187, -0.78597373492965343485)),
    ((-0.5, 0.0), (1.2655121234846453965, -3.1415926535897932385)),
    ((0.0, 1000.0), (-1573.331265901183015, 5906.9697974854034926)),
    ((10.3, 0.0), (13.482036786138358593, 0.0)),
    ((-20.25, 3.0), (-50.463089176724387718, -56.079738015567431107)),
];

#[test]
fn log_gamma_matches_multiprecision_oracle() {
    for &((zr, zi), (lr, li)) in LOG_GAMMA_ORACLE {
        let got = log_gamma(C::new(zr, zi)).unwrap();
        assert!(close(got, C::new(lr, li), 1e-13), "z = {zr} + {zi}i: {got} vs {lr} + {li}i");
    }
}

#[test]
fn log_gamma_simple_values() {
    // absolute error: the value itself is zero
    assert!(log_gamma(C::new(1.0, 0.0)).unwrap().norm() < 1e-14);
    assert!(log_gamma(C::new(2.0, 0.0)).unwrap().norm() < 1e-14);
    let half = log_gamma(C::new(0.5, 0.0)).unwrap();
    assert!((half.re - 0.572_364_942_924_700_1).abs() < 1e-13 * 0.5724 && half.im == 0.0);
    assert!((gamma(C::new(5.0, 0.0)).unwrap().re - 24.0).abs() < 1e-12);
}

#[test]
fn log_gamma_poles_are_errors() {
    for k in 0..5 {
        let z = C::new(-(k as f64), 0.0);
        assert!(matches!(log_gamma(z), Err(GammaError::Pole { .. })));
    }
}

#[test]
fn reciprocal_pairs_match_gamma_products() {
    for z in [C::new(0.3, 1.7), C::new(-1.2, 0.4), C::new(0.0, -2.5)] {
        let direct = -(log_gamma(z).unwrap() + log_gamma(-z).unwrap());
        assert!((log_recip_gamma_pair(z).exp() - direct.exp()).norm() < 1e-12 * direct.exp().norm());
        let one = C::new(1.0, 0.0);
        let shifted = -(log_gamma(one + z).unwrap() + log_gamma(one - z).unwrap());
        assert!((log_recip_gamma_pair_shifted(z).exp() - shifted.exp()).norm() < 1e-12 * shifted.exp().norm());
    }
    assert_eq!(log_recip_gamma_pair(C::new(0.0, 0.0)).re, f64::NEG_INFINITY);
    assert!(log_recip_gamma_pair_shifted(C::new(0.0, 0.0)).norm() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn log_gamma_recurrence(re in -30.0f64..30.0, im in -50.0f64..50.0) {
        prop_assume!(im.abs() > 1e-3 || re > 0.1);
        let z = C::new(re, im);
        let lhs = log_gamma(z + 1.0).unwrap();
        let rhs = log_gamma(z).unwrap() + z.ln();
        // equal modulo 2 pi i
        let d = lhs - rhs;
        let k = (d.im / (2.0 * PI)).round();
        prop_assert!(d.re.abs() < 1e-11 * lhs.norm().max(1.0));
        prop_assert!((d.im - 2.0 * PI * k).abs() < 1e-11 * lhs.norm().max(1.0));
    }
}

#[test]
fn trapezoid_gaussian() {
    let grid = QuadratureGrid::new(8.0, 0.25).unwrap();
    let decay = Decay { rate: 8.0, core: 1.0 };
    let q = integrate_fn(1, &|t: &[f64]| C::new((-t[0] * t[0]).exp(), 0.0), &grid, decay).unwrap();
    assert!((q.value.re - PI.sqrt()).abs() < 1e-12);
    assert!(q.error_estimate < 1e-12);
}

#[test]
fn trapezoid_gamma_reflection_integral() {
    // Gamma(1/2 + it) Gamma(1/2 - it) = pi / cosh(pi t)
    // poles at +-i/2 give a discretization error ~ exp(-pi/step)
    let grid = QuadratureGrid::new(20.0, 0.1).unwrap();
    let f = |t: &[f64]| {
        let z = C::new(0.5, t[0]);
        (log_gamma(z).unwrap() + log_gamma(z.conj()).unwrap()).exp()
    };
    let q = integrate_fn(1, &f, &grid, Decay { rate: PI, core: 0.0 }).unwrap();
    assert!((q.value - C::new(PI, 0.0)).norm() < 1e-10, "{}", q.value);
}

#[test]
fn grid_validation() {
    assert!(QuadratureGrid::new(1.0, 0.3).is_err());
    assert!(QuadratureGrid::new(-1.0, 0.25).is_err());
    assert!(QuadratureGrid::new(1.0, 0.0).is_err());
    let g = QuadratureGrid::new(2.0, 0.5).unwrap();
    assert_eq!(g.nodes_per_axis(), 9);
    let (xs, ws) = g.nodes();
    assert_eq!(xs[0], -2.0);
    assert_eq!(ws[0], 0.25);
    assert_eq!(ws[4], 0.5);
}

#[test]
fn pairwise_sum_is_order_fixed() {
    let v: Vec<C> = (0..1000).map(|k| C::new(1.0 / (k as f64 + 1.0), k as f64)).collect();
    assert_eq!(pairwise_sum(&v), pairwise_sum(&v));
    let naive: C = v.iter().sum();
    assert!((pairwise_sum(&v) - naive).norm() < 1e-9);
}

fn p(gamma: &[f64], c: f64) -> SpectralParams {
    SpectralParams::new(gamma.to_vec(), c).unwrap()
}

#[test]
fn direct_integrand_dimensions() {
    let s1 = build_integrand(FormulaId::ExampleN1, &p(&[0.7], 1.0), &[-0.3]).unwrap();
    assert_eq!(s1.dim(), 1);
    let s2 = build_integrand(FormulaId::ExampleN2, &p(&[0.6, 1.1], 1.0), &[0.2, -0.4]).unwrap();
    assert_eq!(s2.dim(), 4);
    let s3 = build_integrand(FormulaId::DirectG5, &p(&[0.6, 1.1, 0.3], 1.0), &[0.0, 0.0, 0.0]).unwrap();
    assert_eq!(s3.dim(), 9);
    let g = build_integrand(FormulaId::PsiFromPhi, &p(&[0.6, 1.1, 0.3], 1.0), &[0.0, 0.0, 0.0]).unwrap();
    assert_eq!(g.dim(), 6);
    let top = [C::new(0.1, 0.25), C::new(-0.3, 0.25), C::new(0.7, 0.25)];
    let phi = phi_integrand(&top, 1.0, &[0.0, 0.1, 0.2], &[0.75, 0.5]).unwrap();
    assert_eq!(phi.dim(), 3);
    assert!(build_integrand(FormulaId::ExampleN2, &p(&[0.7], 1.0), &[0.0]).is_err());
    assert!(build_integrand(FormulaId::DirectG5, &p(&[0.7], 1.0), &[0.0, 1.0]).is_err());
}

#[test]
fn rank_one_integrand_formula() {
    // c^{2g/ic} e^{-g x/ic} Gamma((+-0.7 + g)/ic + 1/2) at g = 0.4, c = 1.3, x = 0.25
    let c = 1.3;
    let spec = direct_wave(&p(&[0.7], c), &[0.25]).unwrap();
    let g = C::new(0.4, 0.0);
    let ic = C::new(0.0, c);
    let want = (g * 2.0 / ic * c.ln() - g * 0.25 / ic
        + log_gamma((g + 0.7) / ic + 0.5).unwrap()
        + log_gamma((g - 0.7) / ic + 0.5).unwrap())
    .exp();
    let got = spec.log_eval(&[g]).unwrap().exp();
    assert!((got - want).norm() < 1e-13 * want.norm());
}

#[test]
fn gustafson_lhs_has_measure_and_four_gammas() {
    let spec = gustafson_lhs(&[C::new(0.4, 0.0)], &[C::new(-0.5, 0.0), C::new(0.9, 0.0)], 1.0).unwrap();
    assert_eq!(spec.dim(), 1);
    let gammas = spec.factors.iter().filter(|f| f.kind == FactorKind::Gamma).count();
    let measure = spec.factors.iter().filter(|f| f.kind == FactorKind::RecipPair).count();
    assert_eq!((gammas, measure), (6, 1));
}

#[test]
fn pole_on_contour_is_reported() {
    // Gamma((g11 - g31)/ic) with both rows on the same line has a pole on it
    let err = gustafson_wave(&p(&[0.6, 1.1], 1.0), &[0.0, 0.0], &[0.5, 0.5]).unwrap_err();
    match err {
        NumericError::PoleOnContour { factor } => assert!(factor.contains("Gamma"), "{factor}"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn budget_refusal_names_required_work() {
    let params = p(&[0.6, 1.1, 0.3], 1.0);
    let opts = WaveOptions::for_params(&params);
    let err = wave_value(&params, &[0.0, 0.0, 0.0], Route::Gustafson, &opts).unwrap_err();
    assert!(matches!(err, NumericError::BudgetExceeded { required, .. } if required > 1e10));
    assert!(matches!(
        wave_value(&params, &[0.0, 0.0, 0.0], Route::Direct, &opts),
        Err(NumericError::RankUnsupported { max: 2, .. })
    ));
}

const N1_REFERENCE: f64 = 1.0862102910271138;

#[test]
fn rank_one_reference_value() {
    let params = p(&[0.7], 1.0);
    let opts = WaveOptions::for_params(&params);
    let s = eval_wave(&params, &[-0.3], Route::Direct, &opts).unwrap();
    assert!((s.value.re - N1_REFERENCE).abs() < 1e-10 * N1_REFERENCE);
    assert!((s.value - C::new(N1_REFERENCE, 0.0)).norm() <= s.error_estimate + 1e-15);
    // the dense grid agrees with the frozen oracle as well
    let dense = WaveOptions { grid: QuadratureGrid::new(60.0, 0.01).unwrap(), ..opts };
    let v = wave_value(&params, &[-0.3], Route::Direct, &dense).unwrap();
    assert!((v.re - N1_REFERENCE).abs() < 1e-13);
}

#[test]
fn rank_one_step_halving_below_1e8() {
    let params = p(&[0.7], 1.0);
    let opts = WaveOptions::for_params(&params);
    let s = eval_wave(&params, &[-0.3], Route::Direct, &opts).unwrap();
    let fine = WaveOptions { grid: opts.grid.halved(), ..opts };
    let v = wave_value(&params, &[-0.3], Route::Direct, &fine).unwrap();
    assert!((s.value - v).norm() < 1e-8 * s.value.norm());
}

#[test]
fn rank_one_routes_agree() {
    let params = p(&[0.7], 1.0);
    let opts = WaveOptions::for_params(&params);
    let cmp = compare_routes(&params, &[-0.3], &opts).unwrap();
    assert!(cmp.differences.iter().all(|d| d.2 == 0.0));
    let g = wave_value(&params, &[-0.3], Route::Gustafson, &opts).unwrap();
    assert!((g - cmp.samples[0].value).norm() < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rank_one_sign_flip_and_reality(g in 0.05f64..2.0, x in -2.0f64..1.5, c in 0.6f64..1.6) {
        let a = p(&[g], c);
        let b = p(&[-g], c);
        let opts = WaveOptions::for_params(&a);
        let sa = eval_wave(&a, &[x], Route::Direct, &opts).unwrap();
        let sb = eval_wave(&b, &[x], Route::Direct, &opts).unwrap();
        prop_assert!((sa.value - sb.value).norm() <= sa.error_estimate + sb.error_estimate + 1e-14 * sa.value.norm());
        prop_assert!(sa.value.im.abs() <= sa.error_estimate);
        // halving the step moves the value by less than the estimate
        let fine = WaveOptions { grid: opts.grid.halved(), ..opts };
        let v = wave_value(&a, &[x], Route::Direct, &fine).unwrap();
        prop_assert!((v - sa.value).norm() <= sa.error_estimate);
    }

    #[test]
    fn gustafson_k1_symmetric_in_upper_row(a in -1.0f64..1.0, b in -1.0f64..1.0, d in -1.0f64..1.0) {
        let grid = QuadratureGrid::for_wave(1.0, 1.0);
        let l = [C::new(a, 0.0)];
        let r1 = check_gustafson(&l, &[C::new(b, 0.0), C::new(d, 0.0)], 1.0, &grid).unwrap();
        let r2 = check_gustafson(&l, &[C::new(d, 0.0), C::new(b, 0.0)], 1.0, &grid).unwrap();
        prop_assert!(r1.relative_error < 1e-6);
        prop_assert!((r1.lhs - r2.lhs).norm() < 1e-12 * r1.lhs.norm());
        prop_assert!((r1.rhs - r2.rhs).norm() < 1e-12 * r1.rhs.norm());
    }
}

#[test]
fn gustafson_k1_desk_case() {
    let grid = QuadratureGrid::for_wave(1.0, 0.9);
    let r = check_gustafson(&[C::new(0.4, 0.0)], &[C::new(-0.5, 0.0), C::new(0.9, 0.0)], 1.0, &grid).unwrap();
    assert!(r.relative_error < 1e-6, "{r:?}");
}

#[test]
fn gustafson_k2_desk_case() {
    let grid = QuadratureGrid::for_wave(1.0, 1.2);
    let lower = [C::new(0.4, 0.0), C::new(-0.7, 0.0)];
    let upper = [C::new(-0.5, 0.0), C::new(0.9, 0.0), C::new(0.2, 0.0)];
    let r = check_gustafson(&lower, &upper, 1.0, &grid).unwrap();
    assert!(r.relative_error < 1e-4, "{r:?}");
}

#[test]
fn gustafson_with_complex_parameters() {
    // shifting the parameters keeps the identity while Re a_i > 0
    let grid = QuadratureGrid::for_wave(0.8, 1.2);
    let r = check_gustafson(&[C::new(0.3, 0.1)], &[C::new(-0.5, -0.05), C::new(0.9, 0.0)], 0.8, &grid).unwrap();
    assert!(r.relative_error < 1e-6, "{r:?}");
}

#[test]
fn gustafson_positivity_refusal() {
    let grid = QuadratureGrid::for_wave(1.0, 1.0);
    // a_1 = g/(ic) + 1/2 has real part Im(g)/c + 1/2 = -0.1
    let err = check_gustafson(&[C::new(0.3, -0.6)], &[C::new(0.1, 0.0), C::new(0.2, 0.0)], 1.0, &grid).unwrap_err();
    assert!(matches!(err, NumericError::Positivity { index: 1, .. }), "{err:?}");
    assert!(check_gustafson(&[], &[C::new(0.1, 0.0)], 1.0, &grid).is_err());
}

#[test]
fn toda_rank_one_points() {
    let params = p(&[0.7], 1.0);
    assert!((params.toda_eigenvalue() - 0.74).abs() < 1e-15);
    let opts = WaveOptions::for_params(&params);
    for gauge in [Gauge::AsPrinted, Gauge::Tilde] {
        for x in [-1.0, -0.3, 0.0, 0.5, 1.2] {
            let r = check_toda_equation(&TodaCheckSpec::new(params.clone(), vec![x], gauge), &opts).unwrap();
            assert!(r.residual < 1e-4, "{gauge:?} x = {x}: {}", r.residual);
        }
    }
}

#[test]
fn toda_wrong_eigenvalue_is_detected() {
    // the same wave checked against a different spectral value fails
    let params = p(&[0.7], 1.0);
    let opts = WaveOptions::for_params(&params);
    let r = check_toda_equation(&TodaCheckSpec::new(params.clone(), vec![0.0], Gauge::AsPrinted), &opts).unwrap();
    let wrong = (r.h_value - r.value * (r.eigenvalue + 0.01)).norm() / (r.value * r.eigenvalue).norm();
    assert!(wrong > 1e-3);
}

#[test]
fn eigenvalue_constants() {
    assert!((p(&[0.6, 1.1], 1.0).toda_eigenvalue() - 4.07).abs() < 1e-12);
    assert!((p(&[0.6, 1.1], 1.0).sum_sq_over_c2() - 1.57).abs() < 1e-12);
    assert!((p(&[0.7], 2.0).toda_eigenvalue() - (0.49 / 4.0 + 0.25)).abs() < 1e-15);
}

#[test]
fn normalization_diagnostics() {
    for n in 1..=6 {
        let (a, b) = c_power_forms(n);
        assert_eq!(a, b);
        let (x, y) = kernel_x_exponent_forms(n);
        assert_eq!(x, y);
    }
    assert!((log_dn(1, 0.7)).abs() < 1e-15);
    let want = (0.7f64 * 2.0 * PI * 2.0).ln() + 2.0 * (0.7f64 * 2.0 * PI * 2.0).ln() + 2f64.ln();
    assert!((log_dn(3, 0.7) - want).abs() < 1e-13);
}

#[test]
fn decay_bound_along_axes() {
    for (params, x) in [(p(&[0.7], 1.0), vec![-0.3]), (p(&[0.6, 1.1], 0.8), vec![0.2, -0.4])] {
        let n = params.rank();
        let spec = direct_wave(&params, &x).unwrap();
        let c = params.c;
        let rate = (PI - 0.1) / (c * n as f64);
        for v in 0..spec.dim() {
            let ts: Vec<f64> = (0..40).map(|k| 5.0 * c + k as f64 * c * 0.5).collect();
            for sign in [1.0, -1.0] {
                let ts: Vec<f64> = ts.iter().map(|t| t * sign).collect();
                let prof = decay_profile(&spec, v, &ts).unwrap();
                // log|f(t)| - log|f(t0)| <= -rate (|t| - |t0|) + slack
                for (t, l) in ts.iter().zip(&prof).skip(1) {
                    let bound = prof[0] - rate * (t.abs() - ts[0].abs()) + 3.0;
                    assert!(*l <= bound, "axis {v} t = {t}: {l} > {bound}");
                }
            }
        }
    }
}

#[test]
fn spectral_warnings() {
    assert!(p(&[0.6, -0.6], 1.0).warnings().len() == 1);
    assert!(p(&[0.6, 1.1], 1.0).warnings().is_empty());
    assert!(SpectralParams::new(vec![0.1], 0.0).is_err());
    assert!(SpectralParams::new(vec![], 1.0).is_err());
}
