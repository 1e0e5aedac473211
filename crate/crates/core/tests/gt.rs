use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zs_toda_core::algebra::{ratfun_equal, Polynomial, RationalFunction, Scalar, ShiftOperator, ShiftVec, Var};
use zs_toda_core::gt::verify::tau_flags;
use zs_toda_core::gt::{
    build_generator, check_partial_fraction_identity, verify_lemma_a1, verify_serre, verify_serre_mutated,
    verify_tau, GeneratorTag, GtError, Sign,
};

fn x() -> Var {
    Var::gamma(1, 1)
}

fn y() -> Var {
    Var::gamma(2, 1)
}

fn px() -> Polynomial {
    Polynomial::var(x())
}

fn py() -> Polynomial {
    Polynomial::var(y())
}

fn h() -> Polynomial {
    Polynomial::h()
}

fn rf(p: Polynomial) -> RationalFunction {
    RationalFunction::from_poly(p)
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let re = (rng.gen_range(-9..=9), rng.gen_range(1..=5));
    let im = (rng.gen_range(-9..=9), rng.gen_range(1..=5));
    Scalar::gaussian(re, im)
}

fn random_nonzero_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = random_scalar(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Random polynomial of degree <= 2 in x, y, h.
fn random_poly(rng: &mut ChaCha8Rng) -> Polynomial {
    let gens = [Polynomial::one(), px(), py(), h()];
    let mut p = Polynomial::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let a = &gens[rng.gen_range(0..4)];
        let b = &gens[rng.gen_range(0..4)];
        p = &p + &(a * b).scale(&random_nonzero_scalar(rng));
    }
    p
}

fn random_linear(rng: &mut ChaCha8Rng) -> Polynomial {
    let shift = Scalar::ratio(rng.gen_range(-4..=4), 2);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    &(&px() + &py().scale(&Scalar::int(sign))) + &h().scale(&shift)
}

fn random_ratfun(rng: &mut ChaCha8Rng) -> RationalFunction {
    let num = random_poly(rng);
    if rng.gen_bool(0.5) {
        RationalFunction::new(num, vec![random_linear(rng)])
    } else {
        rf(num)
    }
}

fn random_shift(rng: &mut ChaCha8Rng) -> ShiftVec {
    let a = ShiftVec::unit(x(), rng.gen_range(-1..=1));
    let b = ShiftVec::unit(y(), rng.gen_range(-1..=1));
    a.add(&b)
}

/// Operator with at most `max_terms` terms in the variables x, y.
fn random_op(rng: &mut ChaCha8Rng, max_terms: usize) -> ShiftOperator {
    let mut op = ShiftOperator::zero();
    for _ in 0..rng.gen_range(1..=max_terms) {
        op = &op + &ShiftOperator::term(random_ratfun(rng), random_shift(rng));
    }
    op
}

fn random_point(rng: &mut ChaCha8Rng) -> impl Fn(Var) -> Scalar {
    let vx = random_scalar(rng);
    let vy = random_scalar(rng);
    let vh = random_nonzero_scalar(rng);
    move |v| {
        if v == Var::H {
            vh.clone()
        } else if v == x() {
            vx.clone()
        } else if v == y() {
            vy.clone()
        } else {
            Scalar::zero()
        }
    }
}

fn is_normal_form(op: &ShiftOperator) -> bool {
    op.terms().all(|(_, c)| !c.is_zero())
}

#[test]
fn ratfun_equal_difference_of_squares() {
    let num = &(&px() * &px()) - &(&py() * &py());
    let lhs = RationalFunction::new(num, vec![&px() - &py()]);
    assert!(ratfun_equal(&lhs, &rf(&px() + &py())));
}

#[test]
fn ratfun_equal_commutative_sum() {
    assert!(ratfun_equal(&rf(&px() + &py()), &rf(&py() + &px())));
}

#[test]
fn ratfun_equal_detects_perturbation_and_evaluation_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let num = random_poly(&mut rng);
        let den = random_linear(&mut rng);
        let a = RationalFunction::new(num.clone(), vec![den.clone()]);
        let b = RationalFunction::new(&num + &Polynomial::one(), vec![den.clone()]);
        assert!(!ratfun_equal(&a, &b));
        assert!(ratfun_equal(&a, &a.clone()));
        let mut differs = 0;
        for _ in 0..5 {
            let pt = random_point(&mut rng);
            if let (Some(va), Some(vb)) = (a.eval(&pt), b.eval(&pt)) {
                if va != vb {
                    differs += 1;
                }
            }
        }
        assert!(differs > 0, "evaluation never separated {a} from {b}");
    }
}

#[test]
fn compose_of_shifted_multiplication() {
    let a = ShiftOperator::term(rf(px()), ShiftVec::unit(x(), 1));
    let expected = ShiftOperator::term(rf(&px() * &(&px() + &h())), ShiftVec::unit(x(), 2));
    assert!(a.compose(&a).equals(&expected));
}

#[test]
fn compose_with_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = random_op(&mut rng, 3);
    assert!(a.compose(&ShiftOperator::identity()).equals(&a));
    assert!(ShiftOperator::identity().compose(&a).equals(&a));
}

#[test]
fn apply_shift_and_identity() {
    let inv_x = RationalFunction::new(Polynomial::one(), vec![px()]);
    let shifted = ShiftOperator::shift(x(), 1).apply(&inv_x);
    let expected = RationalFunction::new(Polynomial::one(), vec![&px() + &h()]);
    assert!(ratfun_equal(&shifted, &expected));

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = random_ratfun(&mut rng);
    assert!(ratfun_equal(&ShiftOperator::identity().apply(&f), &f));
}

#[test]
fn apply_two_term_operator() {
    let op = &ShiftOperator::term(rf(px()), ShiftVec::unit(x(), 1)) + &ShiftOperator::shift(x(), -1);
    let got = op.apply(&rf(px()));
    let expected = &(&px() * &(&px() + &h())) + &(&px() - &h());
    assert!(ratfun_equal(&got, &rf(expected)));
}

#[test]
fn commutator_antisymmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let a = random_op(&mut rng, 3);
    let b = random_op(&mut rng, 3);
    assert!(a.commutator(&a).is_zero());
    assert!((&a.commutator(&b) + &b.commutator(&a)).is_zero());
}

#[test]
fn i_odd_one_matches_expansion() {
    let g = build_generator(GeneratorTag::IOdd { k: 1 }, 3).unwrap();
    let half_h = h().scale(&Scalar::ratio(1, 2));
    let up = &(&px() - &py()) + &half_h;
    let down = &(&py() + &px()) - &half_h;
    let coeff = |p: Polynomial| RationalFunction::new(p.scale(&Scalar::ratio(-1, 2)), vec![h()]);
    let expected = &ShiftOperator::term(coeff(up), ShiftVec::unit(x(), 1))
        + &ShiftOperator::term(coeff(down), ShiftVec::unit(x(), -1));
    assert!(g.op.equals(&expected), "got {}", g.op);
    assert!(!g.sqrt2_omitted);
}

#[test]
fn i_even_zero_is_multiplication() {
    let g = build_generator(GeneratorTag::IEvenTimesI { k: 0 }, 3).unwrap();
    let expected = ShiftOperator::multiplication(RationalFunction::new(-px(), vec![h()]));
    assert!(g.op.equals(&expected), "got {}", g.op);
}

#[test]
fn cartan_one_is_multiplication() {
    let g = build_generator(GeneratorTag::FCartan { j: 1 }, 3).unwrap();
    let expected = ShiftOperator::multiplication(RationalFunction::new(px(), vec![h()]));
    assert!(g.op.equals(&expected), "got {}", g.op);
}

#[test]
fn short_root_records_omitted_normalization() {
    let g = build_generator(GeneratorTag::FSimple { j: 1 }, 3).unwrap();
    assert!(g.sqrt2_omitted);
    let g = build_generator(GeneratorTag::FSimple { j: 1 }, 5).unwrap();
    assert!(!g.sqrt2_omitted);
}

#[test]
fn index_errors_name_the_bound() {
    let err = build_generator(GeneratorTag::IOdd { k: 2 }, 4).unwrap_err();
    match err {
        GtError::IndexOutOfRange { bound, n, .. } => {
            assert_eq!(n, 4);
            assert!(bound.contains("2k+1"), "{bound}");
        }
        other => panic!("unexpected {other:?}"),
    }
    let err = build_generator(
        GeneratorTag::J {
            k: 0,
            delta: Sign::Minus,
            j: 1,
            eps: Sign::Plus,
        },
        5,
    )
    .unwrap_err();
    assert!(matches!(err, GtError::IndexOutOfRange { .. }));
    assert!(build_generator(GeneratorTag::P { k: 1, j: 2, eps: Sign::Plus }, 5).is_err());
}

#[test]
fn rank_bounds() {
    assert!(matches!(verify_serre(2), Err(GtError::RankOutOfRange { n: 2, .. })));
    assert!(matches!(verify_serre(9), Err(GtError::RankOutOfRange { .. })));
    assert!(matches!(build_generator(GeneratorTag::Q { k: 1, j: 1 }, 2), Err(GtError::RankOutOfRange { .. })));
    assert!(verify_lemma_a1(0).is_err());
    assert!(verify_lemma_a1(4).is_err());
}

#[test]
fn serre_relations_three_to_seven() {
    for n in 3..=7 {
        let r = verify_serre(n).unwrap();
        assert!(!r.records.is_empty());
        let bad: Vec<_> = r.failures().map(|f| f.id.clone()).collect();
        assert!(bad.is_empty(), "so({n}): {bad:?}");
    }
}

#[test]
fn serre_detects_sign_mutation() {
    for (n, k) in [(4, 1), (5, 1), (5, 2), (6, 2), (7, 3)] {
        let r = verify_serre_mutated(n, k).unwrap();
        assert!(!r.all_pass(), "mutation k={k} in so({n}) went unnoticed");
    }
}

#[test]
fn tau_conjugation_three_to_seven() {
    for n in 3..=7 {
        let r = verify_tau(n).unwrap();
        let bad: Vec<_> = r.failures().map(|f| f.id.clone()).collect();
        assert!(bad.is_empty(), "so({n}): {bad:?}");
    }
}

#[test]
fn tau_is_an_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let flip = tau_flags();
    for _ in 0..10 {
        let a = random_op(&mut rng, 3);
        assert!(a.conjugate_by_flip(&flip).conjugate_by_flip(&flip).equals(&a));
    }
}

#[test]
fn lemma_a1_closed_forms() {
    for n in 1..=3 {
        let r = verify_lemma_a1(n).unwrap();
        assert!(!r.records.is_empty());
        let bad: Vec<_> = r.failures().map(|f| f.id.clone()).collect();
        assert!(bad.is_empty(), "n={n}: {bad:?}");
    }
}

#[test]
fn partial_fraction_small_cases() {
    assert!(check_partial_fraction_identity(1, &[Scalar::int(4)], &[]).unwrap());
    assert!(check_partial_fraction_identity(2, &[Scalar::int(3), Scalar::int(5)], &[Scalar::int(7)]).unwrap());
    let err = check_partial_fraction_identity(2, &[Scalar::int(3), Scalar::int(3)], &[Scalar::int(1)]).unwrap_err();
    assert_eq!(err, GtError::RepeatedNode { i: 0, j: 1 });
    assert!(matches!(
        check_partial_fraction_identity(3, &[Scalar::int(1), Scalar::int(2)], &[]),
        Err(GtError::LengthMismatch { .. })
    ));
}

#[test]
fn partial_fraction_random_gaussian_rationals() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for m in 1..=6 {
        for _ in 0..100 {
            let mut xs: Vec<Scalar> = Vec::new();
            while xs.len() < m {
                let s = random_scalar(&mut rng);
                if !xs.contains(&s) {
                    xs.push(s);
                }
            }
            let ys: Vec<Scalar> = (0..m - 1).map(|_| random_scalar(&mut rng)).collect();
            assert!(check_partial_fraction_identity(m, &xs, &ys).unwrap(), "m={m}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn compose_is_associative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_op(&mut rng, 2);
        let b = random_op(&mut rng, 2);
        let c = random_op(&mut rng, 2);
        let left = a.compose(&b).compose(&c);
        let right = a.compose(&b.compose(&c));
        prop_assert!(is_normal_form(&left));
        prop_assert!(left.equals(&right));
    }

    #[test]
    fn commutator_satisfies_jacobi(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_op(&mut rng, 2);
        let b = random_op(&mut rng, 2);
        let c = random_op(&mut rng, 2);
        let sum = &(&a.commutator(&b.commutator(&c)) + &b.commutator(&c.commutator(&a)))
            + &c.commutator(&a.commutator(&b));
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn compose_is_bilinear(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_op(&mut rng, 3);
        let b = random_op(&mut rng, 3);
        let c = random_op(&mut rng, 3);
        let s = random_nonzero_scalar(&mut rng);
        let lhs = a.compose(&(&b.scale(&s) + &c));
        let rhs = &a.compose(&b).scale(&s) + &a.compose(&c);
        prop_assert!(is_normal_form(&lhs));
        prop_assert!(lhs.equals(&rhs));
        let lhs = (&b + &c).commutator(&a);
        let rhs = &b.commutator(&a) + &c.commutator(&a);
        prop_assert!(lhs.equals(&rhs));
    }

    #[test]
    fn apply_respects_composition(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_op(&mut rng, 2);
        let b = random_op(&mut rng, 2);
        let f = random_ratfun(&mut rng);
        let lhs = a.compose(&b).apply(&f);
        let rhs = a.apply(&b.apply(&f));
        prop_assert!(ratfun_equal(&lhs, &rhs));
    }
}
