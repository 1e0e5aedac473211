//! Construction of the `so(N)` generators as shift operators.
//!
//! Variables are the Gelfand-Tsetlin entries `gamma_{row,col}` (rows `1..N-1`)
//! and the step `h = ic`. Every coefficient is a rational function over `Q(i)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{Polynomial, RationalFunction, Scalar, ShiftOperator, ShiftVec, Var};

/// Smallest and largest supported `N` for `so(N)`.
pub const MIN_N: u8 = 3;
pub const MAX_N: u8 = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GtError {
    #[error("rank N = {n} outside the supported range {min}..={max}")]
    RankOutOfRange { n: i64, min: i64, max: i64 },
    #[error("{tag} is not defined in so({n}): {bound}")]
    IndexOutOfRange { tag: String, n: u8, bound: String },
    #[error("partial-fraction nodes x[{i}] and x[{j}] coincide")]
    RepeatedNode { i: usize, j: usize },
    #[error("partial-fraction data: expected {expected} values of y, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(v: i64) -> Sign {
        if v >= 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// `(-1)^k`.
    pub fn parity(k: i64) -> Sign {
        if k.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Names of the operators this module can build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorTag {
    /// `I_{2k+1,2k}` written out term by term, `k >= 1`.
    IOdd { k: u8 },
    /// `i I_{2k+2,2k+1}` written out term by term, `k >= 0`.
    IEvenTimesI { k: u8 },
    /// Term of `I_{2k+1,2k}` shifting `gamma_{2k-1,j}` by `eps h`.
    P { k: u8, j: u8, eps: Sign },
    /// Upward term of `I_{2k+2,2k+1}`.
    Q { k: u8, j: u8 },
    /// Downward term of `I_{2k+2,2k+1}`.
    R { k: u8, j: u8 },
    /// Multiplicative term of `I_{2k+2,2k+1}`.
    T { k: u8 },
    /// Weighted combination of the `Q`, `R`, `T` terms of `I_{2k+2,2k+1}`.
    J { k: u8, delta: Sign, j: u8, eps: Sign },
    /// `I_{a,b}` for `a > b`: simple ones from the explicit formulas, the rest
    /// by iterated commutators `I_{a,c} = [I_{a,b}, I_{b,c}]`.
    I { a: u8, b: u8 },
    /// Raising simple-root generator `F_{j,j+1}`. For `N = 2m+1` and `j = m`
    /// this is `I_{2m+1,2m} + i I_{2m+1,2m-1}` without the `1/sqrt(2)`.
    FSimple { j: u8 },
    /// Lowering counterpart `F_{j+1,j}` (same conventions).
    FLower { j: u8 },
    /// Cartan generator `F_{jj} = -i I_{2j,2j-1}`.
    FCartan { j: u8 },
}

impl fmt::Display for GeneratorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GeneratorTag::IOdd { k } => write!(f, "I_odd(k={k})"),
            GeneratorTag::IEvenTimesI { k } => write!(f, "iI_even(k={k})"),
            GeneratorTag::P { k, j, eps } => write!(f, "P(k={k},j={j},eps={eps})"),
            GeneratorTag::Q { k, j } => write!(f, "Q(k={k},j={j})"),
            GeneratorTag::R { k, j } => write!(f, "R(k={k},j={j})"),
            GeneratorTag::T { k } => write!(f, "T(k={k})"),
            GeneratorTag::J { k, delta, j, eps } => {
                write!(f, "J(k={k},delta={delta},j={j},eps={eps})")
            }
            GeneratorTag::I { a, b } => write!(f, "I[{a},{b}]"),
            GeneratorTag::FSimple { j } => write!(f, "F[{j},{}]", j + 1),
            GeneratorTag::FLower { j } => write!(f, "F[{},{j}]", j + 1),
            GeneratorTag::FCartan { j } => write!(f, "F[{j},{j}]"),
        }
    }
}

/// A built operator plus bookkeeping about omitted normalizations.
#[derive(Debug, Clone)]
pub struct Generator {
    pub tag: GeneratorTag,
    pub n: u8,
    pub op: ShiftOperator,
    /// True when the true generator is `op / sqrt(2)`.
    pub sqrt2_omitted: bool,
}

pub fn check_rank(n: i64) -> Result<u8, GtError> {
    if (MIN_N as i64..=MAX_N as i64).contains(&n) {
        Ok(n as u8)
    } else {
        Err(GtError::RankOutOfRange {
            n,
            min: MIN_N as i64,
            max: MAX_N as i64,
        })
    }
}

/// Builds one operator of `so(n)`.
pub fn build_generator(tag: GeneratorTag, n: u8) -> Result<Generator, GtError> {
    GeneratorSet::new(n)?.build(tag)
}

// ---------------------------------------------------------------------------
// polynomial shorthands

fn g(row: u8, col: u8) -> Polynomial {
    Polynomial::gamma(row, col)
}

fn h() -> Polynomial {
    Polynomial::h()
}

/// `q * h`.
fn h_times(q: Scalar) -> Polynomial {
    h().scale(&q)
}

fn half() -> Scalar {
    Scalar::ratio(1, 2)
}

fn sgn(s: Sign) -> Scalar {
    Scalar::int(s.value())
}

fn prod(factors: impl IntoIterator<Item = Polynomial>) -> Polynomial {
    factors.into_iter().fold(Polynomial::one(), |acc, f| &acc * &f)
}

fn row_len(row: u8) -> u8 {
    crate::algebra::var::row_len(row)
}

fn shift_of(row: u8, col: u8, s: Sign) -> ShiftVec {
    ShiftVec::unit(Var::gamma(row, col), s.value() as i8)
}

// ---------------------------------------------------------------------------
// explicit terms

/// `P^eps_{k,j}`.
pub(crate) fn p_term(k: u8, j: u8, eps: Sign) -> ShiftOperator {
    let e = sgn(eps);
    let x = g(2 * k - 1, j);
    let mut num = Vec::new();
    if k >= 2 {
        for r in 1..=row_len(2 * k - 2) {
            // gamma_{2k-1,j} + eps (gamma_{2k-2,r} + h/2)
            num.push(&x + &(&g(2 * k - 2, r) + &h_times(half())).scale(&e));
        }
    }
    for r in 1..=row_len(2 * k) {
        // gamma_{2k-1,j} - eps (gamma_{2k,r} - h/2)
        num.push(&x - &(&g(2 * k, r) - &h_times(half())).scale(&e));
    }
    let mut den = alloc::vec![h(), Polynomial::int(2)];
    for r in 1..=row_len(2 * k - 1) {
        if r == j {
            continue;
        }
        let y = g(2 * k - 1, r);
        den.push(&x - &y);
        den.push(&(&x + &y) + &h_times(e.clone()));
    }
    let coeff = RationalFunction::new(-prod(num), den);
    ShiftOperator::term(coeff, shift_of(2 * k - 1, j, eps))
}

/// `(gamma + h/2)^2 - y^2` and friends, as a product of two linear forms.
fn diff_of_squares(a: &Polynomial, b: &Polynomial) -> Polynomial {
    &(a - b) * &(a + b)
}

/// Denominator factors `2 gamma_{2k,j} (gamma_{2k,j} + sign h/2) prod_{r != j} (gamma_{2k,j}^2 - gamma_{2k,r}^2)`.
fn qr_denominator(k: u8, j: u8, s: Sign) -> Vec<Polynomial> {
    let x = g(2 * k, j);
    let mut den = alloc::vec![
        Polynomial::int(2),
        x.clone(),
        &x + &h_times(&half() * &sgn(s))
    ];
    for r in 1..=row_len(2 * k) {
        if r == j {
            continue;
        }
        let y = g(2 * k, r);
        den.push(&x - &y);
        den.push(&x + &y);
    }
    den
}

/// Coefficient `A_{k,j}` of the upward shift (without the `1/h` or `i/h` prefactor).
fn a_coeff(k: u8, j: u8) -> RationalFunction {
    let xs = &g(2 * k, j) + &h_times(half());
    let num = prod((1..=row_len(2 * k + 1)).map(|r| diff_of_squares(&xs, &g(2 * k + 1, r))));
    RationalFunction::new(num, qr_denominator(k, j, Sign::Plus))
}

/// Coefficient `B_{k,j}` of the downward shift.
fn b_coeff(k: u8, j: u8) -> RationalFunction {
    let xs = &g(2 * k, j) - &h_times(half());
    let num = prod((1..=row_len(2 * k - 1)).map(|r| diff_of_squares(&xs, &g(2 * k - 1, r))));
    RationalFunction::new(num, qr_denominator(k, j, Sign::Minus))
}

/// `X_k = prod gamma_{2k-1} prod gamma_{2k+1} / prod (gamma_{2k}+h/2)(gamma_{2k}-h/2)`.
fn x_coeff(k: u8) -> RationalFunction {
    let mut num = prod((1..=row_len(2 * k + 1)).map(|r| g(2 * k + 1, r)));
    if k >= 1 {
        num = &num * &prod((1..=row_len(2 * k - 1)).map(|r| g(2 * k - 1, r)));
    }
    let mut den = Vec::new();
    if k >= 1 {
        for r in 1..=row_len(2 * k) {
            den.push(&g(2 * k, r) + &h_times(half()));
            den.push(&g(2 * k, r) - &h_times(half()));
        }
    }
    RationalFunction::new(num, den)
}

fn over_h(c: Scalar) -> RationalFunction {
    RationalFunction::new(Polynomial::constant(c), alloc::vec![h()])
}

pub(crate) fn q_term(k: u8, j: u8) -> ShiftOperator {
    let coeff = &over_h(Scalar::one()) * &a_coeff(k, j);
    ShiftOperator::term(coeff, shift_of(2 * k, j, Sign::Plus))
}

pub(crate) fn r_term(k: u8, j: u8) -> ShiftOperator {
    let coeff = &over_h(Scalar::one()) * &b_coeff(k, j);
    ShiftOperator::term(coeff, shift_of(2 * k, j, Sign::Minus))
}

pub(crate) fn t_term(k: u8) -> ShiftOperator {
    ShiftOperator::multiplication(&over_h(Scalar::i()) * &x_coeff(k))
}

/// `J^eps_{k,delta,j}`: each `Q`, `R`, `T` term multiplied on the left by a
/// weight `eps h / (gamma_{2k+delta,j} - ...)`.
pub(crate) fn j_term(k: u8, delta: Sign, j: u8, eps: Sign) -> ShiftOperator {
    let e = sgn(eps);
    let row = (2 * k as i64 + delta.value()) as u8;
    let z = g(row, j);
    let eh = h_times(e.clone());
    let mut out = ShiftOperator::zero();
    if k >= 1 {
        for s in 1..=row_len(2 * k) {
            let wq = RationalFunction::new(
                eh.clone(),
                alloc::vec![&z - &(&g(2 * k, s) + &h_times(half())).scale(&e)],
            );
            out = &out + &q_term(k, s).left_mul(&wq);
            let wr = RationalFunction::new(
                eh.clone(),
                alloc::vec![&z + &(&g(2 * k, s) - &h_times(half())).scale(&e)],
            );
            out = &out + &r_term(k, s).left_mul(&wr);
        }
    }
    let wt = RationalFunction::new(eh, alloc::vec![z]);
    &out + &t_term(k).left_mul(&wt)
}

/// `I_{2k+1,2k}` as printed: the two sums over `j` with explicit coefficients.
fn i_odd_literal(k: u8) -> ShiftOperator {
    let mut out = ShiftOperator::zero();
    let x = |j| g(2 * k - 1, j);
    for j in 1..=row_len(2 * k - 1) {
        // first sum: shift +h
        let mut num = Vec::new();
        let mut num_m = Vec::new();
        if k >= 2 {
            for r in 1..=row_len(2 * k - 2) {
                num.push(&(&g(2 * k - 2, r) + &x(j)) + &h_times(half()));
                num_m.push(&(&x(j) - &g(2 * k - 2, r)) - &h_times(half()));
            }
        }
        for r in 1..=row_len(2 * k) {
            num.push(&(&x(j) - &g(2 * k, r)) + &h_times(half()));
            num_m.push(&(&g(2 * k, r) + &x(j)) - &h_times(half()));
        }
        let mut den = alloc::vec![h(), Polynomial::int(2)];
        let mut den_m = alloc::vec![h(), Polynomial::int(2)];
        for r in 1..=row_len(2 * k - 1) {
            if r != j {
                den.push(&x(j) - &x(r));
                den.push(&(&x(j) + &x(r)) + &h());
                den_m.push(&x(j) - &x(r));
                den_m.push(&(&x(j) + &x(r)) - &h());
            }
        }
        out = &out
            + &ShiftOperator::term(
                RationalFunction::new(-prod(num), den),
                shift_of(2 * k - 1, j, Sign::Plus),
            );
        out = &out
            + &ShiftOperator::term(
                RationalFunction::new(-prod(num_m), den_m),
                shift_of(2 * k - 1, j, Sign::Minus),
            );
    }
    out
}

/// `i I_{2k+2,2k+1}` as printed.
fn i_even_times_i_literal(k: u8) -> ShiftOperator {
    let mut out = ShiftOperator::zero();
    if k >= 1 {
        for j in 1..=row_len(2 * k) {
            out = &out
                + &ShiftOperator::term(
                    &over_h(Scalar::i()) * &a_coeff(k, j),
                    shift_of(2 * k, j, Sign::Plus),
                );
            out = &out
                + &ShiftOperator::term(
                    &over_h(Scalar::i()) * &b_coeff(k, j),
                    shift_of(2 * k, j, Sign::Minus),
                );
        }
    }
    &out - &ShiftOperator::multiplication(&over_h(Scalar::one()) * &x_coeff(k))
}

// ---------------------------------------------------------------------------

/// Memoizing builder for the operators of one `so(n)`.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    n: u8,
    cache: BTreeMap<(u8, u8), ShiftOperator>,
    /// `k` whose upward sum in `I_{2k+1,2k}` gets a flipped sign.
    mutation: Option<u8>,
}

impl GeneratorSet {
    pub fn new(n: u8) -> Result<Self, GtError> {
        check_rank(n as i64)?;
        Ok(GeneratorSet {
            n,
            cache: BTreeMap::new(),
            mutation: None,
        })
    }

    /// Deliberately corrupts `I_{2k+1,2k}` by negating its upward-shift sum.
    pub fn flip_first_sum_of_odd(&mut self, k: u8) -> Result<(), GtError> {
        self.validate(GeneratorTag::IOdd { k })?;
        self.cache.clear();
        self.mutation = Some(k);
        Ok(())
    }

    pub fn rank(&self) -> u8 {
        self.n
    }

    fn out_of_range(&self, tag: GeneratorTag, bound: String) -> GtError {
        GtError::IndexOutOfRange {
            tag: format!("{tag}"),
            n: self.n,
            bound,
        }
    }

    fn validate(&self, tag: GeneratorTag) -> Result<(), GtError> {
        let n = self.n;
        let need = |ok: bool, bound: String| -> Result<(), GtError> {
            if ok {
                Ok(())
            } else {
                Err(self.out_of_range(tag, bound))
            }
        };
        match tag {
            GeneratorTag::IOdd { k } => need(k >= 1 && 2 * k < n, format!("need 1 <= k and 2k+1 <= N={n}")),
            GeneratorTag::IEvenTimesI { k } => need(2 * k + 2 <= n, format!("need 2k+2 <= N={n}")),
            GeneratorTag::P { k, j, .. } => {
                need(k >= 1 && 2 * k < n, format!("need 1 <= k and 2k+1 <= N={n}"))?;
                need((1..=k).contains(&j), format!("need 1 <= j <= k={k}"))
            }
            GeneratorTag::Q { k, j } | GeneratorTag::R { k, j } => {
                need(k >= 1 && 2 * k + 2 <= n, format!("need 1 <= k and 2k+2 <= N={n}"))?;
                need((1..=k).contains(&j), format!("need 1 <= j <= k={k}"))
            }
            GeneratorTag::T { k } => need(2 * k + 2 <= n, format!("need 2k+2 <= N={n}")),
            GeneratorTag::J { k, delta, j, .. } => {
                need(2 * k + 2 <= n, format!("need 2k+2 <= N={n}"))?;
                match delta {
                    Sign::Plus => need((1..=k + 1).contains(&j), format!("delta=+1 needs 1 <= j <= k+1={}", k + 1)),
                    Sign::Minus => {
                        need(k >= 1, String::from("delta=-1 needs k >= 1"))?;
                        need((1..=k).contains(&j), format!("delta=-1 needs 1 <= j <= k={k}"))
                    }
                }
            }
            GeneratorTag::I { a, b } => need(b >= 1 && a > b && a <= n, format!("need 1 <= b < a <= N={n}")),
            GeneratorTag::FSimple { j } | GeneratorTag::FLower { j } => {
                need(j >= 1 && 2 * j < n, format!("need 1 <= j and 2j+1 <= N={n}"))
            }
            GeneratorTag::FCartan { j } => need(j >= 1 && 2 * j <= n, format!("need 1 <= j and 2j <= N={n}")),
        }
    }

    pub fn build(&mut self, tag: GeneratorTag) -> Result<Generator, GtError> {
        self.validate(tag)?;
        let mut sqrt2_omitted = false;
        let op = match tag {
            GeneratorTag::IOdd { k } => i_odd_literal(k),
            GeneratorTag::IEvenTimesI { k } => i_even_times_i_literal(k),
            GeneratorTag::P { k, j, eps } => p_term(k, j, eps),
            GeneratorTag::Q { k, j } => q_term(k, j),
            GeneratorTag::R { k, j } => r_term(k, j),
            GeneratorTag::T { k } => t_term(k),
            GeneratorTag::J { k, delta, j, eps } => j_term(k, delta, j, eps),
            GeneratorTag::I { a, b } => self.i(a, b),
            GeneratorTag::FSimple { j } => {
                let (op, last) = self.f_simple(j, Sign::Plus);
                sqrt2_omitted = last;
                op
            }
            GeneratorTag::FLower { j } => {
                let (op, last) = self.f_simple(j, Sign::Minus);
                sqrt2_omitted = last;
                op
            }
            GeneratorTag::FCartan { j } => self.i(2 * j, 2 * j - 1).scale(&-Scalar::i()),
        };
        Ok(Generator {
            tag,
            n: self.n,
            op,
            sqrt2_omitted,
        })
    }

    /// `I_{a,b}`, `a > b`. Indices must already be validated.
    pub fn i(&mut self, a: u8, b: u8) -> ShiftOperator {
        if let Some(op) = self.cache.get(&(a, b)) {
            return op.clone();
        }
        let op = if a == b + 1 {
            if a % 2 == 1 {
                // I_{2k+1,2k}
                let k = (a - 1) / 2;
                let op = i_odd_literal(k);
                if self.mutation == Some(k) {
                    let mut out = ShiftOperator::zero();
                    for (s, c) in op.terms() {
                        let up = s.entries().any(|(_, a)| a > 0);
                        out.add_term(*s, &if up { -c } else { c.clone() });
                    }
                    out
                } else {
                    op
                }
            } else {
                // I_{2k+2,2k+1} = -i (i I_{2k+2,2k+1})
                i_even_times_i_literal((a - 2) / 2).scale(&-Scalar::i())
            }
        } else {
            let top = self.i(a, a - 1);
            let rest = self.i(a - 1, b);
            top.commutator(&rest)
        };
        self.cache.insert((a, b), op.clone());
        op
    }

    /// Raising (`dir = Plus`) or lowering simple-root generator; the flag says
    /// whether the `1/sqrt(2)` of the short root was dropped.
    fn f_simple(&mut self, j: u8, dir: Sign) -> (ShiftOperator, bool) {
        let i = Scalar::i();
        let half = half();
        let n = self.n;
        if n % 2 == 1 && 2 * j + 1 == n {
            // short root: +-I_{2j+1,2j} + i I_{2j+1,2j-1}
            let a = self.i(2 * j + 1, 2 * j).scale(&sgn(dir));
            let b = self.i(2 * j + 1, 2 * j - 1).scale(&i);
            return (&a + &b, true);
        }
        let s1 = self.i(2 * j + 1, 2 * j);
        let s3 = self.i(2 * j + 2, 2 * j - 1);
        let d1 = self.i(2 * j + 2, 2 * j);
        let d2 = self.i(2 * j + 1, 2 * j - 1);
        let real = match dir {
            Sign::Plus => &s1 - &s3,
            Sign::Minus => &s3 - &s1,
        };
        let imag = &d1 + &d2;
        (&real.scale(&half) + &imag.scale(&(&half * &i)), false)
    }
}
