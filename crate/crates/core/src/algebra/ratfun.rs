//! Rational functions over `Q(i)` with a factored denominator.
//!
//! The denominator is a product of monic factors with multiplicities. Every
//! construction in this crate produces linear factors, which lets cancellation
//! use a cheap vanishing test on the factor's hyperplane before attempting an
//! exact division. Nonlinear factors are handled by trial division alone.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::modp::ModField;
use super::poly::{Polynomial, ReducedPoly};
use super::scalar::Scalar;
use super::var::{ShiftVec, Var, NVARS};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    /// Sorted, distinct, monic, non-constant factors with positive multiplicity.
    den: Vec<(Polynomial, u32)>,
}

impl Default for RationalFunction {
    fn default() -> Self {
        RationalFunction::zero()
    }
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Vec::new(),
        }
    }

    pub fn one() -> Self {
        RationalFunction::from_poly(Polynomial::one())
    }

    pub fn constant(c: Scalar) -> Self {
        RationalFunction::from_poly(Polynomial::constant(c))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn var(v: Var) -> Self {
        RationalFunction::from_poly(Polynomial::var(v))
    }

    /// `num / (f_1 f_2 ... f_m)`; factors may repeat and need not be monic.
    /// Panics if any factor is zero.
    pub fn new(num: Polynomial, factors: Vec<Polynomial>) -> Self {
        RationalFunction::with_multiplicities(num, factors.into_iter().map(|f| (f, 1)).collect())
    }

    /// `num / prod f_i^{m_i}`.
    pub fn with_multiplicities(mut num: Polynomial, factors: Vec<(Polynomial, u32)>) -> Self {
        let mut den: Vec<(Polynomial, u32)> = Vec::with_capacity(factors.len());
        let mut scale = Scalar::one();
        for (f, m) in factors {
            assert!(!f.is_zero(), "zero factor in denominator");
            if m == 0 {
                continue;
            }
            if let Some(c) = f.as_constant() {
                scale *= &c.pow(m);
                continue;
            }
            let (lc, monic) = f.make_monic();
            if !lc.is_one() {
                scale *= &lc.pow(m);
            }
            den.push((monic, m));
        }
        if !scale.is_one() {
            num = num.scale(&scale.inv());
        }
        let mut r = RationalFunction {
            num,
            den: merge_factors(den),
        };
        r.cancel();
        r
    }

    /// `1 / f`.
    pub fn recip_poly(f: Polynomial) -> Self {
        RationalFunction::new(Polynomial::one(), alloc::vec![f])
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[(Polynomial, u32)] {
        &self.den
    }

    /// Expanded denominator.
    pub fn denominator(&self) -> Polynomial {
        let mut d = Polynomial::one();
        for (f, m) in &self.den {
            d = &d * &f.pow(*m);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Bitmask of variables occurring in numerator or denominator.
    pub fn support(&self) -> u32 {
        self.den
            .iter()
            .fold(self.num.support(), |acc, (f, _)| acc | f.support())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    /// Multiplicative inverse. The old numerator becomes a single denominator
    /// factor, split into the known factors where they divide it.
    pub fn inv(&self) -> Self {
        assert!(!self.num.is_zero(), "inverse of zero rational function");
        let num = self.denominator();
        let mut factors: Vec<(Polynomial, u32)> = Vec::new();
        let mut rest = self.num.clone();
        if let Some(c) = rest.as_constant() {
            return RationalFunction::from_poly(num.scale(&c.inv()));
        }
        // peel off factors we already know, so the denominator stays linear
        for (f, _) in &self.den {
            let mut m = 0;
            while let Some(q) = rest.div_exact(f) {
                rest = q;
                m += 1;
            }
            if m > 0 {
                factors.push((f.clone(), m));
            }
        }
        factors.push((rest, 1));
        RationalFunction::with_multiplicities(num, factors)
    }

    /// Substitutes `v -> v + s_v h`.
    pub fn shift(&self, s: &ShiftVec) -> Self {
        if s.is_zero() {
            return self.clone();
        }
        let factors = self.den.iter().map(|(f, m)| (f.shift(s), *m)).collect();
        RationalFunction::with_multiplicities_no_cancel(self.num.shift(s), factors)
    }

    /// Substitutes `v -> -v` for every flagged variable.
    pub fn flip_signs(&self, flip: &[bool; NVARS]) -> Self {
        let factors = self
            .den
            .iter()
            .map(|(f, m)| (f.flip_signs(flip), *m))
            .collect();
        RationalFunction::with_multiplicities_no_cancel(self.num.flip_signs(flip), factors)
    }

    /// Like `with_multiplicities` for inputs that are already in lowest terms up
    /// to a change of variables (shifts and sign flips preserve coprimality).
    fn with_multiplicities_no_cancel(mut num: Polynomial, factors: Vec<(Polynomial, u32)>) -> Self {
        let mut den = Vec::with_capacity(factors.len());
        let mut scale = Scalar::one();
        for (f, m) in factors {
            let (lc, monic) = f.make_monic();
            if !lc.is_one() {
                scale *= &lc.pow(m);
            }
            den.push((monic, m));
        }
        if !scale.is_one() {
            num = num.scale(&scale.inv());
        }
        RationalFunction {
            num,
            den: merge_factors(den),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.iter().map(|(f, m)| (f.clone(), m * e)).collect(),
        }
    }

    /// Exact evaluation; `None` at a pole.
    pub fn eval<F: Fn(Var) -> Scalar>(&self, value: F) -> Option<Scalar> {
        let mut d = Scalar::one();
        for (f, m) in &self.den {
            let v = f.eval(&value);
            if v.is_zero() {
                return None;
            }
            d *= &v.pow(*m);
        }
        Some(&self.num.eval(&value) / &d)
    }

    pub fn eval_complex(&self, point: &[Complex64; NVARS]) -> Complex64 {
        let mut d = Complex64::new(1.0, 0.0);
        for (f, m) in &self.den {
            d *= f.eval_complex(point).powu(*m);
        }
        self.num.eval_complex(point) / d
    }

    /// Removes every denominator factor that divides the numerator.
    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        if self.den.is_empty() {
            return;
        }
        let field = ModField;
        let mut reduced = self.num.reduce_mod(&field);
        let mut kept = Vec::with_capacity(self.den.len());
        for (f, mut m) in core::mem::take(&mut self.den) {
            while m > 0 && may_divide(&field, reduced.as_ref(), &f) {
                match self.num.div_exact(&f) {
                    Some(q) => {
                        self.num = q;
                        reduced = self.num.reduce_mod(&field);
                        m -= 1;
                    }
                    None => break,
                }
            }
            if m > 0 {
                kept.push((f, m));
            }
        }
        self.den = kept;
    }
}

/// Necessary condition for `f | p`: for linear `f`, `p` vanishes on `f = 0`.
/// Tested at a fixed pseudo-random point of the hyperplane modulo a prime.
fn may_divide(field: &ModField, p: Option<&ReducedPoly>, f: &Polynomial) -> bool {
    let Some(p) = p else {
        return true;
    };
    if f.total_degree() != 1 {
        return true;
    }
    // the variable to solve for: any with a nonzero coefficient
    let Some(v) = (0..NVARS)
        .filter_map(Var::from_id)
        .find(|&v| !f.linear_coeff(v).is_zero())
    else {
        return true;
    };
    let mut point = [0u64; NVARS];
    for (id, slot) in point.iter_mut().enumerate() {
        *slot = splitmix(0x5eed_0000 + id as u64) % ModField::MODULUS;
    }
    point[v.id()] = 0;
    let Some(rest) = f.eval_mod(field, &point) else {
        return true;
    };
    let Some(a) = f.linear_coeff(v).reduce_mod(field) else {
        return true;
    };
    let Some(a_inv) = field.inv(a) else {
        return true;
    };
    point[v.id()] = field.mul(field.sub(0, rest), a_inv);
    p.eval(field, &point) == 0
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn merge_factors(mut den: Vec<(Polynomial, u32)>) -> Vec<(Polynomial, u32)> {
    den.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(Polynomial, u32)> = Vec::with_capacity(den.len());
    for (f, m) in den {
        match out.last_mut() {
            Some((g, k)) if *g == f => *k += m,
            _ => out.push((f, m)),
        }
    }
    out
}

/// Multiplies `p` by `prod f^{m}` over the given factor list.
fn mul_factors(p: &Polynomial, factors: &[(Polynomial, u32)]) -> Polynomial {
    let mut out = p.clone();
    for (f, m) in factors {
        for _ in 0..*m {
            out = &out * f;
        }
    }
    out
}

/// Least common multiple of two sorted factor lists, with the cofactors
/// `lcm / a` and `lcm / b`.
type FactorList = Vec<(Polynomial, u32)>;

fn lcm_factors(a: &[(Polynomial, u32)], b: &[(Polynomial, u32)]) -> (FactorList, FactorList, FactorList) {
    let (mut lcm, mut ca, mut cb) = (Vec::new(), Vec::new(), Vec::new());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => core::cmp::Ordering::Less,
            _ => core::cmp::Ordering::Greater,
        };
        match ord {
            core::cmp::Ordering::Less => {
                lcm.push(a[i].clone());
                cb.push(a[i].clone());
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                lcm.push(b[j].clone());
                ca.push(b[j].clone());
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                let (f, ma) = &a[i];
                let mb = b[j].1;
                let m = (*ma).max(mb);
                lcm.push((f.clone(), m));
                if m > *ma {
                    ca.push((f.clone(), m - ma));
                }
                if m > mb {
                    cb.push((f.clone(), m - mb));
                }
                i += 1;
                j += 1;
            }
        }
    }
    (lcm, ca, cb)
}

fn add_impl(a: &RationalFunction, b: &RationalFunction, negate_b: bool) -> RationalFunction {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if negate_b { -b } else { b.clone() };
    }
    let (lcm, ca, cb) = lcm_factors(&a.den, &b.den);
    let na = mul_factors(&a.num, &ca);
    let nb = mul_factors(&b.num, &cb);
    let num = if negate_b { &na - &nb } else { &na + &nb };
    let mut r = RationalFunction { num, den: lcm };
    r.cancel();
    r
}

/// Sum of many terms over their common denominator, cancelled once at the end.
pub(crate) fn sum_all(terms: &[RationalFunction]) -> RationalFunction {
    let mut lcm: FactorList = Vec::new();
    for t in terms {
        lcm = lcm_factors(&lcm, &t.den).0;
    }
    let mut num = Polynomial::zero();
    for t in terms {
        let (_, cofactor, _) = lcm_factors(&t.den, &lcm);
        num = &num + &mul_factors(&t.num, &cofactor);
    }
    let mut r = RationalFunction { num, den: lcm };
    r.cancel();
    r
}

/// `a == b` as rational functions, decided by the exact zero test on `a - b`.
pub fn ratfun_equal(a: &RationalFunction, b: &RationalFunction) -> bool {
    if a == b {
        return true;
    }
    add_impl(a, b, true).is_zero()
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        add_impl(self, rhs, false)
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        add_impl(self, rhs, true)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_empty() && rhs.den.is_empty() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        // both operands are in lowest terms, so only cross pairs can cancel
        let mut left = RationalFunction {
            num: self.num.clone(),
            den: rhs.den.clone(),
        };
        left.cancel();
        let mut right = RationalFunction {
            num: rhs.num.clone(),
            den: self.den.clone(),
        };
        right.cancel();
        let mut den = left.den;
        den.extend(right.den);
        RationalFunction {
            num: &left.num * &right.num,
            den: merge_factors(den),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &Scalar) -> RationalFunction {
        self.scale(rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl Add for RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: RationalFunction) -> RationalFunction {
        &self + &rhs
    }
}

impl Sub for RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: RationalFunction) -> RationalFunction {
        &self - &rhs
    }
}

impl Mul for RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: RationalFunction) -> RationalFunction {
        &self * &rhs
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl From<Scalar> for RationalFunction {
    fn from(c: Scalar) -> Self {
        RationalFunction::constant(c)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / (", self.num)?;
        for (k, (p, m)) in self.den.iter().enumerate() {
            if k > 0 {
                write!(f, " * ")?;
            }
            if *m == 1 {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p})^{m}")?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Polynomial {
        Polynomial::gamma(1, 1)
    }
    fn y() -> Polynomial {
        Polynomial::gamma(2, 1)
    }

    #[test]
    fn cancels_linear_factor() {
        let r = RationalFunction::new(&x().pow(2) - &y().pow(2), alloc::vec![&x() - &y()]);
        assert!(r.is_polynomial());
        assert!(ratfun_equal(&r, &RationalFunction::from_poly(&x() + &y())));
    }

    #[test]
    fn partial_fractions_recombine() {
        // 1/(x-1) - 1/(x+1) = 2/(x^2-1)
        let one = Polynomial::int(1);
        let a = RationalFunction::recip_poly(&x() - &one);
        let b = RationalFunction::recip_poly(&x() + &one);
        let lhs = &a - &b;
        let rhs = RationalFunction::new(Polynomial::int(2), alloc::vec![&x() - &one, &x() + &one]);
        assert!(ratfun_equal(&lhs, &rhs));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn shift_of_reciprocal() {
        let r = RationalFunction::recip_poly(x());
        let s = ShiftVec::unit(Var::gamma(1, 1), 1);
        let expect = RationalFunction::recip_poly(&x() + &Polynomial::h());
        assert!(ratfun_equal(&r.shift(&s), &expect));
    }

    #[test]
    fn inverse_round_trip() {
        let r = RationalFunction::new(
            &(&x() + &y()) * &(&x() - &Polynomial::h()),
            alloc::vec![&y() + &Polynomial::int(3)],
        );
        let p = &r * &r.inv();
        assert!(ratfun_equal(&p, &RationalFunction::one()));
    }

    #[test]
    fn non_monic_factor_normalized() {
        let two_x = x().scale(&Scalar::int(2));
        let r = RationalFunction::new(Polynomial::int(1), alloc::vec![two_x]);
        let s = RationalFunction::new(Polynomial::constant(Scalar::ratio(1, 2)), alloc::vec![x()]);
        assert_eq!(r, s);
    }
}
