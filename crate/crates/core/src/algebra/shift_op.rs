//! Difference operators `sum_s c_s(gamma) e^{s h d/dgamma}` with rational coefficients.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use super::ratfun::{sum_all, RationalFunction};
use super::scalar::Scalar;
use super::var::{ShiftVec, Var, NVARS};

/// Normal form: one coefficient per shift vector, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ShiftOperator {
    terms: BTreeMap<ShiftVec, RationalFunction>,
}

impl ShiftOperator {
    pub fn zero() -> Self {
        ShiftOperator::default()
    }

    pub fn identity() -> Self {
        ShiftOperator::multiplication(RationalFunction::one())
    }

    /// Multiplication by a function (shift vector zero).
    pub fn multiplication(f: RationalFunction) -> Self {
        ShiftOperator::term(f, ShiftVec::zero())
    }

    /// The single term `f e^{s h d}`.
    pub fn term(f: RationalFunction, s: ShiftVec) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(s, f);
        }
        ShiftOperator { terms }
    }

    /// The pure shift `e^{amount h d/dv}`.
    pub fn shift(v: Var, amount: i8) -> Self {
        ShiftOperator::term(RationalFunction::one(), ShiftVec::unit(v, amount))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ShiftVec, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, s: &ShiftVec) -> Option<&RationalFunction> {
        self.terms.get(s)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `f e^{s}` in place, keeping the normal form.
    pub fn add_term(&mut self, s: ShiftVec, f: &RationalFunction) {
        if f.is_zero() {
            return;
        }
        match self.terms.entry(s) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(f.clone());
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + f;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return ShiftOperator::zero();
        }
        ShiftOperator {
            terms: self.terms.iter().map(|(s, f)| (*s, f.scale(c))).collect(),
        }
    }

    /// `f * self` (multiplication by `f` applied after `self`).
    pub fn left_mul(&self, f: &RationalFunction) -> Self {
        let mut out = ShiftOperator::zero();
        for (s, c) in &self.terms {
            out.add_term(*s, &(f * c));
        }
        out
    }

    /// `self * f` (multiplication by `f` applied before `self`).
    pub fn right_mul(&self, f: &RationalFunction) -> Self {
        let mut out = ShiftOperator::zero();
        for (s, c) in &self.terms {
            out.add_term(*s, &(c * &f.shift(s)));
        }
        out
    }

    /// `self ∘ other`: the coefficient of `other` is shifted by this term's
    /// shift vector before multiplying.
    pub fn compose(&self, other: &ShiftOperator) -> Self {
        let mut groups = BTreeMap::new();
        self.compose_into(other, false, &mut groups);
        ShiftOperator::from_groups(groups)
    }

    pub fn commutator(&self, other: &ShiftOperator) -> Self {
        let mut groups = BTreeMap::new();
        self.compose_into(other, false, &mut groups);
        other.compose_into(self, true, &mut groups);
        ShiftOperator::from_groups(groups)
    }

    fn compose_into(&self, other: &ShiftOperator, negate: bool, groups: &mut BTreeMap<ShiftVec, Vec<RationalFunction>>) {
        for (sa, ca) in &self.terms {
            for (sb, cb) in &other.terms {
                let t = ca * &cb.shift(sa);
                groups.entry(sa.add(sb)).or_default().push(if negate { -t } else { t });
            }
        }
    }

    fn from_groups(groups: BTreeMap<ShiftVec, Vec<RationalFunction>>) -> Self {
        let terms = groups
            .into_iter()
            .filter_map(|(s, parts)| {
                let c = sum_all(&parts);
                (!c.is_zero()).then_some((s, c))
            })
            .collect();
        ShiftOperator { terms }
    }

    pub fn apply(&self, f: &RationalFunction) -> RationalFunction {
        let mut acc = RationalFunction::zero();
        for (s, c) in &self.terms {
            acc = &acc + &(c * &f.shift(s));
        }
        acc
    }

    /// Conjugation `sigma ∘ self ∘ sigma` by the involution flipping the sign
    /// of every flagged variable (the flag of `h` included).
    pub fn conjugate_by_flip(&self, flip: &[bool; NVARS]) -> Self {
        let h_sign: i8 = if flip[Var::H.id()] { -1 } else { 1 };
        let mut out = ShiftOperator::zero();
        for (s, c) in &self.terms {
            let mut t = *s;
            for (id, a) in t.0.iter_mut().enumerate() {
                let sign: i8 = if flip[id] { -1 } else { 1 };
                *a *= sign * h_sign;
            }
            out.add_term(t, &c.flip_signs(flip));
        }
        out
    }

    /// Bitmask of variables moved by some term.
    pub fn shift_support(&self) -> u32 {
        let mut mask = 0u32;
        for s in self.terms.keys() {
            for (id, &a) in s.0.iter().enumerate() {
                if a != 0 {
                    mask |= 1 << id;
                }
            }
        }
        mask
    }

    /// Exact equality as operators.
    pub fn equals(&self, other: &ShiftOperator) -> bool {
        self == other || (self - other).is_zero()
    }
}

impl<'a> Add<&'a ShiftOperator> for &'a ShiftOperator {
    type Output = ShiftOperator;
    fn add(self, rhs: &ShiftOperator) -> ShiftOperator {
        let mut out = self.clone();
        for (s, f) in &rhs.terms {
            out.add_term(*s, f);
        }
        out
    }
}

impl<'a> Sub<&'a ShiftOperator> for &'a ShiftOperator {
    type Output = ShiftOperator;
    fn sub(self, rhs: &ShiftOperator) -> ShiftOperator {
        let mut out = self.clone();
        for (s, f) in &rhs.terms {
            out.add_term(*s, &-f);
        }
        out
    }
}

impl<'a> Mul<&'a ShiftOperator> for &'a ShiftOperator {
    type Output = ShiftOperator;
    fn mul(self, rhs: &ShiftOperator) -> ShiftOperator {
        self.compose(rhs)
    }
}

impl Neg for &ShiftOperator {
    type Output = ShiftOperator;
    fn neg(self) -> ShiftOperator {
        ShiftOperator {
            terms: self.terms.iter().map(|(s, f)| (*s, -f)).collect(),
        }
    }
}

impl Neg for ShiftOperator {
    type Output = ShiftOperator;
    fn neg(self) -> ShiftOperator {
        -&self
    }
}

impl Add for ShiftOperator {
    type Output = ShiftOperator;
    fn add(self, rhs: ShiftOperator) -> ShiftOperator {
        &self + &rhs
    }
}

impl Sub for ShiftOperator {
    type Output = ShiftOperator;
    fn sub(self, rhs: ShiftOperator) -> ShiftOperator {
        &self - &rhs
    }
}

impl fmt::Display for ShiftOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (s, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, "\n  + ")?;
            }
            write!(f, "[{c}] {s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ShiftOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
