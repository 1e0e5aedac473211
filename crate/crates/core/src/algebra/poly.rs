//! Sparse multivariate polynomials over `Q(i)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use super::modp::ModField;
use super::scalar::Scalar;
use super::var::{Monomial, ShiftVec, Var, NVARS};

/// A polynomial stored as terms sorted by strictly decreasing monomial
/// (lexicographic, `h` most significant). Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: Vec<(Monomial, Scalar)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        if c.is_zero() {
            Polynomial::zero()
        } else {
            Polynomial {
                terms: alloc::vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn int(v: i64) -> Self {
        Polynomial::constant(Scalar::int(v))
    }

    pub fn var(v: Var) -> Self {
        Polynomial {
            terms: alloc::vec![(Monomial::var(v), Scalar::one())],
        }
    }

    /// The formal step `h`.
    pub fn h() -> Self {
        Polynomial::var(Var::H)
    }

    pub fn gamma(row: u8, col: u8) -> Self {
        Polynomial::var(Var::gamma(row, col))
    }

    /// Builds a polynomial from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(iter: I) -> Self {
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in iter {
            accumulate(&mut acc, m, &c);
        }
        Polynomial::from_map(acc)
    }

    fn from_map(map: BTreeMap<Monomial, Scalar>) -> Self {
        let mut terms: Vec<(Monomial, Scalar)> =
            map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.reverse();
        Polynomial { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// `Some(c)` if the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(Scalar::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u8 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    /// Bit `id` is set iff the variable with that dense id occurs.
    pub fn support(&self) -> u32 {
        let mut mask = 0u32;
        for (m, _) in &self.terms {
            for (id, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    mask |= 1 << id;
                }
            }
        }
        mask
    }

    pub fn scale(&self, s: &Scalar) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides by the leading coefficient. Returns that coefficient and the monic
    /// polynomial. Panics on zero.
    pub fn make_monic(&self) -> (Scalar, Polynomial) {
        let lc = self.leading().expect("monic normalization of zero").1.clone();
        if lc.is_one() {
            return (lc, self.clone());
        }
        let inv = lc.inv();
        (lc, self.scale(&inv))
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        let (lm, lc) = d.leading().expect("division by zero polynomial");
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.inv()));
        }
        let lc_inv = lc.inv();
        let mut rem: BTreeMap<Monomial, Scalar> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Monomial, Scalar)> = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = &c * &lc_inv;
            for (dm, dc) in d.terms.iter().skip(1) {
                let prod = &qc * dc;
                accumulate(&mut rem, dm.mul(&qm), &-prod);
            }
            quot.push((qm, qc));
        }
        Some(Polynomial { terms: quot })
    }

    /// Substitutes `v -> v + s_v h` for every variable with a nonzero shift.
    pub fn shift(&self, s: &ShiftVec) -> Polynomial {
        if s.is_zero() {
            return self.clone();
        }
        let shifted: Vec<(usize, i64)> = s
            .0
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(id, &a)| (id, a as i64))
            .collect();
        if shifted.iter().all(|&(id, _)| self.degree_by_id(id) == 0) {
            return self.clone();
        }
        let h_id = Var::H.id();
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in &self.terms {
            // expansions of (v + a h)^e for each shifted v present in m
            let mut partial: Vec<(Monomial, Scalar)> = {
                let mut base = *m;
                for &(id, _) in &shifted {
                    base.0[id] = 0;
                }
                alloc::vec![(base, c.clone())]
            };
            for &(id, a) in &shifted {
                let e = m.0[id];
                if e == 0 {
                    continue;
                }
                let mut next = Vec::with_capacity(partial.len() * (e as usize + 1));
                let mut binom = BigInt::from(1);
                let mut apow = BigInt::from(1);
                for k in 0..=e {
                    // C(e,k) a^k v^{e-k} h^k
                    let coeff = Scalar::from(BigRational::from_integer(&binom * &apow));
                    for (pm, pc) in &partial {
                        let mut nm = *pm;
                        nm.0[id] += e - k;
                        nm.0[h_id] = nm.0[h_id].checked_add(k).expect("exponent overflow");
                        next.push((nm, pc * &coeff));
                    }
                    binom = binom * BigInt::from(e - k) / BigInt::from(k + 1);
                    apow *= BigInt::from(a);
                }
                partial = next;
            }
            for (pm, pc) in partial {
                accumulate(&mut acc, pm, &pc);
            }
        }
        Polynomial::from_map(acc)
    }

    fn degree_by_id(&self, id: usize) -> u8 {
        self.terms.iter().map(|(m, _)| m.0[id]).max().unwrap_or(0)
    }

    /// Substitutes `v -> -v` for every variable whose flag is set.
    pub fn flip_signs(&self, flip: &[bool; NVARS]) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let odd = m
                        .0
                        .iter()
                        .zip(flip.iter())
                        .filter(|(_, &f)| f)
                        .map(|(&e, _)| e as u32)
                        .sum::<u32>()
                        % 2
                        == 1;
                    (*m, if odd { -c } else { c.clone() })
                })
                .collect(),
        }
    }

    /// Exact evaluation; `value` supplies the scalar assigned to every variable.
    pub fn eval<F: Fn(Var) -> Scalar>(&self, value: F) -> Scalar {
        let mut vals: [Option<Scalar>; NVARS] = core::array::from_fn(|_| None);
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (id, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let x = vals[id].get_or_insert_with(|| {
                    value(Var::from_id(id).expect("monomial slot maps to a variable"))
                });
                t *= &x.pow(e as u32);
            }
            acc += &t;
        }
        acc
    }

    /// Evaluation in floating point complex arithmetic, point indexed by dense id.
    pub fn eval_complex(&self, point: &[Complex64; NVARS]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let (re, im) = c.to_f64_pair();
            let mut t = Complex64::new(re, im);
            for (id, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= point[id].powu(e as u32);
                }
            }
            acc += t;
        }
        acc
    }

    /// Evaluation in `F_p`; `None` if a coefficient denominator vanishes mod `p`.
    pub(crate) fn eval_mod(&self, field: &ModField, point: &[u64; NVARS]) -> Option<u64> {
        Some(self.reduce_mod(field)?.eval(field, point))
    }

    /// Image in `F_p[vars]`; `None` if a coefficient denominator vanishes mod `p`.
    pub(crate) fn reduce_mod(&self, field: &ModField) -> Option<ReducedPoly> {
        let mut max_exp = [0u8; NVARS];
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            for (slot, &e) in max_exp.iter_mut().zip(m.0.iter()) {
                *slot = (*slot).max(e);
            }
            terms.push((*m, c.reduce_mod(field)?));
        }
        Some(ReducedPoly { terms, max_exp })
    }

    /// For a polynomial of total degree one, returns the coefficient of `v`.
    pub(crate) fn linear_coeff(&self, v: Var) -> Scalar {
        let target = Monomial::var(v);
        self.terms
            .iter()
            .find(|(m, _)| *m == target)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Scalar::zero)
    }
}

/// A polynomial with coefficients reduced into `F_p`.
pub(crate) struct ReducedPoly {
    terms: Vec<(Monomial, u64)>,
    max_exp: [u8; NVARS],
}

impl ReducedPoly {
    pub fn eval(&self, field: &ModField, point: &[u64; NVARS]) -> u64 {
        // power tables for the variables that occur
        let mut tables: [Vec<u64>; NVARS] = core::array::from_fn(|_| Vec::new());
        for (id, &e) in self.max_exp.iter().enumerate() {
            if e > 0 {
                let mut t = Vec::with_capacity(e as usize + 1);
                let mut acc = 1u64;
                for _ in 0..=e {
                    t.push(acc);
                    acc = field.mul(acc, point[id]);
                }
                tables[id] = t;
            }
        }
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (id, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = field.mul(t, tables[id][e as usize]);
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }
}

fn accumulate(map: &mut BTreeMap<Monomial, Scalar>, m: Monomial, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        alloc::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c.clone());
        }
        alloc::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn merge(a: &Polynomial, b: &Polynomial, negate_b: bool) -> Polynomial {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() || j < b.terms.len() {
        let ord = match (a.terms.get(i), b.terms.get(j)) {
            (Some(x), Some(y)) => y.0.cmp(&x.0),
            (Some(_), None) => core::cmp::Ordering::Less,
            _ => core::cmp::Ordering::Greater,
        };
        match ord {
            core::cmp::Ordering::Less => {
                out.push(a.terms[i].clone());
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                let (m, c) = &b.terms[j];
                out.push((*m, if negate_b { -c } else { c.clone() }));
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                let (m, c) = &a.terms[i];
                let s = if negate_b {
                    c - &b.terms[j].1
                } else {
                    c + &b.terms[j].1
                };
                if !s.is_zero() {
                    out.push((*m, s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    Polynomial { terms: out }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical total order (used to keep factor lists sorted); not a ring order.
impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            let o = a.0.cmp(&b.0).then_with(|| a.1.canonical_cmp(&b.1));
            if o.is_ne() {
                return o;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        merge(self, rhs, false)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        merge(self, rhs, true)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                accumulate(&mut acc, ma.mul(mb), &(ca * cb));
            }
        }
        Polynomial::from_map(acc)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Scalar) -> Polynomial {
        self.scale(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Mul<Scalar> for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Scalar) -> Polynomial {
        self.scale(&rhs)
    }
}

impl From<Scalar> for Polynomial {
    fn from(c: Scalar) -> Self {
        Polynomial::constant(c)
    }
}

impl From<Var> for Polynomial {
    fn from(v: Var) -> Self {
        Polynomial::var(v)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
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
    fn difference_of_squares_divides() {
        let p = &(&x() * &x()) - &(&y() * &y());
        let q = p.div_exact(&(&x() - &y())).unwrap();
        assert_eq!(q, &x() + &y());
        assert!(p.div_exact(&(&x() + &Polynomial::int(1))).is_none());
    }

    #[test]
    fn shift_expands_binomially() {
        let p = x().pow(2);
        let s = ShiftVec::unit(Var::gamma(1, 1), -2);
        let expect = &(&x() - &Polynomial::h().scale(&Scalar::int(2))).pow(2) + &Polynomial::zero();
        assert_eq!(p.shift(&s), expect);
    }

    #[test]
    fn flip_signs_odd_degree() {
        let p = &(&x() * &y()) + &x();
        let mut flip = [false; NVARS];
        flip[Var::gamma(1, 1).id()] = true;
        assert_eq!(p.flip_signs(&flip), &(-&(&x() * &y())) - &x());
    }

    #[test]
    fn exact_and_float_evaluation_agree() {
        let p = &(&x().pow(3) * &y()) - &Polynomial::h().scale(&Scalar::i());
        let v = p.eval(|v| match v {
            Var::H => Scalar::ratio(1, 3),
            Var::Gamma { row: 1, .. } => Scalar::ratio(2, 5),
            _ => Scalar::int(-3),
        });
        let mut pt = [Complex64::new(0.0, 0.0); NVARS];
        pt[0] = Complex64::new(1.0 / 3.0, 0.0);
        pt[Var::gamma(1, 1).id()] = Complex64::new(0.4, 0.0);
        pt[Var::gamma(2, 1).id()] = Complex64::new(-3.0, 0.0);
        let z = p.eval_complex(&pt);
        let (re, im) = v.to_f64_pair();
        assert!((z.re - re).abs() < 1e-14 && (z.im - im).abs() < 1e-14);
    }
}
