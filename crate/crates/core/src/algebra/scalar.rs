//! Gaussian rationals `a + b i` with arbitrary-precision parts.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_rational::BigRational;

use super::modp::ModField;
use super::rat::Rat;

/// An element of `Q(i)`. Parts are machine-word fractions until they overflow.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    re: Rat,
    im: Rat,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar {
            re: Rat::from_big(re),
            im: Rat::from_big(im),
        }
    }

    pub fn zero() -> Self {
        Scalar {
            re: Rat::ZERO,
            im: Rat::ZERO,
        }
    }

    pub fn one() -> Self {
        Scalar::int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar {
            re: Rat::ZERO,
            im: Rat::int(1),
        }
    }

    pub fn int(v: i64) -> Self {
        Scalar {
            re: Rat::int(v),
            im: Rat::ZERO,
        }
    }

    /// `num / den`; panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar {
            re: Rat::from_i128(num as i128, den as i128),
            im: Rat::ZERO,
        }
    }

    pub fn gaussian(re: (i64, i64), im: (i64, i64)) -> Self {
        assert!(re.1 != 0 && im.1 != 0, "zero denominator");
        Scalar {
            re: Rat::from_i128(re.0 as i128, re.1 as i128),
            im: Rat::from_i128(im.0 as i128, im.1 as i128),
        }
    }

    pub fn re(&self) -> BigRational {
        self.re.to_big()
    }

    pub fn im(&self) -> BigRational {
        self.im.to_big()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero scalar");
        if self.im.is_zero() {
            return Scalar {
                re: Rat::int(1).div(&self.re),
                im: Rat::ZERO,
            };
        }
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        Scalar {
            re: self.re.div(&n),
            im: self.im.div(&n).neg(),
        }
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Scalar::one(),
            1 => Scalar::i(),
            2 => Scalar::int(-1),
            _ => -Scalar::i(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Total order used only to make containers canonical.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    /// Reduction into `F_p` with `i` sent to a fixed square root of `-1`.
    /// Returns `None` when a denominator vanishes mod `p`.
    pub(crate) fn reduce_mod(&self, field: &ModField) -> Option<u64> {
        let re = field.reduce_rat(&self.re)?;
        if self.im.is_zero() {
            return Some(re);
        }
        let im = field.reduce_rat(&self.im)?;
        Some(field.add(re, field.mul(im, field.sqrt_minus_one())))
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(re: BigRational) -> Self {
        Scalar {
            re: Rat::from_big(re),
            im: Rat::ZERO,
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: self.re.add(&rhs.re),
            im: self.im.add(&rhs.im),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: self.re.sub(&rhs.re),
            im: self.im.sub(&rhs.im),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => Scalar {
                re: self.re.mul(&rhs.re),
                im: Rat::ZERO,
            },
            (true, false) => Scalar {
                re: self.re.mul(&rhs.re),
                im: self.re.mul(&rhs.im),
            },
            (false, true) => Scalar {
                re: self.re.mul(&rhs.re),
                im: self.im.mul(&rhs.re),
            },
            (false, false) => Scalar {
                re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
                im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
            },
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        #[allow(clippy::suspicious_arithmetic_impl)]
        let q = self * &rhs.inv();
        q
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re = self.re.add(&rhs.re);
        if !rhs.im.is_zero() {
            self.im = self.im.add(&rhs.im);
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re = self.re.sub(&rhs.re);
        if !rhs.im.is_zero() {
            self.im = self.im.sub(&rhs.im);
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => {
                if self.im.is_one() {
                    write!(f, "i")
                } else if self.im.neg().is_one() {
                    write!(f, "-i")
                } else {
                    write!(f, "{}i", self.im)
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({} {} {}i)", self.re, sign, self.im.abs())
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a = Scalar::gaussian((1, 2), (3, 1));
        let b = Scalar::gaussian((-2, 3), (1, 5));
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(&(&a + &b) - &b, a);
        assert!((&a * &a.inv()).is_one());
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::int(-1));
    }

    #[test]
    fn i_powers() {
        for k in -8..8 {
            assert_eq!(Scalar::i_pow(k), Scalar::i().pow(k.rem_euclid(4) as u32));
        }
    }
}
