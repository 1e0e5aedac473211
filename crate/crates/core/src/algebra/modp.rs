//! Arithmetic in a fixed prime field, used as a cheap divisibility filter.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::rat::Rat;

/// `p = 2147483629`, the largest prime below `2^31` with `p ≡ 1 (mod 4)`.
const P: u64 = 2_147_483_629;
/// A square root of `-1` mod `p`.
const SQRT_M1: u64 = 629_208_553;

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct ModField;

impl ModField {
    pub const MODULUS: u64 = P;

    pub fn sqrt_minus_one(&self) -> u64 {
        SQRT_M1
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= P {
            s - P
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + P - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % P
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, P - 2))
        }
    }

    pub fn reduce_int(&self, v: &BigInt) -> u64 {
        if let Some(small) = v.to_i64() {
            return self.reduce_i64(small);
        }
        let p = BigInt::from(P);
        let r = v % &p;
        let r = if r.sign() == Sign::Minus { r + p } else { r };
        r.to_u64().expect("residue fits in u64")
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(P as i64) as u64
    }

    pub fn reduce_rat(&self, q: &Rat) -> Option<u64> {
        match q {
            Rat::Small(n, 1) => Some(self.reduce_i64(*n)),
            Rat::Small(n, d) => Some(self.mul(self.reduce_i64(*n), self.inv(self.reduce_i64(*d))?)),
            Rat::Big(q) => self.reduce_ratio(q),
        }
    }

    pub fn reduce_ratio(&self, q: &BigRational) -> Option<u64> {
        let n = self.reduce_int(q.numer());
        let d = q.denom();
        if d.to_i64() == Some(1) {
            return Some(n);
        }
        let d = self.inv(self.reduce_int(d))?;
        Some(self.mul(n, d))
    }
}
