//! Rationals that stay in machine words until they outgrow them.

use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

/// A rational number in lowest terms. Values whose numerator and denominator
/// fit in `i64` are always stored in the `Small` form, so derived equality on
/// the representation agrees with numeric equality.
#[derive(Clone, Debug)]
pub(crate) enum Rat {
    /// `n / d` with `d > 0` and `gcd(n, d) = 1`.
    Small(i64, i64),
    Big(BigRational),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            core::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

impl Rat {
    pub const ZERO: Rat = Rat::Small(0, 1);

    pub fn int(v: i64) -> Rat {
        Rat::Small(v, 1)
    }

    /// `n / d` for `d != 0`, reduced.
    pub fn from_i128(n: i128, d: i128) -> Rat {
        debug_assert!(d != 0);
        let (n, d) = if d < 0 {
            match (n.checked_neg(), d.checked_neg()) {
                (Some(n), Some(d)) => (n, d),
                _ => return Rat::from_big(BigRational::new(BigInt::from(n), BigInt::from(d))),
            }
        } else {
            (n, d)
        };
        let g = gcd_u128(n.unsigned_abs(), d as u128);
        let (n, d) = if g > 1 {
            (n / g as i128, d / g as i128)
        } else {
            (n, d)
        };
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rat::Small(n, d),
            _ => Rat::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
        }
    }

    pub fn from_big(q: BigRational) -> Rat {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) => Rat::Small(n, d),
            _ => Rat::Big(q),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(q) => q.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n < 0,
            Rat::Big(q) => q.is_negative(),
        }
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn neg(&self) -> Rat {
        match self {
            Rat::Small(n, d) => match n.checked_neg() {
                Some(m) => Rat::Small(m, *d),
                None => Rat::from_big(-self.to_big()),
            },
            Rat::Big(q) => Rat::from_big(-q),
        }
    }

    pub fn add(&self, o: &Rat) -> Rat {
        match (self, o) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    return match a.checked_add(*c) {
                        Some(s) => Rat::Small(s, 1),
                        None => Rat::from_i128(*a as i128 + *c as i128, 1),
                    };
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match (a.checked_mul(d), c.checked_mul(b)) {
                    (Some(x), Some(y)) => match x.checked_add(y) {
                        Some(n) => Rat::from_i128(n, b * d),
                        None => Rat::from_big(self.to_big() + o.to_big()),
                    },
                    _ => Rat::from_big(self.to_big() + o.to_big()),
                }
            }
            _ => Rat::from_big(self.to_big() + o.to_big()),
        }
    }

    pub fn sub(&self, o: &Rat) -> Rat {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Rat) -> Rat {
        match (self, o) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    return match a.checked_mul(*c) {
                        Some(p) => Rat::Small(p, 1),
                        None => Rat::from_i128(*a as i128 * *c as i128, 1),
                    };
                }
                Rat::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rat::from_big(self.to_big() * o.to_big()),
        }
    }

    /// Panics on zero.
    pub fn div(&self, o: &Rat) -> Rat {
        assert!(!o.is_zero(), "division by zero rational");
        match (self, o) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                Rat::from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128)
            }
            _ => Rat::from_big(self.to_big() / o.to_big()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rat::Small(n, d) => *n as f64 / *d as f64,
            Rat::Big(q) => q.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Rat) -> bool {
        match (self, other) {
            (Rat::Small(a, b), Rat::Small(c, d)) => a == c && b == d,
            (Rat::Big(p), Rat::Big(q)) => p == q,
            _ => false,
        }
    }
}

impl Eq for Rat {}

impl Hash for Rat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Rat::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Rat::Big(q) => {
                1u8.hash(state);
                q.hash(state);
            }
        }
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> Ordering {
        match (self, other) {
            (Rat::Small(a, b), Rat::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, 1) => write!(f, "{n}"),
            Rat::Small(n, d) => write!(f, "{n}/{d}"),
            Rat::Big(q) => write!(f, "{q}"),
        }
    }
}

impl From<BigRational> for Rat {
    fn from(q: BigRational) -> Rat {
        Rat::from_big(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rat::int(i64::MAX);
        let sq = big.mul(&big);
        assert!(matches!(sq, Rat::Big(_)));
        let back = sq.div(&big);
        assert_eq!(back, big);
        assert!(matches!(back, Rat::Small(..)));
    }

    #[test]
    fn reduces() {
        assert_eq!(Rat::from_i128(6, -4), Rat::Small(-3, 2));
        assert_eq!(Rat::Small(1, 3).add(&Rat::Small(1, 6)), Rat::Small(1, 2));
        assert_eq!(Rat::int(i64::MIN).neg().neg(), Rat::int(i64::MIN));
    }
}
