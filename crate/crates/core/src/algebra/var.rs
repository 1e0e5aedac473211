//! Variables of the symbolic layer: Gelfand-Tsetlin entries, the formal step `h`,
//! and auxiliary unit symbols.

use core::fmt;

/// Highest Gelfand-Tsetlin row supported by the dense variable layout.
/// Rows `1..=7` cover every `so(N)` with `N <= 8`.
pub const MAX_ROW: u8 = 7;
/// Number of auxiliary unit symbols.
pub const MAX_UNITS: u8 = 8;
/// Size of the dense exponent / shift arrays.
pub const NVARS: usize = 32;

const UNIT_BASE: usize = 24;

/// A symbol of the polynomial ring.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// The formal step `h = ic`.
    H,
    /// `gamma_{row,col}`; row `2m` and `2m-1` both hold `m` entries.
    Gamma { row: u8, col: u8 },
    /// A free symbol standing for a positive constant (e.g. `e^{-alpha}`).
    Unit(u8),
}

/// Number of entries in Gelfand-Tsetlin row `row` (`ceil(row / 2)`).
pub const fn row_len(row: u8) -> u8 {
    row.div_ceil(2)
}

const fn row_offset(row: u8) -> usize {
    let mut acc = 0usize;
    let mut r = 1u8;
    while r < row {
        acc += row_len(r) as usize;
        r += 1;
    }
    acc
}

impl Var {
    /// `gamma_{row,col}`; panics if the index is outside the triangular layout.
    pub fn gamma(row: u8, col: u8) -> Var {
        assert!(
            (1..=MAX_ROW).contains(&row) && (1..=row_len(row)).contains(&col),
            "gamma index ({row},{col}) outside the Gelfand-Tsetlin array"
        );
        Var::Gamma { row, col }
    }

    pub fn unit(j: u8) -> Var {
        assert!(j < MAX_UNITS, "unit symbol index {j} out of range");
        Var::Unit(j)
    }

    /// Dense slot in exponent vectors.
    pub fn id(self) -> usize {
        match self {
            Var::H => 0,
            Var::Gamma { row, col } => 1 + row_offset(row) + col as usize - 1,
            Var::Unit(j) => UNIT_BASE + j as usize,
        }
    }

    pub fn from_id(id: usize) -> Option<Var> {
        if id == 0 {
            return Some(Var::H);
        }
        if (UNIT_BASE..UNIT_BASE + MAX_UNITS as usize).contains(&id) {
            return Some(Var::Unit((id - UNIT_BASE) as u8));
        }
        let mut row = 1u8;
        while row <= MAX_ROW {
            let start = 1 + row_offset(row);
            let len = row_len(row) as usize;
            if (start..start + len).contains(&id) {
                return Some(Var::Gamma {
                    row,
                    col: (id - start + 1) as u8,
                });
            }
            row += 1;
        }
        None
    }

    pub fn row(self) -> Option<u8> {
        match self {
            Var::Gamma { row, .. } => Some(row),
            _ => None,
        }
    }

    /// All entries of one row.
    pub fn row_vars(row: u8) -> impl Iterator<Item = Var> {
        (1..=row_len(row)).map(move |col| Var::gamma(row, col))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::H => write!(f, "h"),
            Var::Gamma { row, col } => write!(f, "g{row}_{col}"),
            Var::Unit(j) => write!(f, "t{j}"),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Exponent vector of a monomial. Derived `Ord` is lexicographic with `h` most significant.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub(crate) [u8; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: Var) -> Self {
        let mut m = Monomial::one();
        m.0[v.id()] = 1;
        m
    }

    pub fn exp(&self, v: Var) -> u8 {
        self.0[v.id()]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = [0u8; NVARS];
        for (o, (a, b)) in out.iter_mut().zip(self.0.iter().zip(other.0.iter())) {
            *o = a.checked_add(*b).expect("monomial exponent overflow");
        }
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut out = [0u8; NVARS];
        for (o, (a, b)) in out.iter_mut().zip(self.0.iter().zip(other.0.iter())) {
            *o = b - a;
        }
        Monomial(out)
    }

    pub fn vars(&self) -> impl Iterator<Item = (Var, u8)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .filter_map(|(id, &e)| Var::from_id(id).map(|v| (v, e)))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, e) in self.vars() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Integer shift vector in units of `h`, indexed like [`Monomial`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ShiftVec(pub(crate) [i8; NVARS]);

impl ShiftVec {
    pub fn zero() -> Self {
        ShiftVec([0; NVARS])
    }

    pub fn unit(v: Var, amount: i8) -> Self {
        let mut s = ShiftVec::zero();
        s.0[v.id()] = amount;
        s
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn get(&self, v: Var) -> i8 {
        self.0[v.id()]
    }

    pub fn add(&self, other: &ShiftVec) -> ShiftVec {
        let mut out = [0i8; NVARS];
        for (o, (a, b)) in out.iter_mut().zip(self.0.iter().zip(other.0.iter())) {
            *o = a.checked_add(*b).expect("shift overflow");
        }
        ShiftVec(out)
    }

    pub fn entries(&self) -> impl Iterator<Item = (Var, i8)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .filter_map(|(id, &e)| Var::from_id(id).map(|v| (v, e)))
    }
}

impl fmt::Display for ShiftVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in self.entries() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "e^{{{e}h d/d{v}}}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ShiftVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        let mut seen = [false; NVARS];
        for row in 1..=MAX_ROW {
            for v in Var::row_vars(row) {
                let id = v.id();
                assert!(!seen[id]);
                seen[id] = true;
                assert_eq!(Var::from_id(id), Some(v));
            }
        }
        assert_eq!(Var::from_id(0), Some(Var::H));
        assert_eq!(Var::from_id(Var::unit(3).id()), Some(Var::unit(3)));
        assert!(Var::gamma(7, 4).id() < UNIT_BASE);
    }

    #[test]
    #[should_panic]
    fn row_bounds_checked() {
        Var::gamma(4, 3);
    }
}
