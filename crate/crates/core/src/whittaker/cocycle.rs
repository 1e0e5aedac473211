//! Shift cocycles of the Gamma-product Whittaker vectors.
//!
//! A Whittaker vector is a product of factors
//! `h^{a/h} Gamma(a/h + 1/2)` with `a = s x + t y` linear in two variables,
//! times exponentials whose value changes by a fixed unit under `gamma -> gamma + h`.
//! Only the ratios `w(gamma + s h) / w(gamma)` are ever needed, and these are
//! rational by `Gamma(z + 1) = z Gamma(z)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::var::{row_len, NVARS};
use crate::algebra::{Polynomial, RationalFunction, Scalar, ShiftOperator, ShiftVec, Var};
use crate::numeric::gamma::{log_gamma, GammaError};

/// Largest rank whose Gelfand-Tsetlin array fits the variable layout.
pub const MAX_RANK: u8 = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WhittakerError {
    #[error("rank n = {n} outside the supported range {min}..={max}")]
    RankOutOfRange { n: i64, min: i64, max: i64 },
    #[error("operator shifts {var}, which is not a variable of the rank-{n} vector")]
    ShiftOutsideFrame { var: Var, n: u8 },
    #[error("{what} is not defined for rank {n}: {bound}")]
    IndexOutOfRange { what: alloc::string::String, n: u8, bound: alloc::string::String },
    #[error("phase factor index {index} out of range (vector has {count})")]
    NoSuchPhase { index: usize, count: usize },
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Generator(#[from] crate::gt::GtError),
}

/// Left vector `w_n` or right vector `w'_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Variables in which the vector is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frame {
    /// The original entries `gamma_{k,j}`.
    Gamma,
    /// Odd rows renamed, `gamma_{2k-1,j} = (-1)^{k+1} g_{2k-1,j}`; even rows kept.
    Nu,
}

/// `h^{a/h} Gamma(a/h + 1/2)` with `a = sx * x + sy * y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairFactor {
    pub x: Var,
    pub sx: i8,
    pub y: Var,
    pub sy: i8,
}

impl PairFactor {
    fn argument(&self) -> Polynomial {
        &Polynomial::var(self.x).scale(&Scalar::int(self.sx as i64))
            + &Polynomial::var(self.y).scale(&Scalar::int(self.sy as i64))
    }

    /// Change of the argument in units of `h`.
    fn step(&self, s: &ShiftVec) -> i64 {
        self.sx as i64 * s.get(self.x) as i64 + self.sy as i64 * s.get(self.y) as i64
    }
}

/// An exponential factor multiplying the vector by `unit` per `+h` step of `var`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseFactor {
    pub var: Var,
    pub unit: RationalFunction,
}

/// The cocycle of one Whittaker vector.
#[derive(Debug, Clone)]
pub struct WhittakerCocycle {
    n: u8,
    side: Side,
    frame: Frame,
    pairs: Vec<PairFactor>,
    phases: Vec<PhaseFactor>,
}

fn sign_of_parity(k: u8) -> i8 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn row_vars(row: u8) -> impl Iterator<Item = Var> {
    (1..=row_len(row)).map(move |c| Var::gamma(row, c))
}

pub(crate) fn check_whittaker_rank(n: i64) -> Result<u8, WhittakerError> {
    if (1..=MAX_RANK as i64).contains(&n) {
        Ok(n as u8)
    } else {
        Err(WhittakerError::RankOutOfRange {
            n,
            min: 1,
            max: MAX_RANK as i64,
        })
    }
}

/// Flags of the odd rows that change sign between the two frames.
pub fn frame_flip_flags(n: u8) -> [bool; NVARS] {
    let mut flip = [false; NVARS];
    for k in 1..=n {
        if k % 2 == 0 {
            for v in row_vars(2 * k - 1) {
                flip[v.id()] = true;
            }
        }
    }
    flip
}

impl WhittakerCocycle {
    /// The vector of rank `n` for `so(2n+1)`: variables in rows `1..2n-1`,
    /// spectral parameters in row `2n`.
    pub fn build(n: i64, side: Side, frame: Frame) -> Result<Self, WhittakerError> {
        let n = check_whittaker_rank(n)?;
        let mut pairs = Vec::new();
        let mut phases = Vec::new();
        for k in 1..=n {
            // sign of the odd rows inside the Gamma arguments
            let theta = match side {
                Side::Left => -sign_of_parity(k),
                Side::Right => sign_of_parity(k),
            };
            let (a, b) = match (frame, side) {
                (Frame::Gamma, _) => (theta, theta),
                (Frame::Nu, Side::Left) => (1, -1),
                (Frame::Nu, Side::Right) => (-1, 1),
            };
            for x in row_vars(2 * k - 1) {
                for y in row_vars(2 * k) {
                    pairs.push(PairFactor { x, sx: a, y, sy: 1 });
                }
            }
            if k < n {
                for x in row_vars(2 * k) {
                    for y in row_vars(2 * k + 1) {
                        pairs.push(PairFactor { x, sx: -1, y, sy: b });
                    }
                }
                // exp(-theta pi/(2c) sum gamma_{2k}) gains exp(-theta i pi/2) per step
                let unit = &Scalar::i() * &Scalar::int(-theta as i64);
                for var in row_vars(2 * k) {
                    phases.push(PhaseFactor {
                        var,
                        unit: RationalFunction::constant(unit.clone()),
                    });
                }
            }
        }
        Ok(WhittakerCocycle {
            n,
            side,
            frame,
            pairs,
            phases,
        })
    }

    pub fn rank(&self) -> u8 {
        self.n
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn pairs(&self) -> &[PairFactor] {
        &self.pairs
    }

    pub fn phases(&self) -> &[PhaseFactor] {
        &self.phases
    }

    /// Multiplies the vector by `exp(i alpha_j delta_{2j-1} / c)` for every odd
    /// row, with `Unit(j)` standing for `exp(-alpha_j)`.
    pub fn with_row_units(mut self) -> Self {
        for j in 1..=self.n {
            let sign = match self.frame {
                Frame::Gamma => 1,
                Frame::Nu => -sign_of_parity(j),
            };
            let t = RationalFunction::var(Var::unit(j));
            let unit = if sign > 0 { t } else { t.inv() };
            for var in row_vars(2 * j - 1) {
                self.phases.push(PhaseFactor {
                    var,
                    unit: unit.clone(),
                });
            }
        }
        self
    }

    /// Replaces the phase `u` of factor `index` by `1/u`, i.e. flips the sign
    /// of that exponential's exponent.
    pub fn with_flipped_phase(mut self, index: usize) -> Result<Self, WhittakerError> {
        let count = self.phases.len();
        let p = self
            .phases
            .get_mut(index)
            .ok_or(WhittakerError::NoSuchPhase { index, count })?;
        p.unit = p.unit.inv();
        Ok(self)
    }

    /// Variables the vector depends on that operators may shift.
    pub fn shiftable(&self) -> impl Iterator<Item = Var> + '_ {
        (1..2 * self.n).flat_map(row_vars)
    }

    fn is_shiftable(&self, v: Var) -> bool {
        matches!(v.row(), Some(r) if r < 2 * self.n)
    }

    /// `w(gamma + s h) / w(gamma)`.
    pub fn ratio(&self, s: &ShiftVec) -> Result<RationalFunction, WhittakerError> {
        if let Some((var, _)) = s.entries().find(|(v, _)| !self.is_shiftable(*v)) {
            return Err(WhittakerError::ShiftOutsideFrame { var, n: self.n });
        }
        let h = Polynomial::h();
        let mut num = Vec::new();
        let mut den = Vec::new();
        for p in &self.pairs {
            let m = p.step(s);
            if m == 0 {
                continue;
            }
            let a = p.argument();
            if m > 0 {
                for t in 0..m {
                    num.push(&a + &h.scale(&Scalar::ratio(2 * t + 1, 2)));
                }
            } else {
                for t in 1..=-m {
                    den.push(&a - &h.scale(&Scalar::ratio(2 * t - 1, 2)));
                }
            }
        }
        let numerator = num.into_iter().fold(Polynomial::one(), |acc, f| &acc * &f);
        let mut out = RationalFunction::new(numerator, den);
        for p in &self.phases {
            let e = s.get(p.var);
            if e > 0 {
                out = &out * &p.unit.pow(e as u32);
            } else if e < 0 {
                out = &out * &p.unit.inv().pow((-e) as u32);
            }
        }
        Ok(out)
    }

    /// `w(gamma + h e_v) / w(gamma)`.
    pub fn up(&self, v: Var) -> Result<RationalFunction, WhittakerError> {
        self.ratio(&ShiftVec::unit(v, 1))
    }

    /// `w(gamma - h e_v) / w(gamma)`.
    pub fn down(&self, v: Var) -> Result<RationalFunction, WhittakerError> {
        self.ratio(&ShiftVec::unit(v, -1))
    }

    /// `(up, down)` for every shiftable variable.
    pub fn ratios(&self) -> Result<BTreeMap<Var, (RationalFunction, RationalFunction)>, WhittakerError> {
        self.shiftable()
            .map(|v| Ok((v, (self.up(v)?, self.down(v)?))))
            .collect()
    }

    /// `ln w(gamma)` at a complex point with `h = i c`, up to a constant.
    /// Phases are realized as `exp(+-pi gamma / (2c))`; unit symbols are not
    /// supported here.
    pub fn log_value(&self, point: &[Complex64; NVARS], c: f64) -> Result<Complex64, WhittakerError> {
        let h = Complex64::new(0.0, c);
        let ln_h = h.ln();
        let mut acc = Complex64::new(0.0, 0.0);
        for p in &self.pairs {
            let a = point[p.x.id()] * p.sx as f64 + point[p.y.id()] * p.sy as f64;
            let z = a / h;
            acc += z * ln_h + log_gamma(z + 0.5)?;
        }
        for p in &self.phases {
            // unit = exp(i pi/2 * q) with q = +-1  <=>  exp(q pi gamma / (2c))
            let u = p.unit.as_constant().map(|s| s.to_f64_pair());
            let q = match u {
                Some((_, im)) if im > 0.0 => 1.0,
                Some((_, im)) if im < 0.0 => -1.0,
                _ => f64::NAN,
            };
            acc += point[p.var.id()] * (q * core::f64::consts::PI / (2.0 * c));
        }
        Ok(acc)
    }
}

/// The multiplier `M` with `op(w) = M w`.
pub fn act_on_whittaker(op: &ShiftOperator, w: &WhittakerCocycle) -> Result<RationalFunction, WhittakerError> {
    let mut parts = Vec::with_capacity(op.num_terms());
    for (s, c) in op.terms() {
        parts.push(c * &w.ratio(s)?);
    }
    Ok(crate::algebra::ratfun::sum_all(&parts))
}
