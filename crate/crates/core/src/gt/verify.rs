//! Exact verification of the defining relations, the `tau` symmetry, the
//! closed forms of non-simple generators, and the partial-fraction identity.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::generators::{
    check_rank, j_term, p_term, GeneratorSet, GeneratorTag, GtError, Sign,
};
use crate::algebra::var::NVARS;
use crate::algebra::{Scalar, ShiftOperator, Var};

/// One checked identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckRecord {
    pub id: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

/// Outcome of a verification suite.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub records: Vec<CheckRecord>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    fn push_operator_identity(&mut self, id: String, expected: String, lhs: &ShiftOperator, rhs: &ShiftOperator) {
        let diff = lhs - rhs;
        let pass = diff.is_zero();
        let computed = if pass {
            String::from("zero remainder")
        } else {
            format!("remainder with {} shift terms", diff.num_terms())
        };
        self.records.push(CheckRecord {
            id,
            expected,
            computed,
            pass,
        });
    }
}

/// Runs the defining relations on a prepared generator set.
fn serre_on(set: &mut GeneratorSet) -> CheckReport {
    let n = set.rank();
    let mut report = CheckReport::default();
    for i in 1..=n - 2 {
        let a = set.i(i + 1, i);
        let b = set.i(i + 2, i + 1);
        let lhs = a.commutator(&b.commutator(&a));
        report.push_operator_identity(
            format!("serre[I{}{},[I{}{},I{}{}]]", i + 1, i, i + 2, i + 1, i + 1, i),
            format!("I[{},{}]", i + 2, i + 1),
            &lhs,
            &b,
        );
        let lhs = b.commutator(&a.commutator(&b));
        report.push_operator_identity(
            format!("serre[I{}{},[I{}{},I{}{}]]", i + 2, i + 1, i + 1, i, i + 2, i + 1),
            format!("I[{},{}]", i + 1, i),
            &lhs,
            &a,
        );
    }
    for i in 1..n {
        for j in (i + 2)..n {
            let a = set.i(i + 1, i);
            let b = set.i(j + 1, j);
            report.push_operator_identity(
                format!("commute[I{}{},I{}{}]", i + 1, i, j + 1, j),
                String::from("0"),
                &a.commutator(&b),
                &ShiftOperator::zero(),
            );
        }
    }
    report
}

/// Defining relations of `so(n)` for the explicit simple generators.
pub fn verify_serre(n: i64) -> Result<CheckReport, GtError> {
    let n = check_rank(n)?;
    Ok(serre_on(&mut GeneratorSet::new(n)?))
}

/// Same as [`verify_serre`] with the sign of the upward-shift sum of
/// `I_{2k+1,2k}` flipped. Used to show the checks are sensitive.
pub fn verify_serre_mutated(n: i64, k: u8) -> Result<CheckReport, GtError> {
    let n = check_rank(n)?;
    let mut set = GeneratorSet::new(n)?;
    set.flip_first_sum_of_odd(k)?;
    Ok(serre_on(&mut set))
}

/// Flags for the involution `tau`: every even row and `h` change sign.
pub fn tau_flags() -> [bool; NVARS] {
    let mut flip = [false; NVARS];
    flip[Var::H.id()] = true;
    for row in (2..=crate::algebra::var::MAX_ROW).step_by(2) {
        for v in Var::row_vars(row) {
            flip[v.id()] = true;
        }
    }
    flip
}

/// `tau I_{k+1,k} tau = -I_{k+1,k}` and `tau F_{j,j+1} tau = F_{j+1,j}`.
pub fn verify_tau(n: i64) -> Result<CheckReport, GtError> {
    let n = check_rank(n)?;
    let mut set = GeneratorSet::new(n)?;
    let flip = tau_flags();
    let mut report = CheckReport::default();
    for k in 1..n {
        let op = set.i(k + 1, k);
        report.push_operator_identity(
            format!("tau I[{},{}]", k + 1, k),
            format!("-I[{},{}]", k + 1, k),
            &op.conjugate_by_flip(&flip),
            &-&op,
        );
    }
    for j in 1.. {
        if 2 * j >= n {
            break;
        }
        let up = set.build(GeneratorTag::FSimple { j })?;
        let down = set.build(GeneratorTag::FLower { j })?;
        report.push_operator_identity(
            format!("tau F[{},{}]", j, j + 1),
            format!("F[{},{}]", j + 1, j),
            &up.op.conjugate_by_flip(&flip),
            &down.op,
        );
    }
    Ok(report)
}

/// Closed forms of `I_{2k+1,2k-1}`, `I_{2k+2,2k}`, `I_{2k+2,2k-1}` in `so(2n+1)`
/// through the `P` and `J` operators, compared with iterated commutators.
pub fn verify_lemma_a1(n: i64) -> Result<CheckReport, GtError> {
    if !(1..=3).contains(&n) {
        return Err(GtError::RankOutOfRange { n, min: 1, max: 3 });
    }
    let n = n as u8;
    let mut set = GeneratorSet::new(2 * n + 1)?;
    let mut report = CheckReport::default();
    for k in 1..=n {
        let mut sum = ShiftOperator::zero();
        for eps in Sign::both() {
            for j in 1..=k {
                sum = &sum + &p_term(k, j, eps).compose(&j_term(k - 1, Sign::Plus, j, eps));
            }
        }
        report.push_operator_identity(
            format!("I[{},{}] = sum P J(k-1,+1)", 2 * k + 1, 2 * k - 1),
            format!("[I{},{}, I{},{}]", 2 * k + 1, 2 * k, 2 * k, 2 * k - 1),
            &sum,
            &set.i(2 * k + 1, 2 * k - 1),
        );
    }
    for k in 1..n {
        let mut two = ShiftOperator::zero();
        let mut three = ShiftOperator::zero();
        for eps in Sign::both() {
            for j in 1..=k {
                let pj = p_term(k, j, eps).compose(&j_term(k, Sign::Minus, j, eps));
                three = &three + &pj.compose(&j_term(k - 1, Sign::Plus, j, eps));
                two = &two + &pj;
            }
        }
        report.push_operator_identity(
            format!("I[{},{}] = -sum P J(k,-1)", 2 * k + 2, 2 * k),
            String::from("iterated commutator"),
            &-&two,
            &set.i(2 * k + 2, 2 * k),
        );
        report.push_operator_identity(
            format!("I[{},{}] = -sum P J(k,-1) J(k-1,+1)", 2 * k + 2, 2 * k - 1),
            String::from("iterated commutator"),
            &-&three,
            &set.i(2 * k + 2, 2 * k - 1),
        );
    }
    Ok(report)
}

/// `sum_i prod_j (x_i - y_j) / prod_{r != i} (x_i - x_r) == 1`, decided exactly.
pub fn check_partial_fraction_identity(m: usize, xs: &[Scalar], ys: &[Scalar]) -> Result<bool, GtError> {
    if xs.len() != m {
        return Err(GtError::LengthMismatch {
            expected: m,
            got: xs.len(),
        });
    }
    if ys.len() + 1 != m {
        return Err(GtError::LengthMismatch {
            expected: m.saturating_sub(1),
            got: ys.len(),
        });
    }
    for i in 0..m {
        for j in (i + 1)..m {
            if xs[i] == xs[j] {
                return Err(GtError::RepeatedNode { i, j });
            }
        }
    }
    let mut total = Scalar::zero();
    for (i, xi) in xs.iter().enumerate() {
        let mut num = Scalar::one();
        for y in ys {
            num *= &(xi - y);
        }
        let mut den = Scalar::one();
        for (r, xr) in xs.iter().enumerate() {
            if r != i {
                den *= &(xi - xr);
            }
        }
        total += &(&num / &den);
    }
    Ok(total.is_one())
}
