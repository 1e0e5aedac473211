//! Exact arithmetic: Gaussian rationals, polynomials, rational functions and
//! rational-coefficient shift operators.

pub(crate) mod modp;
pub mod poly;
pub(crate) mod rat;
pub mod ratfun;
pub mod scalar;
pub mod shift_op;
pub mod var;

pub use poly::Polynomial;
pub use ratfun::{ratfun_equal, RationalFunction};
pub use scalar::Scalar;
pub use var::{Monomial, ShiftVec, Var};
pub use shift_op::ShiftOperator;
