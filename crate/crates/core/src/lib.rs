//! Exact shift-operator algebra for the Zhelobenko-Stern realization of `so(N)`
//! and Mellin-Barnes evaluation of `B_n` Toda wave functions.
//!
//! The crate is `no_std` and only needs `alloc`. The optional `parallel` feature
//! pulls in `std` and `rayon` for grid summation.
#![no_std]

extern crate alloc;
#[cfg(feature = "parallel")]
extern crate std;

pub mod algebra;
pub mod gt;
pub mod numeric;
pub mod whittaker;
