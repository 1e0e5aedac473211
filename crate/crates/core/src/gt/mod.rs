//! Zhelobenko-Stern generators of `so(N)` as rational shift operators, and
//! exact checks of the relations they satisfy.

pub mod generators;
pub mod verify;

pub use generators::{build_generator, Generator, GeneratorSet, GeneratorTag, GtError, Sign};
pub use verify::{
    check_partial_fraction_identity, verify_lemma_a1, verify_serre, verify_serre_mutated,
    verify_tau, CheckRecord, CheckReport,
};
