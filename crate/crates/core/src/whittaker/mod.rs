//! Whittaker vectors encoded by their shift cocycles, and exact checks of
//! the eigen-relations they satisfy.

pub mod cocycle;
pub mod verify;

pub use cocycle::{act_on_whittaker, Frame, PairFactor, PhaseFactor, Side, WhittakerCocycle, WhittakerError};
pub use verify::{
    a2_operator, eigen_reports_for, float_spot_check, frame_equivalence, j_index_admissible,
    tau_relation_diagnostic, verify_cartan_action, verify_j_action, verify_whittaker_eigen, EigenReport, Relation,
    TauRelation,
};
