//! Cloven fibrations: cartesian arrows, reindexing, fibres and the
//! fibrewise opposite.

mod cloven;
mod functor;
mod opposite;
mod sub;

pub use cloven::{is_cartesian, ClovenFibration, Prefibration};
pub use functor::{
    check_fibred_equivalence, check_fibred_functor, is_fibred_iso, EquivalenceFailure,
    EquivalenceReport, FibredFunctor,
};
pub use opposite::{
    double_opposite_iso, fibrewise_opposite, verbatim_classes, Opposite, OppositeArrowClass, Span,
};
pub use sub::{full_subfibration, Subfibration};

use crate::error::Result;
use crate::kernel::LawReport;

/// Every missing lift and invalid cleavage entry of `p`.
pub fn verify_fibration(p: &Prefibration) -> Result<LawReport> {
    p.verify()
}
