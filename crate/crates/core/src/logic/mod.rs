//! Quantifier splitting and the Hilbert, Skolem and Gödel predicates.

mod goedel;
mod hilbert;
mod skolem;
mod split;

pub use goedel::{
    classify, goedel_dialectica_roundtrip, hilbert_flag, is_goedel, prenex, prenex_all, ClassificationReport,
    GoedelReport, HilbertFlag, PrenexForm, RoundtripReport,
};
pub use hilbert::{first_non_qfree, hilbert_check, HilbertEntry, HilbertReport, HilbertTable, QfFailure};
pub use skolem::{is_skolem, skolem_bijection, skolem_sides, skolemize, HomBijection, SkolemIso, SkolemReport};
pub use split::{
    duality_mismatches, DualityMismatch, EnoughReport, Logic, QfCover, SplitFailure, SplitReport, SplittingWitness,
};

use crate::kernel::{Arr, Obj};
use crate::structure::Direction;

/// The first reason a classification flag fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Counterexample {
    NotPullbackClosed { f: Arr, g: Arr },
    NotCompositionClosed { g: Arr, f: Arr },
    NoDependentProduct { f: Arr, g: Arr },
    MissingAdjoint { direction: Direction, u: Arr, alpha: Obj },
    BeckChevalley { direction: Direction, v: Arr, f: Arr },
    NoCover { direction: Direction, alpha: Obj },
    /// `α` is ∐-quantifier-free but `∏_f α` is not.
    Closure { alpha: Obj, f: Arr },
    NotSplitting { direction: Direction, failure: QfFailure },
}
