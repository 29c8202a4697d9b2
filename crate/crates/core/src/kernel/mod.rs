//! Finite categories, functors, natural transformations and limit search.

mod build;
mod cat;
mod functor;
mod laws;
mod limits;

pub use build::{full_subcategory, invert_bijection, opposite, subcategory, Embedded};
pub use cat::{Arr, CatBuilder, FinCat, Obj};
pub use functor::{check_functor, check_natural, FinFunctor, NatTransf};
pub use laws::{check_category, LawReport, Violation};
pub use limits::{
    find_coproduct, find_iso, find_pullback, initial_object, inverse, is_iso, is_mono,
    is_pullback, terminal_object, Coproduct, PullbackCone,
};
