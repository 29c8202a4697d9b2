//! Deterministic generators and the named example corpus.

mod entries;
mod gen;
mod poly;

pub use entries::*;
pub use gen::*;
pub use poly::*;
