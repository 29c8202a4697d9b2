use alloc::vec::Vec;

use super::cat::{Arr, FinCat, Obj};
use crate::error::Result;

/// One failed law instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    CompositeEnds { g: Arr, f: Arr },
    LeftIdentity { f: Arr },
    RightIdentity { f: Arr },
    Associativity { h: Arr, g: Arr, f: Arr },
    FunctorDom { f: Arr },
    FunctorCod { f: Arr },
    FunctorIdentity { x: Obj },
    FunctorComposite { g: Arr, f: Arr },
    ComponentEnds { x: Obj },
    Naturality { f: Arr },
    /// No cartesian arrow over `u` into `y`.
    MissingLift { u: Arr, y: Obj },
    /// The cleavage entry for `(u, y)` is not a cartesian arrow over `u` into `y`.
    BadLift { u: Arr, y: Obj, f: Arr },
    /// `target.proj ∘ total_map` and `base_map ∘ source.proj` differ on `f`.
    ProjectionSquare { f: Arr },
    /// A cartesian arrow is sent to a non-cartesian one.
    CartesianLost { f: Arr },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawReport {
    pub violations: Vec<Violation>,
}

impl LawReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }
}

/// Lists every violated category law of `c`.
pub fn check_category(c: &FinCat) -> Result<LawReport> {
    let mut report = LawReport::default();
    for (g, f) in c.composable_pairs() {
        let h = c.comp(g, f);
        if c.dom(h) != c.dom(f) || c.cod(h) != c.cod(g) {
            report.push(Violation::CompositeEnds { g, f });
        }
    }
    for f in c.arrs() {
        if c.comp(c.id(c.cod(f)), f) != f {
            report.push(Violation::LeftIdentity { f });
        }
        if c.comp(f, c.id(c.dom(f))) != f {
            report.push(Violation::RightIdentity { f });
        }
    }
    if !report.is_empty() {
        // Associativity is meaningless on a table with ill-typed composites.
        if report.violations.iter().any(|v| matches!(v, Violation::CompositeEnds { .. })) {
            return Ok(report);
        }
    }
    for g in c.arrs() {
        for &f in c.arrows_into(c.dom(g)) {
            let gf = c.comp(g, f);
            for &h in c.arrows_out(c.cod(g)) {
                if c.comp(h, gf) != c.comp(c.comp(h, g), f) {
                    report.push(Violation::Associativity { h, g, f });
                }
            }
        }
    }
    Ok(report)
}
