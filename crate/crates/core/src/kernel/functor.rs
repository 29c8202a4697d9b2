use alloc::format;
use alloc::vec::Vec;

use super::cat::{Arr, FinCat, Obj};
use super::laws::{LawReport, Violation};
use crate::error::{Error, Result};

/// A functor between finite categories, stored as its two assignment tables.
/// The endpoint categories are passed alongside wherever they are needed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinFunctor {
    pub obj: Vec<Obj>,
    pub arr: Vec<Arr>,
}

impl FinFunctor {
    pub fn identity(c: &FinCat) -> Self {
        FinFunctor { obj: c.objs().collect(), arr: c.arrs().collect() }
    }

    /// The functor to a category with one object.
    pub fn constant(c: &FinCat, x: Obj, idx: Arr) -> Self {
        FinFunctor { obj: alloc::vec![x; c.n_objs()], arr: alloc::vec![idx; c.n_arrs()] }
    }

    #[inline]
    pub fn on_obj(&self, x: Obj) -> Obj {
        self.obj[x.ix()]
    }

    #[inline]
    pub fn on_arr(&self, a: Arr) -> Arr {
        self.arr[a.ix()]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FinFunctor) -> FinFunctor {
        FinFunctor {
            obj: self.obj.iter().map(|&x| other.on_obj(x)).collect(),
            arr: self.arr.iter().map(|&a| other.on_arr(a)).collect(),
        }
    }
}

/// Components of a natural transformation, one target arrow per source object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTransf {
    pub components: Vec<Arr>,
}

impl NatTransf {
    #[inline]
    pub fn at(&self, x: Obj) -> Arr {
        self.components[x.ix()]
    }
}

fn resolve(src: &FinCat, tgt: &FinCat, f: &FinFunctor) -> Result<()> {
    if f.obj.len() != src.n_objs() || f.arr.len() != src.n_arrs() {
        return Err(Error::MalformedTable(format!(
            "functor tables have {} objects and {} arrows, source has {} and {}",
            f.obj.len(),
            f.arr.len(),
            src.n_objs(),
            src.n_arrs()
        )));
    }
    if f.obj.iter().any(|x| x.ix() >= tgt.n_objs()) || f.arr.iter().any(|a| a.ix() >= tgt.n_arrs())
    {
        return Err(Error::MalformedTable("functor image id does not resolve".into()));
    }
    Ok(())
}

/// Every functoriality violation of `f: src → tgt`.
pub fn check_functor(src: &FinCat, tgt: &FinCat, f: &FinFunctor) -> Result<LawReport> {
    resolve(src, tgt, f)?;
    let mut report = LawReport::default();
    for a in src.arrs() {
        let fa = f.on_arr(a);
        if tgt.dom(fa) != f.on_obj(src.dom(a)) {
            report.push(Violation::FunctorDom { f: a });
        }
        if tgt.cod(fa) != f.on_obj(src.cod(a)) {
            report.push(Violation::FunctorCod { f: a });
        }
    }
    for x in src.objs() {
        if f.on_arr(src.id(x)) != tgt.id(f.on_obj(x)) {
            report.push(Violation::FunctorIdentity { x });
        }
    }
    if report.is_empty() {
        for (g, a) in src.composable_pairs() {
            if f.on_arr(src.comp(g, a)) != tgt.comp(f.on_arr(g), f.on_arr(a)) {
                report.push(Violation::FunctorComposite { g, f: a });
            }
        }
    }
    Ok(report)
}

/// Naturality of `eta: f ⇒ g` for functors `src → tgt`.
pub fn check_natural(
    src: &FinCat,
    tgt: &FinCat,
    f: &FinFunctor,
    g: &FinFunctor,
    eta: &NatTransf,
) -> Result<LawReport> {
    if eta.components.len() != src.n_objs() {
        return Err(Error::MalformedTable("one component per object required".into()));
    }
    let mut report = LawReport::default();
    for x in src.objs() {
        let c = eta.at(x);
        if c.ix() >= tgt.n_arrs() || tgt.dom(c) != f.on_obj(x) || tgt.cod(c) != g.on_obj(x) {
            report.push(Violation::ComponentEnds { x });
        }
    }
    if !report.is_empty() {
        return Ok(report);
    }
    for a in src.arrs() {
        let (x, y) = (src.dom(a), src.cod(a));
        if tgt.comp(eta.at(y), f.on_arr(a)) != tgt.comp(g.on_arr(a), eta.at(x)) {
            report.push(Violation::Naturality { f: a });
        }
    }
    Ok(report)
}
