use alloc::format;
use alloc::vec::Vec;

use super::cloven::ClovenFibration;
use crate::error::{Error, Result};
use crate::kernel::{full_subcategory, Arr, Embedded, FinFunctor, Obj};

/// A full subfibration on a reindexing-closed set of objects.
#[derive(Clone, Debug)]
pub struct Subfibration {
    pub fib: ClovenFibration,
    pub embedding: Embedded,
}

impl Subfibration {
    /// Parent object of a sub-object.
    pub fn parent_obj(&self, x: Obj) -> Obj {
        self.embedding.objs[x.ix()]
    }

    pub fn parent_arr(&self, a: Arr) -> Arr {
        self.embedding.arrs[a.ix()]
    }

    pub fn local_obj(&self, x: Obj) -> Option<Obj> {
        self.embedding.local_obj(x)
    }

    pub fn local_arr(&self, a: Arr) -> Option<Arr> {
        self.embedding.local_arr(a)
    }

    pub fn inclusion(&self) -> FinFunctor {
        self.embedding.inclusion()
    }
}

/// The full subfibration of `p` on the objects accepted by `keep`.
/// Fails unless the chosen lifts of kept objects start at kept objects.
pub fn full_subfibration(p: &ClovenFibration, mut keep: impl FnMut(Obj) -> bool) -> Result<Subfibration> {
    let objs: Vec<Obj> = p.total().objs().filter(|&x| keep(x)).collect();
    let embedding = full_subcategory(p.total(), &objs)?;
    let proj = FinFunctor {
        obj: embedding.objs.iter().map(|&x| p.p_obj(x)).collect(),
        arr: embedding.arrs.iter().map(|&a| p.p_arr(a)).collect(),
    };
    for &y in &objs {
        for &u in p.base().arrows_into(p.p_obj(y)) {
            if embedding.local_obj(p.reindex_obj(u, y)).is_none() {
                return Err(Error::PreconditionFailed(format!(
                    "reindexing `{}` along `{}` leaves the subfibration",
                    p.total().obj_name(y),
                    p.base().arr_name(u)
                )));
            }
        }
    }
    let lift = |u: Arr, y: Obj| {
        let f = p.lift(u, embedding.objs[y.ix()]);
        embedding.local_arr(f).expect("full subcategory contains the lift")
    };
    // Lifts stay cartesian in a full subfibration, so no re-check is needed.
    let fib = ClovenFibration::with_lifts_unchecked(
        embedding.cat.clone(),
        p.base().clone(),
        proj,
        lift,
    )?;
    Ok(Subfibration { fib, embedding })
}
