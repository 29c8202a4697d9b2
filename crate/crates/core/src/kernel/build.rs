use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::cat::{Arr, CatBuilder, FinCat, Obj};
use super::functor::FinFunctor;
use crate::error::{Error, Result};

/// A subcategory together with its inclusion.
#[derive(Clone, Debug)]
pub struct Embedded {
    pub cat: FinCat,
    /// Parent object of each sub-object id.
    pub objs: Vec<Obj>,
    /// Parent arrow of each sub-arrow id.
    pub arrs: Vec<Arr>,
    obj_back: BTreeMap<Obj, Obj>,
    arr_back: BTreeMap<Arr, Arr>,
}

impl Embedded {
    pub fn local_obj(&self, x: Obj) -> Option<Obj> {
        self.obj_back.get(&x).copied()
    }

    pub fn local_arr(&self, a: Arr) -> Option<Arr> {
        self.arr_back.get(&a).copied()
    }

    pub fn inclusion(&self) -> FinFunctor {
        FinFunctor { obj: self.objs.clone(), arr: self.arrs.clone() }
    }
}

/// The subcategory on `objs` (in the given order) with the arrows between
/// them accepted by `keep`. Identities are always kept; the arrows must be
/// closed under composition.
pub fn subcategory(c: &FinCat, objs: &[Obj], mut keep: impl FnMut(Arr) -> bool) -> Result<Embedded> {
    let mut b = CatBuilder::new();
    let mut obj_back = BTreeMap::new();
    for (i, &x) in objs.iter().enumerate() {
        b.object(c.obj_name(x));
        obj_back.insert(x, Obj(i as u32));
    }
    let mut arrs: Vec<Arr> = objs.iter().map(|&x| c.id(x)).collect();
    for a in c.arrs() {
        if c.is_identity(a) {
            continue;
        }
        let (Some(&d), Some(&t)) = (obj_back.get(&c.dom(a)), obj_back.get(&c.cod(a))) else {
            continue;
        };
        if keep(a) {
            b.arrow(c.arr_name(a), d, t);
            arrs.push(a);
        }
    }
    let arr_back: BTreeMap<Arr, Arr> =
        arrs.iter().enumerate().map(|(i, &a)| (a, Arr(i as u32))).collect();
    let cat = b.build(|g, f| {
        let h = c.comp(arrs[g.ix()], arrs[f.ix()]);
        arr_back.get(&h).copied()
    })?;
    Ok(Embedded { cat, objs: objs.to_vec(), arrs, obj_back, arr_back })
}

pub fn full_subcategory(c: &FinCat, objs: &[Obj]) -> Result<Embedded> {
    subcategory(c, objs, |_| true)
}

/// The opposite category; object and arrow ids are preserved.
pub fn opposite(c: &FinCat) -> FinCat {
    let mut b = CatBuilder::new();
    for x in c.objs() {
        b.object(c.obj_name(x));
    }
    for a in c.arrs().skip(c.n_objs()) {
        b.arrow(c.arr_name(a), c.cod(a), c.dom(a));
    }
    b.build(|g, f| Some(c.comp(f, g))).expect("opposite of a valid table")
}

/// Checks that `f` is bijective on objects and arrows and returns the
/// inverse tables.
pub fn invert_bijection(f: &FinFunctor, n_objs: usize, n_arrs: usize) -> Result<FinFunctor> {
    if f.obj.len() != n_objs || f.arr.len() != n_arrs {
        return Err(Error::MalformedTable(format!(
            "not a bijection: {} objects onto {n_objs}, {} arrows onto {n_arrs}",
            f.obj.len(),
            f.arr.len()
        )));
    }
    let mut obj = alloc::vec![None; n_objs];
    for (i, &x) in f.obj.iter().enumerate() {
        if x.ix() >= n_objs || obj[x.ix()].replace(Obj(i as u32)).is_some() {
            return Err(Error::MalformedTable(format!("object {x} hit twice")));
        }
    }
    let mut arr = alloc::vec![None; n_arrs];
    for (i, &a) in f.arr.iter().enumerate() {
        if a.ix() >= n_arrs || arr[a.ix()].replace(Arr(i as u32)).is_some() {
            return Err(Error::MalformedTable(format!("arrow {a} hit twice")));
        }
    }
    Ok(FinFunctor {
        obj: obj.into_iter().map(|x| x.expect("counted")).collect(),
        arr: arr.into_iter().map(|a| a.expect("counted")).collect(),
    })
}
