use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Object id. Ids are dense and follow declaration order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Obj(pub u32);

/// Arrow id. Ids are dense and follow declaration order; the identity of
/// object `x` always has id `x`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Arr(pub u32);

impl Obj {
    #[inline]
    pub fn ix(self) -> usize {
        self.0 as usize
    }
}

impl Arr {
    #[inline]
    pub fn ix(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for Arr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A finite category given by explicit tables.
///
/// Composition is stored per arrow `g` as a row indexed by the position of
/// `f` among the arrows into `dom g`.
#[derive(Clone, PartialEq, Eq)]
pub struct FinCat {
    obj_names: Vec<String>,
    arr_names: Vec<String>,
    dom: Vec<Obj>,
    cod: Vec<Obj>,
    into: Vec<Vec<Arr>>,
    out: Vec<Vec<Arr>>,
    /// `out` of each object sorted by codomain, for hom-set slicing.
    out_by_cod: Vec<Vec<Arr>>,
    pos_in_into: Vec<u32>,
    row: Vec<u32>,
    comp: Vec<Arr>,
    obj_index: BTreeMap<String, Obj>,
    arr_index: BTreeMap<String, Arr>,
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCat")
            .field("objects", &self.obj_names.len())
            .field("arrows", &self.arr_names.len())
            .finish()
    }
}

impl FinCat {
    pub fn n_objs(&self) -> usize {
        self.obj_names.len()
    }

    pub fn n_arrs(&self) -> usize {
        self.arr_names.len()
    }

    pub fn objs(&self) -> impl DoubleEndedIterator<Item = Obj> + ExactSizeIterator + Clone {
        (0..self.obj_names.len() as u32).map(Obj)
    }

    pub fn arrs(&self) -> impl DoubleEndedIterator<Item = Arr> + ExactSizeIterator + Clone {
        (0..self.arr_names.len() as u32).map(Arr)
    }

    #[inline]
    pub fn dom(&self, a: Arr) -> Obj {
        self.dom[a.ix()]
    }

    #[inline]
    pub fn cod(&self, a: Arr) -> Obj {
        self.cod[a.ix()]
    }

    #[inline]
    pub fn id(&self, x: Obj) -> Arr {
        Arr(x.0)
    }

    #[inline]
    pub fn is_identity(&self, a: Arr) -> bool {
        (a.0 as usize) < self.obj_names.len()
    }

    /// `g ∘ f`. Panics when the pair is not composable.
    #[inline]
    pub fn comp(&self, g: Arr, f: Arr) -> Arr {
        debug_assert_eq!(self.cod(f), self.dom(g), "not composable");
        self.comp[self.row[g.ix()] as usize + self.pos_in_into[f.ix()] as usize]
    }

    pub fn try_comp(&self, g: Arr, f: Arr) -> Option<Arr> {
        (self.cod(f) == self.dom(g)).then(|| self.comp(g, f))
    }

    /// Composite of a path given in diagrammatic order reversed:
    /// `comp_all(&[h, g, f]) = h ∘ g ∘ f`.
    pub fn comp_all(&self, arrows: &[Arr]) -> Arr {
        let (last, rest) = arrows.split_last().expect("empty path");
        rest.iter().rev().fold(*last, |acc, &a| self.comp(a, acc))
    }

    pub fn arrows_into(&self, y: Obj) -> &[Arr] {
        &self.into[y.ix()]
    }

    pub fn arrows_out(&self, x: Obj) -> &[Arr] {
        &self.out[x.ix()]
    }

    /// Arrows `x → y` in declaration order.
    pub fn hom(&self, x: Obj, y: Obj) -> &[Arr] {
        let row = &self.out_by_cod[x.ix()];
        let lo = row.partition_point(|&a| self.cod(a) < y);
        let hi = row.partition_point(|&a| self.cod(a) <= y);
        &row[lo..hi]
    }

    pub fn obj_name(&self, x: Obj) -> &str {
        &self.obj_names[x.ix()]
    }

    pub fn arr_name(&self, a: Arr) -> &str {
        &self.arr_names[a.ix()]
    }

    pub fn find_obj(&self, name: &str) -> Option<Obj> {
        self.obj_index.get(name).copied()
    }

    pub fn find_arr(&self, name: &str) -> Option<Arr> {
        self.arr_index.get(name).copied()
    }

    /// Overwrites one composition entry. Intended for mutation tests.
    pub fn set_composite(&mut self, g: Arr, f: Arr, h: Arr) {
        assert_eq!(self.cod(f), self.dom(g), "not composable");
        let slot = self.row[g.ix()] as usize + self.pos_in_into[f.ix()] as usize;
        self.comp[slot] = h;
    }

    /// Every composable pair `(g, f)`.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (Arr, Arr)> + '_ {
        self.arrs()
            .flat_map(move |g| self.arrows_into(self.dom(g)).iter().map(move |&f| (g, f)))
    }
}

/// Incremental construction of a [`FinCat`]. All objects must be added before
/// the first non-identity arrow so identities occupy the first arrow ids.
#[derive(Default, Clone, Debug)]
pub struct CatBuilder {
    obj_names: Vec<String>,
    arr_names: Vec<String>,
    taken: BTreeMap<String, u32>,
    dom: Vec<Obj>,
    cod: Vec<Obj>,
}

impl CatBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an object together with its identity, named `id_<name>`.
    pub fn object(&mut self, name: impl Into<String>) -> Obj {
        assert_eq!(
            self.arr_names.len(),
            self.obj_names.len(),
            "objects must be declared before arrows"
        );
        let name = name.into();
        let x = Obj(self.obj_names.len() as u32);
        self.taken.insert(format!("id_{name}"), 1);
        self.arr_names.push(format!("id_{name}"));
        self.obj_names.push(name);
        self.dom.push(x);
        self.cod.push(x);
        x
    }

    pub fn arrow(&mut self, name: impl Into<String>, dom: Obj, cod: Obj) -> Arr {
        let a = Arr(self.arr_names.len() as u32);
        let name = name.into();
        *self.taken.entry(name.clone()).or_insert(0) += 1;
        self.arr_names.push(name);
        self.dom.push(dom);
        self.cod.push(cod);
        a
    }

    /// Like [`CatBuilder::arrow`], suffixing `#2`, `#3`, … when the name is taken.
    pub fn arrow_fresh(&mut self, name: impl Into<String>, dom: Obj, cod: Obj) -> Arr {
        let name = name.into();
        if !self.taken.contains_key(&name) {
            return self.arrow(name, dom, cod);
        }
        let mut k = 2;
        while self.taken.contains_key(&format!("{name}#{k}")) {
            k += 1;
        }
        self.arrow(format!("{name}#{k}"), dom, cod)
    }

    pub fn n_objs(&self) -> usize {
        self.obj_names.len()
    }

    pub fn n_arrs(&self) -> usize {
        self.arr_names.len()
    }

    pub fn dom(&self, a: Arr) -> Obj {
        self.dom[a.ix()]
    }

    pub fn cod(&self, a: Arr) -> Obj {
        self.cod[a.ix()]
    }

    /// Finishes the table. `compose(g, f)` is consulted for every composable
    /// pair with neither side an identity; composites with identities are
    /// implicit.
    pub fn build(self, mut compose: impl FnMut(Arr, Arr) -> Option<Arr>) -> Result<FinCat> {
        let n = self.obj_names.len();
        let m = self.arr_names.len();
        let mut obj_index = BTreeMap::new();
        for (i, name) in self.obj_names.iter().enumerate() {
            if obj_index.insert(name.clone(), Obj(i as u32)).is_some() {
                return Err(Error::MalformedTable(format!("duplicate object name `{name}`")));
            }
        }
        let mut arr_index = BTreeMap::new();
        for (i, name) in self.arr_names.iter().enumerate() {
            if arr_index.insert(name.clone(), Arr(i as u32)).is_some() {
                return Err(Error::MalformedTable(format!("duplicate arrow name `{name}`")));
            }
        }
        for a in 0..m {
            if self.dom[a].ix() >= n || self.cod[a].ix() >= n {
                return Err(Error::MalformedTable(format!(
                    "arrow `{}` has an unresolved endpoint",
                    self.arr_names[a]
                )));
            }
        }
        let mut into = alloc::vec![Vec::new(); n];
        let mut out = alloc::vec![Vec::new(); n];
        let mut pos_in_into = alloc::vec![0u32; m];
        for a in 0..m {
            let a_ = Arr(a as u32);
            pos_in_into[a] = into[self.cod[a].ix()].len() as u32;
            into[self.cod[a].ix()].push(a_);
            out[self.dom[a].ix()].push(a_);
        }
        let mut out_by_cod = out.clone();
        for row in &mut out_by_cod {
            row.sort_by_key(|&a| (self.cod[a.ix()], a));
        }
        let mut row = alloc::vec![0u32; m];
        let mut total = 0usize;
        for g in 0..m {
            row[g] = total as u32;
            total += into[self.dom[g].ix()].len();
        }
        let mut comp = Vec::with_capacity(total);
        for g in 0..m {
            let g_ = Arr(g as u32);
            for &f in &into[self.dom[g].ix()] {
                let h = if g < n {
                    f
                } else if f.ix() < n {
                    g_
                } else {
                    match compose(g_, f) {
                        Some(h) if h.ix() < m => h,
                        Some(h) => {
                            return Err(Error::MalformedTable(format!(
                                "composite of `{}` after `{}` is unresolved id {}",
                                self.arr_names[g], self.arr_names[f.ix()], h.0
                            )))
                        }
                        None => {
                            return Err(Error::MalformedTable(format!(
                                "missing composite `{} . {}`",
                                self.arr_names[g],
                                self.arr_names[f.ix()]
                            )))
                        }
                    }
                };
                comp.push(h);
            }
        }
        Ok(FinCat {
            obj_names: self.obj_names,
            arr_names: self.arr_names,
            dom: self.dom,
            cod: self.cod,
            into,
            out,
            out_by_cod,
            pos_in_into,
            row,
            comp,
            obj_index,
            arr_index,
        })
    }
}
