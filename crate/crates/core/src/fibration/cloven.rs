use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kernel::{
    check_functor, subcategory, Arr, Embedded, FinCat, FinFunctor, LawReport, Obj, Violation,
};

/// Whether `f` is cartesian for `proj: total → base`: every `g` into `cod f`
/// together with a base factorization `p(g) = p(f) ∘ w` has exactly one
/// lift `h` over `w` with `f ∘ h = g`.
pub fn is_cartesian(total: &FinCat, base: &FinCat, proj: &FinFunctor, f: Arr) -> bool {
    let (x, y) = (total.dom(f), total.cod(f));
    let pf = proj.on_arr(f);
    let mut seen: Vec<(Arr, Arr)> = Vec::new();
    for z in total.objs() {
        let homs = total.hom(z, x);
        seen.clear();
        for &h in homs {
            let key = (total.comp(f, h), proj.on_arr(h));
            if seen.contains(&key) {
                return false;
            }
            seen.push(key);
        }
        let pz = proj.on_obj(z);
        let mut pairs = 0usize;
        for &g in total.hom(z, y) {
            let pg = proj.on_arr(g);
            pairs += base.hom(pz, proj.on_obj(x)).iter().filter(|&&w| base.comp(pf, w) == pg).count();
        }
        if pairs != homs.len() {
            return false;
        }
    }
    true
}

fn find_lift(total: &FinCat, base: &FinCat, proj: &FinFunctor, u: Arr, y: Obj) -> Option<Arr> {
    if base.is_identity(u) {
        return Some(total.id(y));
    }
    let a = base.dom(u);
    total
        .arrows_into(y)
        .iter()
        .copied()
        .filter(|&f| proj.on_arr(f) == u && proj.on_obj(total.dom(f)) == a)
        .find(|&f| is_cartesian(total, base, proj, f))
}

/// A functor with a partial cleavage, before the fibration property is
/// established.
#[derive(Clone, Debug)]
pub struct Prefibration {
    pub total: FinCat,
    pub base: FinCat,
    pub proj: FinFunctor,
    pub cleavage: BTreeMap<(Arr, Obj), Arr>,
}

impl Prefibration {
    pub fn new(total: FinCat, base: FinCat, proj: FinFunctor) -> Self {
        Prefibration { total, base, proj, cleavage: BTreeMap::new() }
    }

    fn entry_ok(&self, u: Arr, y: Obj, f: Arr) -> bool {
        if f.ix() >= self.total.n_arrs() || self.total.cod(f) != y || self.proj.on_arr(f) != u {
            return false;
        }
        if self.base.is_identity(u) {
            return f == self.total.id(y);
        }
        is_cartesian(&self.total, &self.base, &self.proj, f)
    }

    /// The cleavage entry for `(u, y)` if present, else the order-least
    /// cartesian arrow over `u` into `y`.
    pub fn cartesian_lift(&self, u: Arr, y: Obj) -> Result<Arr> {
        if self.base.cod(u) != self.proj.on_obj(y) {
            return Err(Error::PreconditionFailed(format!(
                "base arrow `{}` does not end at the image of `{}`",
                self.base.arr_name(u),
                self.total.obj_name(y)
            )));
        }
        if let Some(&f) = self.cleavage.get(&(u, y)) {
            return Ok(f);
        }
        find_lift(&self.total, &self.base, &self.proj, u, y).ok_or(Error::NotAFibration { u, y })
    }

    /// Every missing lift and every invalid cleavage entry.
    pub fn verify(&self) -> Result<LawReport> {
        let mut report = check_functor(&self.total, &self.base, &self.proj)?;
        if !report.is_empty() {
            return Ok(report);
        }
        for y in self.total.objs() {
            for &u in self.base.arrows_into(self.proj.on_obj(y)) {
                match self.cleavage.get(&(u, y)) {
                    Some(&f) if !self.entry_ok(u, y, f) => report.push(Violation::BadLift { u, y, f }),
                    Some(_) => {}
                    None => {
                        if find_lift(&self.total, &self.base, &self.proj, u, y).is_none() {
                            report.push(Violation::MissingLift { u, y });
                        }
                    }
                }
            }
        }
        Ok(report)
    }

    /// Completes the cleavage by search.
    pub fn into_cloven(self) -> Result<ClovenFibration> {
        let report = check_functor(&self.total, &self.base, &self.proj)?;
        if !report.is_empty() {
            return Err(Error::MalformedTable("projection is not a functor".into()));
        }
        for (&(u, y), &f) in &self.cleavage {
            if u.ix() >= self.base.n_arrs() || y.ix() >= self.total.n_objs() || !self.entry_ok(u, y, f) {
                return Err(Error::MalformedTable(format!(
                    "cleavage entry for ({}, {}) is not a cartesian lift",
                    u, y
                )));
            }
        }
        let cleavage = self.cleavage;
        let (total, base, proj) = (self.total, self.base, self.proj);
        ClovenFibration::assemble(total, base, proj, |t, b, p, u, y| match cleavage.get(&(u, y)) {
            Some(&f) => Ok(f),
            None => find_lift(t, b, p, u, y).ok_or(Error::NotAFibration { u, y }),
        })
    }
}

/// A Grothendieck fibration with a chosen cleavage. Lifts over identities
/// are identities.
#[derive(Clone, Debug)]
pub struct ClovenFibration {
    total: FinCat,
    base: FinCat,
    proj: FinFunctor,
    /// `lifts[y][i]` is the lift of the `i`-th arrow into `p(y)`.
    lifts: Vec<Vec<Arr>>,
    /// Position of each base arrow among the arrows into its codomain.
    upos: Vec<u32>,
    fibres: Vec<Vec<Obj>>,
    /// Position of each object within its fibre.
    local: Vec<u32>,
    vertical: Vec<bool>,
}

impl ClovenFibration {
    /// Builds a fibration from a lift rule, validating every lift exhaustively.
    pub fn with_lifts(
        total: FinCat,
        base: FinCat,
        proj: FinFunctor,
        mut lift: impl FnMut(Arr, Obj) -> Arr,
    ) -> Result<Self> {
        let report = check_functor(&total, &base, &proj)?;
        if !report.is_empty() {
            return Err(Error::MalformedTable("projection is not a functor".into()));
        }
        ClovenFibration::assemble(total, base, proj, |t, b, p, u, y| {
            let f = lift(u, y);
            let ok = f.ix() < t.n_arrs()
                && t.cod(f) == y
                && p.on_arr(f) == u
                && if b.is_identity(u) { f == t.id(y) } else { is_cartesian(t, b, p, f) };
            if ok {
                Ok(f)
            } else {
                Err(Error::TheoremViolation(format!(
                    "constructed lift of `{}` into `{}` is not cartesian",
                    b.arr_name(u),
                    t.obj_name(y)
                )))
            }
        })
    }

    /// Builds from trusted lifts without re-checking cartesianness.
    pub fn with_lifts_unchecked(
        total: FinCat,
        base: FinCat,
        proj: FinFunctor,
        mut lift: impl FnMut(Arr, Obj) -> Arr,
    ) -> Result<Self> {
        ClovenFibration::assemble(total, base, proj, |_, _, _, u, y| Ok(lift(u, y)))
    }

    fn assemble(
        total: FinCat,
        base: FinCat,
        proj: FinFunctor,
        mut lift: impl FnMut(&FinCat, &FinCat, &FinFunctor, Arr, Obj) -> Result<Arr>,
    ) -> Result<Self> {
        let mut upos = alloc::vec![0u32; base.n_arrs()];
        for j in base.objs() {
            for (i, &u) in base.arrows_into(j).iter().enumerate() {
                upos[u.ix()] = i as u32;
            }
        }
        let mut lifts = Vec::with_capacity(total.n_objs());
        for y in total.objs() {
            let mut row = Vec::new();
            for &u in base.arrows_into(proj.on_obj(y)) {
                row.push(lift(&total, &base, &proj, u, y)?);
            }
            lifts.push(row);
        }
        let mut fibres = alloc::vec![Vec::new(); base.n_objs()];
        let mut local = Vec::with_capacity(total.n_objs());
        for x in total.objs() {
            let row: &mut Vec<Obj> = &mut fibres[proj.on_obj(x).ix()];
            local.push(row.len() as u32);
            row.push(x);
        }
        let vertical = total.arrs().map(|a| base.is_identity(proj.on_arr(a))).collect();
        Ok(ClovenFibration { total, base, proj, lifts, upos, fibres, local, vertical })
    }

    /// Forgets the cleavage.
    pub fn to_prefibration(&self) -> Prefibration {
        let mut cleavage = BTreeMap::new();
        for y in self.total.objs() {
            for &u in self.base.arrows_into(self.p_obj(y)) {
                cleavage.insert((u, y), self.lift(u, y));
            }
        }
        Prefibration {
            total: self.total.clone(),
            base: self.base.clone(),
            proj: self.proj.clone(),
            cleavage,
        }
    }

    pub fn total(&self) -> &FinCat {
        &self.total
    }

    pub fn base(&self) -> &FinCat {
        &self.base
    }

    pub fn proj(&self) -> &FinFunctor {
        &self.proj
    }

    #[inline]
    pub fn p_obj(&self, x: Obj) -> Obj {
        self.proj.on_obj(x)
    }

    #[inline]
    pub fn p_arr(&self, a: Arr) -> Arr {
        self.proj.on_arr(a)
    }

    /// The chosen cartesian lift of `u` into `y`.
    #[inline]
    pub fn lift(&self, u: Arr, y: Obj) -> Arr {
        debug_assert_eq!(self.base.cod(u), self.p_obj(y));
        self.lifts[y.ix()][self.upos[u.ix()] as usize]
    }

    /// `u*(y)`.
    #[inline]
    pub fn reindex_obj(&self, u: Arr, y: Obj) -> Obj {
        self.total.dom(self.lift(u, y))
    }

    pub fn fibre_objs(&self, i: Obj) -> &[Obj] {
        &self.fibres[i.ix()]
    }

    /// Position of `x` within its fibre.
    #[inline]
    pub fn fibre_pos(&self, x: Obj) -> usize {
        self.local[x.ix()] as usize
    }

    #[inline]
    pub fn is_vertical(&self, a: Arr) -> bool {
        self.vertical[a.ix()]
    }

    pub fn is_cartesian(&self, f: Arr) -> bool {
        is_cartesian(&self.total, &self.base, &self.proj, f)
    }

    /// Vertical arrows `x ⇝ y`.
    pub fn vhom(&self, x: Obj, y: Obj) -> impl Iterator<Item = Arr> + Clone + '_ {
        let same = self.p_obj(x) == self.p_obj(y);
        self.total.hom(x, y).iter().copied().filter(move |&a| same && self.vertical[a.ix()])
    }

    /// Arrows `x → y` over `w`.
    pub fn hom_over(&self, x: Obj, y: Obj, w: Arr) -> impl Iterator<Item = Arr> + Clone + '_ {
        self.total.hom(x, y).iter().copied().filter(move |&a| self.p_arr(a) == w)
    }

    /// The unique `h` over `w` with `c ∘ h = g`, for `c` cartesian.
    pub fn fill(&self, c: Arr, g: Arr, w: Arr) -> Option<Arr> {
        let mut found = None;
        for h in self.hom_over(self.total.dom(g), self.total.dom(c), w) {
            if self.total.comp(c, h) == g {
                if found.is_some() {
                    return None;
                }
                found = Some(h);
            }
        }
        found
    }

    fn must_fill(&self, c: Arr, g: Arr, w: Arr) -> Arr {
        self.fill(c, g, w).expect("filler through a cartesian arrow")
    }

    /// `u*(φ)` for vertical `φ: y ⇝ y'`.
    pub fn reindex_arr(&self, u: Arr, phi: Arr) -> Arr {
        let (y, y2) = (self.total.dom(phi), self.total.cod(phi));
        let g = self.total.comp(phi, self.lift(u, y));
        self.must_fill(self.lift(u, y2), g, self.base.id(self.base.dom(u)))
    }

    /// The vertical iso `b*(a*(x)) ⇝ (a ∘ b)*(x)`.
    pub fn comparison(&self, a: Arr, b: Arr, x: Obj) -> Arr {
        let ab = self.base.comp(a, b);
        let g = self.total.comp(self.lift(a, x), self.lift(b, self.reindex_obj(a, x)));
        self.must_fill(self.lift(ab, x), g, self.base.id(self.base.dom(b)))
    }

    /// The vertical iso `(a ∘ b)*(x) ⇝ b*(a*(x))`.
    pub fn comparison_inv(&self, a: Arr, b: Arr, x: Obj) -> Arr {
        let ab = self.base.comp(a, b);
        let c = self.total.comp(self.lift(a, x), self.lift(b, self.reindex_obj(a, x)));
        self.must_fill(c, self.lift(ab, x), self.base.id(self.base.dom(b)))
    }

    /// The order-least vertical iso `x ⇝ y`.
    pub fn vertical_iso(&self, x: Obj, y: Obj) -> Option<Arr> {
        self.vhom(x, y).find(|&f| self.inverse(f).is_some())
    }

    pub fn inverse(&self, f: Arr) -> Option<Arr> {
        crate::kernel::inverse(&self.total, f)
    }

    /// The fibre over `i` as a subcategory of the total category.
    pub fn fibre(&self, i: Obj) -> Result<Embedded> {
        subcategory(&self.total, &self.fibres[i.ix()], |a| self.vertical[a.ix()])
    }

    /// The reindexing functor `u*` between the fibres, computed from the cleavage.
    pub fn reindex(&self, u: Arr) -> Result<(Embedded, Embedded, FinFunctor)> {
        let src = self.fibre(self.base.cod(u))?;
        let tgt = self.fibre(self.base.dom(u))?;
        let obj = src
            .objs
            .iter()
            .map(|&y| tgt.local_obj(self.reindex_obj(u, y)).expect("reindex lands in the fibre"))
            .collect();
        let arr = src
            .arrs
            .iter()
            .map(|&a| tgt.local_arr(self.reindex_arr(u, a)).expect("reindex of a vertical arrow"))
            .collect();
        Ok((src, tgt, FinFunctor { obj, arr }))
    }
}
