use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::budget::Budget;
use crate::display::DisplayClass;
use crate::error::Result;
use crate::fibration::{full_subfibration, ClovenFibration, Subfibration};
use crate::kernel::{Arr, Obj};
use crate::structure::{Direction, FibCtx};

/// One solved instance of the splitting property: `h` factors through the
/// section `section` of `u` via `hbar`.
///
/// For `Left`, `h: α ⇝ ∐_u β` and `hbar: α ⇝ g*β`; for `Right`,
/// `h: ∏_u β ⇝ α` and `hbar: g*β ⇝ α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplittingWitness {
    pub u: Arr,
    pub beta: Obj,
    pub h: Arr,
    pub section: Arr,
    pub hbar: Arr,
}

/// A triple `(u, β, h)` with `count` factoring pairs instead of exactly one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitFailure {
    pub u: Arr,
    pub beta: Obj,
    pub h: Arr,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    pub holds: bool,
    /// All witnesses when the property holds; empty otherwise.
    pub witnesses: Vec<SplittingWitness>,
    pub failure: Option<SplitFailure>,
}

/// `α ≅ ∐_f β` (or `∏_f β`) with `β` quantifier-free; `iso: α ⇝ ∐_f β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QfCover {
    pub f: Arr,
    pub beta: Obj,
    pub iso: Arr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnoughReport {
    pub holds: bool,
    /// Per total object, its order-least cover.
    pub covers: Vec<Option<QfCover>>,
    pub first_failure: Option<Obj>,
}

/// A fibration with a display class and memoized quantifier checks.
pub struct Logic<'a> {
    pub ctx: FibCtx<'a>,
    pub cls: &'a DisplayClass,
    split: RefCell<BTreeMap<(Obj, Direction), Rc<SplitReport>>>,
    qf: RefCell<BTreeMap<(Obj, Direction), Option<Arr>>>,
}

impl<'a> Logic<'a> {
    pub fn new(p: &'a ClovenFibration, cls: &'a DisplayClass, budget: Budget) -> Self {
        Logic { ctx: FibCtx::new(p, budget), cls, split: RefCell::default(), qf: RefCell::default() }
    }

    pub fn p(&self) -> &'a ClovenFibration {
        self.ctx.p
    }

    /// Sections `g` of `u`, in arrow order.
    pub fn sections(&self, u: Arr) -> Vec<Arr> {
        let b = self.p().base();
        let a = b.cod(u);
        b.hom(a, b.dom(u)).iter().copied().filter(|&g| b.comp(u, g) == b.id(a)).collect()
    }

    /// All factoring pairs `(g, h̄)` of `h` through `∐_u β` or `∏_u β`.
    pub fn factorizations(&self, u: Arr, beta: Obj, h: Arr, d: Direction) -> Result<Vec<(Arr, Arr)>> {
        let p = self.p();
        let e = p.total();
        let mut out = Vec::new();
        match d {
            Direction::Left => {
                let (_, iota) = self.ctx.injection(u, beta)?;
                let alpha = e.dom(h);
                for g in self.sections(u) {
                    let l = e.comp(iota, p.lift(g, beta));
                    for hb in p.vhom(alpha, p.reindex_obj(g, beta)) {
                        if e.comp(l, hb) == h {
                            out.push((g, hb));
                        }
                    }
                }
            }
            Direction::Right => {
                let (c, eps) = self.ctx.prod_req(u, beta)?;
                let alpha = e.cod(h);
                for g in self.sections(u) {
                    let l = e.comp(p.reindex_arr(g, eps), p.comparison_inv(u, g, c));
                    for hb in p.vhom(p.reindex_obj(g, beta), alpha) {
                        if e.comp(hb, l) == h {
                            out.push((g, hb));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// The quantifier-splitting property at `α`, over every member into its
    /// base object and every `β` along which the adjoint exists.
    pub fn splitting(&self, alpha: Obj, d: Direction) -> Result<Rc<SplitReport>> {
        if let Some(r) = self.split.borrow().get(&(alpha, d)) {
            return Ok(r.clone());
        }
        let r = Rc::new(self.compute_splitting(alpha, d)?);
        self.split.borrow_mut().insert((alpha, d), r.clone());
        Ok(r)
    }

    fn compute_splitting(&self, alpha: Obj, d: Direction) -> Result<SplitReport> {
        let p = self.p();
        let meter = self.ctx.budget.meter();
        let a = p.p_obj(alpha);
        let mut witnesses = Vec::new();
        for u in self.cls.members_into(a) {
            for &beta in p.fibre_objs(p.base().dom(u)) {
                let adj = match d {
                    Direction::Left => self.ctx.coprod(u, beta)?,
                    Direction::Right => self.ctx.prod(u, beta)?,
                };
                let Some((c, _)) = adj else { continue };
                let hs: Vec<Arr> = match d {
                    Direction::Left => p.vhom(alpha, c).collect(),
                    Direction::Right => p.vhom(c, alpha).collect(),
                };
                for h in hs {
                    meter.tick()?;
                    let pairs = self.factorizations(u, beta, h, d)?;
                    if pairs.len() != 1 {
                        let failure = SplitFailure { u, beta, h, count: pairs.len() };
                        return Ok(SplitReport { holds: false, witnesses: Vec::new(), failure: Some(failure) });
                    }
                    let (section, hbar) = pairs[0];
                    witnesses.push(SplittingWitness { u, beta, h, section, hbar });
                }
            }
        }
        Ok(SplitReport { holds: true, witnesses, failure: None })
    }

    pub fn is_splitting(&self, alpha: Obj, d: Direction) -> Result<bool> {
        Ok(self.splitting(alpha, d)?.holds)
    }

    /// The first base arrow `f` (in arrow order) with `f*α` not splitting.
    pub fn qfree_failure(&self, alpha: Obj, d: Direction) -> Result<Option<Arr>> {
        if let Some(&r) = self.qf.borrow().get(&(alpha, d)) {
            return Ok(r);
        }
        let p = self.p();
        let mut bad = None;
        for &f in p.base().arrows_into(p.p_obj(alpha)) {
            if !self.is_splitting(p.reindex_obj(f, alpha), d)? {
                bad = Some(f);
                break;
            }
        }
        self.qf.borrow_mut().insert((alpha, d), bad);
        Ok(bad)
    }

    pub fn is_qfree(&self, alpha: Obj, d: Direction) -> Result<bool> {
        Ok(self.qfree_failure(alpha, d)?.is_none())
    }

    /// Quantifier-free objects, in object order.
    pub fn qfree_objects(&self, d: Direction) -> Result<Vec<Obj>> {
        let mut out = Vec::new();
        for x in self.p().total().objs() {
            if self.is_qfree(x, d)? {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// The full subfibration on quantifier-free objects.
    pub fn qfree_subfibration(&self, d: Direction) -> Result<Subfibration> {
        let keep = self.qfree_objects(d)?;
        full_subfibration(self.p(), |x| keep.binary_search(&x).is_ok())
    }

    /// The order-least cover of `α` by a quantifier-free object.
    pub fn cover(&self, alpha: Obj, d: Direction) -> Result<Option<QfCover>> {
        let p = self.p();
        for f in self.cls.members_into(p.p_obj(alpha)) {
            for &beta in p.fibre_objs(p.base().dom(f)) {
                if !self.is_qfree(beta, d)? {
                    continue;
                }
                let adj = match d {
                    Direction::Left => self.ctx.coprod(f, beta)?,
                    Direction::Right => self.ctx.prod(f, beta)?,
                };
                if let Some((c, _)) = adj {
                    if let Some(iso) = p.vertical_iso(alpha, c) {
                        return Ok(Some(QfCover { f, beta, iso }));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn enough_qfree(&self, d: Direction) -> Result<EnoughReport> {
        let mut covers = Vec::new();
        let mut first_failure = None;
        for x in self.p().total().objs() {
            let c = self.cover(x, d)?;
            if c.is_none() && first_failure.is_none() {
                first_failure = Some(x);
            }
            covers.push(c);
        }
        Ok(EnoughReport { holds: first_failure.is_none(), covers, first_failure })
    }
}

/// A disagreement between a `∏` verdict in `p` and the `∐` verdict in `p^op`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualityMismatch {
    Splitting(Obj),
    Qfree(Obj),
    Enough,
}

/// Compares every `∏`-side verdict of `p` with the `∐`-side verdict of the
/// fibrewise opposite, and conversely.
pub fn duality_mismatches(p: &Logic<'_>, op: &Logic<'_>) -> Result<Vec<DualityMismatch>> {
    let mut out = Vec::new();
    for x in p.p().total().objs() {
        for (d, e) in [(Direction::Right, Direction::Left), (Direction::Left, Direction::Right)] {
            if p.is_splitting(x, d)? != op.is_splitting(x, e)? {
                out.push(DualityMismatch::Splitting(x));
            }
            if p.is_qfree(x, d)? != op.is_qfree(x, e)? {
                out.push(DualityMismatch::Qfree(x));
            }
        }
    }
    for (d, e) in [(Direction::Right, Direction::Left), (Direction::Left, Direction::Right)] {
        if p.enough_qfree(d)?.holds != op.enough_qfree(e)?.holds {
            out.push(DualityMismatch::Enough);
        }
    }
    Ok(out)
}
