//! Adjoints to reindexing along display maps and the Beck–Chevalley
//! condition.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::budget::Budget;
use crate::display::{verify_display_class, DisplayClass};
use crate::error::{Error, Result};
use crate::fibration::ClovenFibration;
use crate::kernel::{Arr, FinFunctor, NatTransf, Obj};

/// `Left` is `∐_u ⊣ u*`, `Right` is `u* ⊣ ∏_u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub fn dual(self) -> Self {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }
}

/// Universal arrows along `u`, one per object of the fibre over `dom u`,
/// possibly missing for some objects.
///
/// For `Left` an entry `(γ, η)` has `η: α ⇝ u*γ`; for `Right` it has
/// `ε: u*γ ⇝ α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transport {
    pub u: Arr,
    pub direction: Direction,
    entries: Vec<Option<(Obj, Arr)>>,
}

impl Transport {
    pub fn at(&self, p: &ClovenFibration, alpha: Obj) -> Option<(Obj, Arr)> {
        self.entries[p.fibre_pos(alpha)]
    }

    pub fn is_total(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }

    /// Objects of the source fibre without a universal arrow.
    pub fn missing<'a>(&'a self, p: &'a ClovenFibration) -> impl Iterator<Item = Obj> + 'a {
        let src = p.fibre_objs(p.base().dom(self.u));
        src.iter().copied().filter(move |&a| self.entries[p.fibre_pos(a)].is_none())
    }
}

fn left_at(p: &ClovenFibration, u: Arr, alpha: Obj, budget: Budget) -> Result<Option<(Obj, Arr)>> {
    let meter = budget.meter();
    let e = p.total();
    let j = p.base().cod(u);
    let targets = p.fibre_objs(j);
    let over_u: Vec<usize> = targets.iter().map(|&b| p.hom_over(alpha, b, u).count()).collect();
    let mut seen = Vec::new();
    for &gamma in targets {
        let l = p.lift(u, gamma);
        for eta in p.vhom(alpha, e.dom(l)) {
            let hat = e.comp(l, eta);
            let mut ok = true;
            for (bi, &beta) in targets.iter().enumerate() {
                meter.tick()?;
                seen.clear();
                let mut n = 0;
                for m in p.vhom(gamma, beta) {
                    let img = e.comp(m, hat);
                    if seen.contains(&img) {
                        ok = false;
                        break;
                    }
                    seen.push(img);
                    n += 1;
                }
                if !ok || n != over_u[bi] {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(Some((gamma, eta)));
            }
        }
    }
    Ok(None)
}

fn right_at(p: &ClovenFibration, u: Arr, alpha: Obj, budget: Budget) -> Result<Option<(Obj, Arr)>> {
    let meter = budget.meter();
    let e = p.total();
    let j = p.base().cod(u);
    let targets = p.fibre_objs(j);
    let counts: Vec<usize> = targets.iter().map(|&b| p.vhom(p.reindex_obj(u, b), alpha).count()).collect();
    let mut seen = Vec::new();
    for &gamma in targets {
        let z = p.reindex_obj(u, gamma);
        for eps in p.vhom(z, alpha) {
            let mut ok = true;
            for (bi, &beta) in targets.iter().enumerate() {
                meter.tick()?;
                seen.clear();
                let mut n = 0;
                for m in p.vhom(beta, gamma) {
                    let img = e.comp(eps, p.reindex_arr(u, m));
                    if seen.contains(&img) {
                        ok = false;
                        break;
                    }
                    seen.push(img);
                    n += 1;
                }
                if !ok || n != counts[bi] {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(Some((gamma, eps)));
            }
        }
    }
    Ok(None)
}

/// Universal-arrow search along `u` at every object over `dom u`.
pub fn transport(p: &ClovenFibration, u: Arr, direction: Direction, budget: Budget) -> Result<Transport> {
    let src = p.fibre_objs(p.base().dom(u));
    let mut entries = Vec::with_capacity(src.len());
    for &alpha in src {
        entries.push(match direction {
            Direction::Left => left_at(p, u, alpha, budget)?,
            Direction::Right => right_at(p, u, alpha, budget)?,
        });
    }
    Ok(Transport { u, direction, entries })
}

/// A total fibrewise adjoint to `u*`.
///
/// `obj`, `unit` and `counit` are indexed by fibre position; arrows are
/// total-category ids. For `Left` the unit lives on the fibre over `dom u`
/// and the counit on the fibre over `cod u`; for `Right` the other way round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointData {
    pub direction: Direction,
    pub u: Arr,
    pub obj: Vec<Obj>,
    pub arr: BTreeMap<Arr, Arr>,
    pub unit: Vec<Arr>,
    pub counit: Vec<Arr>,
}

impl AdjointData {
    /// The transport as a functor between the fibre categories.
    pub fn transport_functor(&self, p: &ClovenFibration) -> Result<FinFunctor> {
        let src = p.fibre(p.base().dom(self.u))?;
        let tgt = p.fibre(p.base().cod(self.u))?;
        let obj = self.obj.iter().map(|&x| tgt.local_obj(x).expect("image in fibre")).collect();
        let arr = src
            .arrs
            .iter()
            .map(|a| tgt.local_arr(self.arr[a]).expect("image in fibre"))
            .collect();
        Ok(FinFunctor { obj, arr })
    }

    pub fn unit_transf(&self) -> NatTransf {
        NatTransf { components: self.unit.clone() }
    }

    pub fn counit_transf(&self) -> NatTransf {
        NatTransf { components: self.counit.clone() }
    }
}

fn unique(mut it: impl Iterator<Item = Arr>) -> Option<Arr> {
    let first = it.next()?;
    it.next().is_none().then_some(first)
}

/// Lazily computed transports along base arrows, shared by the checks.
pub struct FibCtx<'a> {
    pub p: &'a ClovenFibration,
    pub budget: Budget,
    cache: RefCell<BTreeMap<(Arr, Direction), Rc<Transport>>>,
}

impl<'a> FibCtx<'a> {
    pub fn new(p: &'a ClovenFibration, budget: Budget) -> Self {
        FibCtx { p, budget, cache: RefCell::new(BTreeMap::new()) }
    }

    pub fn transport(&self, u: Arr, d: Direction) -> Result<Rc<Transport>> {
        if let Some(t) = self.cache.borrow().get(&(u, d)) {
            return Ok(t.clone());
        }
        let t = if self.p.base().is_identity(u) {
            let src = self.p.fibre_objs(self.p.base().dom(u));
            let entries = src.iter().map(|&a| Some((a, self.p.total().id(a)))).collect();
            Rc::new(Transport { u, direction: d, entries })
        } else {
            Rc::new(transport(self.p, u, d, self.budget)?)
        };
        self.cache.borrow_mut().insert((u, d), t.clone());
        Ok(t)
    }

    /// `(∐_u α, η_α)` when it exists.
    pub fn coprod(&self, u: Arr, alpha: Obj) -> Result<Option<(Obj, Arr)>> {
        Ok(self.transport(u, Direction::Left)?.at(self.p, alpha))
    }

    /// `(∏_u α, ε_α)` when it exists.
    pub fn prod(&self, u: Arr, alpha: Obj) -> Result<Option<(Obj, Arr)>> {
        Ok(self.transport(u, Direction::Right)?.at(self.p, alpha))
    }

    fn missing(&self, u: Arr, alpha: Obj, d: Direction) -> Error {
        let sym = if d == Direction::Left { "coproduct" } else { "product" };
        Error::PreconditionFailed(format!(
            "no {sym} of `{}` along `{}`",
            self.p.total().obj_name(alpha),
            self.p.base().arr_name(u)
        ))
    }

    pub fn coprod_req(&self, u: Arr, alpha: Obj) -> Result<(Obj, Arr)> {
        self.coprod(u, alpha)?.ok_or_else(|| self.missing(u, alpha, Direction::Left))
    }

    pub fn prod_req(&self, u: Arr, alpha: Obj) -> Result<(Obj, Arr)> {
        self.prod(u, alpha)?.ok_or_else(|| self.missing(u, alpha, Direction::Right))
    }

    /// `ι_α = lift(u, ∐α) ∘ η_α: α → ∐_u α`, an arrow over `u`.
    pub fn injection(&self, u: Arr, alpha: Obj) -> Result<(Obj, Arr)> {
        let (c, eta) = self.coprod_req(u, alpha)?;
        Ok((c, self.p.total().comp(self.p.lift(u, c), eta)))
    }

    /// `∐_u φ` for vertical `φ: α ⇝ α'`.
    pub fn coprod_arr(&self, u: Arr, phi: Arr) -> Result<Arr> {
        let e = self.p.total();
        let (c1, i1) = self.injection(u, e.dom(phi))?;
        let (c2, i2) = self.injection(u, e.cod(phi))?;
        let target = e.comp(i2, phi);
        unique(self.p.vhom(c1, c2).filter(|&m| e.comp(m, i1) == target))
            .ok_or_else(|| Error::TheoremViolation("coproduct transport on an arrow".into()))
    }

    /// `∏_u φ` for vertical `φ: α ⇝ α'`.
    pub fn prod_arr(&self, u: Arr, phi: Arr) -> Result<Arr> {
        let (p, e) = (self.p, self.p.total());
        let (c1, e1) = self.prod_req(u, e.dom(phi))?;
        let (c2, e2) = self.prod_req(u, e.cod(phi))?;
        let target = e.comp(phi, e1);
        unique(p.vhom(c1, c2).filter(|&m| e.comp(e2, p.reindex_arr(u, m)) == target))
            .ok_or_else(|| Error::TheoremViolation("product transport on an arrow".into()))
    }

    /// Counit `∐_u u*β ⇝ β` for `β` over `cod u`.
    pub fn coprod_counit(&self, u: Arr, beta: Obj) -> Result<Arr> {
        let p = self.p;
        let (c, i) = self.injection(u, p.reindex_obj(u, beta))?;
        let l = p.lift(u, beta);
        unique(p.vhom(c, beta).filter(|&m| p.total().comp(m, i) == l))
            .ok_or_else(|| Error::TheoremViolation("coproduct counit".into()))
    }

    /// Unit `β ⇝ ∏_u u*β` for `β` over `cod u`.
    pub fn prod_unit(&self, u: Arr, beta: Obj) -> Result<Arr> {
        let p = self.p;
        let z = p.reindex_obj(u, beta);
        let (c, eps) = self.prod_req(u, z)?;
        let id = p.total().id(z);
        unique(p.vhom(beta, c).filter(|&m| p.total().comp(eps, p.reindex_arr(u, m)) == id))
            .ok_or_else(|| Error::TheoremViolation("product unit".into()))
    }

    /// The unique `m: γ ⇝ ∏_u α` whose transpose `ε ∘ u*(m)` is `t: u*γ ⇝ α`.
    pub fn prod_transpose(&self, u: Arr, gamma: Obj, t: Arr) -> Result<Arr> {
        let (p, e) = (self.p, self.p.total());
        let (c, eps) = self.prod_req(u, e.cod(t))?;
        unique(p.vhom(gamma, c).filter(|&m| e.comp(eps, p.reindex_arr(u, m)) == t))
            .ok_or_else(|| Error::TheoremViolation("product transpose".into()))
    }

    /// Assembles the full adjoint along `u`, checking the triangle identities.
    pub fn adjoint_data(&self, u: Arr, d: Direction) -> Result<Option<AdjointData>> {
        let t = self.transport(u, d)?;
        if !t.is_total() {
            return Ok(None);
        }
        let (p, e, b) = (self.p, self.p.total(), self.p.base());
        let (i, j) = (b.dom(u), b.cod(u));
        let src = p.fibre(i)?;
        let mut obj = Vec::new();
        let mut arr = BTreeMap::new();
        for &a in p.fibre_objs(i) {
            obj.push(t.at(p, a).expect("total").0);
        }
        for &a in &src.arrs {
            let img = match d {
                Direction::Left => self.coprod_arr(u, a)?,
                Direction::Right => self.prod_arr(u, a)?,
            };
            arr.insert(a, img);
        }
        let (unit, counit): (Vec<Arr>, Vec<Arr>) = match d {
            Direction::Left => {
                let unit = p.fibre_objs(i).iter().map(|&a| t.at(p, a).expect("total").1).collect();
                let counit = p.fibre_objs(j).iter().map(|&bt| self.coprod_counit(u, bt)).collect::<Result<_>>()?;
                (unit, counit)
            }
            Direction::Right => {
                let unit = p.fibre_objs(j).iter().map(|&bt| self.prod_unit(u, bt)).collect::<Result<_>>()?;
                let counit = p.fibre_objs(i).iter().map(|&a| t.at(p, a).expect("total").1).collect();
                (unit, counit)
            }
        };
        let data = AdjointData { direction: d, u, obj, arr, unit, counit };
        // Triangle identities.
        let ok = match d {
            Direction::Left => {
                p.fibre_objs(i).iter().enumerate().all(|(k, _)| {
                    let g = data.obj[k];
                    let eps = data.counit[p.fibre_pos(g)];
                    e.comp(eps, data.arr[&data.unit[k]]) == e.id(g)
                }) && p.fibre_objs(j).iter().enumerate().all(|(k, &bt)| {
                    let z = p.reindex_obj(u, bt);
                    let eta = data.unit[p.fibre_pos(z)];
                    e.comp(p.reindex_arr(u, data.counit[k]), eta) == e.id(z)
                })
            }
            Direction::Right => {
                p.fibre_objs(j).iter().enumerate().all(|(k, &bt)| {
                    let z = p.reindex_obj(u, bt);
                    let eps = data.counit[p.fibre_pos(z)];
                    e.comp(eps, p.reindex_arr(u, data.unit[k])) == e.id(z)
                }) && p.fibre_objs(i).iter().enumerate().all(|(k, _)| {
                    let c = data.obj[k];
                    let eta = data.unit[p.fibre_pos(c)];
                    e.comp(data.arr[&data.counit[k]], eta) == e.id(c)
                })
            }
        };
        if !ok {
            return Err(Error::TheoremViolation(format!(
                "triangle identities fail along `{}`",
                b.arr_name(u)
            )));
        }
        Ok(Some(data))
    }

    /// The component at `beta` of the left mate `∐_u g* ⇒ f* ∐_v` of the
    /// commuting square `v ∘ g = f ∘ u`, by the counit-last zig-zag.
    pub fn left_mate(&self, sq: Square, beta: Obj) -> Result<Arr> {
        let (p, e) = (self.p, self.p.total());
        let (x, eta_v) = self.coprod_req(sq.v, beta)?;
        let step1 = self.coprod_arr(sq.u, p.reindex_arr(sq.g, eta_v))?;
        let iso = e.comp(p.comparison_inv(sq.f, sq.u, x), p.comparison(sq.v, sq.g, x));
        let step2 = self.coprod_arr(sq.u, iso)?;
        let step3 = self.coprod_counit(sq.u, p.reindex_obj(sq.f, x))?;
        Ok(e.comp_all(&[step3, step2, step1]))
    }

    /// The component at `beta` of the right mate `f* ∏_v ⇒ ∏_u g*`.
    pub fn right_mate(&self, sq: Square, beta: Obj) -> Result<Arr> {
        let (p, e) = (self.p, self.p.total());
        let (y, eps_v) = self.prod_req(sq.v, beta)?;
        let fy = p.reindex_obj(sq.f, y);
        let step1 = self.prod_unit(sq.u, fy)?;
        let iso = e.comp(p.comparison_inv(sq.v, sq.g, y), p.comparison(sq.f, sq.u, y));
        let step2 = self.prod_arr(sq.u, iso)?;
        let step3 = self.prod_arr(sq.u, p.reindex_arr(sq.g, eps_v))?;
        Ok(e.comp_all(&[step3, step2, step1]))
    }
}

/// A commuting square `v ∘ g = f ∘ u` with `g: P → K`, `u: P → I`,
/// `v: K → J`, `f: I → J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Square {
    pub v: Arr,
    pub f: Arr,
    pub u: Arr,
    pub g: Arr,
}

/// A chosen pullback square with its mate components and verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BCSquare {
    pub square: Square,
    pub direction: Direction,
    /// One component per object over `dom v`, in fibre order.
    pub mate: Vec<Arr>,
    pub verdict: bool,
}

/// Beck–Chevalley squares for member `v` against every arrow into `cod v`.
pub fn beck_chevalley(ctx: &FibCtx<'_>, cls: &DisplayClass, v: Arr, d: Direction) -> Result<Vec<BCSquare>> {
    let (p, b) = (ctx.p, ctx.p.base());
    let mut out = Vec::new();
    for &f in b.arrows_into(b.cod(v)) {
        let cone = cls.require_pullback(v, f)?;
        let square = Square { v, f, u: cone.p2, g: cone.p1 };
        let mut mate = Vec::new();
        let mut verdict = true;
        for &beta in p.fibre_objs(b.dom(v)) {
            let m = match d {
                Direction::Left => ctx.left_mate(square, beta)?,
                Direction::Right => ctx.right_mate(square, beta)?,
            };
            verdict &= p.inverse(m).is_some();
            mate.push(m);
        }
        out.push(BCSquare { square, direction: d, mate, verdict });
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub holds: bool,
    /// Members along which the adjoint is missing, with a first object lacking it.
    pub missing_adjoints: Vec<(Arr, Obj)>,
    pub squares_checked: usize,
    pub failing_squares: Vec<BCSquare>,
}

/// Adjoints along every member plus every Beck–Chevalley square.
pub fn verify_fibred_structure(ctx: &FibCtx<'_>, cls: &DisplayClass, d: Direction) -> Result<StructureReport> {
    if !verify_display_class(cls).pullback_closed {
        return Err(Error::PreconditionFailed("display class is not pullback-closed".into()));
    }
    let mut r = StructureReport::default();
    for v in cls.members() {
        let t = ctx.transport(v, d)?;
        let first = t.missing(ctx.p).next();
        if let Some(a) = first {
            r.missing_adjoints.push((v, a));
        }
    }
    if r.missing_adjoints.is_empty() {
        for v in cls.members() {
            for sq in beck_chevalley(ctx, cls, v, d)? {
                r.squares_checked += 1;
                if !sq.verdict {
                    r.failing_squares.push(sq);
                }
            }
        }
    }
    r.holds = r.missing_adjoints.is_empty() && r.failing_squares.is_empty();
    Ok(r)
}

/// The fibrewise adjoint along `u`, or `None` if some object lacks one.
pub fn adjoint_along(p: &ClovenFibration, u: Arr, d: Direction, budget: Budget) -> Result<Option<AdjointData>> {
    FibCtx::new(p, budget).adjoint_data(u, d)
}
