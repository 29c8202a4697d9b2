use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::display::{verify_display_class, DisplayClass};
use crate::error::{Error, Result};
use crate::fibration::{ClovenFibration, FibredFunctor, Prefibration};
use crate::kernel::{Arr, CatBuilder, FinFunctor, Obj};

/// `(I, g: X ↠ I, α)` with `α` over `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SigmaObject {
    pub i: Obj,
    pub g: Arr,
    pub alpha: Obj,
}

/// `(f0, f1, φ)` with `h ∘ f1 = f0 ∘ g` and `φ` over `f1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SigmaArrow {
    pub f0: Arr,
    pub f1: Arr,
    pub phi: Arr,
}

/// `Σ_F(p)` with its object and arrow data.
#[derive(Clone, Debug)]
pub struct SigmaCompletion {
    pub fib: ClovenFibration,
    pub objects: Vec<SigmaObject>,
    pub arrows: Vec<SigmaArrow>,
    obj_index: BTreeMap<SigmaObject, Obj>,
    arr_index: BTreeMap<(Obj, Obj, SigmaArrow), Arr>,
}

impl SigmaCompletion {
    pub fn object(&self, x: Obj) -> SigmaObject {
        self.objects[x.ix()]
    }

    pub fn arrow(&self, a: Arr) -> SigmaArrow {
        self.arrows[a.ix()]
    }

    pub fn obj_of(&self, s: SigmaObject) -> Option<Obj> {
        self.obj_index.get(&s).copied()
    }

    pub fn arr_of(&self, src: Obj, tgt: Obj, a: SigmaArrow) -> Option<Arr> {
        self.arr_index.get(&(src, tgt, a)).copied()
    }

    /// `I_α = (I, id_I, α)`.
    pub fn unit_object(&self, p: &ClovenFibration, alpha: Obj) -> Obj {
        let i = p.p_obj(alpha);
        self.obj_index[&SigmaObject { i, g: p.base().id(i), alpha }]
    }

    /// The completion unit `p → Σ_F(p)`, `α ↦ I_α`.
    pub fn unit_functor(&self, p: &ClovenFibration) -> FibredFunctor {
        let e = p.total();
        let obj: Vec<Obj> = e.objs().map(|a| self.unit_object(p, a)).collect();
        let arr = e
            .arrs()
            .map(|a| {
                let u = p.p_arr(a);
                let sa = SigmaArrow { f0: u, f1: u, phi: a };
                self.arr_index[&(obj[e.dom(a).ix()], obj[e.cod(a).ix()], sa)]
            })
            .collect();
        FibredFunctor::over_identity(p, FinFunctor { obj, arr })
    }
}

pub(crate) fn require_completion_class(cls: &DisplayClass) -> Result<()> {
    let r = verify_display_class(cls);
    if let Some((f, g)) = r.pullback_counterexample {
        return Err(Error::PreconditionFailed(format!(
            "display class is not pullback-closed at (`{}`, `{}`)",
            cls.base().arr_name(f),
            cls.base().arr_name(g)
        )));
    }
    if let Some((g, f)) = r.composition_counterexample {
        return Err(Error::PreconditionFailed(format!(
            "display class is not closed under composition at `{} . {}`",
            cls.base().arr_name(g),
            cls.base().arr_name(f)
        )));
    }
    Ok(())
}

/// The Σ_F-completion: objects `(I, g, α)` ordered by `I`, then member,
/// then `α`; projection `(I, g, α) ↦ I`; lifts by chosen pullbacks.
pub fn sigma_completion(p: &ClovenFibration, cls: &DisplayClass) -> Result<SigmaCompletion> {
    require_completion_class(cls)?;
    let (e, b) = (p.total(), p.base());
    let mut builder = CatBuilder::new();
    let mut objects = Vec::new();
    let mut obj_index = BTreeMap::new();
    for i in b.objs() {
        for g in cls.members_into(i) {
            for &alpha in p.fibre_objs(b.dom(g)) {
                let s = SigmaObject { i, g, alpha };
                let x = builder.object(format!("({},{})", b.arr_name(g), e.obj_name(alpha)));
                obj_index.insert(s, x);
                objects.push(s);
            }
        }
    }
    let mut arrows: Vec<SigmaArrow> = objects
        .iter()
        .map(|s| SigmaArrow { f0: b.id(s.i), f1: b.id(b.dom(s.g)), phi: e.id(s.alpha) })
        .collect();
    let mut ends: Vec<(Obj, Obj)> = (0..objects.len() as u32).map(|x| (Obj(x), Obj(x))).collect();
    let mut arr_index: BTreeMap<(Obj, Obj, SigmaArrow), Arr> =
        arrows.iter().enumerate().map(|(k, &a)| ((ends[k].0, ends[k].1, a), Arr(k as u32))).collect();
    for (si, s) in objects.iter().enumerate() {
        for (ti, t) in objects.iter().enumerate() {
            for &f0 in b.hom(s.i, t.i) {
                for &f1 in b.hom(b.dom(s.g), b.dom(t.g)) {
                    if b.comp(t.g, f1) != b.comp(f0, s.g) {
                        continue;
                    }
                    for phi in p.hom_over(s.alpha, t.alpha, f1) {
                        let a = SigmaArrow { f0, f1, phi };
                        if si == ti && e.is_identity(phi) && b.is_identity(f0) {
                            continue;
                        }
                        let (sx, tx) = (Obj(si as u32), Obj(ti as u32));
                        let name = format!("({},{},{})", b.arr_name(f0), b.arr_name(f1), e.arr_name(phi));
                        let id = builder.arrow_fresh(name, sx, tx);
                        arr_index.insert((sx, tx, a), id);
                        arrows.push(a);
                        ends.push((sx, tx));
                    }
                }
            }
        }
    }
    let total = builder.build(|g, f| {
        let (af, ag) = (arrows[f.ix()], arrows[g.ix()]);
        let c = SigmaArrow { f0: b.comp(ag.f0, af.f0), f1: b.comp(ag.f1, af.f1), phi: e.comp(ag.phi, af.phi) };
        arr_index.get(&(ends[f.ix()].0, ends[g.ix()].1, c)).copied()
    })?;
    let proj = FinFunctor {
        obj: objects.iter().map(|s| s.i).collect(),
        arr: arrows.iter().map(|a| a.f0).collect(),
    };
    let lift = |u: Arr, y: Obj| -> Arr {
        let t = objects[y.ix()];
        let cone = cls.pullback(t.g, u).expect("pullback-closed class");
        let s = SigmaObject { i: b.dom(u), g: cone.p2, alpha: p.reindex_obj(cone.p1, t.alpha) };
        let a = SigmaArrow { f0: u, f1: cone.p1, phi: p.lift(cone.p1, t.alpha) };
        arr_index[&(obj_index[&s], y, a)]
    };
    let fib = ClovenFibration::with_lifts(total, b.clone(), proj, lift)?;
    Ok(SigmaCompletion { fib, objects, arrows, obj_index, arr_index })
}

/// The pullback presentation of Σ_F(p): the strict pullback of the member
/// arrow category along `dom` and `p`, with cartesian lifts found by search,
/// together with the comparison from [`sigma_completion`].
pub fn sigma_pullback_presentation(
    p: &ClovenFibration,
    cls: &DisplayClass,
    sigma: &SigmaCompletion,
) -> Result<(ClovenFibration, FibredFunctor)> {
    let (e, b) = (p.total(), p.base());
    // Arrow category on members, built independently of the codomain fibration.
    let members: Vec<Arr> = cls.members().collect();
    let mut squares: Vec<(usize, usize, Arr, Arr)> = Vec::new();
    for (fi, &f) in members.iter().enumerate() {
        for (gi, &g) in members.iter().enumerate() {
            for &x in b.hom(b.dom(f), b.dom(g)) {
                for &y in b.hom(b.cod(f), b.cod(g)) {
                    if b.comp(g, x) == b.comp(y, f) {
                        squares.push((fi, gi, x, y));
                    }
                }
            }
        }
    }
    let mut builder = CatBuilder::new();
    let mut objs: Vec<(usize, Obj)> = Vec::new();
    for (mi, &m) in members.iter().enumerate() {
        for x in e.objs().filter(|&x| p.p_obj(x) == b.dom(m)) {
            builder.object(format!("<{},{}>", b.arr_name(m), e.obj_name(x)));
            objs.push((mi, x));
        }
    }
    let obj_pos: BTreeMap<(usize, Obj), Obj> = objs.iter().enumerate().map(|(k, &o)| (o, Obj(k as u32))).collect();
    let id_square = |mi: usize| {
        let m = members[mi];
        squares
            .iter()
            .position(|&s| s == (mi, mi, b.id(b.dom(m)), b.id(b.cod(m))))
            .expect("identity square")
    };
    let mut arrs: Vec<(usize, Arr)> = objs.iter().map(|&(mi, x)| (id_square(mi), e.id(x))).collect();
    let mut index: BTreeMap<(usize, Arr), Arr> = arrs.iter().enumerate().map(|(k, &a)| (a, Arr(k as u32))).collect();
    for (sk, &(fi, gi, x, _)) in squares.iter().enumerate() {
        for &(_, a) in objs.iter().filter(|o| o.0 == fi) {
            for &(_, c) in objs.iter().filter(|o| o.0 == gi) {
                for phi in p.hom_over(a, c, x) {
                    if index.contains_key(&(sk, phi)) {
                        continue;
                    }
                    let (s, t) = (obj_pos[&(fi, a)], obj_pos[&(gi, c)]);
                    let id = builder.arrow_fresh(format!("<{}>", e.arr_name(phi)), s, t);
                    index.insert((sk, phi), id);
                    arrs.push((sk, phi));
                }
            }
        }
    }
    let sq_index: BTreeMap<(usize, usize, Arr, Arr), usize> =
        squares.iter().enumerate().map(|(k, &s)| (s, k)).collect();
    let total = builder.build(|g, f| {
        let ((sf, pf), (sg, pg)) = (arrs[f.ix()], arrs[g.ix()]);
        let (a, c) = (squares[sf], squares[sg]);
        let sq = sq_index[&(a.0, c.1, b.comp(c.2, a.2), b.comp(c.3, a.3))];
        index.get(&(sq, e.comp(pg, pf))).copied()
    })?;
    let proj = FinFunctor {
        obj: objs.iter().map(|&(mi, _)| b.cod(members[mi])).collect(),
        arr: arrs.iter().map(|&(sk, _)| squares[sk].3).collect(),
    };
    let pre = Prefibration::new(total, b.clone(), proj);
    let fib = pre.into_cloven()?;
    let member_pos: BTreeMap<Arr, usize> = members.iter().enumerate().map(|(k, &m)| (m, k)).collect();
    let obj: Vec<Obj> = sigma.objects.iter().map(|s| obj_pos[&(member_pos[&s.g], s.alpha)]).collect();
    let arr: Vec<Arr> = sigma
        .fib
        .total()
        .arrs()
        .map(|a| {
            let sa = sigma.arrow(a);
            let (s, t) = (sigma.object(sigma.fib.total().dom(a)), sigma.object(sigma.fib.total().cod(a)));
            let sk = sq_index[&(member_pos[&s.g], member_pos[&t.g], sa.f1, sa.f0)];
            index[&(sk, sa.phi)]
        })
        .collect();
    Ok((fib, FibredFunctor::over_identity(p, FinFunctor { obj, arr })))
}
