use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::sigma::{require_completion_class, sigma_completion, SigmaArrow, SigmaCompletion, SigmaObject};
use crate::display::DisplayClass;
use crate::error::{Error, Result};
use crate::fibration::{fibrewise_opposite, is_fibred_iso, ClovenFibration, FibredFunctor, Opposite, Span};
use crate::kernel::{Arr, CatBuilder, FinFunctor, Obj};

/// `Π_F(p)` computed as `(Σ_F(p^op))^op`. Objects are the triples of the
/// inner Σ-completion, in the same order.
#[derive(Clone, Debug)]
pub struct PiCompletion {
    pub op_p: Opposite,
    pub sigma_op: SigmaCompletion,
    pub op_sigma: Opposite,
}

impl PiCompletion {
    pub fn fib(&self) -> &ClovenFibration {
        &self.op_sigma.fib
    }

    pub fn object(&self, x: Obj) -> SigmaObject {
        self.sigma_op.object(x)
    }

    pub fn obj_of(&self, s: SigmaObject) -> Option<Obj> {
        self.sigma_op.obj_of(s)
    }
}

pub fn pi_completion(p: &ClovenFibration, cls: &DisplayClass) -> Result<PiCompletion> {
    require_completion_class(cls)?;
    let op_p = fibrewise_opposite(p)?;
    let sigma_op = sigma_completion(&op_p.fib, cls)?;
    let op_sigma = fibrewise_opposite(&sigma_op.fib)?;
    Ok(PiCompletion { op_p, sigma_op, op_sigma })
}

/// `(k, f1, ψ)`: over `k: I → J` from `(I, g, α)` to `(J, h, β)`, with
/// `(p1: P → Y, p2: P ↠ I)` the chosen pullback of `h` along `k`,
/// `f1: P → X` satisfying `g ∘ f1 = p2` and `ψ: f1*α ⇝ p1*β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PiArrow {
    pub k: Arr,
    pub f1: Arr,
    pub psi: Arr,
}

/// The direct presentation of `Π_F(p)`, with objects in the order of
/// [`PiCompletion`].
#[derive(Clone, Debug)]
pub struct PiDirect {
    pub fib: ClovenFibration,
    pub objects: Vec<SigmaObject>,
    pub arrows: Vec<PiArrow>,
}

pub fn pi_direct(p: &ClovenFibration, cls: &DisplayClass) -> Result<PiDirect> {
    require_completion_class(cls)?;
    let (e, b) = (p.total(), p.base());
    let mut builder = CatBuilder::new();
    let mut objects = Vec::new();
    let mut obj_index = BTreeMap::new();
    for i in b.objs() {
        for g in cls.members_into(i) {
            for &alpha in p.fibre_objs(b.dom(g)) {
                let s = SigmaObject { i, g, alpha };
                obj_index.insert(s, builder.object(format!("({},{})", b.arr_name(g), e.obj_name(alpha))));
                objects.push(s);
            }
        }
    }
    let mut arrows: Vec<PiArrow> = objects
        .iter()
        .map(|s| PiArrow { k: b.id(s.i), f1: b.id(b.dom(s.g)), psi: e.id(s.alpha) })
        .collect();
    let mut ends: Vec<(Obj, Obj)> = (0..objects.len() as u32).map(|x| (Obj(x), Obj(x))).collect();
    let mut index: BTreeMap<(Obj, Obj, PiArrow), Arr> =
        arrows.iter().enumerate().map(|(k, &a)| ((ends[k].0, ends[k].1, a), Arr(k as u32))).collect();
    for (si, s) in objects.iter().enumerate() {
        for (ti, t) in objects.iter().enumerate() {
            for &k in b.hom(s.i, t.i) {
                let cone = cls.require_pullback(t.g, k)?;
                let target = p.reindex_obj(cone.p1, t.alpha);
                for &f1 in b.hom(cone.apex, b.dom(s.g)) {
                    if b.comp(s.g, f1) != cone.p2 {
                        continue;
                    }
                    let src = p.reindex_obj(f1, s.alpha);
                    for psi in p.vhom(src, target) {
                        let a = PiArrow { k, f1, psi };
                        let (sx, tx) = (Obj(si as u32), Obj(ti as u32));
                        if index.contains_key(&(sx, tx, a)) {
                            continue;
                        }
                        let name = format!("<{},{},{}>", b.arr_name(k), b.arr_name(f1), e.arr_name(psi));
                        let id = builder.arrow_fresh(name, sx, tx);
                        index.insert((sx, tx, a), id);
                        arrows.push(a);
                        ends.push((sx, tx));
                    }
                }
            }
        }
    }
    let total = builder.build(|second, first| {
        let (a1, a2) = (arrows[first.ix()], arrows[second.ix()]);
        let (s, u) = (ends[first.ix()].0, ends[second.ix()].1);
        let (so, to, uo) = (objects[s.ix()], objects[ends[first.ix()].1.ix()], objects[u.ix()]);
        let pc = cls.pullback(to.g, a1.k)?;
        let qc = cls.pullback(uo.g, a2.k)?;
        let kk = b.comp(a2.k, a1.k);
        let rc = cls.pullback(uo.g, kk)?;
        let t = qc.gap(b, rc.p1, b.comp(a1.k, rc.p2))?;
        let t2 = pc.gap(b, b.comp(a2.f1, t), rc.p2)?;
        let f1 = b.comp(a1.f1, t2);
        let psi = e.comp_all(&[
            p.comparison(qc.p1, t, uo.alpha),
            p.reindex_arr(t, a2.psi),
            p.comparison_inv(a2.f1, t, to.alpha),
            p.comparison(pc.p1, t2, to.alpha),
            p.reindex_arr(t2, a1.psi),
            p.comparison_inv(a1.f1, t2, so.alpha),
        ]);
        index.get(&(s, u, PiArrow { k: kk, f1, psi })).copied()
    })?;
    let proj = FinFunctor {
        obj: objects.iter().map(|s| s.i).collect(),
        arr: arrows.iter().map(|a| a.k).collect(),
    };
    let lift = |k: Arr, y: Obj| -> Arr {
        let t = objects[y.ix()];
        let cone = cls.pullback(t.g, k).expect("pullback-closed class");
        let s = SigmaObject { i: b.dom(k), g: cone.p2, alpha: p.reindex_obj(cone.p1, t.alpha) };
        let a = PiArrow { k, f1: b.id(cone.apex), psi: e.id(s.alpha) };
        index[&(obj_index[&s], y, a)]
    };
    let fib = ClovenFibration::with_lifts(total, b.clone(), proj, lift)?;
    Ok(PiDirect { fib, objects, arrows })
}

/// The explicit fibred isomorphism from the direct presentation to
/// `(Σ_F(p^op))^op`, checked to be an isomorphism.
pub fn pi_direct_iso(p: &ClovenFibration, cls: &DisplayClass, direct: &PiDirect, pi: &PiCompletion) -> Result<FibredFunctor> {
    let b = p.base();
    let obj: Vec<Obj> = direct
        .objects
        .iter()
        .map(|&s| pi.obj_of(s).ok_or_else(|| Error::InternalDisagreement("Π object missing".into())))
        .collect::<Result<_>>()?;
    let de = direct.fib.total();
    let mut arr = Vec::with_capacity(de.n_arrs());
    for a in de.arrs() {
        let pa = direct.arrows[a.ix()];
        let (s, t) = (direct.objects[de.dom(a).ix()], direct.objects[de.cod(a).ix()]);
        let cone = cls.require_pullback(t.g, pa.k)?;
        let s2 = SigmaObject { i: b.dom(pa.k), g: cone.p2, alpha: p.reindex_obj(cone.p1, t.alpha) };
        let phi = pi
            .op_p
            .arrow_of(Span { u: pa.f1, y: s.alpha, v: pa.psi })
            .ok_or_else(|| Error::InternalDisagreement("op arrow missing".into()))?;
        let s2x = pi.sigma_op.obj_of(s2).ok_or_else(|| Error::InternalDisagreement("Σ object missing".into()))?;
        let v = pi
            .sigma_op
            .arr_of(s2x, obj[de.dom(a).ix()], SigmaArrow { f0: b.id(s.i), f1: pa.f1, phi })
            .ok_or_else(|| Error::InternalDisagreement("vertical Σ arrow missing".into()))?;
        let img = pi
            .op_sigma
            .arrow_of(Span { u: pa.k, y: obj[de.cod(a).ix()], v })
            .ok_or_else(|| Error::InternalDisagreement("Π arrow missing".into()))?;
        arr.push(img);
    }
    let g = FibredFunctor::over_identity(p, FinFunctor { obj, arr });
    if !is_fibred_iso(&direct.fib, pi.fib(), &g)? {
        return Err(Error::TheoremViolation("direct Π presentation is not isomorphic to (Σ op)op".into()));
    }
    Ok(g)
}

/// `Dial_F(p) = Σ_F(Π_F(p))`.
#[derive(Clone, Debug)]
pub struct Dialectica {
    pub pi: PiCompletion,
    pub sigma: SigmaCompletion,
}

impl Dialectica {
    pub fn fib(&self) -> &ClovenFibration {
        &self.sigma.fib
    }
}

pub fn dialectica(p: &ClovenFibration, cls: &DisplayClass) -> Result<Dialectica> {
    let pi = pi_completion(p, cls)?;
    let sigma = sigma_completion(pi.fib(), cls)?;
    Ok(Dialectica { pi, sigma })
}
