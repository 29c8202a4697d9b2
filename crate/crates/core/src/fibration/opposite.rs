use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::cloven::ClovenFibration;
use crate::error::{Error, Result};
use crate::kernel::{Arr, CatBuilder, FinFunctor, Obj};

/// The canonical span `X ⇜ u*Y → Y` of an arrow of the fibrewise opposite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    /// Base arrow.
    pub u: Arr,
    /// Target object.
    pub y: Obj,
    /// Vertical arrow `u*(y) ⇝ x` of the original fibration.
    pub v: Arr,
}

/// An arrow class of the opposite with its explicit member set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OppositeArrowClass {
    /// `(lift(u, y), v)`.
    pub representative: (Arr, Arr),
    /// Every `(c, v)` with `c` cartesian over `u` into `y` and `v` vertical,
    /// related to the representative by a vertical iso.
    pub members: Vec<(Arr, Arr)>,
}

/// `p^op`: same base and objects, fibres replaced by their opposites.
#[derive(Clone, Debug)]
pub struct Opposite {
    pub fib: ClovenFibration,
    /// Canonical span of each arrow of `fib.total()`.
    pub spans: Vec<Span>,
    index: BTreeMap<Span, Arr>,
}

impl Opposite {
    pub fn arrow_of(&self, s: Span) -> Option<Arr> {
        self.index.get(&s).copied()
    }

    /// The op arrow whose span is the (not necessarily canonical) pair
    /// `(c, v)` with `c` cartesian in `p`.
    pub fn arrow_of_pair(&self, p: &ClovenFibration, c: Arr, v: Arr) -> Option<Arr> {
        let (u, y) = (p.p_arr(c), p.total().cod(c));
        let l = p.lift(u, y);
        let h_inv = p.fill(c, l, p.base().id(p.base().dom(u)))?;
        self.arrow_of(Span { u, y, v: p.total().comp(v, h_inv) })
    }

    /// The full class of an op arrow.
    pub fn class(&self, p: &ClovenFibration, a: Arr) -> OppositeArrowClass {
        let s = self.spans[a.ix()];
        let l = p.lift(s.u, s.y);
        let z = p.total().dom(l);
        let mut members = Vec::new();
        for w in p.fibre_objs(p.p_obj(z)) {
            for h in p.vhom(*w, z) {
                if p.inverse(h).is_some() {
                    members.push((p.total().comp(l, h), p.total().comp(s.v, h)));
                }
            }
        }
        members.sort_unstable();
        OppositeArrowClass { representative: (l, s.v), members }
    }
}

/// Builds the fibrewise opposite.
///
/// An arrow `x → y` over `u` is a class of spans `x ⇜ z → y` with the left
/// leg vertical and the right leg cartesian over `u`; classes are orbits
/// under vertical isos of `z`, represented by `z = u*(y)`.
pub fn fibrewise_opposite(p: &ClovenFibration) -> Result<Opposite> {
    let (e, b) = (p.total(), p.base());
    let mut builder = CatBuilder::new();
    for x in e.objs() {
        builder.object(e.obj_name(x));
    }
    let mut spans: Vec<Span> = e.objs().map(|x| Span { u: b.id(p.p_obj(x)), y: x, v: e.id(x) }).collect();
    let mut proj_arr: Vec<Arr> = e.objs().map(|x| b.id(p.p_obj(x))).collect();
    for x in e.objs() {
        for y in e.objs() {
            for &u in b.hom(p.p_obj(x), p.p_obj(y)) {
                let l = p.lift(u, y);
                for v in p.vhom(e.dom(l), x) {
                    if b.is_identity(u) && e.is_identity(v) {
                        continue;
                    }
                    builder.arrow(format!("[{},{}]", e.arr_name(l), e.arr_name(v)), x, y);
                    spans.push(Span { u, y, v });
                    proj_arr.push(u);
                }
            }
        }
    }
    let index: BTreeMap<Span, Arr> = spans.iter().enumerate().map(|(i, &s)| (s, Arr(i as u32))).collect();
    let compose = |second: Arr, first: Arr| -> Option<Arr> {
        let s1 = spans[first.ix()];
        let s2 = spans[second.ix()];
        // first: A → B is [lift(u1, B), v1], second: B → C is [lift(u2, C), v2].
        let c = p.lift(s1.u, e.dom(p.lift(s2.u, s2.y)));
        let x = p.fill(p.lift(s1.u, s1.y), e.comp(s2.v, c), b.id(b.dom(s1.u)))?;
        let u = b.comp(s2.u, s1.u);
        let h_inv = p.comparison_inv(s2.u, s1.u, s2.y);
        let v = e.comp_all(&[s1.v, x, h_inv]);
        index.get(&Span { u, y: s2.y, v }).copied()
    };
    let total = builder.build(compose)?;
    let proj = FinFunctor { obj: p.proj().obj.clone(), arr: proj_arr };
    let lift = |u: Arr, y: Obj| -> Arr {
        if b.is_identity(u) {
            return total.id(y);
        }
        let z = p.reindex_obj(u, y);
        index[&Span { u, y, v: e.id(z) }]
    };
    let fib = ClovenFibration::with_lifts(total.clone(), b.clone(), proj, lift)?;
    Ok(Opposite { fib, spans, index })
}

/// The iso `(p^op)^op → p`, identity on objects.
pub fn double_opposite_iso(p: &ClovenFibration, op: &Opposite, opop: &Opposite) -> Result<FinFunctor> {
    let e = p.total();
    let mut arr = Vec::with_capacity(opop.fib.total().n_arrs());
    for s in &opop.spans {
        // s.v is an op arrow u*Y → X over an identity, i.e. a span [id, w] with w: X ⇝ u*Y.
        let inner = op.spans[s.v.ix()];
        if !op.fib.base().is_identity(inner.u) {
            return Err(Error::InternalDisagreement("vertical op arrow over a non-identity".into()));
        }
        arr.push(e.comp(p.lift(s.u, s.y), inner.v));
    }
    Ok(FinFunctor { obj: e.objs().collect(), arr })
}

/// Equivalence classes of all (cartesian, vertical) spans under the closure
/// of `(f1, f2) ~ (g1, g2)` iff some `h` has `f1 = g1 h` and `f2 = g2 h`.
/// Returns, per span, the op arrow of its class (by canonical span).
pub fn verbatim_classes(p: &ClovenFibration, op: &Opposite) -> Result<Vec<((Arr, Arr), Arr)>> {
    let e = p.total();
    let mut spans: Vec<(Arr, Arr)> = Vec::new();
    for c in e.arrs() {
        if !p.is_cartesian(c) {
            continue;
        }
        for x in p.fibre_objs(p.p_obj(e.dom(c))) {
            for v in p.vhom(e.dom(c), *x) {
                spans.push((c, v));
            }
        }
    }
    let n = spans.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let pos: BTreeMap<(Arr, Arr), usize> = spans.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    for (i, &(g1, g2)) in spans.iter().enumerate() {
        let z = e.dom(g1);
        for &h in e.arrows_into(z) {
            let key = (e.comp(g1, h), e.comp(g2, h));
            if let Some(&j) = pos.get(&key) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    let mut class_arrow: BTreeMap<usize, Arr> = BTreeMap::new();
    for (i, &(c, v)) in spans.iter().enumerate() {
        let a = op
            .arrow_of_pair(p, c, v)
            .ok_or_else(|| Error::InternalDisagreement("span without canonical class".into()))?;
        let root = find(&mut parent, i);
        match class_arrow.get(&root) {
            Some(&b) if b != a => {
                return Err(Error::InternalDisagreement(format!(
                    "verbatim relation merges op arrows {} and {}",
                    b, a
                )))
            }
            _ => {
                class_arrow.insert(root, a);
            }
        }
        out.push(((c, v), a));
    }
    Ok(out)
}
