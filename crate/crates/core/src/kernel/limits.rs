use alloc::vec::Vec;

use super::cat::{Arr, FinCat, Obj};
use crate::budget::{Budget, Meter};
use crate::error::{Error, Result};

/// A pullback square over the cospan `f: X → Z ← Y: g`.
/// `p1` goes to `dom f`, `p2` to `dom g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PullbackCone {
    pub f: Arr,
    pub g: Arr,
    pub apex: Obj,
    pub p1: Arr,
    pub p2: Arr,
}

impl PullbackCone {
    /// The unique `t: Q → apex` with `p1 ∘ t = a` and `p2 ∘ t = b`, when
    /// `(a, b)` is a commuting cone over the cospan.
    pub fn gap(&self, c: &FinCat, a: Arr, b: Arr) -> Option<Arr> {
        let q = c.dom(a);
        if c.dom(b) != q {
            return None;
        }
        let mut found = None;
        for &t in c.hom(q, self.apex) {
            if c.comp(self.p1, t) == a && c.comp(self.p2, t) == b {
                if found.is_some() {
                    return None;
                }
                found = Some(t);
            }
        }
        found
    }
}

/// Number of commuting cones `(a, b)` over the cospan with apex `q`.
fn cone_count(c: &FinCat, f: Arr, g: Arr, q: Obj) -> usize {
    let (x, y) = (c.dom(f), c.dom(g));
    let mut fa: Vec<Arr> = c.hom(q, x).iter().map(|&a| c.comp(f, a)).collect();
    let mut gb: Vec<Arr> = c.hom(q, y).iter().map(|&b| c.comp(g, b)).collect();
    fa.sort_unstable();
    gb.sort_unstable();
    // Merge the two sorted runs, multiplying the multiplicities of each value.
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < fa.len() && j < gb.len() {
        match fa[i].cmp(&gb[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                let v = fa[i];
                let i0 = i;
                while i < fa.len() && fa[i] == v {
                    i += 1;
                }
                let j0 = j;
                while j < gb.len() && gb[j] == v {
                    j += 1;
                }
                n += (i - i0) * (j - j0);
            }
        }
    }
    n
}

fn is_universal(c: &FinCat, cone: &PullbackCone, counts: &[usize], meter: &Meter) -> Result<bool> {
    let mut seen = Vec::new();
    for q in c.objs() {
        let homs = c.hom(q, cone.apex);
        meter.spend(homs.len() as u64 + 1)?;
        if homs.len() != counts[q.ix()] {
            return Ok(false);
        }
        seen.clear();
        seen.extend(homs.iter().map(|&t| (c.comp(cone.p1, t), c.comp(cone.p2, t))));
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustive check that `(p1, p2)` is a pullback of `f` and `g`.
pub fn is_pullback(c: &FinCat, f: Arr, g: Arr, p1: Arr, p2: Arr) -> bool {
    if c.cod(f) != c.cod(g) || c.dom(p1) != c.dom(p2) {
        return false;
    }
    if c.cod(p1) != c.dom(f) || c.cod(p2) != c.dom(g) || c.comp(f, p1) != c.comp(g, p2) {
        return false;
    }
    let counts: Vec<usize> = c.objs().map(|q| cone_count(c, f, g, q)).collect();
    let cone = PullbackCone { f, g, apex: c.dom(p1), p1, p2 };
    is_universal(c, &cone, &counts, &Budget::unlimited().meter()).unwrap_or(false)
}

/// The canonical pullback of `f` and `g`.
///
/// Along an identity the trivial square is returned; otherwise the
/// order-least `(apex, p1, p2)` passing the universal property.
pub fn find_pullback(c: &FinCat, f: Arr, g: Arr, budget: Budget) -> Result<Option<PullbackCone>> {
    if c.cod(f) != c.cod(g) {
        return Err(Error::NotACospan { f, g });
    }
    let (x, y) = (c.dom(f), c.dom(g));
    if c.is_identity(f) {
        return Ok(Some(PullbackCone { f, g, apex: y, p1: g, p2: c.id(y) }));
    }
    if c.is_identity(g) {
        return Ok(Some(PullbackCone { f, g, apex: x, p1: c.id(x), p2: f }));
    }
    let meter = budget.meter();
    let counts: Vec<usize> = c.objs().map(|q| cone_count(c, f, g, q)).collect();
    // A universal cone induces a bijection hom(q, apex) ≅ cones from q.
    for apex in c.objs().filter(|&a| c.objs().all(|q| c.hom(q, a).len() == counts[q.ix()])) {
        // Legs into `y` keyed by their composite with `g`; within a key the
        // arrow order is kept so the first universal cone stays order-least.
        let mut by_comp: Vec<(Arr, Arr)> = c.hom(apex, y).iter().map(|&b| (c.comp(g, b), b)).collect();
        by_comp.sort_unstable();
        for &p1 in c.hom(apex, x) {
            let fp1 = c.comp(f, p1);
            let start = by_comp.partition_point(|&(k, _)| k < fp1);
            for &(_, p2) in by_comp[start..].iter().take_while(|&&(k, _)| k == fp1) {
                meter.tick()?;
                let cone = PullbackCone { f, g, apex, p1, p2 };
                if is_universal(c, &cone, &counts, &meter)? {
                    return Ok(Some(cone));
                }
            }
        }
    }
    Ok(None)
}

/// The order-least object receiving exactly one arrow from every object.
pub fn terminal_object(c: &FinCat) -> Option<Obj> {
    c.objs().find(|&t| c.objs().all(|x| c.hom(x, t).len() == 1))
}

/// The order-least object with exactly one arrow to every object.
pub fn initial_object(c: &FinCat) -> Option<Obj> {
    c.objs().find(|&t| c.objs().all(|x| c.hom(t, x).len() == 1))
}

/// The two-sided inverse of `f`, if any.
pub fn inverse(c: &FinCat, f: Arr) -> Option<Arr> {
    let (x, y) = (c.dom(f), c.cod(f));
    c.hom(y, x)
        .iter()
        .copied()
        .find(|&g| c.comp(g, f) == c.id(x) && c.comp(f, g) == c.id(y))
}

pub fn is_iso(c: &FinCat, f: Arr) -> bool {
    inverse(c, f).is_some()
}

/// The order-least isomorphism `x → y`. Identities come first since they
/// precede every other arrow.
pub fn find_iso(c: &FinCat, x: Obj, y: Obj) -> Option<Arr> {
    c.hom(x, y).iter().copied().find(|&f| is_iso(c, f))
}

pub fn is_mono(c: &FinCat, f: Arr) -> bool {
    let x = c.dom(f);
    c.objs().all(|q| {
        let homs = c.hom(q, x);
        let mut images: Vec<Arr> = homs.iter().map(|&a| c.comp(f, a)).collect();
        images.sort_unstable();
        images.windows(2).all(|w| w[0] != w[1])
    })
}

/// Binary coproduct `(x + y, i1, i2)`, order-least.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coproduct {
    pub sum: Obj,
    pub i1: Arr,
    pub i2: Arr,
}

pub fn find_coproduct(c: &FinCat, x: Obj, y: Obj) -> Option<Coproduct> {
    for s in c.objs() {
        for &i1 in c.hom(x, s) {
            for &i2 in c.hom(y, s) {
                let ok = c.objs().all(|t| {
                    let n = c.hom(x, t).len() * c.hom(y, t).len();
                    let homs = c.hom(s, t);
                    if homs.len() != n {
                        return false;
                    }
                    let mut pairs: Vec<(Arr, Arr)> =
                        homs.iter().map(|&m| (c.comp(m, i1), c.comp(m, i2))).collect();
                    pairs.sort_unstable();
                    pairs.windows(2).all(|w| w[0] != w[1])
                });
                if ok {
                    return Some(Coproduct { sum: s, i1, i2 });
                }
            }
        }
    }
    None
}
