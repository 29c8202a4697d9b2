use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::budget::Budget;
use crate::display::{verify_display_class, DisplayClass};
use crate::error::{Error, Result};
use crate::fibration::ClovenFibration;
use crate::kernel::{find_coproduct, initial_object, is_mono, Arr, CatBuilder, FinCat, FinFunctor, Obj};

/// Default cap on `n` for [`finset_skeleton`].
pub const FINSET_CAP: usize = 4;

/// Default cap on index-set sizes for [`family_fibration`].
pub const FAMILY_CAP: usize = 2;

fn fn_name(m: usize, k: usize, images: &[usize]) -> String {
    let mut s = format!("f{m}{k}");
    if !images.is_empty() {
        s.push('_');
        for &i in images {
            s.push(char::from(b'0' + i as u8));
        }
    }
    s
}

/// All functions `m → k` as image vectors, in lexicographic order.
fn functions(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 && m > 0 {
        return out;
    }
    let mut cur = alloc::vec![0usize; m];
    loop {
        out.push(cur.clone());
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < k {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// The skeleton of finite sets `{0, …, n}` with all functions, capped at
/// [`FINSET_CAP`].
///
/// Objects are named by size; a function `m → k` with images `i0 i1 …` is
/// named `f<m><k>_<i0i1…>` (`f0<k>` for the empty function).
pub fn finset_skeleton(n: usize) -> Result<FinCat> {
    finset_skeleton_capped(n, FINSET_CAP)
}

pub fn finset_skeleton_capped(n: usize, cap: usize) -> Result<FinCat> {
    if n > cap {
        return Err(Error::CapExceeded { requested: n, cap });
    }
    let mut b = CatBuilder::new();
    for m in 0..=n {
        b.object(format!("{m}"));
    }
    let mut index: BTreeMap<(usize, usize, Vec<usize>), Arr> = BTreeMap::new();
    let mut tables: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for m in 0..=n {
        index.insert((m, m, (0..m).collect()), Arr(m as u32));
        tables.push((m, m, (0..m).collect()));
    }
    for m in 0..=n {
        for k in 0..=n {
            for f in functions(m, k) {
                if m == k && f.iter().enumerate().all(|(i, &x)| i == x) {
                    continue;
                }
                let a = b.arrow(fn_name(m, k, &f), Obj(m as u32), Obj(k as u32));
                index.insert((m, k, f.clone()), a);
                tables.push((m, k, f));
            }
        }
    }
    b.build(|g, f| {
        let (m, _, ff) = &tables[f.ix()];
        let (_, k, gg) = &tables[g.ix()];
        let h: Vec<usize> = ff.iter().map(|&i| gg[i]).collect();
        index.get(&(*m, *k, h)).copied()
    })
}

/// The function table of an arrow of [`finset_skeleton`].
pub fn finset_images(c: &FinCat, a: Arr) -> Vec<usize> {
    if c.is_identity(a) {
        let m: usize = c.obj_name(c.dom(a)).parse().expect("finset object");
        return (0..m).collect();
    }
    let name = c.arr_name(a);
    match name.split_once('_') {
        Some((_, imgs)) => imgs.bytes().map(|d| (d - b'0') as usize).collect(),
        None => Vec::new(),
    }
}

/// The one-object one-arrow category.
pub fn terminal() -> FinCat {
    let mut b = CatBuilder::new();
    b.object("*");
    b.build(|_, _| None).expect("terminal category")
}

/// The interval category `a → b` with the arrow named `u`.
pub fn interval() -> FinCat {
    let mut b = CatBuilder::new();
    let a = b.object("a");
    let t = b.object("b");
    b.arrow("u", a, t);
    b.build(|_, _| None).expect("interval category")
}

/// The cyclic group of order two as a one-object category with generator `s`.
pub fn z2_group() -> FinCat {
    let mut b = CatBuilder::new();
    let x = b.object("*");
    b.arrow("s", x, x);
    b.build(|_, _| Some(Arr(0))).expect("group of order two")
}

/// A category with objects `x, y` and two parallel isos `i, j: x → y`.
pub fn two_iso_groupoid() -> FinCat {
    let mut b = CatBuilder::new();
    let x = b.object("x");
    let y = b.object("y");
    let i = b.arrow("i", x, y);
    let j = b.arrow("j", x, y);
    let ii = b.arrow("i'", y, x);
    let jj = b.arrow("j'", y, x);
    let s = b.arrow("s", x, x);
    let t = b.arrow("t", y, y);
    let (idx, idy) = (Arr(0), Arr(1));
    // Automorphism group Z2 on each object; i' inverts i, j' inverts j.
    let table = move |g: Arr, f: Arr| -> Option<Arr> {
        let r = match (g, f) {
            (g, f) if g == ii && f == i => idx,
            (g, f) if g == jj && f == j => idx,
            (g, f) if g == ii && f == j => s,
            (g, f) if g == jj && f == i => s,
            (g, f) if g == i && f == ii => idy,
            (g, f) if g == j && f == jj => idy,
            (g, f) if g == i && f == jj => t,
            (g, f) if g == j && f == ii => t,
            (g, f) if g == s && f == s => idx,
            (g, f) if g == t && f == t => idy,
            (g, f) if g == i && f == s => j,
            (g, f) if g == j && f == s => i,
            (g, f) if g == t && f == i => j,
            (g, f) if g == t && f == j => i,
            (g, f) if g == s && f == ii => jj,
            (g, f) if g == s && f == jj => ii,
            (g, f) if g == ii && f == t => jj,
            (g, f) if g == jj && f == t => ii,
            _ => return None,
        };
        Some(r)
    };
    b.build(table).expect("groupoid")
}

/// The identity fibration `B → B`.
pub fn identity_fibration(base: &FinCat) -> ClovenFibration {
    ClovenFibration::with_lifts_unchecked(base.clone(), base.clone(), FinFunctor::identity(base), |u, _| u)
        .expect("identity fibration")
}

fn require_pullback_closed(cls: &DisplayClass) -> Result<()> {
    let r = verify_display_class(cls);
    match r.pullback_counterexample {
        None => Ok(()),
        Some((f, g)) => Err(Error::PreconditionFailed(format!(
            "display class is not pullback-closed at (`{}`, `{}`)",
            cls.base().arr_name(f),
            cls.base().arr_name(g)
        ))),
    }
}

/// The codomain fibration restricted to the members of `cls`: objects are
/// members, arrows commuting squares, lifts chosen pullbacks.
pub fn codomain_fibration(cls: &DisplayClass) -> Result<ClovenFibration> {
    require_pullback_closed(cls)?;
    let base = cls.base();
    let members: Vec<Arr> = cls.members().collect();
    let mut b = CatBuilder::new();
    let mut obj_of: BTreeMap<Arr, Obj> = BTreeMap::new();
    for &m in &members {
        obj_of.insert(m, b.object(base.arr_name(m)));
    }
    let mut squares: Vec<(Arr, Arr)> =
        members.iter().map(|&m| (base.id(base.dom(m)), base.id(base.cod(m)))).collect();
    let mut ends: Vec<(Obj, Obj)> = (0..members.len()).map(|i| (Obj(i as u32), Obj(i as u32))).collect();
    let mut index: BTreeMap<(Obj, Obj, Arr, Arr), Arr> = BTreeMap::new();
    for (i, &(x, y)) in squares.iter().enumerate() {
        index.insert((Obj(i as u32), Obj(i as u32), x, y), Arr(i as u32));
    }
    for &f in &members {
        for &g in &members {
            for &y in base.hom(base.cod(f), base.cod(g)) {
                for &x in base.hom(base.dom(f), base.dom(g)) {
                    if base.comp(g, x) != base.comp(y, f) || (f == g && base.is_identity(x) && base.is_identity(y)) {
                        continue;
                    }
                    let (s, t) = (obj_of[&f], obj_of[&g]);
                    let a = b.arrow_fresh(format!("({},{})", base.arr_name(x), base.arr_name(y)), s, t);
                    index.insert((s, t, x, y), a);
                    squares.push((x, y));
                    ends.push((s, t));
                }
            }
        }
    }
    let objs_cod: Vec<Obj> = members.iter().map(|&m| base.cod(m)).collect();
    let total = b.build(|g, f| {
        let ((x1, y1), (x2, y2)) = (squares[f.ix()], squares[g.ix()]);
        index.get(&(ends[f.ix()].0, ends[g.ix()].1, base.comp(x2, x1), base.comp(y2, y1))).copied()
    })?;
    let proj = FinFunctor {
        obj: objs_cod,
        arr: squares.iter().map(|&(_, y)| y).collect(),
    };
    let lift = |u: Arr, y: Obj| -> Arr {
        let g = members[y.ix()];
        let cone = cls.pullback(g, u).expect("pullback-closed");
        let s = obj_of[&cone.p2];
        index[&(s, y, cone.p1, u)]
    };
    ClovenFibration::with_lifts(total, base.clone(), proj, lift)
}

/// The codomain fibration of the monomorphisms of `base`, skeletalized per
/// fibre: one order-least mono per isomorphism class of subobjects.
pub fn subobject_fibration(base: &FinCat, budget: Budget) -> Result<ClovenFibration> {
    let monos: Vec<Arr> = base.arrs().filter(|&a| is_mono(base, a)).collect();
    let cls = DisplayClass::new(base.clone(), monos, budget)?;
    let cod = codomain_fibration(&cls)?;
    let mut reps = Vec::new();
    for i in base.objs() {
        let fib = cod.fibre_objs(i);
        for (k, &x) in fib.iter().enumerate() {
            if !fib[..k].iter().any(|&y| cod.vertical_iso(y, x).is_some()) {
                reps.push(x);
            }
        }
    }
    reps.sort_unstable();
    let emb = crate::kernel::full_subcategory(cod.total(), &reps)?;
    let proj = FinFunctor {
        obj: emb.objs.iter().map(|&x| cod.p_obj(x)).collect(),
        arr: emb.arrs.iter().map(|&a| cod.p_arr(a)).collect(),
    };
    let lift = |u: Arr, y: Obj| -> Arr {
        let l = cod.lift(u, emb.objs[y.ix()]);
        let z = cod.total().dom(l);
        let r = *reps
            .iter()
            .find(|&&r| cod.p_obj(r) == cod.p_obj(z) && cod.vertical_iso(r, z).is_some())
            .expect("every subobject has a representative");
        let h = cod.vertical_iso(r, z).expect("iso");
        emb.local_arr(cod.total().comp(l, h)).expect("full subcategory")
    };
    ClovenFibration::with_lifts(emb.cat.clone(), base.clone(), proj, lift)
}

/// The truncation of `Fam(values)` to index sets `{0, …, index_cap}`
/// (capped at [`FAMILY_CAP`]).
///
/// A family over `n` is an `n`-tuple of value objects, named `(X0,X1)`; an
/// arrow over `f: m → n` from `(X_i)` to `(Y_j)` is a tuple of value arrows
/// `X_i → Y_{f(i)}`, named `<f>[φ0,φ1]`.
pub fn family_fibration(index_cap: usize, values: &FinCat) -> Result<ClovenFibration> {
    if index_cap > FAMILY_CAP {
        return Err(Error::CapExceeded { requested: index_cap, cap: FAMILY_CAP });
    }
    let base = finset_skeleton(index_cap)?;
    let vals: Vec<Obj> = values.objs().collect();
    let mut b = CatBuilder::new();
    let mut fams: Vec<(usize, Vec<Obj>)> = Vec::new();
    let mut obj_of: BTreeMap<Vec<Obj>, Obj> = BTreeMap::new();
    for n in 0..=index_cap {
        let mut tuples: Vec<Vec<Obj>> = alloc::vec![Vec::new()];
        for _ in 0..n {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    vals.iter().map(move |&v| {
                        let mut t2 = t.clone();
                        t2.push(v);
                        t2
                    })
                })
                .collect();
        }
        for t in tuples {
            let names: Vec<&str> = t.iter().map(|&v| values.obj_name(v)).collect();
            let o = b.object(format!("({})", names.join(",")));
            obj_of.insert(t.clone(), o);
            fams.push((n, t));
        }
    }
    // Arrow records: (base arrow, components).
    let mut recs: Vec<(Arr, Vec<Arr>)> = fams
        .iter()
        .map(|(n, t)| (base.id(Obj(*n as u32)), t.iter().map(|&v| values.id(v)).collect()))
        .collect();
    let mut index: BTreeMap<(Obj, Obj, Arr, Vec<Arr>), Arr> = BTreeMap::new();
    for (i, r) in recs.iter().enumerate() {
        index.insert((Obj(i as u32), Obj(i as u32), r.0, r.1.clone()), Arr(i as u32));
    }
    let nf = fams.len();
    for s in 0..nf {
        for t in 0..nf {
            let (m, xs) = &fams[s];
            let (n, ys) = &fams[t];
            for &f in base.hom(Obj(*m as u32), Obj(*n as u32)) {
                let img = finset_images(&base, f);
                let mut comps: Vec<Vec<Arr>> = alloc::vec![Vec::new()];
                for i in 0..*m {
                    let hs = values.hom(xs[i], ys[img[i]]);
                    comps = comps
                        .into_iter()
                        .flat_map(|c| {
                            hs.iter().map(move |&h| {
                                let mut c2 = c.clone();
                                c2.push(h);
                                c2
                            })
                        })
                        .collect();
                }
                for c in comps {
                    if s == t && base.is_identity(f) && c.iter().all(|&a| values.is_identity(a)) {
                        continue;
                    }
                    let names: Vec<&str> = c.iter().map(|&a| values.arr_name(a)).collect();
                    let a = b.arrow_fresh(
                        format!("{}[{}]", base.arr_name(f), names.join(",")),
                        Obj(s as u32),
                        Obj(t as u32),
                    );
                    index.insert((Obj(s as u32), Obj(t as u32), f, c.clone()), a);
                    recs.push((f, c));
                }
            }
        }
    }
    let ends: Vec<(Obj, Obj)> = (0..b.n_arrs() as u32).map(|a| (b.dom(Arr(a)), b.cod(Arr(a)))).collect();
    let total = b.build(|g, f| {
        let (bf, cf) = &recs[f.ix()];
        let (bg, cg) = &recs[g.ix()];
        let img = finset_images(&base, *bf);
        let c: Vec<Arr> = cf.iter().enumerate().map(|(i, &a)| values.comp(cg[img[i]], a)).collect();
        index.get(&(ends[f.ix()].0, ends[g.ix()].1, base.comp(*bg, *bf), c)).copied()
    })?;
    let proj = FinFunctor {
        obj: fams.iter().map(|(n, _)| Obj(*n as u32)).collect(),
        arr: recs.iter().map(|(f, _)| *f).collect(),
    };
    let lift = |u: Arr, y: Obj| -> Arr {
        let ys = &fams[y.ix()].1;
        let xs: Vec<Obj> = finset_images(&base, u).iter().map(|&j| ys[j]).collect();
        let ids: Vec<Arr> = xs.iter().map(|&v| values.id(v)).collect();
        let s = obj_of[&xs];
        index[&(s, y, u, ids)]
    };
    ClovenFibration::with_lifts(total, base.clone(), proj, lift)
}

/// Objects whose covariant hom-functor preserves the initial object and
/// every binary coproduct that exists in `c`.
pub fn indecomposables(c: &FinCat) -> Result<Vec<Obj>> {
    let zero = initial_object(c).ok_or_else(|| Error::PreconditionFailed("no initial object".into()))?;
    let mut sums = Vec::new();
    for y1 in c.objs() {
        for y2 in c.objs() {
            if let Some(s) = find_coproduct(c, y1, y2) {
                sums.push(s);
            }
        }
    }
    Ok(c.objs()
        .filter(|&x| {
            c.hom(x, zero).is_empty()
                && sums.iter().all(|s| {
                    let mut hits = alloc::vec![0u32; c.hom(x, s.sum).len()];
                    let row = c.hom(x, s.sum);
                    for (inj, y) in [(s.i1, c.dom(s.i1)), (s.i2, c.dom(s.i2))] {
                        for &a in c.hom(x, y) {
                            let k = row.iter().position(|&r| r == c.comp(inj, a)).expect("hom row");
                            hits[k] += 1;
                        }
                    }
                    hits.iter().all(|&h| h == 1)
                })
        })
        .collect())
}
