//! Display-map classes, their closure properties and dependent products.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::kernel::{find_pullback, is_iso, terminal_object, Arr, FinCat, Obj, PullbackCone};

/// A class of base arrows with chosen pullbacks of every member along every
/// arrow into its codomain.
#[derive(Clone, Debug)]
pub struct DisplayClass {
    base: FinCat,
    members: Vec<bool>,
    pullbacks: BTreeMap<(Arr, Arr), PullbackCone>,
}

impl DisplayClass {
    pub fn new(base: FinCat, members: impl IntoIterator<Item = Arr>, budget: Budget) -> Result<Self> {
        let mut flags = alloc::vec![false; base.n_arrs()];
        for a in members {
            if a.ix() >= base.n_arrs() {
                return Err(Error::MalformedTable(alloc::format!("member {a} does not resolve")));
            }
            flags[a.ix()] = true;
        }
        let mut pullbacks = BTreeMap::new();
        for f in base.arrs().filter(|f| flags[f.ix()]) {
            for &g in base.arrows_into(base.cod(f)) {
                if let Some(cone) = find_pullback(&base, f, g, budget)? {
                    pullbacks.insert((f, g), cone);
                }
            }
        }
        Ok(DisplayClass { base, members: flags, pullbacks })
    }

    pub fn all_arrows(base: FinCat, budget: Budget) -> Result<Self> {
        let all: Vec<Arr> = base.arrs().collect();
        DisplayClass::new(base, all, budget)
    }

    pub fn identities(base: FinCat, budget: Budget) -> Result<Self> {
        let ids: Vec<Arr> = base.objs().map(|x| base.id(x)).collect();
        DisplayClass::new(base, ids, budget)
    }

    pub fn isomorphisms(base: FinCat, budget: Budget) -> Result<Self> {
        let isos: Vec<Arr> = base.arrs().filter(|&a| is_iso(&base, a)).collect();
        DisplayClass::new(base, isos, budget)
    }

    pub fn base(&self) -> &FinCat {
        &self.base
    }

    #[inline]
    pub fn is_member(&self, a: Arr) -> bool {
        self.members[a.ix()]
    }

    pub fn members(&self) -> impl Iterator<Item = Arr> + '_ {
        self.base.arrs().filter(|a| self.members[a.ix()])
    }

    /// Members ending at `i`, in arrow order.
    pub fn members_into(&self, i: Obj) -> impl Iterator<Item = Arr> + '_ {
        self.base.arrows_into(i).iter().copied().filter(|a| self.members[a.ix()])
    }

    /// Members starting at `i`, in arrow order.
    pub fn members_out(&self, i: Obj) -> impl Iterator<Item = Arr> + '_ {
        self.base.arrows_out(i).iter().copied().filter(|a| self.members[a.ix()])
    }

    /// The chosen pullback of member `f` along `g`; `p2` is the pulled-back
    /// member.
    pub fn pullback(&self, f: Arr, g: Arr) -> Option<&PullbackCone> {
        self.pullbacks.get(&(f, g))
    }

    /// The chosen pullback, or `PreconditionFailed`.
    pub fn require_pullback(&self, f: Arr, g: Arr) -> Result<&PullbackCone> {
        self.pullback(f, g).ok_or_else(|| {
            Error::PreconditionFailed(alloc::format!(
                "no pullback of `{}` along `{}`",
                self.base.arr_name(f),
                self.base.arr_name(g)
            ))
        })
    }

    pub fn n_members(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }
}

/// The four closure properties with a first counterexample for each failure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosureReport {
    pub pullback_closed: bool,
    /// `(f, g)`: member `f` has no pullback along `g`, or its pulled-back leg is no member.
    pub pullback_counterexample: Option<(Arr, Arr)>,
    pub has_units: bool,
    /// An isomorphism outside the class.
    pub units_counterexample: Option<Arr>,
    pub composition_closed: bool,
    /// `(g, f)` with `g ∘ f` outside the class.
    pub composition_counterexample: Option<(Arr, Arr)>,
    pub well_rooted: bool,
    /// An object whose arrow to the terminal object is no member, or `None`
    /// when there is no terminal object.
    pub well_rooted_counterexample: Option<Obj>,
}

pub fn verify_display_class(f: &DisplayClass) -> ClosureReport {
    let b = &f.base;
    let mut r = ClosureReport::default();
    r.pullback_counterexample = f.members().find_map(|m| {
        b.arrows_into(b.cod(m)).iter().copied().find_map(|g| match f.pullback(m, g) {
            Some(cone) if f.is_member(cone.p2) => None,
            _ => Some((m, g)),
        })
    });
    r.pullback_closed = r.pullback_counterexample.is_none();
    r.units_counterexample = b.arrs().find(|&a| !f.is_member(a) && is_iso(b, a));
    r.has_units = r.units_counterexample.is_none();
    r.composition_counterexample = f.members().find_map(|g| {
        f.members_into(b.dom(g)).find(|&h| !f.is_member(b.comp(g, h))).map(|h| (g, h))
    });
    r.composition_closed = r.composition_counterexample.is_none();
    match terminal_object(b) {
        Some(t) => {
            r.well_rooted_counterexample = b.objs().find(|&x| !f.is_member(b.hom(x, t)[0]));
            r.well_rooted = r.well_rooted_counterexample.is_none();
        }
        None => r.well_rooted = false,
    }
    r
}

/// A dependent product of `f: K ↠ I` along `g: I ↠ J`:
/// `h: E ↠ J`, the chosen pullback `Z` of `h` along `g` with legs
/// `g_prime: Z → E` and `h_prime: Z ↠ I`, and the evaluation `e: Z → K`
/// with `f ∘ e = h_prime`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DepProdDiagram {
    pub f: Arr,
    pub g: Arr,
    pub h: Arr,
    pub cone: PullbackCone,
    pub e: Arr,
}

impl DepProdDiagram {
    pub fn e_obj(&self, b: &FinCat) -> Obj {
        b.dom(self.h)
    }

    pub fn z(&self) -> Obj {
        self.cone.apex
    }

    pub fn g_prime(&self) -> Arr {
        self.cone.p1
    }

    pub fn h_prime(&self) -> Arr {
        self.cone.p2
    }

    /// The unique `(w, k)` for a competitor `(h2, e2)`, where `w` is the gap
    /// map induced by `k`.
    pub fn mediate(&self, cls: &DisplayClass, h2: Arr, e2: Arr) -> Result<Option<(Arr, Arr)>> {
        let b = cls.base();
        let cone2 = cls.require_pullback(h2, self.g)?;
        let mut found = None;
        for &k in b.hom(b.dom(h2), b.dom(self.h)) {
            if b.comp(self.h, k) != h2 {
                continue;
            }
            let Some(w) = self.cone.gap(b, b.comp(k, cone2.p1), cone2.p2) else {
                continue;
            };
            if b.comp(self.e, w) == e2 {
                if found.is_some() {
                    return Ok(None);
                }
                found = Some((w, k));
            }
        }
        Ok(found)
    }
}

/// Order-least dependent product of member `f` along member `g`, checked in
/// the reduced form: every competitor `(h', e')` has exactly one `k` with
/// `h ∘ k = h'` and `e ∘ w_k = e'`.
pub fn dependent_product(cls: &DisplayClass, f: Arr, g: Arr, budget: Budget) -> Result<Option<DepProdDiagram>> {
    let b = cls.base();
    if b.cod(f) != b.dom(g) || !cls.is_member(f) || !cls.is_member(g) {
        return Err(Error::PreconditionFailed("dependent product needs composable members".into()));
    }
    let meter = budget.meter();
    let (k_obj, j) = (b.dom(f), b.cod(g));
    // Competitors: members into J with their chosen pullback and evaluations.
    let mut competitors: Vec<(Arr, PullbackCone, Arr)> = Vec::new();
    let members_j: Vec<Arr> = cls.members_into(j).collect();
    for &h2 in &members_j {
        // Without a pullback along `g` there is no diagram to quantify over.
        let Some(&cone2) = cls.pullback(h2, g) else {
            continue;
        };
        for &e2 in b.hom(cone2.apex, k_obj) {
            if b.comp(f, e2) == cone2.p2 {
                competitors.push((h2, cone2, e2));
            }
        }
    }
    for e_obj in b.objs() {
        for &h in members_j.iter().filter(|&&h| b.dom(h) == e_obj) {
            let Some(&cone) = cls.pullback(h, g) else {
                continue;
            };
            if !cls.is_member(cone.p2) {
                continue;
            }
            for &e in b.hom(cone.apex, k_obj) {
                meter.tick()?;
                if b.comp(f, e) != cone.p2 {
                    continue;
                }
                let mut universal = true;
                'competitors: for &(h2, cone2, e2) in &competitors {
                    let mut count = 0;
                    for &k in b.hom(b.dom(h2), e_obj) {
                        meter.tick()?;
                        if b.comp(h, k) != h2 {
                            continue;
                        }
                        let w = cone.gap(b, b.comp(k, cone2.p1), cone2.p2);
                        if w.is_some_and(|w| b.comp(e, w) == e2) {
                            count += 1;
                        }
                    }
                    if count != 1 {
                        universal = false;
                        break 'competitors;
                    }
                }
                if universal {
                    return Ok(Some(DepProdDiagram { f, g, h, cone, e }));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DepProdReport {
    pub holds: bool,
    /// Composable member pairs `(f, g)` without a dependent product.
    pub failing: Vec<(Arr, Arr)>,
}

pub fn has_dependent_products(cls: &DisplayClass, budget: Budget) -> Result<DepProdReport> {
    let b = cls.base();
    let mut failing = Vec::new();
    for g in cls.members() {
        for f in cls.members_into(b.dom(g)) {
            if dependent_product(cls, f, g, budget)?.is_none() {
                failing.push((f, g));
            }
        }
    }
    Ok(DepProdReport { holds: failing.is_empty(), failing })
}
