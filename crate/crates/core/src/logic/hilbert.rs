use alloc::format;
use alloc::vec::Vec;

use super::split::{Logic, SplitFailure};
use crate::error::{Error, Result};
use crate::kernel::{Arr, Obj};
use crate::structure::Direction;

/// `(ε_{α,f}, ε̄_{α,f})` for `α` over `I` and member `f: I ↠ J`.
///
/// In `Left` mode `bar: ∐_f α ⇝ ε*α`; in `Right` mode `bar: ε*α ⇝ ∏_f α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HilbertEntry {
    pub alpha: Obj,
    pub f: Arr,
    pub section: Arr,
    pub bar: Arr,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HilbertTable {
    pub entries: Vec<HilbertEntry>,
}

impl HilbertTable {
    pub fn get(&self, alpha: Obj, f: Arr) -> Option<&HilbertEntry> {
        self.entries.iter().find(|e| e.alpha == alpha && e.f == f)
    }
}

/// Why an object fails to be quantifier-free: `reindex*α` is not splitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QfFailure {
    pub alpha: Obj,
    pub reindex: Arr,
    pub split: SplitFailure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertReport {
    pub mode: Direction,
    pub holds: bool,
    pub table: HilbertTable,
    /// Every `ε̄` (or `τ̄`) has a two-sided vertical inverse.
    pub corollary_holds: bool,
    pub failure: Option<QfFailure>,
}

/// Number of `(t, b)` solving the characterization identity at `(α, f)`,
/// with the first solution.
fn solve_entry(lg: &Logic<'_>, alpha: Obj, f: Arr, d: Direction) -> Result<(usize, Option<HilbertEntry>)> {
    let (p, e) = (lg.p(), lg.p().total());
    let mut count = 0;
    let mut first = None;
    match d {
        Direction::Left => {
            let (c, iota) = lg.ctx.injection(f, alpha)?;
            for t in lg.sections(f) {
                let l = e.comp(iota, p.lift(t, alpha));
                for bar in p.vhom(c, p.reindex_obj(t, alpha)) {
                    if e.comp(l, bar) == e.id(c) {
                        count += 1;
                        first.get_or_insert(HilbertEntry { alpha, f, section: t, bar });
                    }
                }
            }
        }
        Direction::Right => {
            let (c, eps) = lg.ctx.prod_req(f, alpha)?;
            for t in lg.sections(f) {
                let l = e.comp(p.reindex_arr(t, eps), p.comparison_inv(f, t, c));
                for bar in p.vhom(p.reindex_obj(t, alpha), c) {
                    if e.comp(bar, l) == e.id(c) {
                        count += 1;
                        first.get_or_insert(HilbertEntry { alpha, f, section: t, bar });
                    }
                }
            }
        }
    }
    Ok((count, first))
}

/// Condition (3): every decomposition of every `u` into (or out of) the
/// adjoint is the canonical one built from the table.
fn universal_condition(lg: &Logic<'_>, table: &HilbertTable, d: Direction) -> Result<bool> {
    let (p, e, b) = (lg.p(), lg.p().total(), lg.p().base());
    let meter = lg.ctx.budget.meter();
    for g in lg.cls.members() {
        for &beta in p.fibre_objs(b.dom(g)) {
            let entry = *table.get(beta, g).ok_or_else(|| Error::InternalDisagreement("table entry missing".into()))?;
            let (c, l) = match d {
                Direction::Left => lg.ctx.injection(g, beta)?,
                Direction::Right => lg.ctx.prod_req(g, beta)?,
            };
            for &alpha2 in p.fibre_objs(b.cod(g)) {
                let us: Vec<Arr> = match d {
                    Direction::Left => p.vhom(alpha2, c).collect(),
                    Direction::Right => p.vhom(c, alpha2).collect(),
                };
                for u in us {
                    for t in lg.sections(g) {
                        let tb = p.reindex_obj(t, beta);
                        let hs: Vec<Arr> = match d {
                            Direction::Left => p.vhom(alpha2, tb).collect(),
                            Direction::Right => p.vhom(tb, alpha2).collect(),
                        };
                        for h in hs {
                            meter.tick()?;
                            let (decomposes, canonical) = match d {
                                Direction::Left => {
                                    (e.comp_all(&[l, p.lift(t, beta), h]) == u, e.comp(entry.bar, u))
                                }
                                Direction::Right => {
                                    let back = e.comp(p.reindex_arr(t, l), p.comparison_inv(g, t, c));
                                    (e.comp(h, back) == u, e.comp(u, entry.bar))
                                }
                            };
                            if decomposes && (t != entry.section || h != canonical) {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// First object that is not quantifier-free, with its witness of failure.
pub fn first_non_qfree(lg: &Logic<'_>, d: Direction) -> Result<Option<QfFailure>> {
    let p = lg.p();
    for alpha in p.total().objs() {
        if let Some(reindex) = lg.qfree_failure(alpha, d)? {
            let split = lg
                .splitting(p.reindex_obj(reindex, alpha), d)?
                .failure
                .ok_or_else(|| Error::InternalDisagreement("splitting failure without witness".into()))?;
            return Ok(Some(QfFailure { alpha, reindex, split }));
        }
    }
    Ok(None)
}

/// The Hilbert ε (`Left`) or τ (`Right`) property, decided both from the
/// definition and from the characterization by sections; the two verdicts
/// must agree. Requires the adjoint along every member.
pub fn hilbert_check(lg: &Logic<'_>, d: Direction) -> Result<HilbertReport> {
    let p = lg.p();
    let b = p.base();
    for u in lg.cls.members() {
        let t = lg.ctx.transport(u, d)?;
        if !t.is_total() {
            return Err(Error::PreconditionFailed(format!(
                "no {} along `{}`",
                if d == Direction::Left { "coproducts" } else { "products" },
                b.arr_name(u)
            )));
        }
    }
    let failure = first_non_qfree(lg, d)?;
    let direct = failure.is_none();

    let mut table = HilbertTable::default();
    let mut unique = true;
    'outer: for alpha in p.total().objs() {
        for f in lg.cls.members_out(p.p_obj(alpha)) {
            let (count, entry) = solve_entry(lg, alpha, f, d)?;
            if count != 1 {
                unique = false;
                break 'outer;
            }
            table.entries.extend(entry);
        }
    }
    let characterization = unique && universal_condition(lg, &table, d)?;
    if direct != characterization {
        return Err(Error::InternalDisagreement(format!(
            "Hilbert verdicts differ: definition {direct}, characterization {characterization}"
        )));
    }
    let corollary_holds = !direct || table.entries.iter().all(|e| p.is_vertical(e.bar) && p.inverse(e.bar).is_some());
    if !corollary_holds {
        return Err(Error::TheoremViolation("a Hilbert witness arrow is not an isomorphism".into()));
    }
    if !direct {
        table.entries.clear();
    }
    Ok(HilbertReport { mode: d, holds: direct, table, corollary_holds, failure })
}
