use alloc::vec::Vec;

use super::cloven::ClovenFibration;
use crate::error::Result;
use crate::kernel::{check_functor, Arr, FinFunctor, LawReport, Obj, Violation};

/// A morphism of fibrations: a total functor over a base functor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibredFunctor {
    pub total_map: FinFunctor,
    pub base_map: FinFunctor,
}

impl FibredFunctor {
    pub fn identity(p: &ClovenFibration) -> Self {
        FibredFunctor {
            total_map: FinFunctor::identity(p.total()),
            base_map: FinFunctor::identity(p.base()),
        }
    }

    /// A functor over the identity of the base.
    pub fn over_identity(p: &ClovenFibration, total_map: FinFunctor) -> Self {
        FibredFunctor { total_map, base_map: FinFunctor::identity(p.base()) }
    }

    pub fn then(&self, other: &FibredFunctor) -> FibredFunctor {
        FibredFunctor {
            total_map: self.total_map.then(&other.total_map),
            base_map: self.base_map.then(&other.base_map),
        }
    }
}

/// Functoriality, the commuting projection square, and preservation of
/// cartesian arrows.
pub fn check_fibred_functor(
    src: &ClovenFibration,
    tgt: &ClovenFibration,
    g: &FibredFunctor,
) -> Result<LawReport> {
    let mut report = check_functor(src.total(), tgt.total(), &g.total_map)?;
    report.violations.extend(check_functor(src.base(), tgt.base(), &g.base_map)?.violations);
    if !report.is_empty() {
        return Ok(report);
    }
    for f in src.total().arrs() {
        if tgt.p_arr(g.total_map.on_arr(f)) != g.base_map.on_arr(src.p_arr(f)) {
            report.push(Violation::ProjectionSquare { f });
        }
    }
    for f in src.total().arrs() {
        if src.is_cartesian(f) && !tgt.is_cartesian(g.total_map.on_arr(f)) {
            report.push(Violation::CartesianLost { f });
        }
    }
    Ok(report)
}

/// A fibred functor that is bijective on total objects, total arrows and
/// base arrows, with empty law report.
pub fn is_fibred_iso(src: &ClovenFibration, tgt: &ClovenFibration, g: &FibredFunctor) -> Result<bool> {
    if !check_fibred_functor(src, tgt, g)?.is_empty() {
        return Ok(false);
    }
    let bij = |m: &[u32], n: usize| {
        let mut seen = alloc::vec![false; n];
        m.len() == n && m.iter().all(|&i| !core::mem::replace(&mut seen[i as usize], true))
    };
    let ids = |v: &FinFunctor| -> (Vec<u32>, Vec<u32>) {
        (v.obj.iter().map(|x| x.0).collect(), v.arr.iter().map(|a| a.0).collect())
    };
    let (to, ta) = ids(&g.total_map);
    let (bo, ba) = ids(&g.base_map);
    Ok(bij(&to, tgt.total().n_objs())
        && bij(&ta, tgt.total().n_arrs())
        && bij(&bo, tgt.base().n_objs())
        && bij(&ba, tgt.base().n_arrs()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivalenceFailure {
    /// No object of the source fibre maps to something isomorphic to `target`.
    NotEssentiallySurjective { target: Obj },
    /// The vertical hom-set map `x → y` is not a bijection.
    NotFullyFaithful { x: Obj, y: Obj },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub failures: Vec<EquivalenceFailure>,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Per-fibre essential surjectivity and full faithfulness.
pub fn check_fibred_equivalence(
    src: &ClovenFibration,
    tgt: &ClovenFibration,
    g: &FibredFunctor,
) -> EquivalenceReport {
    let mut report = EquivalenceReport::default();
    for i in src.base().objs() {
        let j = g.base_map.on_obj(i);
        let images: Vec<Obj> = src.fibre_objs(i).iter().map(|&x| g.total_map.on_obj(x)).collect();
        for &t in tgt.fibre_objs(j) {
            if !images.iter().any(|&gx| tgt.vertical_iso(gx, t).is_some()) {
                report.failures.push(EquivalenceFailure::NotEssentiallySurjective { target: t });
            }
        }
        for &x in src.fibre_objs(i) {
            for &y in src.fibre_objs(i) {
                let (gx, gy) = (g.total_map.on_obj(x), g.total_map.on_obj(y));
                let mut imgs: Vec<Arr> = src.vhom(x, y).map(|a| g.total_map.on_arr(a)).collect();
                imgs.sort_unstable();
                let distinct = imgs.windows(2).all(|w| w[0] != w[1]);
                let all_vertical = imgs.iter().all(|&a| tgt.is_vertical(a));
                if !distinct || !all_vertical || imgs.len() != tgt.vhom(gx, gy).count() {
                    report.failures.push(EquivalenceFailure::NotFullyFaithful { x, y });
                }
            }
        }
    }
    report
}
