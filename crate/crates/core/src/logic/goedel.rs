use alloc::vec::Vec;

use super::hilbert::{hilbert_check, HilbertReport};
use super::skolem::{class_counterexample, is_skolem, structure_counterexample, SkolemReport};
use super::split::{EnoughReport, Logic};
use super::Counterexample;
use crate::completion::{comparison_pi, comparison_sigma, dialectica, sigma_completion, sigma_functor};
use crate::error::{Error, Result};
use crate::fibration::{
    check_fibred_equivalence, check_fibred_functor, fibrewise_opposite, EquivalenceReport, FibredFunctor,
    Subfibration,
};
use crate::kernel::{Arr, Obj};
use crate::structure::{Direction, FibCtx};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoedelReport {
    pub holds: bool,
    pub skolem: SkolemReport,
    /// `∏`-covers inside the ∐-quantifier-free subfibration, local ids.
    pub sub_enough: Option<EnoughReport>,
    pub counterexample: Option<Counterexample>,
}

/// The ∐-quantifier-free subfibration with its own checker.
fn with_qfree_sub<T>(lg: &Logic<'_>, k: impl FnOnce(&Subfibration, &Logic<'_>) -> Result<T>) -> Result<T> {
    let sub = lg.qfree_subfibration(Direction::Left)?;
    let ls = Logic::new(&sub.fib, lg.cls, lg.ctx.budget);
    k(&sub, &ls)
}

pub fn is_goedel(lg: &Logic<'_>) -> Result<GoedelReport> {
    let skolem = is_skolem(lg)?;
    if !skolem.holds {
        let counterexample = skolem.counterexample;
        return Ok(GoedelReport { holds: false, skolem, sub_enough: None, counterexample });
    }
    with_qfree_sub(lg, |sub, ls| {
        let r = ls.enough_qfree(Direction::Right)?;
        let counterexample = r
            .first_failure
            .map(|x| Counterexample::NoCover { direction: Direction::Right, alpha: sub.parent_obj(x) });
        Ok(GoedelReport { holds: r.holds, skolem, sub_enough: Some(r), counterexample })
    })
}

/// `α ≅ ∐_f ∏_g β` with `β` ∏-quantifier-free inside the ∐-quantifier-free
/// subfibration. All objects are ids of the ambient fibration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrenexForm {
    pub alpha: Obj,
    pub f: Arr,
    pub g: Arr,
    pub gamma: Obj,
    pub beta: Obj,
    /// `∏_g β`, computed in the subfibration.
    pub pi: Obj,
    /// `∐_f ∏_g β`.
    pub target: Obj,
    pub iso: Arr,
}

fn prenex_in(lg: &Logic<'_>, sub: &Subfibration, ls: &Logic<'_>, alpha: Obj) -> Result<PrenexForm> {
    let (p, e) = (lg.p(), lg.p().total());
    let no_cover = |what: &str| Error::PreconditionFailed(alloc::format!("`{}` has no {what} cover", e.obj_name(alpha)));
    let c1 = lg.cover(alpha, Direction::Left)?.ok_or_else(|| no_cover("∐"))?;
    let gamma_l = sub.local_obj(c1.beta).ok_or_else(|| Error::InternalDisagreement("cover is not qf".into()))?;
    let c2 = ls.cover(gamma_l, Direction::Right)?.ok_or_else(|| no_cover("∏"))?;
    let (pi_l, _) = ls.ctx.prod_req(c2.f, c2.beta)?;
    let pi = sub.parent_obj(pi_l);
    let step = lg.ctx.coprod_arr(c1.f, sub.parent_arr(c2.iso))?;
    let iso = e.comp(step, c1.iso);
    let target = e.cod(iso);
    match p.inverse(iso) {
        Some(inv) if p.is_vertical(iso) && e.comp(inv, iso) == e.id(alpha) => {}
        _ => return Err(Error::TheoremViolation("prenex composite is not an isomorphism".into())),
    }
    Ok(PrenexForm { alpha, f: c1.f, g: c2.f, gamma: c1.beta, beta: sub.parent_obj(c2.beta), pi, target, iso })
}

pub fn prenex(lg: &Logic<'_>, alpha: Obj) -> Result<PrenexForm> {
    with_qfree_sub(lg, |sub, ls| prenex_in(lg, sub, ls, alpha))
}

/// Prenex forms for every object, in object order.
pub fn prenex_all(lg: &Logic<'_>) -> Result<Vec<PrenexForm>> {
    with_qfree_sub(lg, |sub, ls| lg.p().total().objs().map(|x| prenex_in(lg, sub, ls, x)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundtripReport {
    /// Sizes of `p̄`, `p'` and `Dial_F(p')`.
    pub qf_objects: usize,
    pub core_objects: usize,
    pub dial_objects: usize,
    /// The composite `Dial_F(p') → p` is a fibred functor.
    pub functor_ok: bool,
    pub equivalence: EquivalenceReport,
    pub dial_is_goedel: bool,
}

impl RoundtripReport {
    pub fn holds(&self) -> bool {
        self.functor_ok && self.equivalence.holds() && self.dial_is_goedel
    }
}

/// Rebuilds `p` as `Dial_F(p')`, with `p'` the ∏-quantifier-free objects of
/// the ∐-quantifier-free subfibration, and checks the comparison
/// `Dial_F(p') → Σ_F(p̄) → p` is a fibred equivalence. Also checks that the
/// rebuilt Dialectica fibration is Gödel.
pub fn goedel_dialectica_roundtrip(lg: &Logic<'_>) -> Result<RoundtripReport> {
    let (p, cls, budget) = (lg.p(), lg.cls, lg.ctx.budget);
    let pbar = lg.qfree_subfibration(Direction::Left)?;
    let lbar = Logic::new(&pbar.fib, cls, budget);
    let core = lbar.qfree_subfibration(Direction::Right)?;
    let dial = dialectica(&core.fib, cls)?;

    let j_core = FibredFunctor::over_identity(&core.fib, core.inclusion());
    let op_bar = fibrewise_opposite(&pbar.fib)?;
    let ctx_op = FibCtx::new(&op_bar.fib, budget);
    let g_pi = comparison_pi(&pbar.fib, &op_bar, &ctx_op, &core.fib, &dial.pi, &j_core)?;
    let sigma_bar = sigma_completion(&pbar.fib, cls)?;
    let lifted = sigma_functor(&dial.sigma, &sigma_bar, &g_pi)?;
    let j_bar = FibredFunctor::over_identity(&pbar.fib, pbar.inclusion());
    let g_sigma = comparison_sigma(&lg.ctx, &sigma_bar, &j_bar)?;
    let total = lifted.then(&g_sigma);

    let functor_ok = check_fibred_functor(dial.fib(), p, &total)?.is_empty();
    let equivalence = check_fibred_equivalence(dial.fib(), p, &total);
    let ld = Logic::new(dial.fib(), cls, budget);
    let dial_is_goedel = is_goedel(&ld)?.holds;
    Ok(RoundtripReport {
        qf_objects: pbar.fib.total().n_objs(),
        core_objects: core.fib.total().n_objs(),
        dial_objects: dial.fib().total().n_objs(),
        functor_ok,
        equivalence,
        dial_is_goedel,
    })
}

/// A Hilbert verdict as a classification flag: the fibred structure in the
/// matching direction plus the Hilbert property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertFlag {
    pub holds: bool,
    pub report: Option<HilbertReport>,
    pub counterexample: Option<Counterexample>,
}

pub fn hilbert_flag(lg: &Logic<'_>, d: Direction) -> Result<HilbertFlag> {
    for u in lg.cls.members() {
        let t = lg.ctx.transport(u, d)?;
        let first = t.missing(lg.p()).next();
        if let Some(alpha) = first {
            let counterexample = Some(Counterexample::MissingAdjoint { direction: d, u, alpha });
            return Ok(HilbertFlag { holds: false, report: None, counterexample });
        }
    }
    let report = hilbert_check(lg, d)?;
    let mut counterexample = report.failure.map(|f| Counterexample::NotSplitting { direction: d, failure: f });
    if counterexample.is_none() {
        counterexample = match class_counterexample(lg, true) {
            Some(c) => Some(c),
            None => structure_counterexample(lg, d)?,
        };
    }
    Ok(HilbertFlag { holds: counterexample.is_none(), report: Some(report), counterexample })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub goedel: GoedelReport,
    pub hilbert_epsilon: HilbertFlag,
    pub hilbert_tau: HilbertFlag,
}

impl ClassificationReport {
    pub fn is_skolem(&self) -> bool {
        self.goedel.skolem.holds
    }

    pub fn is_goedel(&self) -> bool {
        self.goedel.holds
    }

    pub fn is_hilbert_epsilon(&self) -> bool {
        self.hilbert_epsilon.holds
    }

    pub fn is_hilbert_tau(&self) -> bool {
        self.hilbert_tau.holds
    }
}

pub fn classify(lg: &Logic<'_>) -> Result<ClassificationReport> {
    Ok(ClassificationReport {
        goedel: is_goedel(lg)?,
        hilbert_epsilon: hilbert_flag(lg, Direction::Left)?,
        hilbert_tau: hilbert_flag(lg, Direction::Right)?,
    })
}
