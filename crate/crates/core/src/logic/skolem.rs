use alloc::vec::Vec;

use super::split::Logic;
use super::Counterexample;
use crate::display::{dependent_product, has_dependent_products, verify_display_class, DepProdDiagram};
use crate::error::{Error, Result};
use crate::kernel::{Arr, Obj};
use crate::structure::{verify_fibred_structure, Direction, Square};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemReport {
    pub holds: bool,
    pub dependent_products: bool,
    pub fibred_coproducts: bool,
    pub fibred_products: bool,
    pub enough_qfree: bool,
    pub closure: bool,
    pub counterexample: Option<Counterexample>,
}

/// Adjoints along members and Beck–Chevalley, or the first reason not.
pub(crate) fn structure_counterexample(lg: &Logic<'_>, d: Direction) -> Result<Option<Counterexample>> {
    let r = verify_fibred_structure(&lg.ctx, lg.cls, d)?;
    if let Some(&(u, alpha)) = r.missing_adjoints.first() {
        return Ok(Some(Counterexample::MissingAdjoint { direction: d, u, alpha }));
    }
    if let Some(sq) = r.failing_squares.first() {
        return Ok(Some(Counterexample::BeckChevalley { direction: d, v: sq.square.v, f: sq.square.f }));
    }
    Ok(None)
}

/// Pullback-closure, and composition-closure when `composition` is set.
pub(crate) fn class_counterexample(lg: &Logic<'_>, composition: bool) -> Option<Counterexample> {
    let r = verify_display_class(lg.cls);
    if let Some((f, g)) = r.pullback_counterexample {
        return Some(Counterexample::NotPullbackClosed { f, g });
    }
    r.composition_counterexample.filter(|_| composition).map(|(g, f)| Counterexample::NotCompositionClosed { g, f })
}

/// The four clauses of a dependent Skolem fibration, all evaluated; the
/// counterexample is the first failure in clause order.
pub fn is_skolem(lg: &Logic<'_>) -> Result<SkolemReport> {
    let mut cx: Vec<Counterexample> = Vec::new();
    if let Some(c) = class_counterexample(lg, false) {
        let mut r = SkolemReport {
            holds: false,
            dependent_products: false,
            fibred_coproducts: false,
            fibred_products: false,
            enough_qfree: false,
            closure: false,
            counterexample: Some(c),
        };
        // Without pullbacks only the quantifier clauses can be evaluated.
        r.enough_qfree = lg.enough_qfree(Direction::Left)?.holds;
        return Ok(r);
    }
    let dp = has_dependent_products(lg.cls, lg.ctx.budget)?;
    if let Some(&(f, g)) = dp.failing.first() {
        cx.push(Counterexample::NoDependentProduct { f, g });
    }
    let left = structure_counterexample(lg, Direction::Left)?;
    let right = structure_counterexample(lg, Direction::Right)?;
    cx.extend(left);
    cx.extend(right);
    let enough = lg.enough_qfree(Direction::Left)?;
    if let Some(alpha) = enough.first_failure {
        cx.push(Counterexample::NoCover { direction: Direction::Left, alpha });
    }
    let closure = closure_failure(lg)?;
    if let Some((alpha, f)) = closure {
        cx.push(Counterexample::Closure { alpha, f });
    }
    let r = SkolemReport {
        holds: cx.is_empty(),
        dependent_products: dp.holds,
        fibred_coproducts: left.is_none(),
        fibred_products: right.is_none(),
        enough_qfree: enough.holds,
        closure: closure.is_none(),
        counterexample: cx.into_iter().next(),
    };
    Ok(r)
}

/// First `(α, f)` with `α` ∐-quantifier-free but `∏_f α` not, over products
/// that exist.
fn closure_failure(lg: &Logic<'_>) -> Result<Option<(Obj, Arr)>> {
    let p = lg.p();
    for alpha in p.total().objs() {
        if !lg.is_qfree(alpha, Direction::Left)? {
            continue;
        }
        for f in lg.cls.members_out(p.p_obj(alpha)) {
            if let Some((c, _)) = lg.ctx.prod(f, alpha)? {
                if !lg.is_qfree(c, Direction::Left)? {
                    return Ok(Some((alpha, f)));
                }
            }
        }
    }
    Ok(None)
}

/// Both sides of the Skolemisation isomorphism over `S` and an order-least
/// vertical isomorphism between them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SkolemIso {
    pub diagram: DepProdDiagram,
    /// `∏_g ∐_f β`.
    pub lhs: Obj,
    /// `∐_h ∏_{g'} e*β`.
    pub rhs: Obj,
    pub iso: Arr,
    /// `|Hom(σ, lhs)| = |Hom(σ, rhs)|` for every `σ` over `S`.
    pub hom_counts_agree: bool,
}

fn diagram_for(lg: &Logic<'_>, g: Arr, f: Arr, beta: Obj) -> Result<DepProdDiagram> {
    let (p, b) = (lg.p(), lg.p().base());
    if p.p_obj(beta) != b.dom(f) {
        return Err(Error::PreconditionFailed("β is not over the domain of f".into()));
    }
    dependent_product(lg.cls, f, g, lg.ctx.budget)?
        .ok_or_else(|| Error::PreconditionFailed("no dependent product of f along g".into()))
}

pub fn skolem_sides(lg: &Logic<'_>, dg: &DepProdDiagram, beta: Obj) -> Result<(Obj, Obj)> {
    let p = lg.p();
    let (x, _) = lg.ctx.coprod_req(dg.f, beta)?;
    let (lhs, _) = lg.ctx.prod_req(dg.g, x)?;
    let (y, _) = lg.ctx.prod_req(dg.g_prime(), p.reindex_obj(dg.e, beta))?;
    let (rhs, _) = lg.ctx.coprod_req(dg.h, y)?;
    Ok((lhs, rhs))
}

/// `∏_g ∐_f β ≅ ∐_h ∏_{g'} e*β`, by direct search.
pub fn skolemize(lg: &Logic<'_>, g: Arr, f: Arr, beta: Obj) -> Result<SkolemIso> {
    let p = lg.p();
    let diagram = diagram_for(lg, g, f, beta)?;
    let (lhs, rhs) = skolem_sides(lg, &diagram, beta)?;
    let iso = p
        .vertical_iso(lhs, rhs)
        .ok_or_else(|| Error::TheoremViolation("Skolemisation sides are not isomorphic".into()))?;
    let s = p.base().cod(g);
    let hom_counts_agree =
        p.fibre_objs(s).iter().all(|&sigma| p.vhom(sigma, lhs).count() == p.vhom(sigma, rhs).count());
    Ok(SkolemIso { diagram, lhs, rhs, iso, hom_counts_agree })
}

/// `Φ` and `Ψ` tabulated on `Hom(σ, lhs)` and `Hom(σ, rhs)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomBijection {
    pub sigma: Obj,
    pub lhs: Obj,
    pub rhs: Obj,
    pub phi: Vec<(Arr, Arr)>,
    pub psi: Vec<(Arr, Arr)>,
    /// `Ψ ∘ Φ = id` and `Φ ∘ Ψ = id` pointwise.
    pub inverse: bool,
}

struct Bij<'l, 'a> {
    lg: &'l Logic<'a>,
    dg: DepProdDiagram,
    beta: Obj,
    sigma: Obj,
}

impl Bij<'_, '_> {
    fn only<T>(mut v: Vec<T>, what: &str) -> Result<T> {
        if v.len() != 1 {
            return Err(Error::TheoremViolation(alloc::format!("{what}: {} factorizations", v.len())));
        }
        Ok(v.remove(0))
    }

    /// The gap `w: A → Z` of `(k ∘ g, id_A)` and the mate square along `k`.
    fn square(&self, k: Arr) -> Result<(Arr, Square)> {
        let b = self.lg.p().base();
        let (dg, a) = (self.dg, b.dom(self.dg.g));
        let w = dg
            .cone
            .gap(b, b.comp(k, dg.g), b.id(a))
            .ok_or_else(|| Error::TheoremViolation("no gap map into Z".into()))?;
        Ok((w, Square { v: dg.g_prime(), f: k, u: dg.g, g: w }))
    }

    fn phi(&self, m: Arr) -> Result<Arr> {
        let (lg, p, e, b) = (self.lg, self.lg.p(), self.lg.p().total(), self.lg.p().base());
        let dg = self.dg;
        let (x, _) = lg.ctx.coprod_req(dg.f, self.beta)?;
        let (_, eps_g) = lg.ctx.prod_req(dg.g, x)?;
        let mflat = e.comp(eps_g, p.reindex_arr(dg.g, m));
        let (u, mbar) = Self::only(lg.factorizations(dg.f, self.beta, mflat, Direction::Left)?, "split of m")?;
        let mut ks = Vec::new();
        for &k in b.hom(b.cod(dg.g), b.dom(dg.h)) {
            if b.comp(dg.h, k) != b.id(b.cod(dg.g)) {
                continue;
            }
            let (w, _) = self.square(k)?;
            if b.comp(dg.e, w) == u {
                ks.push(k);
            }
        }
        let k = Self::only(ks, "mediating section")?;
        let (w, sq) = self.square(k)?;
        let eb = p.reindex_obj(dg.e, self.beta);
        let t = e.comp(p.comparison_inv(dg.e, w, self.beta), mbar);
        let n1 = lg.ctx.prod_transpose(dg.g, self.sigma, t)?;
        let mate = lg.ctx.right_mate(sq, eb)?;
        let mate_inv = p.inverse(mate).ok_or_else(|| Error::TheoremViolation("mate is not invertible".into()))?;
        let (y, _) = lg.ctx.prod_req(dg.g_prime(), eb)?;
        let (_, iota_h) = lg.ctx.injection(dg.h, y)?;
        Ok(e.comp_all(&[iota_h, p.lift(k, y), mate_inv, n1]))
    }

    fn psi(&self, r: Arr) -> Result<Arr> {
        let (lg, p, e, b) = (self.lg, self.lg.p(), self.lg.p().total(), self.lg.p().base());
        let dg = self.dg;
        let eb = p.reindex_obj(dg.e, self.beta);
        let (y, _) = lg.ctx.prod_req(dg.g_prime(), eb)?;
        let (k, rt) = Self::only(lg.factorizations(dg.h, y, r, Direction::Left)?, "split of r")?;
        let (w, sq) = self.square(k)?;
        let n1 = e.comp(lg.ctx.right_mate(sq, eb)?, rt);
        let (_, eps) = lg.ctx.prod_req(dg.g, p.reindex_obj(w, eb))?;
        let t = e.comp(eps, p.reindex_arr(dg.g, n1));
        let mbar = e.comp(p.comparison(dg.e, w, self.beta), t);
        let u = b.comp(dg.e, w);
        let (_, iota_f) = lg.ctx.injection(dg.f, self.beta)?;
        let mflat = e.comp_all(&[iota_f, p.lift(u, self.beta), mbar]);
        lg.ctx.prod_transpose(dg.g, self.sigma, mflat)
    }
}

/// The hom-set bijection `Hom(σ, ∏_g ∐_f β) ≅ Hom(σ, ∐_h ∏_{g'} e*β)` for
/// ∐-quantifier-free `σ` over `S`.
pub fn skolem_bijection(lg: &Logic<'_>, sigma: Obj, beta: Obj, diagram: &DepProdDiagram) -> Result<HomBijection> {
    let p = lg.p();
    if p.p_obj(sigma) != p.base().cod(diagram.g) {
        return Err(Error::PreconditionFailed("σ is not over the codomain of g".into()));
    }
    if !lg.is_qfree(sigma, Direction::Left)? {
        return Err(Error::PreconditionFailed("σ is not quantifier-free".into()));
    }
    let (lhs, rhs) = skolem_sides(lg, diagram, beta)?;
    let bij = Bij { lg, dg: *diagram, beta, sigma };
    let phi: Vec<(Arr, Arr)> = p.vhom(sigma, lhs).map(|m| Ok((m, bij.phi(m)?))).collect::<Result<_>>()?;
    let psi: Vec<(Arr, Arr)> = p.vhom(sigma, rhs).map(|r| Ok((r, bij.psi(r)?))).collect::<Result<_>>()?;
    let back = |table: &[(Arr, Arr)], x: Arr| table.iter().find(|&&(a, _)| a == x).map(|&(_, y)| y);
    let inverse = phi.len() == psi.len()
        && phi.iter().all(|&(m, r)| back(&psi, r) == Some(m))
        && psi.iter().all(|&(r, m)| back(&phi, m) == Some(r));
    Ok(HomBijection { sigma, lhs, rhs, phi, psi, inverse })
}
