use alloc::format;
use alloc::vec::Vec;

use super::pi::PiCompletion;
use super::sigma::{SigmaArrow, SigmaCompletion, SigmaObject};
use crate::display::DisplayClass;
use crate::error::{Error, Result};
use crate::fibration::{double_opposite_iso, fibrewise_opposite, ClovenFibration, FibredFunctor, Opposite};
use crate::kernel::{Arr, FinFunctor, Obj};
use crate::structure::FibCtx;

/// `G^op: p^op → q^op` for a cartesian-preserving `G: p → q`.
pub fn opposite_functor(
    p: &ClovenFibration,
    q: &ClovenFibration,
    op_p: &Opposite,
    op_q: &Opposite,
    g: &FibredFunctor,
) -> Result<FibredFunctor> {
    let mut arr = Vec::with_capacity(op_p.spans.len());
    for s in &op_p.spans {
        let c = g.total_map.on_arr(p.lift(s.u, s.y));
        if !q.is_cartesian(c) {
            return Err(Error::PreconditionFailed(format!(
                "functor does not preserve the cartesian arrow `{}`",
                p.total().arr_name(p.lift(s.u, s.y))
            )));
        }
        let v = g.total_map.on_arr(s.v);
        arr.push(
            op_q.arrow_of_pair(q, c, v)
                .ok_or_else(|| Error::InternalDisagreement("opposite image span has no class".into()))?,
        );
    }
    Ok(FibredFunctor { total_map: FinFunctor { obj: g.total_map.obj.clone(), arr }, base_map: g.base_map.clone() })
}

/// `Σ_F(G): Σ_F(p) → Σ_F(q)` for `G` over the identity of the base.
pub fn sigma_functor(sp: &SigmaCompletion, sq: &SigmaCompletion, g: &FibredFunctor) -> Result<FibredFunctor> {
    let miss = || Error::InternalDisagreement("Σ image missing".into());
    let obj: Vec<Obj> = sp
        .objects
        .iter()
        .map(|s| sq.obj_of(SigmaObject { alpha: g.total_map.on_obj(s.alpha), ..*s }).ok_or_else(miss))
        .collect::<Result<_>>()?;
    let e = sp.fib.total();
    let arr = e
        .arrs()
        .map(|a| {
            let sa = sp.arrow(a);
            let img = SigmaArrow { phi: g.total_map.on_arr(sa.phi), ..sa };
            sq.arr_of(obj[e.dom(a).ix()], obj[e.cod(a).ix()], img).ok_or_else(miss)
        })
        .collect::<Result<_>>()?;
    Ok(FibredFunctor::over_identity(&sp.fib, FinFunctor { obj, arr }))
}

/// `Π_F(G): Π_F(p) → Π_F(q)` for a cartesian-preserving `G` over the identity.
pub fn pi_functor(
    p: &ClovenFibration,
    q: &ClovenFibration,
    pp: &PiCompletion,
    pq: &PiCompletion,
    g: &FibredFunctor,
) -> Result<FibredFunctor> {
    let gop = opposite_functor(p, q, &pp.op_p, &pq.op_p, g)?;
    let sg = sigma_functor(&pp.sigma_op, &pq.sigma_op, &gop)?;
    opposite_functor(&pp.sigma_op.fib, &pq.sigma_op.fib, &pp.op_sigma, &pq.op_sigma, &sg)
}

/// The canonical `Σ_F(q) → p` for an inclusion-like `J: q → p` over the
/// identity: `(I, f, β) ↦ ∐_f Jβ`, and `(f0, f1, φ)` to the unique `z` over
/// `f0` with `z ∘ ι = ι ∘ Jφ`.
pub fn comparison_sigma(ctx: &FibCtx<'_>, sq: &SigmaCompletion, j: &FibredFunctor) -> Result<FibredFunctor> {
    let p = ctx.p;
    let e = p.total();
    let mut obj = Vec::with_capacity(sq.objects.len());
    let mut inj = Vec::with_capacity(sq.objects.len());
    for s in &sq.objects {
        let (c, i) = ctx.injection(s.g, j.total_map.on_obj(s.alpha))?;
        obj.push(c);
        inj.push(i);
    }
    let se = sq.fib.total();
    let mut arr = Vec::with_capacity(se.n_arrs());
    for a in se.arrs() {
        let sa = sq.arrow(a);
        let (x, y) = (se.dom(a), se.cod(a));
        let target = e.comp(inj[y.ix()], j.total_map.on_arr(sa.phi));
        let mut found = None;
        for z in p.hom_over(obj[x.ix()], obj[y.ix()], sa.f0) {
            if e.comp(z, inj[x.ix()]) == target {
                if found.is_some() {
                    return Err(Error::TheoremViolation("comparison arrow is not unique".into()));
                }
                found = Some(z);
            }
        }
        arr.push(found.ok_or_else(|| Error::TheoremViolation("comparison arrow does not exist".into()))?);
    }
    Ok(FibredFunctor::over_identity(&sq.fib, FinFunctor { obj, arr }))
}

/// The canonical `Π_F(q) → p`, computed as the opposite of the Σ-comparison
/// of `q^op` into `p^op`. `ctx_op` must be over `op_p.fib`.
pub fn comparison_pi(
    p: &ClovenFibration,
    op_p: &Opposite,
    ctx_op: &FibCtx<'_>,
    q: &ClovenFibration,
    pq: &PiCompletion,
    j: &FibredFunctor,
) -> Result<FibredFunctor> {
    let jop = opposite_functor(q, p, &pq.op_p, op_p, j)?;
    let c = comparison_sigma(ctx_op, &pq.sigma_op, &jop)?;
    let opop = fibrewise_opposite(&op_p.fib)?;
    let cop = opposite_functor(&pq.sigma_op.fib, &op_p.fib, &pq.op_sigma, &opop, &c)?;
    let back = double_opposite_iso(p, op_p, &opop)?;
    Ok(FibredFunctor { total_map: cop.total_map.then(&back), base_map: cop.base_map })
}

/// The closed-form unit `κ_σ: σ ⇝ u*∐_u σ` of Σ_F(p) at `σ = (I, g, β)`:
/// `((id_I, ⟨id, g⟩), φ)` with `φ` the filler of `β` through the lift.
pub fn sigma_unit(p: &ClovenFibration, cls: &DisplayClass, sc: &SigmaCompletion, u: Arr, sigma: Obj) -> Result<Arr> {
    let b = p.base();
    let s = sc.object(sigma);
    if b.dom(u) != s.i {
        return Err(Error::PreconditionFailed("σ is not over the domain of u".into()));
    }
    let ug = b.comp(u, s.g);
    let cone = cls.require_pullback(ug, u)?;
    let f1 = cone
        .gap(b, b.id(b.dom(s.g)), s.g)
        .ok_or_else(|| Error::TheoremViolation("no gap map into the pullback".into()))?;
    let phi = p
        .fill(p.lift(cone.p1, s.alpha), p.total().id(s.alpha), f1)
        .ok_or_else(|| Error::TheoremViolation("no filler for the unit".into()))?;
    let tgt = SigmaObject { i: s.i, g: cone.p2, alpha: p.reindex_obj(cone.p1, s.alpha) };
    let t = sc.obj_of(tgt).ok_or_else(|| Error::InternalDisagreement("unit target missing".into()))?;
    sc.arr_of(sigma, t, SigmaArrow { f0: b.id(s.i), f1, phi })
        .ok_or_else(|| Error::InternalDisagreement("unit arrow missing".into()))
}
