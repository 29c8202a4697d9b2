use fibrak_core::corpus::{codomain_fibration, corpus_entry, finset_skeleton, identity_fibration, interval, CorpusEntry};
use fibrak_core::display::DisplayClass;
use fibrak_core::fibration::{fibrewise_opposite, ClovenFibration, Prefibration};
use fibrak_core::kernel::{check_functor, is_mono, Arr, CatBuilder, FinFunctor, Obj};
use fibrak_core::structure::{adjoint_along, beck_chevalley, verify_fibred_structure, Direction, FibCtx};
use fibrak_core::Budget;
use proptest::prelude::*;

const SMALL: [&str; 8] = [
    "identity-terminal",
    "identity-interval",
    "identity-z2-group",
    "sub-finset2",
    "cod-interval",
    "cod-finset2-monos",
    "sigma-identity-interval",
    "dial-of-identity",
];

fn entry(name: &str) -> CorpusEntry {
    corpus_entry(name, Budget::default()).unwrap()
}

fn cod_monos() -> (ClovenFibration, DisplayClass) {
    let c = finset_skeleton(2).unwrap();
    let ms: Vec<Arr> = c.arrs().filter(|&a| is_mono(&c, a)).collect();
    let cls = DisplayClass::new(c, ms, Budget::default()).unwrap();
    (codomain_fibration(&cls).unwrap(), cls)
}

/// Over `0 → 1`: fibre `a ≤ b` over `0`, a point `s` over `1`, reindexing
/// picks the top `b`. The left adjoint collapses everything to `s`, so the
/// unit `a ≤ b` is not invertible and Beck–Chevalley fails along `0 → 1`.
fn skewed() -> (ClovenFibration, DisplayClass) {
    let base = finset_skeleton(1).unwrap();
    let mut b = CatBuilder::new();
    let (a, bb, s) = (b.object("a"), b.object("b"), b.object("s"));
    let ab = b.arrow("ab", a, bb);
    let a_s = b.arrow("as", a, s);
    let b_s = b.arrow("bs", bb, s);
    let total = b.build(move |g, f| ((g, f) == (b_s, ab)).then_some(a_s)).unwrap();
    let (o0, o1) = (base.find_obj("0").unwrap(), base.find_obj("1").unwrap());
    let bang = base.find_arr("f01").unwrap();
    let arr = vec![base.id(o0), base.id(o0), base.id(o1), base.id(o0), bang, bang];
    let proj = FinFunctor { obj: vec![o0, o0, o1], arr };
    let p = Prefibration::new(total, base.clone(), proj).into_cloven().unwrap();
    let cls = DisplayClass::all_arrows(base, Budget::default()).unwrap();
    (p, cls)
}

#[test]
fn adjoint_along_identity_is_identity() {
    for name in SMALL {
        let e = entry(name);
        let p = &e.fibration;
        for x in p.base().objs() {
            let id = p.base().id(x);
            for d in [Direction::Left, Direction::Right] {
                let adj = adjoint_along(p, id, d, Budget::default()).unwrap().unwrap();
                let objs = p.fibre_objs(x);
                for (k, &a) in objs.iter().enumerate() {
                    assert!(p.vertical_iso(adj.obj[k], a).is_some(), "{name}");
                    assert!(p.inverse(adj.unit[k]).is_some() && p.inverse(adj.counit[k]).is_some(), "{name}");
                }
            }
        }
    }
    let p = identity_fibration(&interval());
    let id = p.base().id(Obj(0));
    let adj = adjoint_along(&p, id, Direction::Left, Budget::default()).unwrap().unwrap();
    assert_eq!(adj.unit, vec![id]);
    assert_eq!(adj.counit, vec![id]);
}

#[test]
fn codomain_left_transport_is_postcomposition() {
    let (p, cls) = cod_monos();
    let (b, e) = (p.base(), p.total());
    let member = |x: Obj| b.find_arr(e.obj_name(x)).unwrap();
    let object = |m: Arr| e.find_obj(b.arr_name(m)).unwrap();
    for u in cls.members() {
        let adj = adjoint_along(&p, u, Direction::Left, Budget::default()).unwrap().unwrap();
        for (k, &alpha) in p.fibre_objs(b.dom(u)).iter().enumerate() {
            let composite = b.comp(u, member(alpha));
            assert!(p.vertical_iso(adj.obj[k], object(composite)).is_some());
        }
        let (src, tgt) = (p.fibre(b.dom(u)).unwrap(), p.fibre(b.cod(u)).unwrap());
        let f = adj.transport_functor(&p).unwrap();
        assert!(check_functor(&src.cat, &tgt.cat, &f).unwrap().is_empty());
    }
}

#[test]
fn identity_fibration_has_both_structures() {
    for p in [identity_fibration(&interval()), identity_fibration(&finset_skeleton(1).unwrap())] {
        let cls = DisplayClass::all_arrows(p.base().clone(), Budget::default()).unwrap();
        let ctx = FibCtx::new(&p, Budget::default());
        for d in [Direction::Left, Direction::Right] {
            let r = verify_fibred_structure(&ctx, &cls, d).unwrap();
            assert!(r.holds);
            assert_eq!(r.squares_checked, cls.members().map(|v| p.base().arrows_into(p.base().cod(v)).len()).sum());
        }
        for u in p.base().arrs() {
            let adj = adjoint_along(&p, u, Direction::Right, Budget::default()).unwrap().unwrap();
            assert_eq!(adj.obj, vec![p.base().cod(u)]);
        }
    }
}

#[test]
fn codomain_beck_chevalley_squares_pass() {
    let (p, cls) = cod_monos();
    let ctx = FibCtx::new(&p, Budget::default());
    let b = p.base();
    let mut n = 0;
    for v in cls.members() {
        for sq in beck_chevalley(&ctx, &cls, v, Direction::Left).unwrap() {
            assert!(sq.verdict);
            if b.is_identity(sq.square.f) {
                assert!(sq.mate.iter().all(|&m| p.inverse(m).is_some()));
            }
            n += 1;
        }
    }
    let r = verify_fibred_structure(&ctx, &cls, Direction::Left).unwrap();
    assert!(r.holds);
    assert_eq!(r.squares_checked, n);
}

#[test]
fn skewed_transport_breaks_beck_chevalley() {
    let (p, cls) = skewed();
    let b = p.base();
    let bang = b.find_arr("f01").unwrap();
    let adj = adjoint_along(&p, bang, Direction::Left, Budget::default()).unwrap().unwrap();
    let s = p.total().find_obj("s").unwrap();
    assert_eq!(adj.obj, vec![s, s]);
    let ctx = FibCtx::new(&p, Budget::default());
    let r = verify_fibred_structure(&ctx, &cls, Direction::Left).unwrap();
    assert!(!r.holds && r.missing_adjoints.is_empty());
    assert_eq!(r.failing_squares.len(), 1);
    let sq = r.failing_squares[0].square;
    assert_eq!((sq.v, sq.f), (bang, bang));
}

#[test]
fn structure_needs_pullback_closure() {
    let c = finset_skeleton(2).unwrap();
    let p = identity_fibration(&c);
    let cls = DisplayClass::all_arrows(c, Budget::default()).unwrap();
    let ctx = FibCtx::new(&p, Budget::default());
    assert!(verify_fibred_structure(&ctx, &cls, Direction::Left).is_err());
}

#[test]
fn right_adjoints_match_left_adjoints_of_the_opposite() {
    for name in SMALL {
        let e = entry(name);
        let p = &e.fibration;
        let op = fibrewise_opposite(p).unwrap();
        for u in p.base().arrs() {
            let r = adjoint_along(p, u, Direction::Right, Budget::default()).unwrap();
            let l = adjoint_along(&op.fib, u, Direction::Left, Budget::default()).unwrap();
            assert_eq!(r.is_some(), l.is_some(), "{name} along {}", p.base().arr_name(u));
            if let (Some(r), Some(l)) = (r, l) {
                for (x, y) in r.obj.iter().zip(&l.obj) {
                    assert!(p.vertical_iso(*x, *y).is_some(), "{name}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transport_gives_hom_set_bijections(which in 0..SMALL.len(), ui in any::<prop::sample::Index>(), left in any::<bool>()) {
        let e = entry(SMALL[which]);
        let p = &e.fibration;
        let (b, t) = (p.base(), p.total());
        let members: Vec<Arr> = e.display.members().collect();
        let u = members[ui.index(members.len())];
        let ctx = FibCtx::new(p, Budget::default());
        for &alpha in p.fibre_objs(b.dom(u)) {
            let res = if left { ctx.coprod(u, alpha).unwrap() } else { ctx.prod(u, alpha).unwrap() };
            let Some((gamma, unit)) = res else { continue };
            for &beta in p.fibre_objs(b.cod(u)) {
                let ub = p.reindex_obj(u, beta);
                let mut image: Vec<Arr> = if left {
                    p.vhom(gamma, beta).map(|m| t.comp(p.reindex_arr(u, m), unit)).collect()
                } else {
                    p.vhom(beta, gamma).map(|m| t.comp(unit, p.reindex_arr(u, m))).collect()
                };
                let mut target: Vec<Arr> = if left { p.vhom(alpha, ub).collect() } else { p.vhom(ub, alpha).collect() };
                image.sort_unstable();
                let before = image.len();
                image.dedup();
                prop_assert_eq!(before, image.len());
                target.sort_unstable();
                prop_assert_eq!(image, target);
            }
        }
    }
}
