use fibrak_core::corpus::{
    codomain_fibration, corpus_entry, corpus_names, family_fibration, finset_images, finset_skeleton,
    identity_fibration, interval, terminal,
};
use fibrak_core::display::DisplayClass;
use fibrak_core::fibration::{
    check_fibred_functor, double_opposite_iso, fibrewise_opposite, is_fibred_iso, verbatim_classes,
    verify_fibration, ClovenFibration, FibredFunctor, Prefibration,
};
use fibrak_core::kernel::{check_functor, is_mono, opposite, Arr, FinCat, FinFunctor, Obj, Violation};
use fibrak_core::{Budget, Error};
use proptest::prelude::*;

fn monos(c: &FinCat) -> DisplayClass {
    DisplayClass::new(c.clone(), c.arrs().filter(|&a| is_mono(c, a)).collect::<Vec<_>>(), Budget::default()).unwrap()
}

fn cod_finset2_monos() -> (ClovenFibration, DisplayClass) {
    let cls = monos(&finset_skeleton(2).unwrap());
    (codomain_fibration(&cls).unwrap(), cls)
}

/// The base square `(x, y)` of an arrow of a codomain fibration, read from its name.
fn square(p: &ClovenFibration, a: Arr) -> (Arr, Arr) {
    let (e, b) = (p.total(), p.base());
    if e.is_identity(a) {
        let m = b.find_arr(e.obj_name(e.dom(a))).unwrap();
        return (b.id(b.dom(m)), b.id(b.cod(m)));
    }
    let name = e.arr_name(a).split('#').next().unwrap();
    let (x, y) = name.trim_start_matches('(').trim_end_matches(')').split_once(',').unwrap();
    (b.find_arr(x).unwrap(), b.find_arr(y).unwrap())
}

/// Brute-force pullback test for the square `g ∘ x = y ∘ f`.
fn oracle_pullback(c: &FinCat, f: Arr, g: Arr, x: Arr, y: Arr) -> bool {
    c.objs().all(|w| {
        c.hom(w, c.dom(g)).iter().all(|&a| {
            c.hom(w, c.dom(y)).iter().all(|&bb| {
                c.comp(g, a) != c.comp(y, bb)
                    || c.hom(w, c.dom(f)).iter().filter(|&&m| c.comp(x, m) == a && c.comp(f, m) == bb).count() == 1
            })
        })
    })
}

fn all_entries() -> Vec<(ClovenFibration, DisplayClass)> {
    corpus_names()
        .map(|n| {
            let e = corpus_entry(n, Budget::default()).unwrap();
            (e.fibration, e.display)
        })
        .collect()
}

#[test]
fn identities_are_cartesian() {
    for (p, _) in all_entries() {
        for x in p.total().objs() {
            assert!(p.is_cartesian(p.total().id(x)));
        }
    }
}

#[test]
fn codomain_cartesian_arrows_are_pullback_squares() {
    let (p, _) = cod_finset2_monos();
    let (e, b) = (p.total(), p.base());
    let (mut yes, mut no) = (0, 0);
    for a in e.arrs() {
        let f = b.find_arr(e.obj_name(e.dom(a))).unwrap();
        let g = b.find_arr(e.obj_name(e.cod(a))).unwrap();
        let (x, y) = square(&p, a);
        assert_eq!(b.comp(g, x), b.comp(y, f));
        let pb = oracle_pullback(b, f, g, x, y);
        assert_eq!(p.is_cartesian(a), pb, "arrow {}", e.arr_name(a));
        if pb {
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes > 0 && no > 0);
}

#[test]
fn lift_into_codomain_object_is_the_pullback_square() {
    let (p, cls) = cod_finset2_monos();
    let (e, b) = (p.total(), p.base());
    for y in e.objs() {
        let g = b.find_arr(e.obj_name(y)).unwrap();
        for &u in b.arrows_into(b.cod(g)) {
            let l = p.lift(u, y);
            let cone = cls.pullback(g, u).unwrap();
            assert_eq!(square(&p, l), (cone.p1, u));
            assert_eq!(e.obj_name(e.dom(l)), b.arr_name(cone.p2));
        }
    }
}

/// One object over `b` of the interval: no lift of `u: a → b` exists.
fn non_fibration() -> Prefibration {
    let base = interval();
    let proj = FinFunctor { obj: vec![Obj(1)], arr: vec![Arr(1)] };
    Prefibration::new(terminal(), base, proj)
}

#[test]
fn missing_lift_is_not_a_fibration() {
    let p = non_fibration();
    let u = p.base.find_arr("u").unwrap();
    assert_eq!(p.cartesian_lift(u, Obj(0)), Err(Error::NotAFibration { u, y: Obj(0) }));
    let r = verify_fibration(&p).unwrap();
    assert_eq!(r.violations, vec![Violation::MissingLift { u, y: Obj(0) }]);
    assert!(matches!(p.into_cloven(), Err(Error::NotAFibration { .. })));
}

#[test]
fn corpus_fibrations_verify() {
    for (p, _) in all_entries() {
        assert!(verify_fibration(&p.to_prefibration()).unwrap().is_empty());
    }
}

#[test]
fn identity_lifts_are_identities() {
    for (p, _) in all_entries() {
        for y in p.total().objs() {
            assert_eq!(p.lift(p.base().id(p.p_obj(y)), y), p.total().id(y));
        }
    }
}

#[test]
fn reindex_along_identity_is_identity() {
    for (p, _) in all_entries() {
        for i in p.base().objs() {
            let (src, _, f) = p.reindex(p.base().id(i)).unwrap();
            assert_eq!(f, FinFunctor::identity(&src.cat));
        }
    }
}

#[test]
fn reindex_functors_are_functors() {
    for (p, _) in all_entries() {
        for u in p.base().arrs() {
            let (src, tgt, f) = p.reindex(u).unwrap();
            assert!(check_functor(&src.cat, &tgt.cat, &f).unwrap().is_empty());
        }
    }
}

#[test]
fn codomain_reindex_of_element() {
    let (p, _) = cod_finset2_monos();
    let (e, b) = (p.total(), p.base());
    let a = b.find_arr("f12_0").unwrap();
    let top = e.find_obj("id_2").unwrap();
    assert_eq!(e.obj_name(p.reindex_obj(a, top)), "id_1");
}

#[test]
fn family_reindex_is_precomposition() {
    let vals = finset_skeleton(2).unwrap();
    let p = family_fibration(2, &vals).unwrap();
    let (e, b) = (p.total(), p.base());
    for u in b.arrs() {
        for &y in p.fibre_objs(b.cod(u)) {
            let ys: Vec<&str> = e.obj_name(y).trim_matches(|c| c == '(' || c == ')').split(',').collect();
            let want: Vec<&str> = finset_images(b, u).iter().map(|&j| ys[j]).collect();
            assert_eq!(e.obj_name(p.reindex_obj(u, y)), format!("({})", want.join(",")));
        }
    }
}

#[test]
fn fibres() {
    let f2 = finset_skeleton(2).unwrap();
    let id = identity_fibration(&f2);
    for i in f2.objs() {
        let fb = id.fibre(i).unwrap();
        assert_eq!((fb.cat.n_objs(), fb.cat.n_arrs()), (1, 1));
    }
    // Fibres of the codomain fibration are member slices.
    let (p, cls) = cod_finset2_monos();
    for i in f2.objs() {
        let fb = p.fibre(i).unwrap();
        let members: Vec<Arr> = cls.members_into(i).collect();
        let triangles: usize = members
            .iter()
            .flat_map(|&f| members.iter().map(move |&g| (f, g)))
            .map(|(f, g)| f2.hom(f2.dom(f), f2.dom(g)).iter().filter(|&&x| f2.comp(g, x) == f).count())
            .sum();
        assert_eq!((fb.cat.n_objs(), fb.cat.n_arrs()), (members.len(), triangles));
    }
}

#[test]
fn interval_slice_sizes() {
    let i = interval();
    let p = codomain_fibration(&DisplayClass::all_arrows(i.clone(), Budget::default()).unwrap()).unwrap();
    let sizes: Vec<usize> = i.objs().map(|x| p.fibre_objs(x).len()).collect();
    assert_eq!(sizes, vec![1, 2]);
}

#[test]
fn opposite_of_identity_fibration() {
    let f2 = finset_skeleton(2).unwrap();
    let p = identity_fibration(&f2);
    let op = fibrewise_opposite(&p).unwrap();
    let g = FibredFunctor { total_map: FinFunctor::identity(op.fib.total()), base_map: FinFunctor::identity(&f2) };
    assert!(is_fibred_iso(&op.fib, &p, &g).unwrap());
}

#[test]
fn opposite_fibres_are_opposite_categories() {
    for (p, _) in all_entries() {
        let op = fibrewise_opposite(&p).unwrap();
        assert!(verify_fibration(&op.fib.to_prefibration()).unwrap().is_empty());
        for i in p.base().objs() {
            let (a, b) = (opposite(&p.fibre(i).unwrap().cat), op.fib.fibre(i).unwrap().cat);
            assert_eq!((a.n_objs(), a.n_arrs()), (b.n_objs(), b.n_arrs()));
            for &x in p.fibre_objs(i) {
                for &y in p.fibre_objs(i) {
                    assert_eq!(p.vhom(x, y).count(), op.fib.vhom(y, x).count());
                }
            }
        }
    }
}

#[test]
fn double_opposite_is_fibred_iso() {
    for (p, _) in all_entries() {
        let op = fibrewise_opposite(&p).unwrap();
        let opop = fibrewise_opposite(&op.fib).unwrap();
        let back = double_opposite_iso(&p, &op, &opop).unwrap();
        let g = FibredFunctor { total_map: back, base_map: FinFunctor::identity(p.base()) };
        assert!(check_fibred_functor(&opop.fib, &p, &g).unwrap().is_empty());
        assert!(is_fibred_iso(&opop.fib, &p, &g).unwrap());
    }
}

#[test]
fn verbatim_span_relation_gives_a_well_defined_composition() {
    for (p, _) in all_entries() {
        let op = fibrewise_opposite(&p).unwrap();
        let classes = verbatim_classes(&p, &op).unwrap();
        for ((c, v), a) in classes {
            assert_eq!(op.arrow_of_pair(&p, c, v), Some(a));
        }
    }
}

#[test]
fn lenses_fibre_is_opposite_slice() {
    let (p, _) = cod_finset2_monos();
    let op = fibrewise_opposite(&p).unwrap();
    for i in p.base().objs() {
        for &x in p.fibre_objs(i) {
            for &y in p.fibre_objs(i) {
                assert_eq!(op.fib.vhom(x, y).count(), p.vhom(y, x).count());
            }
        }
    }
}

#[test]
fn opposite_keeps_lifts() {
    for (p, _) in all_entries() {
        let op = fibrewise_opposite(&p).unwrap();
        for u in p.base().arrs() {
            for &y in op.fib.fibre_objs(p.base().cod(u)) {
                assert!(op.fib.is_cartesian(op.fib.lift(u, y)));
            }
        }
    }
}

fn entry_strategy() -> impl Strategy<Value = usize> {
    0..corpus_names().count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lifts_are_unique_up_to_unique_vertical_iso(k in entry_strategy(), pick in any::<prop::sample::Index>()) {
        let e = corpus_entry(corpus_names().nth(k).unwrap(), Budget::default()).unwrap();
        let p = &e.fibration;
        let pairs: Vec<(Arr, Obj)> = p.total().objs().flat_map(|y| p.base().arrows_into(p.p_obj(y)).iter().map(move |&u| (u, y))).collect();
        let (u, y) = pairs[pick.index(pairs.len())];
        let lifts: Vec<Arr> = p.total().arrows_into(y).iter().copied().filter(|&c| p.p_arr(c) == u && p.is_cartesian(c)).collect();
        prop_assert!(lifts.contains(&p.lift(u, y)));
        for &c1 in &lifts {
            for &c2 in &lifts {
                let isos: Vec<Arr> = p.vhom(p.total().dom(c1), p.total().dom(c2))
                    .filter(|&h| p.total().comp(c2, h) == c1)
                    .collect();
                prop_assert_eq!(isos.len(), 1);
                prop_assert!(p.inverse(isos[0]).is_some());
            }
        }
    }

    #[test]
    fn reindexing_is_pseudofunctorial(k in entry_strategy(), pick in any::<prop::sample::Index>()) {
        let e = corpus_entry(corpus_names().nth(k).unwrap(), Budget::default()).unwrap();
        let (p, b, t) = (&e.fibration, e.fibration.base(), e.fibration.total());
        let triples: Vec<(Arr, Arr, Obj)> = b.composable_pairs()
            .flat_map(|(v, u)| p.fibre_objs(b.cod(v)).iter().map(move |&x| (v, u, x)))
            .collect();
        let (v, u, x) = triples[pick.index(triples.len())];
        let c = p.comparison(v, u, x);
        let ci = p.comparison_inv(v, u, x);
        prop_assert!(p.is_vertical(c));
        prop_assert_eq!(t.dom(c), p.reindex_obj(u, p.reindex_obj(v, x)));
        prop_assert_eq!(t.cod(c), p.reindex_obj(b.comp(v, u), x));
        prop_assert_eq!(t.comp(c, ci), t.id(t.cod(c)));
        prop_assert_eq!(t.comp(ci, c), t.id(t.dom(c)));
        // Naturality in vertical arrows into x.
        for &y in p.fibre_objs(b.cod(v)) {
            for phi in p.vhom(y, x) {
                let lhs = t.comp(p.reindex_arr(b.comp(v, u), phi), p.comparison(v, u, y));
                let rhs = t.comp(c, p.reindex_arr(u, p.reindex_arr(v, phi)));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
