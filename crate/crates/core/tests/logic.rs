use fibrak_core::corpus::{corpus_entry, corpus_names, CorpusEntry};
use fibrak_core::display::dependent_product;
use fibrak_core::fibration::fibrewise_opposite;
use fibrak_core::kernel::{find_iso, is_iso, Arr, Obj};
use fibrak_core::logic::{
    classify, duality_mismatches, goedel_dialectica_roundtrip, hilbert_check, is_goedel, is_skolem, prenex,
    prenex_all, skolem_bijection, skolem_sides, skolemize, Logic,
};
use fibrak_core::structure::Direction;
use fibrak_core::{Budget, Error};
use proptest::prelude::*;

fn entry(name: &str) -> CorpusEntry {
    corpus_entry(name, Budget::default()).unwrap()
}

fn obj(e: &CorpusEntry, name: &str) -> Obj {
    e.fibration.total().find_obj(name).unwrap_or_else(|| panic!("no object {name}"))
}

fn arr(e: &CorpusEntry, name: &str) -> Arr {
    e.fibration.base().find_arr(name).unwrap_or_else(|| panic!("no arrow {name}"))
}

#[test]
fn splitting_families_are_families_of_singletons() {
    let e = entry("family-finset2");
    let lg = Logic::new(&e.fibration, &e.display, Budget::default());
    let splits = |n: &str| lg.is_splitting(obj(&e, n), Direction::Left).unwrap();
    assert!(splits("()") && splits("(1)") && splits("(1,1)"));
    assert!(!splits("(0)") && !splits("(2)") && !splits("(0,1)"));
    // Reindexing a family of singletons gives a family of singletons.
    assert!(lg.is_qfree(obj(&e, "(1)"), Direction::Left).unwrap());
    assert!(lg.is_qfree(obj(&e, "(1,1)"), Direction::Left).unwrap());
    let cover = lg.cover(obj(&e, "(2)"), Direction::Left).unwrap().unwrap();
    assert_eq!(cover.f, arr(&e, "f21_00"));
    assert_eq!(e.fibration.total().obj_name(cover.beta), "(1,1)");
    assert!(e.fibration.inverse(cover.iso).is_some());
}

#[test]
fn two_sections_break_uniqueness() {
    let e = entry("finset-identity-allmaps");
    let lg = Logic::new(&e.fibration, &e.display, Budget::default());
    let bang = arr(&e, "f21_00");
    assert_eq!(lg.sections(bang), vec![arr(&e, "f12_0"), arr(&e, "f12_1")]);
    let one = obj(&e, "1");
    let r = lg.splitting(one, Direction::Left).unwrap();
    assert!(!r.holds);
    assert!(r.failure.is_some());
    // Over the identity of 1 both sections factor, so the pair is not unique.
    let id1 = e.fibration.total().id(one);
    let pairs = lg.factorizations(bang, obj(&e, "2"), id1, Direction::Left).unwrap();
    assert_eq!(pairs.iter().map(|&(g, _)| g).collect::<Vec<_>>(), lg.sections(bang));
    // Nothing non-identity lands in 0.
    assert!(lg.is_splitting(obj(&e, "0"), Direction::Left).unwrap());
}

#[test]
fn sigma_units_are_qfree() {
    for name in ["sigma-identity-interval", "sigma-identity-finset2-monos", "sigma-family1-finset2"] {
        let e = entry(name);
        let lg = Logic::new(&e.fibration, &e.display, Budget::default());
        let t = e.fibration.total();
        for x in t.objs() {
            // Sums along isos are units up to iso; anything else is a genuine sum.
            let g = e.fibration.base().find_arr(t.obj_name(x)[1..].split(',').next().unwrap()).unwrap();
            let unit = is_iso(e.fibration.base(), g);
            assert_eq!(lg.is_qfree(x, Direction::Left).unwrap(), unit, "{name} {}", t.obj_name(x));
        }
        let sub = lg.qfree_subfibration(Direction::Left).unwrap();
        assert_eq!(sub.fib.total().n_objs(), t.objs().filter(|&x| lg.is_qfree(x, Direction::Left).unwrap()).count());
        assert!(lg.enough_qfree(Direction::Left).unwrap().holds);
    }
}

#[test]
fn hilbert_examples() {
    for name in ["identity-terminal", "identity-interval-ids", "sub-finset2-isos"] {
        let e = entry(name);
        let lg = Logic::new(&e.fibration, &e.display, Budget::default());
        for d in [Direction::Left, Direction::Right] {
            let r = hilbert_check(&lg, d).unwrap();
            assert!(r.holds && r.corollary_holds, "{name} {d:?}");
            let b = e.fibration.base();
            for en in &r.table.entries {
                assert_eq!(b.comp(en.f, en.section), b.id(b.cod(en.f)), "{name}");
                assert!(e.fibration.inverse(en.bar).is_some(), "{name}");
            }
        }
    }
    let e = entry("family-finset2-monos");
    let lg = Logic::new(&e.fibration, &e.display, Budget::default());
    let r = hilbert_check(&lg, Direction::Left).unwrap();
    assert!(!r.holds);
    assert!(r.failure.is_some());
    let e = entry("finset-identity-allmaps");
    let lg = Logic::new(&e.fibration, &e.display, Budget::default());
    let r = hilbert_check(&lg, Direction::Left).unwrap();
    assert!(!r.holds);
    assert_eq!(e.fibration.total().obj_name(r.failure.unwrap().alpha), "1");
}

#[test]
fn skolem_clauses() {
    let e = entry("finset-identity-allmaps");
    let lg = Logic::new(&e.fibration, &e.display, Budget::default());
    let r = is_skolem(&lg).unwrap();
    assert!(!r.holds && !r.dependent_products);

    let e = entry("identity-interval");
    let lg = Logic::new(&e.fibration, &e.display, Budget::default());
    let r = is_skolem(&lg).unwrap();
    assert!(r.dependent_products && r.fibred_coproducts && r.fibred_products && r.enough_qfree);
    assert!(!r.closure && !r.holds);

    for name in corpus_names().filter(|n| n.starts_with("dial-")) {
        let e = entry(name);
        let lg = Logic::new(&e.fibration, &e.display, Budget::default());
        assert!(is_skolem(&lg).unwrap().holds, "{name}");
    }
}

#[test]
fn skolemization_along_identities() {
    let e = entry("dial-identity-finset2-monos");
    let (p, cls) = (&e.fibration, &e.display);
    let lg = Logic::new(p, cls, Budget::default());
    let b = p.base();
    for f in cls.members() {
        let g = b.id(b.cod(f));
        for &beta in p.fibre_objs(b.dom(f)) {
            let w = skolemize(&lg, g, f, beta).unwrap();
            assert!(w.hom_counts_agree);
            assert!(p.inverse(w.iso).is_some());
            assert!(find_iso(b, b.dom(w.diagram.h), b.dom(f)).is_some());
            let (lhs, rhs) = skolem_sides(&lg, &w.diagram, beta).unwrap();
            assert_eq!((lhs, rhs), (w.lhs, w.rhs));
            for &sigma in p.fibre_objs(b.cod(f)) {
                if !lg.is_qfree(sigma, Direction::Left).unwrap() {
                    continue;
                }
                let hb = skolem_bijection(&lg, sigma, beta, &w.diagram).unwrap();
                assert!(hb.inverse);
                assert_eq!(hb.phi.len(), hb.psi.len());
                for &(m, n) in &hb.phi {
                    assert!(hb.psi.contains(&(n, m)));
                }
            }
        }
    }
}

#[test]
fn skolemization_over_a_nontrivial_product() {
    let e = entry("dial-of-identity");
    let (p, cls) = (&e.fibration, &e.display);
    let lg = Logic::new(p, cls, Budget::default());
    let u = arr(&e, "u");
    let b = p.base();
    let ida = b.id(b.dom(u));
    let d = dependent_product(cls, ida, u, Budget::default()).unwrap().unwrap();
    for &beta in p.fibre_objs(b.dom(u)) {
        let w = skolemize(&lg, u, ida, beta).unwrap();
        assert_eq!(w.diagram, d);
        assert!(w.hom_counts_agree && p.inverse(w.iso).is_some());
    }
}

#[test]
fn goedel_examples() {
    for name in ["identity-terminal", "identity-interval-ids", "dial-of-identity", "dial-family1-finset2"] {
        let e = entry(name);
        let lg = Logic::new(&e.fibration, &e.display, Budget::default());
        assert!(is_goedel(&lg).unwrap().holds, "{name}");
    }
    // Skolem without Gödel.
    let e = entry("sigma-family1-finset2");
    let lg = Logic::new(&e.fibration, &e.display, Budget::default());
    let r = is_goedel(&lg).unwrap();
    assert!(r.skolem.holds && !r.holds);
    assert!(r.counterexample.is_some());
}

#[test]
fn prenex_forms() {
    let e = entry("dial-of-identity");
    let p = &e.fibration;
    let lg = Logic::new(p, &e.display, Budget::default());
    let t = p.total();
    let qf = obj(&e, "(id_a,(id_a,a))");
    let pf = prenex(&lg, qf).unwrap();
    let b = p.base();
    assert!(b.is_identity(pf.f) && b.is_identity(pf.g));
    assert_eq!(pf.iso, t.id(qf));
    let all = prenex_all(&lg).unwrap();
    assert_eq!(all.len(), t.n_objs());
    for pf in &all {
        let inv = p.inverse(pf.iso).unwrap();
        assert_eq!(t.comp(inv, pf.iso), t.id(t.dom(pf.iso)));
        assert_eq!(t.dom(pf.iso), pf.alpha);
    }
    // The genuine existential is a sum along `u`.
    let sum = all.iter().find(|f| f.alpha == obj(&e, "(u,(id_a,a))")).unwrap();
    assert_eq!(sum.f, arr(&e, "u"));

    let e = entry("sigma-family1-finset2");
    let lg = Logic::new(&e.fibration, &e.display, Budget::default());
    assert!(matches!(prenex_all(&lg), Err(Error::PreconditionFailed(_))));
}

#[test]
fn roundtrips() {
    for (name, objects) in [("identity-terminal", 1), ("dial-of-identity", 4), ("dial-family1-finset2", 6)] {
        let e = entry(name);
        let lg = Logic::new(&e.fibration, &e.display, Budget::default());
        let r = goedel_dialectica_roundtrip(&lg).unwrap();
        assert!(r.holds(), "{name}");
        assert_eq!(r.dial_objects, objects, "{name}");
        assert!(r.dial_is_goedel && r.functor_ok);
    }
    let e = entry("identity-terminal");
    let lg = Logic::new(&e.fibration, &e.display, Budget::default());
    let r = goedel_dialectica_roundtrip(&lg).unwrap();
    assert_eq!((r.qf_objects, r.core_objects), (1, 1));
}

#[test]
fn classification_matches_expected_verdicts() {
    for name in corpus_names() {
        let e = entry(name);
        let lg = Logic::new(&e.fibration, &e.display, Budget::default());
        let r = classify(&lg).unwrap();
        let got = [r.is_skolem(), r.is_goedel(), r.is_hilbert_epsilon(), r.is_hilbert_tau()];
        let want: Vec<bool> = e.expected.iter().map(|&(_, v)| v).collect();
        assert_eq!(got.to_vec(), want, "{name}");
        // Flags form a chain: ε and τ give Gödel, Gödel gives Skolem.
        assert!(!r.is_goedel() || r.is_skolem());
    }
}

const SMALL: [&str; 9] = [
    "identity-terminal",
    "identity-interval",
    "identity-interval-ids",
    "sub-finset2",
    "cod-interval",
    "cod-finset2-monos",
    "sigma-identity-interval",
    "pi-identity-interval",
    "dial-of-identity",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn qfree_is_dual_to_the_opposite(which in 0..SMALL.len()) {
        let e = entry(SMALL[which]);
        let op = fibrewise_opposite(&e.fibration).unwrap();
        let lg = Logic::new(&e.fibration, &e.display, Budget::default());
        let lo = Logic::new(&op.fib, &e.display, Budget::default());
        prop_assert!(duality_mismatches(&lg, &lo).unwrap().is_empty());
        for x in e.fibration.total().objs() {
            prop_assert_eq!(lg.is_qfree(x, Direction::Right).unwrap(), lo.is_qfree(x, Direction::Left).unwrap());
        }
    }

    #[test]
    fn skolem_closure_clause(which in 0..SMALL.len(), fi in any::<prop::sample::Index>()) {
        let e = entry(SMALL[which]);
        let lg = Logic::new(&e.fibration, &e.display, Budget::default());
        if is_skolem(&lg).unwrap().holds {
            let members: Vec<Arr> = e.display.members().collect();
            let f = members[fi.index(members.len())];
            for &alpha in e.fibration.fibre_objs(e.fibration.base().dom(f)) {
                if lg.is_qfree(alpha, Direction::Left).unwrap() {
                    let (pi, _) = lg.ctx.prod_req(f, alpha).unwrap();
                    prop_assert!(lg.is_qfree(pi, Direction::Left).unwrap());
                }
            }
        }
    }

    #[test]
    fn splitting_witnesses_factor(which in 0..SMALL.len()) {
        let e = entry(SMALL[which]);
        let p = &e.fibration;
        let lg = Logic::new(p, &e.display, Budget::default());
        let (b, t) = (p.base(), p.total());
        for x in t.objs() {
            let r = lg.splitting(x, Direction::Left).unwrap();
            if !r.holds {
                continue;
            }
            for w in &r.witnesses {
                prop_assert_eq!(b.comp(w.u, w.section), b.id(b.cod(w.u)));
                let (_, eta) = lg.ctx.coprod_req(w.u, w.beta).unwrap();
                prop_assert_eq!(t.comp(p.reindex_arr(w.section, eta), w.hbar), w.h);
            }
        }
    }
}
