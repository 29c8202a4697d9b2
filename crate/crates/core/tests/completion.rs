use fibrak_core::completion::{
    dialectica, pi_completion, pi_direct, pi_direct_iso, sigma_completion, sigma_pullback_presentation, sigma_unit, SigmaObject,
};
use fibrak_core::corpus::{
    codomain_fibration, corpus_entry, family_fibration, finset_images, finset_skeleton, identity_fibration, interval,
    polynomial_fibre, subobject_fibration, terminal, Polynomial,
};
use fibrak_core::display::DisplayClass;
use fibrak_core::fibration::{
    check_fibred_equivalence, check_fibred_functor, fibrewise_opposite, is_fibred_iso, ClovenFibration, FibredFunctor,
    Prefibration,
};
use fibrak_core::kernel::{is_iso, is_mono, Arr, FinCat, FinFunctor, Obj};
use fibrak_core::structure::{Direction, FibCtx};
use fibrak_core::Budget;

fn all(c: &FinCat) -> DisplayClass {
    DisplayClass::all_arrows(c.clone(), Budget::default()).unwrap()
}

fn monos(c: &FinCat) -> DisplayClass {
    let ms: Vec<Arr> = c.arrs().filter(|&a| is_mono(c, a)).collect();
    DisplayClass::new(c.clone(), ms, Budget::default()).unwrap()
}

/// Extends an object map between fibrations over the same base to arrows,
/// sending each arrow to the unique arrow between the images over the same
/// base arrow. Panics unless that arrow is unique.
fn transfer(src: &ClovenFibration, tgt: &ClovenFibration, obj: Vec<Obj>) -> FibredFunctor {
    let (s, t) = (src.total(), tgt.total());
    let arr = s
        .arrs()
        .map(|a| {
            let over: Vec<Arr> = t
                .hom(obj[s.dom(a).ix()], obj[s.cod(a).ix()])
                .iter()
                .copied()
                .filter(|&b| tgt.p_arr(b) == src.p_arr(a))
                .collect();
            assert_eq!(over.len(), 1, "arrow `{}` has {} candidates", s.arr_name(a), over.len());
            over[0]
        })
        .collect();
    FibredFunctor::over_identity(src, FinFunctor { obj, arr })
}

fn fibre_sizes(p: &ClovenFibration) -> Vec<usize> {
    p.base().objs().map(|i| p.fibre_objs(i).len()).collect()
}

#[test]
fn sigma_of_identity_is_the_codomain_fibration() {
    let i = interval();
    let cls = all(&i);
    let sc = sigma_completion(&identity_fibration(&i), &cls).unwrap();
    assert_eq!(fibre_sizes(&sc.fib), vec![1, 2]);
    let cod = codomain_fibration(&cls).unwrap();
    let obj = sc.objects.iter().map(|s| cod.total().find_obj(i.arr_name(s.g)).unwrap()).collect();
    let g = transfer(&sc.fib, &cod, obj);
    assert!(is_fibred_iso(&sc.fib, &cod, &g).unwrap());
}

#[test]
fn sigma_of_monos_is_equivalent_to_subobjects() {
    let c = finset_skeleton(2).unwrap();
    let cls = monos(&c);
    let sc = sigma_completion(&identity_fibration(&c), &cls).unwrap();
    let sub = subobject_fibration(&c, Budget::default()).unwrap();
    assert_eq!(fibre_sizes(&sc.fib), vec![1, 2, 5]);
    assert_eq!(fibre_sizes(&sub), vec![1, 2, 4]);
    let member = |x: Obj| c.find_arr(sub.total().obj_name(x)).unwrap();
    // Each mono goes to the representative of its subobject.
    let obj = sc
        .objects
        .iter()
        .map(|s| {
            *sub.fibre_objs(s.i)
                .iter()
                .find(|&&x| {
                    let h = member(x);
                    c.hom(c.dom(s.g), c.dom(h)).iter().any(|&k| is_iso(&c, k) && c.comp(h, k) == s.g)
                })
                .unwrap()
        })
        .collect();
    let g = transfer(&sc.fib, &sub, obj);
    assert!(check_fibred_functor(&sc.fib, &sub, &g).unwrap().is_empty());
    assert!(check_fibred_equivalence(&sc.fib, &sub, &g).holds());
    assert!(!is_fibred_iso(&sc.fib, &sub, &g).unwrap());
}

#[test]
fn sigma_fibre_over_terminal_is_the_sum_completion() {
    let values = finset_skeleton(2).unwrap();
    let p = family_fibration(1, &values).unwrap();
    let b = p.base().clone();
    let cls = all(&b);
    let sc = sigma_completion(&p, &cls).unwrap();
    let one = b.find_obj("1").unwrap();
    let expected: usize = cls.members_into(one).map(|m| p.fibre_objs(b.dom(m)).len()).sum();
    assert_eq!(sc.fib.fibre_objs(one).len(), expected);
    assert_eq!(expected, 3 + 1);
}

#[test]
fn pullback_presentation_agrees() {
    for name in ["identity-interval", "cod-interval", "sub-finset2", "family-finset2-monos", "identity-z2-group"] {
        let e = corpus_entry(name, Budget::default()).unwrap();
        let sc = sigma_completion(&e.fibration, &e.display).unwrap();
        let (fib, g) = sigma_pullback_presentation(&e.fibration, &e.display, &sc).unwrap();
        assert!(is_fibred_iso(&sc.fib, &fib, &g).unwrap(), "{name}");
    }
}

#[test]
fn pi_of_identity_is_opposite_codomain() {
    let i = interval();
    let cls = all(&i);
    let p = identity_fibration(&i);
    let pi = pi_completion(&p, &cls).unwrap();
    assert_eq!(fibre_sizes(pi.fib()), vec![1, 2]);
    let cod_op = fibrewise_opposite(&codomain_fibration(&cls).unwrap()).unwrap().fib;
    let obj = (0..pi.fib().total().n_objs())
        .map(|x| cod_op.total().find_obj(i.arr_name(pi.object(Obj(x as u32)).g)).unwrap())
        .collect();
    let g = transfer(pi.fib(), &cod_op, obj);
    assert!(is_fibred_iso(pi.fib(), &cod_op, &g).unwrap());

    let direct = pi_direct(&p, &cls).unwrap();
    let iso = pi_direct_iso(&p, &cls, &direct, &pi).unwrap();
    assert!(is_fibred_iso(&direct.fib, pi.fib(), &iso).unwrap());
}

/// The interval as the single fibre over the terminal base.
fn over_terminal() -> ClovenFibration {
    let total = interval();
    let base = terminal();
    let proj = FinFunctor { obj: vec![Obj(0); total.n_objs()], arr: vec![Arr(0); total.n_arrs()] };
    Prefibration::new(total, base, proj).into_cloven().unwrap()
}

#[test]
fn dialectica_along_identities_is_trivial() {
    let p = over_terminal();
    let cls = DisplayClass::identities(terminal(), Budget::default()).unwrap();
    let d = dialectica(&p, &cls).unwrap();
    let obj = (0..d.fib().total().n_objs())
        .map(|x| d.pi.object(d.sigma.object(Obj(x as u32)).alpha).alpha)
        .collect();
    let g = transfer(d.fib(), &p, obj);
    assert!(is_fibred_iso(d.fib(), &p, &g).unwrap());
    let ctx = FibCtx::new(d.fib(), Budget::default());
    for dir in [Direction::Left, Direction::Right] {
        assert!(fibrak_core::structure::verify_fibred_structure(&ctx, &cls, dir).unwrap().holds);
    }
}

#[test]
fn sigma_unit_matches_the_adjunction() {
    for name in ["identity-interval", "cod-interval", "sub-finset2", "family-finset2-monos", "cod-finset2-monos"] {
        let e = corpus_entry(name, Budget::default()).unwrap();
        let (p, cls) = (&e.fibration, &e.display);
        let sc = sigma_completion(p, cls).unwrap();
        let q = &sc.fib;
        let ctx = FibCtx::new(q, Budget::default());
        let t = q.total();
        for u in cls.members() {
            for &sigma in q.fibre_objs(q.base().dom(u)) {
                let kappa = sigma_unit(p, cls, &sc, u, sigma).unwrap();
                if q.base().is_identity(u) {
                    assert!(q.inverse(kappa).is_some(), "{name}");
                }
                let (gamma, eta) = ctx.coprod(u, sigma).unwrap().unwrap();
                // The closed form `(J, u ∘ g, α)` is vertically iso to the searched
                // coproduct, and the searched unit transports onto `κ`.
                let s = sc.object(sigma);
                let closed = sc.obj_of(SigmaObject { i: q.base().cod(u), g: q.base().comp(u, s.g), ..s }).unwrap();
                assert_eq!(t.cod(kappa), q.reindex_obj(u, closed), "{name}");
                assert!(q.vertical_iso(gamma, closed).is_some(), "{name}");
                assert!(q.vhom(gamma, closed).any(|m| t.comp(q.reindex_arr(u, m), eta) == kappa), "{name}");
            }
        }
    }
}

#[test]
fn sigma_unit_is_identity_along_identities() {
    let i = interval();
    let cls = all(&i);
    let p = identity_fibration(&i);
    let sc = sigma_completion(&p, &cls).unwrap();
    for sigma in sc.fib.total().objs() {
        let id = i.id(sc.object(sigma).i);
        assert_eq!(sigma_unit(&p, &cls, &sc, id, sigma).unwrap(), sc.fib.total().id(sigma));
    }
}

#[test]
fn polynomial_fibre_evaluates_like_finite_sets() {
    let c = finset_skeleton(2).unwrap();
    let pf = polynomial_fibre(&monos(&c)).unwrap();
    let t = pf.dial.fib().total();
    let mut found: Vec<(String, Vec<usize>)> = pf
        .dial
        .fib()
        .fibre_objs(pf.terminal)
        .iter()
        .filter_map(|&x| pf.polynomial(x).map(|q| (t.obj_name(x).to_string(), q.exponents)))
        .collect();
    found.sort();
    assert_eq!(
        found,
        vec![
            ("(f01,(id_0,id_0))".to_string(), vec![]),
            ("(id_1,(f01,id_0))".to_string(), vec![0]),
            ("(id_1,(id_1,id_1))".to_string(), vec![1]),
        ]
    );
    assert_eq!(pf.fibre.n_objs(), 4);
    // Σ_a |hom(B(a), X)| read off the skeleton.
    let f2 = finset_skeleton(2).unwrap();
    let homs = |b: usize, x: usize| f2.hom(Obj(b as u32), Obj(x as u32)).len();
    for (images, a) in [(vec![0], 1), (vec![], 2), (vec![0, 1], 2), (vec![1, 1], 2), (vec![], 0)] {
        let q = Polynomial::of_map(&images, a);
        for x in 0..=2 {
            let brute: usize = (0..a).map(|ai| homs(images.iter().filter(|&&v| v == ai).count(), x)).sum();
            assert_eq!(q.eval(x), brute);
        }
    }
    assert_eq!(Polynomial::of_map(&[], 2).eval(1), 2);
    let bang = f2.find_arr("f21_00").unwrap();
    assert_eq!(Polynomial::of_map(&finset_images(&f2, bang), 1).eval(2), 4);
}
