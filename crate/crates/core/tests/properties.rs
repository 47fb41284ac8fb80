use std::sync::LazyLock;

use proptest::prelude::*;

use triloc::category::{CatPresentation, Morphism, ObjId};
use triloc::colocal::{colocalised_hom, Coroof};
use triloc::derived::HomFunctor;
use triloc::fractions::{detect_complementary, localised_hom, Roof};
use triloc::les::{default_window, verify_exact, LesBuilder};
use triloc::models::{mixed_fixture, model_sp, ModelFixture};
use triloc::setting::Setting;
use triloc::thick::thick_closure;

struct Fixture {
    fx: ModelFixture,
    set: Setting,
}

fn load(fx: ModelFixture) -> Fixture {
    let set = Setting::new(thick_closure(&fx.presentation, &fx.thick_generators).unwrap());
    Fixture { fx, set }
}

static SP: LazyLock<Fixture> = LazyLock::new(|| load(model_sp()));
static MIXED: LazyLock<Fixture> = LazyLock::new(|| load(mixed_fixture()));

fn fixture(mixed: bool) -> &'static Fixture {
    if mixed {
        &MIXED
    } else {
        &SP
    }
}

fn morphism(p: &CatPresentation, a: ObjId, b: ObjId, raw: &[i64]) -> Morphism {
    let g = p.hom(a, b);
    let coords = g.factors().iter().zip(raw.iter().cycle()).map(|(&d, &x)| x.rem_euclid(d)).collect();
    p.morphism(a, b, coords).unwrap()
}

fn raw() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..1024, 1..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cone_triangles_are_exact_in_sequence(mixed: bool, a in 0usize..16, b in 0usize..16, r in raw()) {
        let p = &fixture(mixed).fx.presentation;
        let f = morphism(p, a, b, &r);
        if let Ok(t) = p.cone(&f) {
            prop_assert_eq!(&t.f, &f);
            prop_assert_eq!((t.g.src, t.h.src, t.h.dst), (t.y, t.z, p.suspend_obj(t.x, 1)));
            prop_assert!(p.compose(&t.g, &t.f).unwrap().is_zero());
            prop_assert!(p.compose(&t.h, &t.g).unwrap().is_zero());
            prop_assert!(p.compose(&p.suspend(&t.f, 1), &t.h).unwrap().is_zero());
        }
    }

    #[test]
    fn thick_closures_are_thick(mixed: bool, mask in 0u32..(1 << 16), a in 0usize..16, b in 0usize..16, r in raw()) {
        let p = &fixture(mixed).fx.presentation;
        let gens: Vec<ObjId> = p.objects().filter(|&x| mask & (1 << x) != 0).collect();
        let e = thick_closure(p, &gens).unwrap();
        prop_assert!(gens.iter().all(|&g| e.contains(g)));
        prop_assert!(e.contains(p.zero_object().unwrap()));
        for x in p.objects() {
            prop_assert_eq!(e.contains(x), e.contains(p.suspend_obj(x, 1)));
        }
        if let Ok(s) = p.biproduct(a, b) {
            if e.contains(s.obj) {
                prop_assert!(e.contains(a) && e.contains(b));
            }
        }
        if let Ok(t) = p.cone(&morphism(p, a, b, &r)) {
            let members = [t.x, t.y, t.z].iter().filter(|&&o| e.contains(o)).count();
            prop_assert_ne!(members, 2);
        }
    }

    #[test]
    fn wo_arrows_commute_and_are_weak(mixed: bool, b in 0usize..16) {
        let fx = fixture(mixed);
        let p = fx.set.cat();
        let wo = fx.set.wo(b).unwrap();
        for (i, j, r) in &wo.arrows {
            prop_assert_eq!(&p.compose(r, &wo.objects[*i]).unwrap(), &wo.objects[*j]);
            prop_assert_ne!(fx.set.thick().is_weak_equivalence(r), Ok(false));
        }
        let subo = fx.set.subo(b).unwrap();
        for (i, j, r) in &subo.arrows {
            prop_assert_eq!(&p.compose(&subo.objects[*j], r).unwrap(), &subo.objects[*i]);
            prop_assert!(fx.set.thick().contains(subo.objects[*i].src));
        }
    }

    #[test]
    fn roof_classes_are_invariant(mixed: bool, a in 0usize..16, b in 0usize..16, pick in any::<prop::sample::Index>(), r in raw()) {
        let fx = fixture(mixed);
        let p = fx.set.cat();
        let lh = localised_hom(a, b, &fx.set).unwrap();
        let (i, j, t) = &lh.diagram.arrows[pick.index(lh.diagram.arrows.len())];
        let s = &lh.diagram.objects[*i];
        let f = morphism(p, a, s.dst, &r);
        let moved = Roof { f: p.compose(t, &f).unwrap(), s: lh.diagram.objects[*j].clone() };
        let x = lh.classify(&Roof { f, s: s.clone() }).unwrap();
        prop_assert_eq!(&lh.classify(&moved).unwrap(), &x);
        prop_assert_eq!(&lh.classify(&lh.roof_of(&x).unwrap()).unwrap(), &x);
    }

    #[test]
    fn coroof_classes_are_invariant(mixed: bool, a in 0usize..16, b in 0usize..16, pick in any::<prop::sample::Index>(), r in raw()) {
        let fx = fixture(mixed);
        let p = fx.set.cat();
        let ch = colocalised_hom(a, b, &fx.set).unwrap();
        let (i, j, t) = &ch.diagram.arrows[pick.index(ch.diagram.arrows.len())];
        let e = &ch.diagram.objects[*i];
        let f = morphism(p, a, e.src, &r);
        let c = Coroof { f: f.clone(), s: e.clone() };
        let x = ch.classify(&c).unwrap();
        let moved = Coroof { f: p.compose(t, &f).unwrap(), s: ch.diagram.objects[*j].clone() };
        prop_assert_eq!(&ch.classify(&moved).unwrap(), &x);
        prop_assert_eq!(ch.to_hom.apply(&x), p.compose(e, &f).unwrap().coords);
        prop_assert_eq!(&ch.classify(&ch.coroof_of(&x).unwrap()).unwrap(), &x);
    }

    #[test]
    fn sums_of_representables_have_exact_sequences(a1 in 0usize..16, a2 in 0usize..16, b in 0usize..16) {
        let fx = fixture(true);
        let p = fx.set.cat();
        let f = HomFunctor::representable(p, a1).direct_sum(&HomFunctor::representable(p, a2), p).unwrap();
        let r = LesBuilder::new(f, &fx.set).unwrap().build(b, &default_window(&fx.set)).unwrap();
        prop_assert_eq!(verify_exact(&r), (true, None));
    }
}

#[test]
fn complementary_pairs_match_the_factors() {
    for fx in [&*SP, &*MIXED] {
        let w = detect_complementary(&fx.set).unwrap();
        assert!(w.is_complementary(), "missing {:?}", w.missing());
        let p = fx.set.cat();
        for b in p.objects() {
            let entry = w.entries[b].as_ref().unwrap();
            assert_eq!(entry.s.dst, fx.fx.lb(b));
            assert_eq!(entry.triangle.x, fx.fx.lperp_b(b));
            let wo = fx.set.wo(b).unwrap();
            let k = wo.index_of(&entry.s).unwrap();
            for i in 0..wo.objects.len() {
                assert_eq!(wo.arrows_between(i, k).count(), 1);
            }
        }
    }
}
