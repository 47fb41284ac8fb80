use super::*;
use crate::models::{mixed_fixture, model_sp, ModelFixture};
use crate::oracle::SetColimit;
use crate::thick::thick_closure;

fn setting(fx: &ModelFixture) -> Setting {
    Setting::new(thick_closure(&fx.presentation, &fx.thick_generators).unwrap())
}

#[test]
fn colocalised_orders_and_oracle() {
    for fx in [model_sp(), mixed_fixture()] {
        let set = setting(&fx);
        let p = set.cat().clone();
        for a in p.objects() {
            for b in p.objects() {
                let ch = colocalised_hom(a, b, &set).unwrap();
                assert_eq!(ch.group(), p.hom(a, fx.lperp_b(b)));
                let d = ch.diagram.apply(&Representable { cat: p.clone(), a });
                assert!(SetColimit::new(&d).unwrap().agrees_with(&ch.colimit));
                if set.thick().contains(b) {
                    assert!(ch.to_hom.is_isomorphism());
                }
            }
        }
    }
}

#[test]
fn example_and_trivial_subcategory() {
    let fx = model_sp();
    let set = setting(&fx);
    let p = set.cat().clone();
    let a = p.id("e1o0xe1o0").unwrap();
    assert_eq!(colocalised_hom(a, a, &set).unwrap().group().order(), Some(2));
    let zero = p.zero_object().unwrap();
    let none = Setting::new(thick_closure(&p, &[zero]).unwrap());
    assert!(colocalised_hom(a, a, &none).unwrap().group().is_trivial());
    let d = none.subo(a).unwrap();
    assert!(d.objects.iter().all(|e| e.is_zero()));
}

#[test]
fn to_hom_contract_and_products() {
    let fx = mixed_fixture();
    let set = setting(&fx);
    let p = set.cat().clone();
    let objs: Vec<ObjId> = p.objects().step_by(2).collect();
    for &a in &objs {
        for &b in &objs {
            let ab = colocalised_hom(a, b, &set).unwrap();
            for (i, e) in ab.diagram.objects.iter().enumerate() {
                for f in p.morphisms(a, e.src) {
                    let c = Coroof { f: f.clone(), s: e.clone() };
                    let x = ab.classify(&c).unwrap();
                    assert_eq!(ab.to_hom.apply(&x), p.compose(e, &f).unwrap().coords);
                    assert_eq!(x, ab.colimit.classify(i, &f.coords));
                }
            }
            for &c in &objs {
                let bc = colocalised_hom(b, c, &set).unwrap();
                let ac = colocalised_hom(a, c, &set).unwrap();
                for x in ab.group().elements().unwrap() {
                    for y in bc.group().elements().unwrap() {
                        let (c1, c2) = (ab.coroof_of(&x).unwrap(), bc.coroof_of(&y).unwrap());
                        let one = ac.classify(&compose_coroofs(&c2, &c1, &p).unwrap()).unwrap();
                        let two = ac.classify(&compose_coroofs_dual(&c2, &c1, &p).unwrap()).unwrap();
                        assert_eq!(one, two);
                    }
                }
            }
        }
    }
}

#[test]
fn induced_maps() {
    let fx = model_sp();
    let set = setting(&fx);
    let p = set.cat().clone();
    let a = p.id("e1o1xe0o1").unwrap();
    let b = p.id("e1o0xe1o0").unwrap();
    let c = p.id("e1o1xe1o0").unwrap();
    let (ab, ac) = (colocalised_hom(a, b, &set).unwrap(), colocalised_hom(a, c, &set).unwrap());
    let id = induced_subo_map(&p.identity(b), &ab, &ab).unwrap();
    assert_eq!(id, GroupHom::identity(ab.group().clone()));
    assert!(induced_subo_map(&p.zero(b, c), &ab, &ac).unwrap().is_zero());
    for f in p.morphisms(b, c) {
        for g in p.morphisms(c, b).take(3) {
            let gf = p.compose(&g, &f).unwrap();
            let ca = colocalised_hom(a, c, &set).unwrap();
            let lhs = induced_subo_map(&gf, &ab, &ab).unwrap();
            let rhs = induced_subo_map(&g, &ca, &ab)
                .unwrap()
                .compose(&induced_subo_map(&f, &ab, &ca).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }
    let pre = colocal_precompose(&p.identity(a), &ab, &ab).unwrap();
    assert_eq!(pre, GroupHom::identity(ab.group().clone()));
}

#[test]
fn filtered_witnesses() {
    for fx in [model_sp(), mixed_fixture()] {
        let set = setting(&fx);
        for b in set.cat().objects() {
            let r = subo_filtered_witness(b, &set).unwrap();
            assert!(r.full_pass(), "{r:?}");
        }
    }
    let fx = model_sp();
    let bare = Arc::new(fx.presentation.without_biproducts());
    let set = Setting::new(thick_closure(&bare, &fx.thick_generators).unwrap());
    let b = bare.id("e1o1xe1o1").unwrap();
    let r = subo_filtered_witness(b, &set).unwrap();
    assert!(!r.non_verifiable.is_empty());
}
