use super::*;
use crate::fractions::localised_hom;
use crate::models::{mixed_fixture, model_sp, ModelFixture};
use crate::thick::thick_closure;

fn setting(fx: &ModelFixture) -> Setting {
    Setting::new(thick_closure(&fx.presentation, &fx.thick_generators).unwrap())
}

#[test]
fn representables_and_sums_are_homological() {
    let fx = model_sp();
    let p = &fx.presentation;
    let ts = all_triangles(p);
    let a = p.id("e1o0xe0o1").unwrap();
    let b = p.id("e0o1xe1o1").unwrap();
    let (fa, fb) = (HomFunctor::representable(p, a), HomFunctor::representable(p, b));
    assert!(check_homological_on(&fa, p, &ts).full_pass());
    let sum = fa.direct_sum(&fb, p).unwrap();
    assert!(check_homological_on(&sum, p, &ts).full_pass());
    assert_eq!(sum.group(a).order(), Some(fa.group(a).order().unwrap() * fb.group(a).order().unwrap()));
    let bad = HomFunctor::constant(p, FinAbGroup::cyclic(2));
    assert!(!check_homological_on(&bad, p, &ts).no_failures());
    assert!(check_homological_on(&HomFunctor::zero(p), p, &ts).full_pass());
}

#[test]
fn localisation_closed_forms() {
    for fx in [model_sp(), mixed_fixture()] {
        let set = setting(&fx);
        let p = set.cat().clone();
        for a in p.objects().step_by(5) {
            let f = HomFunctor::representable(&p, a);
            let rf = right_localise(&f, &set).unwrap();
            let rc = right_colocalise(&f, &set).unwrap();
            for b in p.objects() {
                assert_eq!(rf.functor.group(b), f.group(fx.lb(b)));
                assert_eq!(rc.functor.group(b), f.group(fx.lperp_b(b)));
                assert_eq!(rf.functor.group(b), localised_hom(a, b, &set).unwrap().group());
                if set.thick().contains(b) {
                    assert!(rf.functor.group(b).is_trivial());
                    assert!(rc.counit.component(b).unwrap().is_isomorphism());
                }
            }
            let ts = all_triangles(&p);
            assert!(check_homological_on(&rf.functor, &p, &ts).full_pass());
            assert!(check_homological_on(&rc.functor, &p, &ts).full_pass());
            assert!(rf.unit.check_natural(&f, &rf.functor, &p).full_pass());
            assert!(rc.counit.check_natural(&rc.functor, &f, &p).full_pass());
        }
    }
}

#[test]
fn locality_predicates() {
    let fx = model_sp();
    let set = setting(&fx);
    let p = set.cat().clone();
    let second = HomFunctor::representable(&p, p.id("e0o0xe1o0").unwrap());
    let first = HomFunctor::representable(&p, p.id("e1o0xe0o0").unwrap());
    let v = is_local(&second, &set).unwrap();
    assert!(v.is_local() && v.agree());
    let v = is_local(&first, &set).unwrap();
    assert!(!v.is_local() && v.agree());
    let c = is_colocal(&first, &set).unwrap();
    assert!(c.is_colocal() && c.agree());
    let c = is_colocal(&second, &set).unwrap();
    assert!(!c.is_colocal() && c.agree());
    let rf = right_localise(&first, &set).unwrap().functor;
    assert!(is_local(&rf, &set).unwrap().is_local());
    let rrf = right_localise(&rf, &set).unwrap().functor;
    for b in p.objects() {
        assert_eq!(rrf.group(b), rf.group(b));
    }
}

#[test]
fn extension_from_subcategory() {
    let fx = model_sp();
    let set = setting(&fx);
    let p = set.cat().clone();
    let mut keep = vec![false; p.len()];
    for &m in &fx.thick_generators {
        keep[m] = true;
    }
    let f = HomFunctor::representable(&p, p.id("e1o1xe1o0").unwrap());
    let f0 = f.restrict(&keep, &p);
    let ext = extend_from_sub(&f0, &set).unwrap();
    let rc = right_colocalise(&f, &set).unwrap().functor;
    for b in p.objects() {
        assert_eq!(ext.group(b), rc.group(b));
        if keep[b] {
            assert_eq!(ext.group(b), f0.group(b));
        }
    }
    assert!(is_colocal(&ext, &set).unwrap().is_colocal());
    assert!(extend_from_sub(&HomFunctor::zero(&p).restrict(&keep, &p), &set).unwrap().vanishes());
}

#[test]
fn universal_property() {
    let fx = model_sp();
    let set = setting(&fx);
    let p = set.cat().clone();
    let a = p.id("e1o1xe1o1").unwrap();
    let a2 = p.id("e0o1xe1o0").unwrap();
    let f = HomFunctor::representable(&p, a);
    let rf = right_localise(&f, &set).unwrap();
    let id = factor_through_localisation(&rf.unit, &f, &rf.functor, &set).unwrap();
    assert_eq!(id, NatTransformation::identity(&rf.functor));
    let g = right_localise(&HomFunctor::representable(&p, a2), &set).unwrap();
    for u in p.morphisms(a2, a).take(5) {
        let pre = NatTransformation::precomposition(&p, &u);
        let phi = g.unit.compose(&pre).unwrap();
        let lifted = factor_through_localisation(&phi, &f, &g.functor, &set).unwrap();
        assert_eq!(lifted.compose(&rf.unit).unwrap(), phi);
    }
    let zero = NatTransformation::zero(&f, &g.functor);
    let lifted = factor_through_localisation(&zero, &f, &g.functor, &set).unwrap();
    assert!(lifted.components.iter().flatten().all(GroupHom::is_zero));
    assert!(matches!(
        factor_through_localisation(&NatTransformation::identity(&f), &f, &f, &set),
        Err(Error::NotLocal(_))
    ));
}
