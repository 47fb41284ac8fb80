use serde::Serialize;

use crate::error::Error;

use super::{CatPresentation, ConeSource, Morphism};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    /// Morphisms whose cone falls outside the finite object set.
    pub cones_out_of_range: usize,
    pub cones_checked: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_presentation(p: &CatPresentation) -> ValidationReport {
    let mut r = ValidationReport::default();
    check_units(p, &mut r);
    check_associativity(p, &mut r);
    check_suspension(p, &mut r);
    check_triangles(p, &mut r);
    check_biproducts(p, &mut r);
    r
}

fn gens(p: &CatPresentation, a: usize, b: usize) -> impl Iterator<Item = Morphism> + '_ {
    (0..p.hom(a, b).rank()).map(move |i| p.generator(a, b, i))
}

fn check_units(p: &CatPresentation, r: &mut ValidationReport) {
    for a in p.objects() {
        let id = p.identity(a);
        let ok = p.objects().all(|b| {
            gens(p, a, b).all(|f| p.compose(&f, &id).ok() == Some(f.clone()))
                && gens(p, b, a).all(|g| p.compose(&id, &g).ok() == Some(g.clone()))
        });
        if !ok {
            r.violations
                .push(format!("unit failure: identity of `{}`", p.name(a)));
        }
    }
}

fn check_associativity(p: &CatPresentation, r: &mut ValidationReport) {
    for a in p.objects() {
        for b in p.objects() {
            for c in p.objects() {
                if p.hom(a, b).is_trivial() || p.hom(b, c).is_trivial() {
                    continue;
                }
                for d in p.objects() {
                    if p.hom(c, d).is_trivial() {
                        continue;
                    }
                    let bad = gens(p, a, b).any(|f| {
                        gens(p, b, c).any(|g| {
                            let gf = p.compose(&g, &f).expect("chain");
                            gens(p, c, d).any(|h| {
                                let l = p.compose(&p.compose(&h, &g).expect("chain"), &f);
                                let rr = p.compose(&h, &gf);
                                l != rr
                            })
                        })
                    });
                    if bad {
                        r.violations.push(format!(
                            "associativity failure on ({}, {}, {}, {})",
                            p.name(a),
                            p.name(b),
                            p.name(c),
                            p.name(d)
                        ));
                    }
                }
            }
        }
    }
}

fn check_suspension(p: &CatPresentation, r: &mut ValidationReport) {
    if !p.sigma_inverse_available() {
        r.violations
            .push("suspension failure: some hom map is not invertible".into());
        return;
    }
    for a in p.objects() {
        if p.suspend(&p.identity(a), 1) != p.identity(p.suspend_obj(a, 1)) {
            r.violations
                .push(format!("suspension failure: identity of `{}`", p.name(a)));
        }
        for b in p.objects() {
            if !p.sigma_map(a, b).is_isomorphism() {
                r.violations.push(format!(
                    "suspension failure: hom({}, {}) map is not an isomorphism",
                    p.name(a),
                    p.name(b)
                ));
            }
            for c in p.objects() {
                let bad = gens(p, a, b).any(|f| {
                    gens(p, b, c).any(|g| {
                        let gf = p.compose(&g, &f).expect("chain");
                        p.suspend(&gf, 1)
                            != p.compose(&p.suspend(&g, 1), &p.suspend(&f, 1)).expect("chain")
                    })
                });
                if bad {
                    r.violations.push(format!(
                        "suspension failure: composition on ({}, {}, {})",
                        p.name(a),
                        p.name(b),
                        p.name(c)
                    ));
                }
            }
        }
    }
}

fn check_triangles(p: &CatPresentation, r: &mut ValidationReport) {
    match p.cone_source() {
        ConeSource::Database(ts) => {
            for (i, t) in ts.iter().enumerate() {
                for problem in p.triangle_problems(t) {
                    r.violations.push(format!("triangle {i} composite failure: {problem}"));
                }
                r.cones_checked += 1;
            }
        }
        _ => {
            for a in p.objects() {
                for b in p.objects() {
                    for f in p.morphisms(a, b) {
                        match p.cone(&f) {
                            Ok(t) => {
                                r.cones_checked += 1;
                                if t.f != f {
                                    r.violations.push(format!("cone of {f:?} has wrong base"));
                                }
                                for problem in p.triangle_problems(&t) {
                                    r.violations.push(format!(
                                        "triangle on {f:?} composite failure: {problem}"
                                    ));
                                }
                            }
                            Err(Error::MissingCone(_)) => r.cones_out_of_range += 1,
                            Err(e) => r.violations.push(format!("cone of {f:?}: {e}")),
                        }
                    }
                }
            }
        }
    }
}

fn check_biproducts(p: &CatPresentation, r: &mut ValidationReport) {
    let Some(table) = p.biproduct_table() else {
        return;
    };
    let n = p.len();
    for (ab, entry) in table.iter().enumerate() {
        let Some(bp) = entry else { continue };
        let (a, b) = (ab / n, ab % n);
        let ends_ok = (bp.i1.src, bp.i1.dst, bp.i2.src, bp.i2.dst) == (a, bp.obj, b, bp.obj)
            && (bp.p1.src, bp.p1.dst, bp.p2.src, bp.p2.dst) == (bp.obj, a, bp.obj, b);
        let c = |g: &Morphism, f: &Morphism| p.compose(g, f).ok();
        let ok = ends_ok
            && c(&bp.p1, &bp.i1) == Some(p.identity(a))
            && c(&bp.p2, &bp.i2) == Some(p.identity(b))
            && c(&bp.p1, &bp.i2) == Some(p.zero(b, a))
            && c(&bp.p2, &bp.i1) == Some(p.zero(a, b))
            && c(&bp.i1, &bp.p1)
                .zip(c(&bp.i2, &bp.p2))
                .and_then(|(x, y)| p.add(&x, &y).ok())
                == Some(p.identity(bp.obj));
        if !ok {
            r.violations.push(format!(
                "malformed biproduct for ({}, {})",
                p.name(a),
                p.name(b)
            ));
        }
    }
}
