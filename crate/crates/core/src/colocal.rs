//! The comma category `Subo(B)` of maps from the subcategory into `B`, and
//! colocalised hom groups as colimits over it.

use std::sync::Arc;

use serde::Serialize;

use crate::abgroup::{solve, Colimit, FinAbGroup, GroupHom};
use crate::category::{CatPresentation, Morphism, ObjId};
use crate::error::{Error, Result};
use crate::functor::{all_solutions, DiagramKind, MorphismDiagram, Representable};
use crate::report::CheckReport;
use crate::setting::Setting;
use crate::thick::ThickSubcat;

pub type SuboDiagram = MorphismDiagram;

pub fn enumerate_subo(b: ObjId, e: &ThickSubcat) -> Result<SuboDiagram> {
    let p = e.ambient();
    let members = e.members();
    let mut objects = Vec::new();
    for &m in &members {
        if !p.hom(m, b).is_finite() {
            return Err(Error::InfiniteGroup);
        }
        objects.extend(p.morphisms(m, b));
    }
    let mut d = MorphismDiagram::new(DiagramKind::Over, b, objects, 0);
    for i in 0..d.objects.len() {
        for j in 0..d.objects.len() {
            let (ei, ej) = (&d.objects[i], &d.objects[j]);
            let m = p.postcompose_map(ej, ei.src);
            let (src, dst) = (ei.src, ej.src);
            for x in all_solutions(&m, &ei.coords) {
                d.push_arrow(i, j, Morphism { src, dst, coords: x });
            }
        }
    }
    Ok(d)
}

/// `A → Ẽ → B` with `Ẽ` in the subcategory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coroof {
    pub f: Morphism,
    pub s: Morphism,
}

#[derive(Clone, Debug)]
pub struct ColocalisedHom {
    pub a: ObjId,
    pub b: ObjId,
    pub colimit: Colimit,
    pub diagram: Arc<SuboDiagram>,
    /// The natural map into `T(A, B)`.
    pub to_hom: GroupHom,
    cat: Arc<CatPresentation>,
}

impl ColocalisedHom {
    pub fn group(&self) -> &FinAbGroup {
        &self.colimit.group
    }

    pub fn classify(&self, c: &Coroof) -> Result<Vec<i64>> {
        if (c.f.src, c.s.dst, c.f.dst) != (self.a, self.b, c.s.src) {
            return Err(Error::EndpointMismatch(format!("coroof {c:?}")));
        }
        let i = self
            .diagram
            .index_of(&c.s)
            .ok_or_else(|| Error::NotInDiagram(format!("{:?}", c.s)))?;
        Ok(self.colimit.classify(i, &c.f.coords))
    }

    pub fn coroof_of(&self, y: &[i64]) -> Result<Coroof> {
        let (i, x) = self
            .colimit
            .represent(y)
            .ok_or_else(|| Error::NotInDiagram(format!("class {y:?}")))?;
        let s = self.diagram.objects[i].clone();
        Ok(Coroof { f: self.cat.morphism(self.a, s.src, x)?, s })
    }
}

/// `T/E⊥(A, B)` as the colimit of `T(A, Ẽ)` over `Subo(B)`.
pub fn colocalised_hom(a: ObjId, b: ObjId, set: &Setting) -> Result<ColocalisedHom> {
    let p = set.cat();
    let diagram = set.subo(b)?;
    let colimit = diagram.colimit_of(&Representable { cat: p.clone(), a })?;
    let family: Vec<GroupHom> = diagram.objects.iter().map(|e| p.postcompose_map(e, a)).collect();
    let to_hom = colimit.map_out(p.hom(a, b), &family)?;
    Ok(ColocalisedHom { a, b, colimit, diagram, to_hom, cat: p.clone() })
}

/// `T/E⊥(A, B) → T/E⊥(A, B')` for `f: B → B'`.
pub fn induced_subo_map(f: &Morphism, src: &ColocalisedHom, dst: &ColocalisedHom) -> Result<GroupHom> {
    if (src.b, dst.b, src.a) != (f.src, f.dst, dst.a) {
        return Err(Error::EndpointMismatch("induced colocalised map".into()));
    }
    let p = &src.cat;
    let mut family = Vec::with_capacity(src.diagram.objects.len());
    for (i, e) in src.diagram.objects.iter().enumerate() {
        let j = dst
            .diagram
            .index_of(&p.compose(f, e)?)
            .ok_or_else(|| Error::NotInDiagram(format!("{f:?}∘{e:?}")))?;
        family.push(dst.colimit.cocone[j].clone());
        debug_assert_eq!(family[i].domain(), src.colimit.cocone[i].domain());
    }
    src.colimit.map_out(dst.group(), &family)
}

/// `T/E⊥(A, B) → T/E⊥(A', B)` for `g: A' → A`.
pub fn colocal_precompose(g: &Morphism, src: &ColocalisedHom, dst: &ColocalisedHom) -> Result<GroupHom> {
    if (src.a, dst.a, src.b) != (g.dst, g.src, dst.b) {
        return Err(Error::EndpointMismatch("precomposed colocalised map".into()));
    }
    let p = &src.cat;
    let family = src
        .diagram
        .objects
        .iter()
        .enumerate()
        .map(|(i, e)| dst.colimit.cocone[i].compose(&p.precompose_map(g, e.src)))
        .collect::<Result<Vec<_>>>()?;
    src.colimit.map_out(dst.group(), &family)
}

/// `c2 ∘ c1` as `(f1∘s2∘f2, s1)` for `c1 = (f2, s2)`, `c2 = (f1, s1)`.
pub fn compose_coroofs(c2: &Coroof, c1: &Coroof, p: &CatPresentation) -> Result<Coroof> {
    if c2.f.src != c1.s.dst {
        return Err(Error::EndpointMismatch("coroofs do not chain".into()));
    }
    Ok(Coroof { f: p.compose_all(&[&c1.f, &c1.s, &c2.f])?, s: c2.s.clone() })
}

/// The other description of the product: `(f2, s1∘f1∘s2)`.
pub fn compose_coroofs_dual(c2: &Coroof, c1: &Coroof, p: &CatPresentation) -> Result<Coroof> {
    if c2.f.src != c1.s.dst {
        return Err(Error::EndpointMismatch("coroofs do not chain".into()));
    }
    Ok(Coroof { f: c1.f.clone(), s: p.compose_all(&[&c1.s, &c2.f, &c2.s])? })
}

/// Biproduct cocones for pairs of objects and cone-built equalisers for
/// parallel arrows in `Subo(B)`.
pub fn subo_filtered_witness(b: ObjId, set: &Setting) -> Result<CheckReport> {
    let p = set.cat();
    let d = set.subo(b)?;
    let n = d.objects.len();
    let mut r = CheckReport::new(format!("Subo({}) filtered", p.name(b)));
    for i in 0..n {
        for j in i + 1..n {
            let (ei, ej) = (&d.objects[i], &d.objects[j]);
            let bp = match p.biproduct(ei.src, ej.src) {
                Ok(bp) => bp,
                Err(_) if !p.has_biproduct_table() => {
                    r.unverifiable(format!("F1 for objects {i} and {j}: no biproduct"));
                    continue;
                }
                Err(_) => {
                    // the sum lies outside the finite object set
                    let common = (0..n).any(|k| {
                        d.arrows_between(i, k).next().is_some()
                            && d.arrows_between(j, k).next().is_some()
                    });
                    r.check(common, || format!("F1 fails for objects {i} and {j}"));
                    continue;
                }
            };
            let sum = p.add(&p.compose(ei, &bp.p1)?, &p.compose(ej, &bp.p2)?)?;
            let ok = match d.index_of(&sum) {
                Some(k) => d.has_arrow(i, k, &bp.i1) && d.has_arrow(j, k, &bp.i2),
                None => false,
            };
            r.check(ok, || format!("F1 fails for objects {i} and {j}"));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let par: Vec<&Morphism> = d.arrows_between(i, j).collect();
            for (x, u) in par.iter().enumerate() {
                for v in &par[x + 1..] {
                    let ej = &d.objects[j];
                    let eq = |w: &Morphism| p.compose(w, u).ok() == p.compose(w, v).ok();
                    let ok = match p.cone(&p.sub(u, v)?) {
                        Ok(t) => solve(&p.precompose_map(&t.g, b), &ej.coords)
                            .and_then(|x| p.morphism(t.z, b, x).ok())
                            .and_then(|e3| d.index_of(&e3))
                            .is_some_and(|k| d.has_arrow(j, k, &t.g) && eq(&t.g)),
                        Err(_) => (0..n).any(|k| d.arrows_between(j, k).any(&eq)),
                    };
                    r.check(ok, || format!("F2 fails for arrows {u:?}, {v:?} from {i} to {j}"));
                }
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests;
