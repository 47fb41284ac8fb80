//! Calculus of left fractions: Ore moves, the filtered category `Wo(B)` and
//! localised hom groups as colimits over it.

use std::sync::Arc;

use serde::Serialize;

use crate::abgroup::{solve_with, ChoicePolicy, Colimit, FinAbGroup, GroupHom};
use crate::category::{CatPresentation, Morphism, ObjId, Triangle};
use crate::error::{Error, Result};
use crate::functor::{all_solutions, DiagramKind, MorphismDiagram, Representable};
use crate::report::CheckReport;
use crate::setting::Setting;
use crate::thick::ThickSubcat;

pub type WoDiagram = MorphismDiagram;

/// Weak equivalences out of `b`, with every commuting triangle between them.
pub fn enumerate_wo(b: ObjId, e: &ThickSubcat) -> Result<WoDiagram> {
    let p = e.ambient();
    let mut objects = Vec::new();
    let mut skipped = 0;
    for c in p.objects() {
        if !p.hom(b, c).is_finite() {
            return Err(Error::InfiniteGroup);
        }
        for s in p.morphisms(b, c) {
            match e.is_weak_equivalence(&s) {
                Ok(true) => objects.push(s),
                Ok(false) => {}
                Err(_) => skipped += 1,
            }
        }
    }
    let mut d = MorphismDiagram::new(DiagramKind::Under, b, objects, skipped);
    for i in 0..d.objects.len() {
        for j in 0..d.objects.len() {
            let (si, sj) = (&d.objects[i], &d.objects[j]);
            let m = p.precompose_map(si, sj.dst);
            let (ci, cj) = (si.dst, sj.dst);
            for x in all_solutions(&m, &sj.coords) {
                d.push_arrow(i, j, Morphism { src: ci, dst: cj, coords: x });
            }
        }
    }
    Ok(d)
}

/// How an Ore completion was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Route {
    /// Through cones and fill-ins.
    Constructive,
    /// By scanning the enumerated diagram, used when a needed cone falls
    /// outside the finite object set.
    Search,
}

#[derive(Clone, Debug)]
pub struct OreSquare {
    pub t: Morphism,
    pub g: Morphism,
    pub route: Route,
}

/// Rejects `s` only when its cone is known to lie outside the subcategory;
/// composites of weak equivalences may have cones beyond the object set.
fn require_weak(e: &ThickSubcat, s: &Morphism) -> Result<()> {
    match e.is_weak_equivalence(s) {
        Ok(false) => Err(Error::NotWeakEquivalence(format!("{s:?}"))),
        _ => Ok(()),
    }
}

fn ordered<T>(mut v: Vec<T>, policy: ChoicePolicy) -> Vec<T> {
    if policy == ChoicePolicy::Greatest {
        v.reverse();
    }
    v
}

pub fn ore_square(s: &Morphism, f: &Morphism, set: &Setting) -> Result<OreSquare> {
    ore_square_with(s, f, set, ChoicePolicy::Least)
}

/// For a weak equivalence `s: A → B` and `f: A → C`, a weak equivalence
/// `t: C → D` and `g: B → D` with `g∘s = t∘f`.
pub fn ore_square_with(
    s: &Morphism,
    f: &Morphism,
    set: &Setting,
    policy: ChoicePolicy,
) -> Result<OreSquare> {
    let p = set.cat();
    if s.src != f.src {
        return Err(Error::EndpointMismatch("ore square needs a common source".into()));
    }
    let ok = |t: &Morphism, g: &Morphism| {
        set.thick().is_weak_equivalence(t) == Ok(true)
            && p.compose(g, s).ok() == p.compose(t, f).ok()
    };
    if let Ok((t, g)) = ore_constructive(p, s, f, policy) {
        if ok(&t, &g) {
            return Ok(OreSquare { t, g, route: Route::Constructive });
        }
    }
    require_weak(set.thick(), s)?;
    let wo = set.wo(f.dst)?;
    for t in ordered(wo.objects.clone(), policy) {
        let tf = p.compose(&t, f)?;
        if let Some(x) = solve_with(&p.precompose_map(s, t.dst), &tf.coords, policy) {
            let g = p.morphism(s.dst, t.dst, x)?;
            return Ok(OreSquare { t, g, route: Route::Search });
        }
    }
    Err(Error::NoFillIn)
}

fn ore_constructive(
    p: &CatPresentation,
    s: &Morphism,
    f: &Morphism,
    policy: ChoicePolicy,
) -> Result<(Morphism, Morphism)> {
    // σ⁻¹E → A → B → E with E in the subcategory
    let back = p.rotate_back(&p.cone(s)?);
    let h = p.compose(f, &back.f)?;
    let th = p.cone(&h)?;
    let g = p.fill_in_with(&back, &th, &p.identity(back.x), f, policy)?;
    Ok((th.g, g))
}

pub fn ore_equalize(
    f: &Morphism,
    g: &Morphism,
    s: &Morphism,
    set: &Setting,
) -> Result<(Morphism, Route)> {
    ore_equalize_with(f, g, s, set, ChoicePolicy::Least)
}

/// For `f, g: A ⇉ B` and a weak equivalence `s: A' → A` with `f∘s = g∘s`,
/// a weak equivalence `t` out of `B` with `t∘f = t∘g`.
pub fn ore_equalize_with(
    f: &Morphism,
    g: &Morphism,
    s: &Morphism,
    set: &Setting,
    policy: ChoicePolicy,
) -> Result<(Morphism, Route)> {
    let p = set.cat();
    if (f.src, f.dst) != (g.src, g.dst) || s.dst != f.src {
        return Err(Error::EndpointMismatch("ore equaliser".into()));
    }
    if p.compose(f, s)? != p.compose(g, s)? {
        return Err(Error::SquareNotCommuting);
    }
    let ok = |t: &Morphism| {
        set.thick().is_weak_equivalence(t) == Ok(true)
            && p.compose(t, f).ok() == p.compose(t, g).ok()
    };
    let constructive = || -> Result<Morphism> {
        let ts = p.cone(s)?;
        let diff = p.sub(f, g)?;
        let x = solve_with(&p.precompose_map(&ts.g, f.dst), &diff.coords, policy)
            .ok_or_else(|| Error::NoFactorization(format!("{diff:?} through {:?}", ts.g)))?;
        let h = p.morphism(ts.z, f.dst, x)?;
        Ok(p.cone(&h)?.g)
    };
    match constructive() {
        Ok(t) if ok(&t) => return Ok((t, Route::Constructive)),
        Err(Error::NoFactorization(m)) => return Err(Error::NoFactorization(m)),
        _ => {}
    }
    require_weak(set.thick(), s)?;
    let wo = set.wo(f.dst)?;
    ordered(wo.objects.clone(), policy)
        .into_iter()
        .find(|t| ok(t))
        .map(|t| (t, Route::Search))
        .ok_or_else(|| Error::NoFactorization("no equalising weak equivalence".into()))
}

/// A fraction `s⁻¹∘f` from `A` to `B`, with `f: A → C` and `s: B → C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Roof {
    pub f: Morphism,
    pub s: Morphism,
}

impl Roof {
    pub fn of(p: &CatPresentation, f: &Morphism) -> Roof {
        Roof { f: f.clone(), s: p.identity(f.dst) }
    }
}

#[derive(Clone, Debug)]
pub struct LocalisedHom {
    pub a: ObjId,
    pub b: ObjId,
    pub colimit: Colimit,
    pub diagram: Arc<WoDiagram>,
    cat: Arc<CatPresentation>,
}

impl LocalisedHom {
    pub fn group(&self) -> &FinAbGroup {
        &self.colimit.group
    }

    /// Class of a roof. A roof whose weak equivalence lies outside the
    /// diagram is first pushed forward along an arrow into it.
    pub fn classify(&self, r: &Roof) -> Result<Vec<i64>> {
        if (r.f.src, r.s.src, r.f.dst) != (self.a, self.b, r.s.dst) {
            return Err(Error::EndpointMismatch(format!("roof {r:?}")));
        }
        let p = &self.cat;
        if let Some(i) = self.diagram.index_of(&r.s) {
            return Ok(self.colimit.classify(i, &r.f.coords));
        }
        for (j, sj) in self.diagram.objects.iter().enumerate() {
            let m = p.precompose_map(&r.s, sj.dst);
            if let Some(x) = crate::abgroup::solve(&m, &sj.coords) {
                let q = p.morphism(r.s.dst, sj.dst, x)?;
                return Ok(self.colimit.classify(j, &p.compose(&q, &r.f)?.coords));
            }
        }
        Err(Error::NotInDiagram(format!("{:?}", r.s)))
    }

    /// A roof in the given class.
    pub fn roof_of(&self, y: &[i64]) -> Result<Roof> {
        let (i, x) = self
            .colimit
            .represent(y)
            .ok_or_else(|| Error::NotInDiagram(format!("class {y:?}")))?;
        let s = self.diagram.objects[i].clone();
        Ok(Roof { f: self.cat.morphism(self.a, s.dst, x)?, s })
    }

    pub fn section(&self, k: usize) -> Result<Roof> {
        self.roof_of(&self.group().basis(k))
    }
}

/// `T/E(A, B)` as the colimit of `T(A, C)` over `Wo(B)`.
pub fn localised_hom(a: ObjId, b: ObjId, set: &Setting) -> Result<LocalisedHom> {
    let diagram = set.wo(b)?;
    let f = Representable { cat: set.cat().clone(), a };
    let colimit = diagram.colimit_of(&f)?;
    Ok(LocalisedHom { a, b, colimit, diagram, cat: set.cat().clone() })
}

pub fn localise_morphism(f: &Morphism, lh: &LocalisedHom) -> Result<Vec<i64>> {
    lh.classify(&Roof::of(&lh.cat, f))
}

/// `r2 ∘ r1` for `r1: A ⇢ B` and `r2: B ⇢ C`.
pub fn compose_roofs(r2: &Roof, r1: &Roof, set: &Setting) -> Result<Roof> {
    if r2.f.src != r1.s.src {
        return Err(Error::EndpointMismatch("roofs do not chain".into()));
    }
    let p = set.cat();
    let sq = ore_square(&r1.s, &r2.f, set)?;
    Ok(Roof {
        f: p.compose(&sq.g, &r1.f)?,
        s: p.compose(&sq.t, &r2.s)?,
    })
}

/// Product of classes `y ∈ T/E(B, C)` and `x ∈ T/E(A, B)` in `T/E(A, C)`.
pub fn compose_classes(
    y: &[i64],
    bc: &LocalisedHom,
    x: &[i64],
    ab: &LocalisedHom,
    ac: &LocalisedHom,
    set: &Setting,
) -> Result<Vec<i64>> {
    let r = compose_roofs(&bc.roof_of(y)?, &ab.roof_of(x)?, set)?;
    ac.classify(&r)
}

/// An inverse of the class `x ∈ T/E(A, B)`, found by scanning `T/E(B, A)`.
pub fn invert_class(x: &[i64], a: ObjId, b: ObjId, set: &Setting) -> Result<Option<Vec<i64>>> {
    let p = set.cat();
    let ab = localised_hom(a, b, set)?;
    let ba = localised_hom(b, a, set)?;
    let aa = localised_hom(a, a, set)?;
    let bb = localised_hom(b, b, set)?;
    let id_a = localise_morphism(&p.identity(a), &aa)?;
    let id_b = localise_morphism(&p.identity(b), &bb)?;
    for y in ba.group().elements()? {
        if compose_classes(&y, &ba, x, &ab, &aa, set)? == id_a
            && compose_classes(x, &ab, &y, &ba, &bb, set)? == id_b
        {
            return Ok(Some(y));
        }
    }
    Ok(None)
}

fn induced_wo_map_with(
    f: &Morphism,
    src: &LocalisedHom,
    dst: &LocalisedHom,
    set: &Setting,
    policy: ChoicePolicy,
) -> Result<GroupHom> {
    let p = set.cat();
    let mut family = Vec::with_capacity(src.diagram.objects.len());
    for (i, s) in src.diagram.objects.iter().enumerate() {
        let sq = ore_square_with(s, f, set, policy)?;
        let dom = src.colimit.cocone[i].domain().clone();
        let cols = (0..dom.rank())
            .map(|k| {
                let x = p.morphism(src.a, s.dst, dom.basis(k))?;
                dst.classify(&Roof { f: p.compose(&sq.g, &x)?, s: sq.t.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        family.push(GroupHom::from_columns(dom, dst.group().clone(), &cols)?);
    }
    src.colimit.map_out(dst.group(), &family)
}

/// `T/E(A, B) → T/E(A, B')` induced by `f: B → B'`. Computed under both
/// choice policies, which must agree.
pub fn induced_wo_map(f: &Morphism, a: ObjId, set: &Setting) -> Result<GroupHom> {
    let src = localised_hom(a, f.src, set)?;
    let dst = localised_hom(a, f.dst, set)?;
    let least = induced_wo_map_with(f, &src, &dst, set, ChoicePolicy::Least)?;
    let greatest = induced_wo_map_with(f, &src, &dst, set, ChoicePolicy::Greatest)?;
    if least != greatest {
        return Err(Error::Validation(vec![format!(
            "induced map along {f:?} depends on auxiliary choices"
        )]));
    }
    Ok(least)
}

/// Cocone objects for every pair of objects and equalising arrows for every
/// parallel pair of arrows in `Wo(B)`.
pub fn wo_filtered_witness(b: ObjId, set: &Setting) -> Result<CheckReport> {
    let p = set.cat();
    let wo = set.wo(b)?;
    let n = wo.objects.len();
    let mut r = CheckReport::new(format!("Wo({}) filtered", p.name(b)));
    let reaches = |i: usize, k: usize| wo.arrows_between(i, k).next().is_some();
    for i in 0..n {
        for j in i + 1..n {
            let (si, sj) = (&wo.objects[i], &wo.objects[j]);
            let found = match ore_square(si, sj, set) {
                Ok(sq) => {
                    let top = p.compose(&sq.t, sj)?;
                    match wo.index_of(&top) {
                        Some(k) => wo.has_arrow(i, k, &sq.g) && wo.has_arrow(j, k, &sq.t),
                        None => (0..n).any(|k| reaches(i, k) && reaches(j, k)),
                    }
                }
                Err(_) => false,
            };
            r.check(found, || format!("F1 fails for objects {i} and {j}"));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let par: Vec<&Morphism> = wo.arrows_between(i, j).collect();
            for (x, u) in par.iter().enumerate() {
                for v in &par[x + 1..] {
                    let found = match ore_equalize(u, v, &wo.objects[i], set) {
                        Ok((t, _)) => {
                            let top = p.compose(&t, &wo.objects[j])?;
                            p.compose(&t, u)? == p.compose(&t, v)?
                                && match wo.index_of(&top) {
                                    Some(k) => wo.has_arrow(j, k, &t),
                                    None => (0..n).any(|k| {
                                        wo.arrows_between(j, k).any(|w| {
                                            p.compose(w, u).ok() == p.compose(w, v).ok()
                                        })
                                    }),
                                }
                        }
                        Err(_) => false,
                    };
                    r.check(found, || format!("F2 fails for arrows {u:?}, {v:?} from {i} to {j}"));
                }
            }
        }
    }
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplementaryEntry {
    /// Final object `B → LB` of `Wo(B)`.
    pub s: Morphism,
    /// `L⊥B → B → LB → σL⊥B`
    pub triangle: Triangle,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplementaryWitness {
    pub entries: Vec<Option<ComplementaryEntry>>,
}

impl ComplementaryWitness {
    pub fn is_complementary(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }

    pub fn missing(&self) -> Vec<ObjId> {
        (0..self.entries.len()).filter(|&b| self.entries[b].is_none()).collect()
    }
}

pub fn detect_complementary(set: &Setting) -> Result<ComplementaryWitness> {
    let p = set.cat();
    let mut entries = Vec::with_capacity(p.len());
    for b in p.objects() {
        let wo = set.wo(b)?;
        let n = wo.objects.len();
        let fin = (0..n).find(|&k| (0..n).all(|j| wo.arrows_between(j, k).count() == 1));
        entries.push(fin.and_then(|k| {
            let s = wo.objects[k].clone();
            let triangle = p.rotate_back(&p.cone(&s).ok()?);
            Some(ComplementaryEntry { s, triangle })
        }));
    }
    Ok(ComplementaryWitness { entries })
}
