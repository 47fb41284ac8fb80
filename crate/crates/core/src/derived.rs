//! Homological functors as finite tables, and their right localisation and
//! right colocalisation at a thick subcategory.

use serde::{Deserialize, Serialize};

use crate::abgroup::{direct_sum, homology_at, solve, Colimit, FinAbGroup, GroupHom};
use crate::category::{CatPresentation, ConeSource, Morphism, ObjId, Triangle};
use crate::error::{Error, Result};
use crate::fractions::ore_square;
use crate::functor::{Functor, MorphismDiagram};
use crate::report::CheckReport;
use crate::setting::Setting;

/// An additive functor given by its groups and the images of hom-group
/// generators. Objects outside `defined` carry the trivial group and no maps.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomFunctor {
    pub label: String,
    objects: Vec<FinAbGroup>,
    /// `maps[a * n + b][i]` is the image of generator `i` of `hom(a, b)`.
    maps: Vec<Vec<GroupHom>>,
    defined: Vec<bool>,
}

impl std::fmt::Debug for HomFunctor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HomFunctor")
            .field("label", &self.label)
            .field("objects", &self.objects)
            .finish_non_exhaustive()
    }
}

impl HomFunctor {
    /// Builds the table from per-object groups and a per-generator rule,
    /// consulted only between defined objects.
    pub fn tabulate(
        label: impl Into<String>,
        p: &CatPresentation,
        defined: Vec<bool>,
        mut on_object: impl FnMut(ObjId) -> FinAbGroup,
        mut on_generator: impl FnMut(&Morphism) -> Result<GroupHom>,
    ) -> Result<Self> {
        let n = p.len();
        let objects: Vec<FinAbGroup> = (0..n)
            .map(|a| if defined[a] { on_object(a) } else { FinAbGroup::trivial() })
            .collect();
        let mut maps = vec![Vec::new(); n * n];
        for a in p.objects().filter(|&a| defined[a]) {
            for b in p.objects().filter(|&b| defined[b]) {
                for i in 0..p.hom(a, b).rank() {
                    let m = on_generator(&p.generator(a, b, i))?;
                    if (m.domain(), m.codomain()) != (&objects[a], &objects[b]) {
                        return Err(Error::BadHom(format!("image of generator {i} of hom({a}, {b})")));
                    }
                    maps[a * n + b].push(m);
                }
            }
        }
        Ok(HomFunctor { label: label.into(), objects, maps, defined })
    }

    /// `T(A, −)`
    pub fn representable(p: &CatPresentation, a: ObjId) -> Self {
        Self::tabulate(
            format!("T({}, -)", p.name(a)),
            p,
            vec![true; p.len()],
            |b| p.hom(a, b).clone(),
            |g| Ok(p.postcompose_map(g, a)),
        )
        .expect("representable is well formed")
    }

    pub fn zero(p: &CatPresentation) -> Self {
        Self::constant(p, FinAbGroup::trivial())
    }

    /// The same group at every object with all maps zero. Not a functor
    /// unless the group is trivial; useful to exercise the checks.
    pub fn constant(p: &CatPresentation, g: FinAbGroup) -> Self {
        Self::tabulate(
            format!("const {g}"),
            p,
            vec![true; p.len()],
            |_| g.clone(),
            |_| Ok(GroupHom::zero(g.clone(), g.clone())),
        )
        .expect("constant table")
    }

    pub fn direct_sum(&self, other: &HomFunctor, p: &CatPresentation) -> Result<Self> {
        let n = p.len();
        let sums: Vec<_> = (0..n).map(|a| direct_sum(&[self.group(a).clone(), other.group(a).clone()])).collect();
        let defined = (0..n).map(|a| self.defined[a] && other.defined[a]).collect();
        Self::tabulate(
            format!("{} + {}", self.label, other.label),
            p,
            defined,
            |a| sums[a].group.clone(),
            |g| {
                let (sa, sb) = (&sums[g.src], &sums[g.dst]);
                let left = sb.injections[0].compose(&self.map(g)?)?.compose(&sa.projections[0])?;
                let right = sb.injections[1].compose(&other.map(g)?)?.compose(&sa.projections[1])?;
                left.add(&right)
            },
        )
    }

    /// The restriction to the objects marked in `keep`.
    pub fn restrict(&self, keep: &[bool], p: &CatPresentation) -> Self {
        let defined = (0..p.len()).map(|a| keep[a] && self.defined[a]).collect();
        Self::tabulate(
            format!("{}|", self.label),
            p,
            defined,
            |a| self.objects[a].clone(),
            |g| self.map(g),
        )
        .expect("restriction of a well formed table")
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn group(&self, a: ObjId) -> &FinAbGroup {
        &self.objects[a]
    }

    pub fn is_defined(&self, a: ObjId) -> bool {
        self.defined[a]
    }

    pub fn is_total(&self) -> bool {
        self.defined.iter().all(|&d| d)
    }

    pub fn vanishes(&self) -> bool {
        self.objects.iter().all(FinAbGroup::is_trivial)
    }

    /// Image of an arbitrary morphism, extended additively from generators.
    pub fn map(&self, f: &Morphism) -> Result<GroupHom> {
        let n = self.len();
        if !self.defined[f.src] || !self.defined[f.dst] {
            return Err(Error::IncompleteFunctor(format!("{} at {f:?}", self.label)));
        }
        let (dom, cod) = (self.objects[f.src].clone(), self.objects[f.dst].clone());
        let gens = &self.maps[f.src * n + f.dst];
        let mut out = GroupHom::zero(dom, cod);
        for (m, &c) in gens.iter().zip(&f.coords) {
            if c != 0 {
                out = out.add(&m.scale(c))?;
            }
        }
        Ok(out)
    }
}

impl Functor for HomFunctor {
    fn on_object(&self, c: ObjId) -> FinAbGroup {
        self.objects[c].clone()
    }

    fn on_morphism(&self, r: &Morphism) -> GroupHom {
        self.map(r).expect("morphism between defined objects")
    }
}

/// Every available distinguished triangle, up to the choice made by the
/// cone source.
pub fn all_triangles(p: &CatPresentation) -> Vec<Triangle> {
    if let ConeSource::Database(ts) = p.cone_source() {
        return ts.clone();
    }
    let mut out = Vec::new();
    for a in p.objects() {
        for b in p.objects() {
            out.extend(p.morphisms(a, b).filter_map(|f| p.cone(&f).ok()));
        }
    }
    out
}

/// Functoriality on generators, units, additivity on biproducts and
/// exactness on every available triangle (at each of its three vertices).
pub fn check_homological(f: &HomFunctor, p: &CatPresentation) -> CheckReport {
    check_homological_on(f, p, &all_triangles(p))
}

pub fn check_homological_on(f: &HomFunctor, p: &CatPresentation, triangles: &[Triangle]) -> CheckReport {
    let mut r = CheckReport::new(format!("homological {}", f.label));
    let defined: Vec<ObjId> = p.objects().filter(|&a| f.is_defined(a)).collect();
    for &a in &defined {
        r.check(
            f.map(&p.identity(a)).ok() == Some(GroupHom::identity(f.group(a).clone())),
            || format!("F(id) ≠ id at {}", p.name(a)),
        );
    }
    for &a in &defined {
        for &b in &defined {
            for i in 0..p.hom(a, b).rank() {
                let g1 = p.generator(a, b, i);
                for &c in &defined {
                    for j in 0..p.hom(b, c).rank() {
                        let g2 = p.generator(b, c, j);
                        let lhs = p.compose(&g2, &g1).and_then(|m| f.map(&m));
                        let rhs = f.map(&g2).and_then(|m| m.compose(&f.map(&g1)?));
                        r.check(lhs.is_ok() && lhs == rhs, || {
                            format!("F not functorial on {g1:?} then {g2:?}")
                        });
                    }
                }
            }
        }
    }
    if let Some(table) = p.biproduct_table() {
        for bp in table.iter().flatten() {
            if !(f.is_defined(bp.i1.src) && f.is_defined(bp.i2.src) && f.is_defined(bp.obj)) {
                continue;
            }
            let sum = (|| {
                let x = f.map(&bp.i1)?.compose(&f.map(&bp.p1)?)?;
                x.add(&f.map(&bp.i2)?.compose(&f.map(&bp.p2)?)?)
            })();
            r.check(sum.ok() == Some(GroupHom::identity(f.group(bp.obj).clone())), || {
                format!("F not additive on biproduct {}", p.name(bp.obj))
            });
        }
    }
    for t in triangles {
        let sx = p.suspend_obj(t.x, 1);
        if ![t.x, t.y, t.z, sx].iter().all(|&o| f.is_defined(o)) {
            continue;
        }
        let nsf = p.neg(&p.suspend(&t.f, 1));
        for (u, v) in [(&t.f, &t.g), (&t.g, &t.h), (&t.h, &nsf)] {
            let exact = f
                .map(u)
                .and_then(|fu| homology_at(&fu, &f.map(v)?))
                .map(|h| h.is_trivial());
            r.check(exact == Ok(true), || format!("F not exact at {u:?}, {v:?}"));
        }
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NatTransformation {
    /// Component at each object; `None` where either functor is undefined.
    pub components: Vec<Option<GroupHom>>,
}

impl NatTransformation {
    pub fn component(&self, a: ObjId) -> Option<&GroupHom> {
        self.components[a].as_ref()
    }

    /// `T(A, −) ⇒ T(A', −)` given by precomposition with `u: A' → A`.
    pub fn precomposition(p: &CatPresentation, u: &Morphism) -> Self {
        NatTransformation {
            components: p.objects().map(|b| Some(p.precompose_map(u, b))).collect(),
        }
    }

    pub fn identity(f: &HomFunctor) -> Self {
        NatTransformation {
            components: (0..f.len())
                .map(|a| f.is_defined(a).then(|| GroupHom::identity(f.group(a).clone())))
                .collect(),
        }
    }

    pub fn zero(f: &HomFunctor, g: &HomFunctor) -> Self {
        NatTransformation {
            components: (0..f.len())
                .map(|a| {
                    (f.is_defined(a) && g.is_defined(a))
                        .then(|| GroupHom::zero(f.group(a).clone(), g.group(a).clone()))
                })
                .collect(),
        }
    }

    /// Every defined component is an isomorphism.
    pub fn is_invertible(&self) -> bool {
        self.components.iter().flatten().all(GroupHom::is_isomorphism)
    }

    pub fn compose(&self, other: &NatTransformation) -> Result<Self> {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => a.compose(b).map(Some),
                _ => Ok(None),
            })
            .collect::<Result<_>>()?;
        Ok(NatTransformation { components })
    }

    /// Naturality squares on generators, and matching domains and codomains.
    pub fn check_natural(&self, src: &HomFunctor, dst: &HomFunctor, p: &CatPresentation) -> CheckReport {
        let mut r = CheckReport::new("naturality");
        for a in p.objects() {
            if let Some(c) = self.component(a) {
                r.check(c.domain() == src.group(a) && c.codomain() == dst.group(a), || {
                    format!("component at {} has wrong endpoints", p.name(a))
                });
            }
        }
        for a in p.objects() {
            for b in p.objects() {
                let (Some(ca), Some(cb)) = (self.component(a), self.component(b)) else {
                    continue;
                };
                for i in 0..p.hom(a, b).rank() {
                    let g = p.generator(a, b, i);
                    let lhs = src.map(&g).and_then(|m| cb.compose(&m));
                    let rhs = dst.map(&g).and_then(|m| m.compose(ca));
                    r.check(lhs.is_ok() && lhs == rhs, || format!("square fails on {g:?}"));
                }
            }
        }
        r
    }
}

/// The leg `F(t.dst) → colim_{Wo(B)} F` of a weak equivalence `t` out of
/// `B`, pushed into the diagram when `t` itself is not an object.
pub(crate) fn wo_leg(
    p: &CatPresentation,
    wo: &MorphismDiagram,
    colim: &Colimit,
    t: &Morphism,
    f: &dyn Functor,
) -> Result<GroupHom> {
    if let Some(j) = wo.index_of(t) {
        return Ok(colim.cocone[j].clone());
    }
    for (j, sj) in wo.objects.iter().enumerate() {
        if let Some(x) = solve(&p.precompose_map(t, sj.dst), &sj.coords) {
            let q = p.morphism(t.dst, sj.dst, x)?;
            return colim.cocone[j].compose(&f.on_morphism(&q));
        }
    }
    Err(Error::NotInDiagram(format!("{t:?}")))
}

#[derive(Clone, Debug)]
pub struct RightLocalisation {
    pub functor: HomFunctor,
    /// `F ⇒ RF`
    pub unit: NatTransformation,
    pub colimits: Vec<Colimit>,
}

/// `RF(B) = colim_{Wo(B)} F(C)`.
pub fn right_localise(f: &HomFunctor, set: &Setting) -> Result<RightLocalisation> {
    let p = set.cat();
    if !f.is_total() {
        return Err(Error::IncompleteFunctor(f.label.clone()));
    }
    let mut colimits = Vec::with_capacity(p.len());
    for b in p.objects() {
        colimits.push(set.wo(b)?.colimit_of(f)?);
    }
    let functor = HomFunctor::tabulate(
        format!("R({})", f.label),
        p,
        vec![true; p.len()],
        |b| colimits[b].group.clone(),
        |g| {
            let (src, dst) = (set.wo(g.src)?, set.wo(g.dst)?);
            let family = src
                .objects
                .iter()
                .map(|s| {
                    let sq = ore_square(s, g, set)?;
                    wo_leg(p, &dst, &colimits[g.dst], &sq.t, f)?.compose(&f.map(&sq.g)?)
                })
                .collect::<Result<Vec<_>>>()?;
            colimits[g.src].map_out(&colimits[g.dst].group, &family)
        },
    )?;
    let unit = p
        .objects()
        .map(|b| {
            let wo = set.wo(b)?;
            wo_leg(p, &wo, &colimits[b], &p.identity(b), f).map(Some)
        })
        .collect::<Result<_>>()?;
    Ok(RightLocalisation { functor, unit: NatTransformation { components: unit }, colimits })
}

#[derive(Clone, Debug)]
pub struct RightColocalisation {
    pub functor: HomFunctor,
    /// `R⊥F ⇒ F`, with components only where `F` is defined.
    pub counit: NatTransformation,
    pub colimits: Vec<Colimit>,
}

/// `R⊥F(B) = colim_{Subo(B)} F(E)`. Needs `F` only on the subcategory.
pub fn right_colocalise(f: &HomFunctor, set: &Setting) -> Result<RightColocalisation> {
    let p = set.cat();
    if let Some(m) = set.thick().members().into_iter().find(|&m| !f.is_defined(m)) {
        return Err(Error::IncompleteFunctor(format!("{} at {}", f.label, p.name(m))));
    }
    let mut colimits = Vec::with_capacity(p.len());
    for b in p.objects() {
        colimits.push(set.subo(b)?.colimit_of(f)?);
    }
    let functor = HomFunctor::tabulate(
        format!("R⊥({})", f.label),
        p,
        vec![true; p.len()],
        |b| colimits[b].group.clone(),
        |g| {
            let (src, dst) = (set.subo(g.src)?, set.subo(g.dst)?);
            let family = src
                .objects
                .iter()
                .map(|e| {
                    let j = dst
                        .index_of(&p.compose(g, e)?)
                        .ok_or_else(|| Error::NotInDiagram(format!("{g:?}∘{e:?}")))?;
                    Ok(colimits[g.dst].cocone[j].clone())
                })
                .collect::<Result<Vec<_>>>()?;
            colimits[g.src].map_out(&colimits[g.dst].group, &family)
        },
    )?;
    let counit = p
        .objects()
        .map(|b| {
            if !f.is_defined(b) {
                return Ok(None);
            }
            let d = set.subo(b)?;
            let family = d.objects.iter().map(|e| f.map(e)).collect::<Result<Vec<_>>>()?;
            colimits[b].map_out(f.group(b), &family).map(Some)
        })
        .collect::<Result<_>>()?;
    Ok(RightColocalisation { functor, counit: NatTransformation { components: counit }, colimits })
}

/// The colocal extension of a functor given on the subcategory.
pub fn extend_from_sub(f0: &HomFunctor, set: &Setting) -> Result<HomFunctor> {
    let mut ext = right_colocalise(f0, set)?.functor;
    ext.label = format!("ext({})", f0.label);
    Ok(ext)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalVerdict {
    /// The unit `F ⇒ RF` is invertible.
    pub unit_invertible: bool,
    /// `F` vanishes on the subcategory.
    pub vanishes_on_sub: bool,
    /// `F` inverts every enumerated weak equivalence.
    pub inverts_weak: bool,
}

impl LocalVerdict {
    pub fn is_local(&self) -> bool {
        self.unit_invertible
    }

    pub fn agree(&self) -> bool {
        self.unit_invertible == self.vanishes_on_sub && self.vanishes_on_sub == self.inverts_weak
    }
}

pub fn is_local(f: &HomFunctor, set: &Setting) -> Result<LocalVerdict> {
    let p = set.cat();
    let rf = right_localise(f, set)?;
    let vanishes_on_sub = set.thick().members().iter().all(|&m| f.group(m).is_trivial());
    let mut inverts_weak = true;
    'outer: for b in p.objects() {
        for s in &set.wo(b)?.objects {
            if !f.map(s)?.is_isomorphism() {
                inverts_weak = false;
                break 'outer;
            }
        }
    }
    Ok(LocalVerdict { unit_invertible: rf.unit.is_invertible(), vanishes_on_sub, inverts_weak })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColocalVerdict {
    pub counit_invertible: bool,
    pub localisation_vanishes: bool,
}

impl ColocalVerdict {
    pub fn is_colocal(&self) -> bool {
        self.counit_invertible
    }

    pub fn agree(&self) -> bool {
        self.counit_invertible == self.localisation_vanishes
    }
}

pub fn is_colocal(f: &HomFunctor, set: &Setting) -> Result<ColocalVerdict> {
    Ok(ColocalVerdict {
        counit_invertible: right_colocalise(f, set)?.counit.is_invertible(),
        localisation_vanishes: right_localise(f, set)?.functor.vanishes(),
    })
}

/// `RΦ: RF ⇒ RG`.
pub fn localised_transformation(
    phi: &NatTransformation,
    rf: &RightLocalisation,
    rg: &RightLocalisation,
    set: &Setting,
) -> Result<NatTransformation> {
    let p = set.cat();
    let components = p
        .objects()
        .map(|b| {
            let wo = set.wo(b)?;
            let family = wo
                .objects
                .iter()
                .enumerate()
                .map(|(i, s)| rg.colimits[b].cocone[i].compose(component(phi, s.dst)?))
                .collect::<Result<Vec<_>>>()?;
            rf.colimits[b].map_out(&rg.colimits[b].group, &family).map(Some)
        })
        .collect::<Result<_>>()?;
    Ok(NatTransformation { components })
}

/// `R⊥Φ: R⊥F ⇒ R⊥G`.
pub fn colocalised_transformation(
    phi: &NatTransformation,
    rf: &RightColocalisation,
    rg: &RightColocalisation,
    set: &Setting,
) -> Result<NatTransformation> {
    let p = set.cat();
    let components = p
        .objects()
        .map(|b| {
            let d = set.subo(b)?;
            let family = d
                .objects
                .iter()
                .enumerate()
                .map(|(i, e)| rg.colimits[b].cocone[i].compose(component(phi, e.src)?))
                .collect::<Result<Vec<_>>>()?;
            rf.colimits[b].map_out(&rg.colimits[b].group, &family).map(Some)
        })
        .collect::<Result<_>>()?;
    Ok(NatTransformation { components })
}

fn component(phi: &NatTransformation, a: ObjId) -> Result<&GroupHom> {
    phi.component(a)
        .ok_or_else(|| Error::IncompleteFunctor(format!("transformation at object {a}")))
}

/// How the factorisation through `RF` is assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorPolicy {
    /// `Φ` at each diagram object followed by the inverse of `G(s)`.
    InvertStructureMaps,
    /// `RΦ` followed by the inverse of the unit of `G`.
    InvertUnit,
}

fn factor_with(
    phi: &NatTransformation,
    f: &HomFunctor,
    g: &HomFunctor,
    set: &Setting,
    policy: FactorPolicy,
) -> Result<NatTransformation> {
    let p = set.cat();
    let rf = right_localise(f, set)?;
    let components = match policy {
        FactorPolicy::InvertStructureMaps => p
            .objects()
            .map(|b| {
                let wo = set.wo(b)?;
                let family = wo
                    .objects
                    .iter()
                    .map(|s| {
                        let inv = g.map(s)?.inverse().ok_or_else(|| {
                            Error::NotLocal(format!("{} does not invert {s:?}", g.label))
                        })?;
                        inv.compose(component(phi, s.dst)?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                rf.colimits[b].map_out(g.group(b), &family).map(Some)
            })
            .collect::<Result<_>>()?,
        FactorPolicy::InvertUnit => {
            let rg = right_localise(g, set)?;
            let rphi = localised_transformation(phi, &rf, &rg, set)?;
            p.objects()
                .map(|b| {
                    let inv = rg.unit.components[b]
                        .as_ref()
                        .and_then(GroupHom::inverse)
                        .ok_or_else(|| Error::NotLocal(format!("unit of {} at {b}", g.label)))?;
                    inv.compose(component(&rphi, b)?).map(Some)
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(NatTransformation { components })
}

/// The unique `Φ': RF ⇒ G` with `Φ'∘unit = Φ`, for `G` local. Both
/// assembly policies are computed and must agree.
pub fn factor_through_localisation(
    phi: &NatTransformation,
    f: &HomFunctor,
    g: &HomFunctor,
    set: &Setting,
) -> Result<NatTransformation> {
    if !is_local(g, set)?.is_local() {
        return Err(Error::NotLocal(g.label.clone()));
    }
    let a = factor_with(phi, f, g, set, FactorPolicy::InvertStructureMaps)?;
    let b = factor_with(phi, f, g, set, FactorPolicy::InvertUnit)?;
    if a != b {
        return Err(Error::Validation(vec!["factorisation depends on the assembly policy".into()]));
    }
    Ok(a)
}

#[cfg(test)]
mod tests;
