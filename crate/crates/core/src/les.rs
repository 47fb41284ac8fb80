//! The category `Tria(B)` of triangles `E → B → C → σE` with `E` in the
//! subcategory, and the long exact sequence
//! `… → R⊥F(B[k]) → F(B[k]) → RF(B[k]) → R⊥F(B[k+1]) → …`
//! assembled as a colimit over it.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::abgroup::{colimit, homology_at, Colimit, FinAbGroup, FiniteDiagram, GroupHom};
use crate::category::{Morphism, ObjId, Triangle};
use crate::derived::{
    colocalised_transformation, localised_transformation, right_colocalise, right_localise, wo_leg,
    HomFunctor, NatTransformation, RightColocalisation, RightLocalisation,
};
use crate::error::{Error, Result};
use crate::fractions::{ore_equalize, ore_square};
use crate::functor::{all_solutions, joint_solutions, Functor};
use crate::report::CheckReport;
use crate::setting::Setting;

#[derive(Clone, Debug)]
pub struct TriaArrow {
    pub src: usize,
    pub dst: usize,
    /// Component on the first vertex.
    pub a: Morphism,
    /// Component on the third vertex.
    pub c: Morphism,
}

#[derive(Clone, Debug)]
pub struct TriaDiagram {
    pub base: ObjId,
    pub objects: Vec<Triangle>,
    pub arrows: Vec<TriaArrow>,
    /// Maps from the subcategory whose cone is outside the object set.
    pub skipped: usize,
}

impl TriaDiagram {
    fn arrows_between(&self, i: usize, j: usize) -> impl Iterator<Item = &TriaArrow> + '_ {
        self.arrows.iter().filter(move |r| r.src == i && r.dst == j)
    }

    /// `T ↦ F(third vertex)` with arrows `F(c)`.
    pub fn third_vertex<F: Functor + ?Sized>(&self, f: &F) -> FiniteDiagram {
        let mut d = FiniteDiagram::new(self.objects.iter().map(|t| f.on_object(t.z)).collect());
        for r in &self.arrows {
            d.add_arrow(r.src, r.dst, f.on_morphism(&r.c));
        }
        d
    }

    /// `T ↦ F(first vertex)` with arrows `F(a)`.
    pub fn first_vertex<F: Functor + ?Sized>(&self, f: &F) -> FiniteDiagram {
        let mut d = FiniteDiagram::new(self.objects.iter().map(|t| f.on_object(t.x)).collect());
        for r in &self.arrows {
            d.add_arrow(r.src, r.dst, f.on_morphism(&r.a));
        }
        d
    }
}

/// Cones of the maps in `Subo(B)` together with the back-rotated cones of
/// the maps in `Wo(B)`, and every triangle morphism between them that is
/// the identity on `B`.
pub fn enumerate_tria(b: ObjId, set: &Setting) -> Result<TriaDiagram> {
    let p = set.cat();
    let mut objects = BTreeSet::new();
    let mut skipped = 0;
    for e in &set.subo(b)?.objects {
        match p.cone(e) {
            Ok(t) => {
                objects.insert(t);
            }
            Err(Error::MissingCone(_)) => skipped += 1,
            Err(err) => return Err(err),
        }
    }
    for s in &set.wo(b)?.objects {
        objects.insert(p.rotate_back(&p.cone(s)?));
    }
    let objects: Vec<Triangle> = objects.into_iter().collect();
    let mut arrows = Vec::new();
    for (i, ti) in objects.iter().enumerate() {
        for (j, tj) in objects.iter().enumerate() {
            for xa in all_solutions(&p.postcompose_map(&tj.f, ti.x), &ti.f.coords) {
                let a = p.morphism(ti.x, tj.x, xa)?;
                let rhs = p.compose(&p.suspend(&a, 1), &ti.h)?;
                let pc = p.precompose_map(&ti.g, tj.z);
                let qc = p.postcompose_map(&tj.h, ti.z);
                for xc in joint_solutions(&pc, &qc, &tj.g.coords, &rhs.coords) {
                    let c = p.morphism(ti.z, tj.z, xc)?;
                    arrows.push(TriaArrow { src: i, dst: j, a: a.clone(), c });
                }
            }
        }
    }
    Ok(TriaDiagram { base: b, objects, arrows, skipped })
}

/// The forgetful functors to `Wo(B)` and `Subo(B)` are surjective on
/// objects and arrows.
pub fn tria_forgetful_check(b: ObjId, set: &Setting) -> Result<CheckReport> {
    let p = set.cat();
    let (tria, wo, subo) = (set.tria(b)?, set.wo(b)?, set.subo(b)?);
    let mut r = CheckReport::new(format!("Tria({}) forgetful", p.name(b)));
    let over_wo = |k: usize| -> Vec<usize> {
        (0..tria.objects.len()).filter(|&t| tria.objects[t].g == wo.objects[k]).collect()
    };
    let over_subo = |k: usize| -> Vec<usize> {
        (0..tria.objects.len()).filter(|&t| tria.objects[t].f == subo.objects[k]).collect()
    };
    for k in 0..wo.objects.len() {
        r.check(!over_wo(k).is_empty(), || format!("Wo object {:?} unreached", wo.objects[k]));
    }
    // a map whose cone lies outside the object set sits in no representable
    // triangle, so neither it nor its arrows can be checked
    let representable: Vec<bool> = subo.objects.iter().map(|e| p.cone(e).is_ok()).collect();
    for k in 0..subo.objects.len() {
        if !representable[k] {
            r.unverifiable(format!("Subo object {:?}: cone outside the object set", subo.objects[k]));
            continue;
        }
        r.check(!over_subo(k).is_empty(), || format!("Subo object {:?} unreached", subo.objects[k]));
    }
    for (i, j, m) in &wo.arrows {
        let (si, sj) = (over_wo(*i), over_wo(*j));
        let hit = tria
            .arrows
            .iter()
            .any(|t| si.contains(&t.src) && sj.contains(&t.dst) && t.c == *m);
        r.check(hit, || format!("Wo arrow {m:?} unreached"));
    }
    for (i, j, m) in &subo.arrows {
        if !(representable[*i] && representable[*j]) {
            r.unverifiable(format!("Subo arrow {m:?}: endpoint cone outside the object set"));
            continue;
        }
        let (si, sj) = (over_subo(*i), over_subo(*j));
        let hit = tria
            .arrows
            .iter()
            .any(|t| si.contains(&t.src) && sj.contains(&t.dst) && t.a == *m);
        r.check(hit, || format!("Subo arrow {m:?} unreached"));
    }
    Ok(r)
}

pub fn tria_filtered_witness(b: ObjId, set: &Setting) -> Result<CheckReport> {
    let p = set.cat();
    let tria = set.tria(b)?;
    let n = tria.objects.len();
    let mut r = CheckReport::new(format!("Tria({}) filtered", p.name(b)));
    let index = |t: &Triangle| tria.objects.iter().position(|x| x == t);
    let reaches = |i: usize, k: usize| tria.arrows_between(i, k).next().is_some();
    for i in 0..n {
        for j in i + 1..n {
            let (ti, tj) = (&tria.objects[i], &tria.objects[j]);
            // dominate both third maps by an Ore square, then complete
            let found = match ore_square(&ti.g, &tj.g, set) {
                Ok(sq) => {
                    let top = p.compose(&sq.t, &tj.g)?;
                    let target = p.cone(&top).ok().and_then(|t| index(&p.rotate_back(&t)));
                    match target {
                        Some(k) => {
                            tria.arrows_between(i, k).any(|x| x.c == sq.g)
                                && tria.arrows_between(j, k).any(|x| x.c == sq.t)
                        }
                        None => (0..n).any(|k| reaches(i, k) && reaches(j, k)),
                    }
                }
                Err(_) => false,
            };
            r.check(found, || format!("F1 fails for triangles {i} and {j}"));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let par: Vec<&TriaArrow> = tria.arrows_between(i, j).collect();
            for (x, u) in par.iter().enumerate() {
                for v in &par[x + 1..] {
                    let equalises = |w: &TriaArrow| {
                        p.compose(&w.a, &u.a).ok() == p.compose(&w.a, &v.a).ok()
                            && p.compose(&w.c, &u.c).ok() == p.compose(&w.c, &v.c).ok()
                    };
                    let ti = &tria.objects[i];
                    let found = match ore_equalize(&u.c, &v.c, &ti.g, set) {
                        Ok((t, _)) => {
                            let top = p.compose(&t, &tria.objects[j].g)?;
                            let target = p.cone(&top).ok().and_then(|c| index(&p.rotate_back(&c)));
                            let direct = target.is_some_and(|k| {
                                tria.arrows_between(j, k).any(|w| w.c == t && equalises(w))
                            });
                            direct || (0..n).any(|k| tria.arrows_between(j, k).any(equalises))
                        }
                        Err(_) => false,
                    };
                    r.check(found, || format!("F2 fails for parallel arrows {i} → {j}"));
                }
            }
        }
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    Colocalised,
    Ambient,
    Localised,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesNode {
    pub kind: NodeKind,
    /// Absolute shift `k` of the argument `B[k]`.
    pub shift: i64,
    /// Subscript label `n = -k`.
    pub n: i64,
    pub object: String,
    pub group: FinAbGroup,
}

#[derive(Clone, Debug, Serialize)]
pub struct LesReport {
    pub functor: String,
    pub base: String,
    pub period: usize,
    pub nodes: Vec<LesNode>,
    /// `maps[i]: nodes[i] → nodes[i + 1]`.
    pub maps: Vec<GroupHom>,
    /// Exactness at each node; `None` at the two ends.
    pub exact: Vec<Option<bool>>,
    /// The colimits over `Tria(B[k])` agree with those over `Wo` and `Subo`.
    pub comparison_isomorphic: bool,
}

pub fn default_window(set: &Setting) -> Vec<i64> {
    (-1..=set.cat().sigma_order() as i64).collect()
}

/// A functor with its localisations, reused across base objects.
pub struct LesBuilder<'a> {
    pub set: &'a Setting,
    pub f: HomFunctor,
    pub rf: RightLocalisation,
    pub rc: RightColocalisation,
}

impl<'a> LesBuilder<'a> {
    pub fn new(f: HomFunctor, set: &'a Setting) -> Result<Self> {
        let rf = right_localise(&f, set)?;
        let rc = right_colocalise(&f, set)?;
        Ok(LesBuilder { set, f, rf, rc })
    }

    /// `RF(B) → R⊥F(σB)` as the colimit over `Tria(B)` of `F(h)`, and whether
    /// the comparison maps from the `Tria` colimits are isomorphisms.
    pub fn connecting(&self, b: ObjId) -> Result<(GroupHom, bool)> {
        let p = self.set.cat();
        let tria = self.set.tria(b)?;
        let sb = p.suspend_obj(b, 1);
        let (wo, subo, subo_s) = (self.set.wo(b)?, self.set.subo(b)?, self.set.subo(sb)?);
        let third: Colimit = colimit(&tria.third_vertex(&self.f))?;
        let first: Colimit = colimit(&tria.first_vertex(&self.f))?;
        let mut to_rf = Vec::new();
        let mut to_rc = Vec::new();
        let mut delta = Vec::new();
        for t in &tria.objects {
            to_rf.push(wo_leg(p, &wo, &self.rf.colimits[b], &t.g, &self.f)?);
            let i = subo.index_of(&t.f).ok_or_else(|| Error::NotInDiagram(format!("{:?}", t.f)))?;
            to_rc.push(self.rc.colimits[b].cocone[i].clone());
            let se = p.suspend(&t.f, 1);
            let k = subo_s.index_of(&se).ok_or_else(|| Error::NotInDiagram(format!("{se:?}")))?;
            delta.push(self.rc.colimits[sb].cocone[k].compose(&self.f.map(&t.h)?)?);
        }
        let kappa = third.map_out(&self.rf.colimits[b].group, &to_rf)?;
        let lambda = first.map_out(&self.rc.colimits[b].group, &to_rc)?;
        let phi = third.map_out(&self.rc.colimits[sb].group, &delta)?;
        let ok = kappa.is_isomorphism() && lambda.is_isomorphism();
        let inv = kappa
            .inverse()
            .ok_or_else(|| Error::Validation(vec![format!("Tria({}) comparison not invertible", p.name(b))]))?;
        Ok((phi.compose(&inv)?, ok))
    }

    pub fn build(&self, b: ObjId, window: &[i64]) -> Result<LesReport> {
        let p = self.set.cat();
        let mut nodes = Vec::new();
        let mut maps = Vec::new();
        let mut comparison_isomorphic = true;
        for (w, &k) in window.iter().enumerate() {
            let bk = p.suspend_obj(b, k);
            let node = |kind, group: &FinAbGroup| LesNode {
                kind,
                shift: k,
                n: -k,
                object: p.name(bk).to_string(),
                group: group.clone(),
            };
            nodes.push(node(NodeKind::Colocalised, self.rc.functor.group(bk)));
            nodes.push(node(NodeKind::Ambient, self.f.group(bk)));
            nodes.push(node(NodeKind::Localised, self.rf.functor.group(bk)));
            maps.push(self.rc.counit.component(bk).cloned().ok_or_else(|| {
                Error::IncompleteFunctor(format!("counit at {}", p.name(bk)))
            })?);
            maps.push(self.rf.unit.component(bk).cloned().expect("unit is total"));
            if w + 1 < window.len() {
                if window[w + 1] != k + 1 {
                    return Err(Error::Validation(vec!["window must be consecutive shifts".into()]));
                }
                let (d, ok) = self.connecting(bk)?;
                comparison_isomorphic &= ok;
                maps.push(d);
            }
        }
        let exact = exactness(&maps, nodes.len());
        Ok(LesReport {
            functor: self.f.label.clone(),
            base: p.name(b).to_string(),
            period: p.sigma_order(),
            nodes,
            maps,
            exact,
            comparison_isomorphic,
        })
    }
}

fn exactness(maps: &[GroupHom], len: usize) -> Vec<Option<bool>> {
    (0..len)
        .map(|i| {
            if i == 0 || i + 1 >= len {
                return None;
            }
            Some(homology_at(&maps[i - 1], &maps[i]).is_ok_and(|h| h.is_trivial()))
        })
        .collect()
}

pub fn build_les(f: &HomFunctor, b: ObjId, set: &Setting, window: &[i64]) -> Result<LesReport> {
    LesBuilder::new(f.clone(), set)?.build(b, window)
}

/// Whether every interior node is exact, and the first that is not.
pub fn verify_exact(r: &LesReport) -> (bool, Option<usize>) {
    let fresh = exactness(&r.maps, r.nodes.len());
    match fresh.iter().position(|e| *e == Some(false)) {
        Some(i) => (false, Some(i)),
        None => (true, None),
    }
}

pub fn hom_les(a: ObjId, b: ObjId, set: &Setting, window: &[i64]) -> Result<LesReport> {
    build_les(&HomFunctor::representable(set.cat(), a), b, set, window)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalityCriterion {
    pub local: bool,
    pub colocalisation_vanishes: bool,
    pub colocal: bool,
    pub localisation_vanishes: bool,
}

impl LocalityCriterion {
    pub fn agree(&self) -> bool {
        self.local == self.colocalisation_vanishes && self.colocal == self.localisation_vanishes
    }
}

pub fn locality_criterion(f: &HomFunctor, set: &Setting) -> Result<LocalityCriterion> {
    let rf = right_localise(f, set)?;
    let rc = right_colocalise(f, set)?;
    Ok(LocalityCriterion {
        local: rf.unit.is_invertible(),
        colocalisation_vanishes: rc.functor.vanishes(),
        colocal: rc.counit.is_invertible(),
        localisation_vanishes: rf.functor.vanishes(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvertibilityVerdict {
    pub invertible: bool,
    pub localised_invertible: bool,
    pub colocalised_invertible: bool,
    /// When both derived transformations are invertible: the two long exact
    /// sequences are exact and the ladder between them commutes.
    pub ladder_ok: Option<bool>,
}

impl InvertibilityVerdict {
    pub fn agree(&self) -> bool {
        self.invertible == (self.localised_invertible && self.colocalised_invertible)
            && self.ladder_ok != Some(false)
    }
}

/// `Φ: F ⇒ G` is invertible iff `RΦ` and `R⊥Φ` are.
pub fn nat_invertibility(
    phi: &NatTransformation,
    f: &HomFunctor,
    g: &HomFunctor,
    set: &Setting,
) -> Result<InvertibilityVerdict> {
    let lf = LesBuilder::new(f.clone(), set)?;
    let lg = LesBuilder::new(g.clone(), set)?;
    let r_phi = localised_transformation(phi, &lf.rf, &lg.rf, set)?;
    let c_phi = colocalised_transformation(phi, &lf.rc, &lg.rc, set)?;
    let mut v = InvertibilityVerdict {
        invertible: phi.is_invertible(),
        localised_invertible: r_phi.is_invertible(),
        colocalised_invertible: c_phi.is_invertible(),
        ladder_ok: None,
    };
    if v.localised_invertible && v.colocalised_invertible {
        let window = [0, 1];
        let mut ok = true;
        for b in set.cat().objects() {
            let (rf, rg) = (lf.build(b, &window)?, lg.build(b, &window)?);
            ok &= verify_exact(&rf).0 && verify_exact(&rg).0;
            let p = set.cat();
            let vertical: Vec<&GroupHom> = rf
                .nodes
                .iter()
                .map(|n| {
                    let o = p.suspend_obj(b, n.shift);
                    match n.kind {
                        NodeKind::Colocalised => c_phi.component(o),
                        NodeKind::Ambient => phi.component(o),
                        NodeKind::Localised => r_phi.component(o),
                    }
                    .ok_or_else(|| Error::IncompleteFunctor(format!("transformation at {o}")))
                })
                .collect::<Result<_>>()?;
            for (i, (mf, mg)) in rf.maps.iter().zip(&rg.maps).enumerate() {
                ok &= vertical[i + 1].compose(mf)? == mg.compose(vertical[i])?;
            }
        }
        v.ladder_ok = Some(ok);
    }
    Ok(v)
}
