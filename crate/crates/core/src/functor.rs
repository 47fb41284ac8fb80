//! Covariant additive functors into finite abelian groups, and diagrams of
//! morphisms over which they are colimited.

use std::collections::HashMap;
use std::sync::Arc;

use crate::abgroup::{colimit, Colimit, FinAbGroup, FiniteDiagram, GroupHom};
use crate::category::{CatPresentation, Morphism, ObjId};
use crate::error::Result;

pub trait Functor {
    fn on_object(&self, c: ObjId) -> FinAbGroup;
    fn on_morphism(&self, r: &Morphism) -> GroupHom;
}

/// `T(A, −)`
#[derive(Clone, Debug)]
pub struct Representable {
    pub cat: Arc<CatPresentation>,
    pub a: ObjId,
}

impl Functor for Representable {
    fn on_object(&self, c: ObjId) -> FinAbGroup {
        self.cat.hom(self.a, c).clone()
    }

    fn on_morphism(&self, r: &Morphism) -> GroupHom {
        self.cat.postcompose_map(r, self.a)
    }
}

/// Which comma category a [`MorphismDiagram`] enumerates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagramKind {
    /// Objects `s: B → C`, arrows `r: C → C'` with `r∘s = s'`.
    Under,
    /// Objects `e: E → B`, arrows `r: E → E'` with `e'∘r = e`.
    Over,
}

#[derive(Clone, Debug)]
pub struct MorphismDiagram {
    pub kind: DiagramKind,
    pub base: ObjId,
    pub objects: Vec<Morphism>,
    /// `(i, j, r)` with `r` between the free ends of objects `i` and `j`.
    pub arrows: Vec<(usize, usize, Morphism)>,
    /// Morphisms that could not be classified because their cone falls
    /// outside the finite object set.
    pub skipped: usize,
    index: HashMap<Morphism, usize>,
    between: HashMap<(usize, usize), Vec<usize>>,
}

impl MorphismDiagram {
    pub fn new(kind: DiagramKind, base: ObjId, objects: Vec<Morphism>, skipped: usize) -> Self {
        let index = objects.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        MorphismDiagram {
            kind,
            base,
            objects,
            arrows: Vec::new(),
            skipped,
            index,
            between: HashMap::new(),
        }
    }

    pub fn push_arrow(&mut self, i: usize, j: usize, r: Morphism) {
        self.between.entry((i, j)).or_default().push(self.arrows.len());
        self.arrows.push((i, j, r));
    }

    pub fn index_of(&self, m: &Morphism) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// The varying end of object `i`.
    pub fn end(&self, i: usize) -> ObjId {
        match self.kind {
            DiagramKind::Under => self.objects[i].dst,
            DiagramKind::Over => self.objects[i].src,
        }
    }

    pub fn arrows_between(&self, i: usize, j: usize) -> impl Iterator<Item = &Morphism> + '_ {
        self.between
            .get(&(i, j))
            .into_iter()
            .flatten()
            .map(move |&k| &self.arrows[k].2)
    }

    pub fn has_arrow(&self, i: usize, j: usize, r: &Morphism) -> bool {
        self.arrows_between(i, j).any(|x| x == r)
    }

    /// Diagram of groups `F(end(i))` with maps `F(r)`.
    pub fn apply<F: Functor + ?Sized>(&self, f: &F) -> FiniteDiagram {
        let mut d = FiniteDiagram::new((0..self.objects.len()).map(|i| f.on_object(self.end(i))).collect());
        for (i, j, r) in &self.arrows {
            d.add_arrow(*i, *j, f.on_morphism(r));
        }
        d
    }

    pub fn colimit_of<F: Functor + ?Sized>(&self, f: &F) -> Result<Colimit> {
        colimit(&self.apply(f))
    }
}

/// Every morphism `x: C → C'` with `m(x) = y`, where `m` is a group map
/// on a hom group.
pub(crate) fn all_solutions(m: &GroupHom, y: &[i64]) -> Vec<Vec<i64>> {
    let Some(p) = crate::abgroup::solve(m, y) else {
        return Vec::new();
    };
    let ks = crate::abgroup::subgroup_elements(m.domain(), &m.kernel_generators());
    let mut out: Vec<Vec<i64>> = ks.iter().map(|k| m.domain().add(&p, k)).collect();
    out.sort();
    out
}

/// Every `x` with `p(x) = u` and `q(x) = v`.
pub(crate) fn joint_solutions(p: &GroupHom, q: &GroupHom, u: &[i64], v: &[i64]) -> Vec<Vec<i64>> {
    let ds = crate::abgroup::direct_sum(&[p.codomain().clone(), q.codomain().clone()]);
    let joint = ds.injections[0]
        .compose(p)
        .and_then(|a| a.add(&ds.injections[1].compose(q)?))
        .expect("shared domain");
    let target = ds.group.add(&ds.injections[0].apply(u), &ds.injections[1].apply(v));
    all_solutions(&joint, &target)
}
