//! Finitely presented additive categories with a suspension automorphism and
//! distinguished triangles.

mod opposite;
mod triangle;
mod validate;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::abgroup::{ChoicePolicy, FinAbGroup, GroupHom};
use crate::error::{Error, Result};
use crate::models::KsModel;

pub use opposite::op_category;
pub use validate::{validate_presentation, ValidationReport};

pub type ObjId = usize;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Morphism {
    pub src: ObjId,
    pub dst: ObjId,
    pub coords: Vec<i64>,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{} {:?}", self.src, self.dst, self.coords)
    }
}

impl Morphism {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }
}

/// `X --f--> Y --g--> Z --h--> σX`
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Triangle {
    pub x: ObjId,
    pub y: ObjId,
    pub z: ObjId,
    pub f: Morphism,
    pub g: Morphism,
    pub h: Morphism,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Biproduct {
    pub obj: ObjId,
    pub i1: Morphism,
    pub i2: Morphism,
    pub p1: Morphism,
    pub p2: Morphism,
}

#[derive(Clone, Debug)]
pub enum ConeSource {
    Database(Vec<Triangle>),
    Model(Arc<KsModel>),
    Opposite(Arc<CatPresentation>),
}

impl PartialEq for ConeSource {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ConeSource::Database(a), ConeSource::Database(b)) => a == b,
            (ConeSource::Model(a), ConeSource::Model(b)) => a.spec() == b.spec(),
            (ConeSource::Opposite(a), ConeSource::Opposite(b)) => a == b,
            _ => false,
        }
    }
}

/// Raw tables from which a presentation is assembled.
#[derive(Clone, Debug, PartialEq)]
pub struct PresentationParts {
    pub names: Vec<String>,
    /// `homs[a * n + b]`
    pub homs: Vec<FinAbGroup>,
    /// `tensors[(a * n + b) * n + c]`, layout `[i][j][k]` with `i` a generator
    /// of `hom(a,b)`, `j` of `hom(b,c)`, `k` a coordinate of `hom(a,c)`.
    pub tensors: Vec<Vec<i64>>,
    pub identities: Vec<Vec<i64>>,
    pub sigma: Vec<ObjId>,
    /// Matrices of `hom(a,b) → hom(σa,σb)`, indexed like `homs`.
    pub sigma_maps: Vec<Vec<Vec<i64>>>,
    pub cones: ConeSource,
    pub biproducts: Option<Vec<Option<Biproduct>>>,
}

#[derive(Clone, Debug)]
pub struct CatPresentation {
    names: Vec<String>,
    index: HashMap<String, ObjId>,
    homs: Vec<FinAbGroup>,
    tensors: Vec<Vec<i64>>,
    identities: Vec<Vec<i64>>,
    sigma: Vec<ObjId>,
    sigma_inv: Vec<ObjId>,
    sigma_order: usize,
    sigma_maps: Vec<GroupHom>,
    sigma_inv_maps: Vec<Option<GroupHom>>,
    cones: ConeSource,
    biproducts: Option<Vec<Option<Biproduct>>>,
}

impl PartialEq for CatPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.homs == other.homs
            && self.tensors == other.tensors
            && self.identities == other.identities
            && self.sigma == other.sigma
            && self.sigma_maps == other.sigma_maps
            && self.cones == other.cones
            && self.biproducts == other.biproducts
    }
}

impl CatPresentation {
    /// Checks shapes and that σ permutes the objects; the category axioms are
    /// left to [`validate_presentation`].
    pub fn from_parts(p: PresentationParts) -> Result<Self> {
        let n = p.names.len();
        let shape = |what: &str| Error::Validation(vec![format!("malformed {what} table")]);
        if p.homs.len() != n * n
            || p.tensors.len() != n * n * n
            || p.identities.len() != n
            || p.sigma.len() != n
            || p.sigma_maps.len() != n * n
        {
            return Err(shape("presentation"));
        }
        let mut index = HashMap::new();
        for (i, name) in p.names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Validation(vec![format!("duplicate object `{name}`")]));
            }
        }
        let mut sigma_inv = vec![usize::MAX; n];
        for (a, &s) in p.sigma.iter().enumerate() {
            if s >= n || sigma_inv[s] != usize::MAX {
                return Err(Error::Validation(vec!["suspension is not a permutation".into()]));
            }
            sigma_inv[s] = a;
        }
        let mut sigma_order = 1;
        if n > 0 {
            let mut cur = p.sigma.clone();
            while cur.iter().enumerate().any(|(a, &b)| a != b) {
                cur = cur.iter().map(|&b| p.sigma[b]).collect();
                sigma_order += 1;
            }
        }
        for a in 0..n {
            for b in 0..n {
                let g = &p.homs[a * n + b];
                if !g.is_finite() {
                    return Err(Error::Validation(vec![format!(
                        "hom({},{}) has a free factor",
                        p.names[a], p.names[b]
                    )]));
                }
                let ra = g.rank();
                for c in 0..n {
                    let want = ra * p.homs[b * n + c].rank() * p.homs[a * n + c].rank();
                    let t = &p.tensors[(a * n + b) * n + c];
                    if t.len() != want && !(t.is_empty() && want == 0) {
                        return Err(shape(&format!(
                            "composition ({},{},{})",
                            p.names[a], p.names[b], p.names[c]
                        )));
                    }
                }
            }
            if p.identities[a].len() != p.homs[a * n + a].rank() {
                return Err(shape("identity"));
            }
        }
        let mut sigma_maps = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let m = GroupHom::new(
                    p.homs[a * n + b].clone(),
                    p.homs[p.sigma[a] * n + p.sigma[b]].clone(),
                    p.sigma_maps[a * n + b].clone(),
                )
                .map_err(|e| {
                    Error::Validation(vec![format!(
                        "suspension on hom({},{}): {e}",
                        p.names[a], p.names[b]
                    )])
                })?;
                sigma_maps.push(m);
            }
        }
        // hom(a,b) -> hom(σ⁻¹a, σ⁻¹b) inverts the suspension map out of that pair.
        let sigma_inv_maps = (0..n * n)
            .map(|ab| {
                let (a, b) = (ab / n, ab % n);
                sigma_maps[sigma_inv[a] * n + sigma_inv[b]].inverse()
            })
            .collect();
        if let Some(bp) = &p.biproducts {
            if bp.len() != n * n {
                return Err(shape("biproduct"));
            }
        }
        Ok(CatPresentation {
            names: p.names,
            index,
            homs: p.homs,
            tensors: p.tensors,
            identities: p.identities,
            sigma: p.sigma,
            sigma_inv,
            sigma_order,
            sigma_maps,
            sigma_inv_maps,
            cones: p.cones,
            biproducts: p.biproducts,
        })
    }

    pub fn to_parts(&self) -> PresentationParts {
        PresentationParts {
            names: self.names.clone(),
            homs: self.homs.clone(),
            tensors: self.tensors.clone(),
            identities: self.identities.clone(),
            sigma: self.sigma.clone(),
            sigma_maps: self.sigma_maps.iter().map(|m| m.matrix().to_vec()).collect(),
            cones: self.cones.clone(),
            biproducts: self.biproducts.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn objects(&self) -> std::ops::Range<ObjId> {
        0..self.len()
    }

    pub fn name(&self, a: ObjId) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Result<ObjId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn cone_source(&self) -> &ConeSource {
        &self.cones
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &FinAbGroup {
        &self.homs[a * self.len() + b]
    }

    pub(crate) fn tensor(&self, a: ObjId, b: ObjId, c: ObjId) -> &[i64] {
        let n = self.len();
        &self.tensors[(a * n + b) * n + c]
    }

    pub fn morphism(&self, src: ObjId, dst: ObjId, coords: Vec<i64>) -> Result<Morphism> {
        let g = self.hom(src, dst);
        if coords.len() != g.rank() {
            return Err(Error::BadHom(format!(
                "wrong coordinate count for hom({},{})",
                self.names[src], self.names[dst]
            )));
        }
        Ok(Morphism {
            src,
            dst,
            coords: g.reduced(coords),
        })
    }

    pub fn identity(&self, a: ObjId) -> Morphism {
        Morphism {
            src: a,
            dst: a,
            coords: self.identities[a].clone(),
        }
    }

    pub fn zero(&self, a: ObjId, b: ObjId) -> Morphism {
        Morphism {
            src: a,
            dst: b,
            coords: self.hom(a, b).zero(),
        }
    }

    /// Generator `i` of `hom(a,b)`.
    pub fn generator(&self, a: ObjId, b: ObjId, i: usize) -> Morphism {
        Morphism {
            src: a,
            dst: b,
            coords: self.hom(a, b).basis(i),
        }
    }

    /// All morphisms `a → b`, in lexicographic coordinate order.
    pub fn morphisms(&self, a: ObjId, b: ObjId) -> impl Iterator<Item = Morphism> + '_ {
        self.hom(a, b)
            .elements()
            .expect("hom groups are finite")
            .map(move |coords| Morphism {
                src: a,
                dst: b,
                coords,
            })
    }

    /// An object is zero exactly when its identity vanishes.
    pub fn is_zero_object(&self, a: ObjId) -> bool {
        self.hom(a, a).is_trivial()
    }

    pub fn zero_object(&self) -> Option<ObjId> {
        self.objects().find(|&a| self.is_zero_object(a))
    }

    fn check_same(&self, f: &Morphism, g: &Morphism) -> Result<()> {
        if f.src != g.src || f.dst != g.dst {
            return Err(Error::EndpointMismatch(format!("{f:?} vs {g:?}")));
        }
        Ok(())
    }

    pub fn add(&self, f: &Morphism, g: &Morphism) -> Result<Morphism> {
        self.check_same(f, g)?;
        Ok(Morphism {
            src: f.src,
            dst: f.dst,
            coords: self.hom(f.src, f.dst).add(&f.coords, &g.coords),
        })
    }

    pub fn sub(&self, f: &Morphism, g: &Morphism) -> Result<Morphism> {
        self.check_same(f, g)?;
        Ok(Morphism {
            src: f.src,
            dst: f.dst,
            coords: self.hom(f.src, f.dst).sub(&f.coords, &g.coords),
        })
    }

    pub fn neg(&self, f: &Morphism) -> Morphism {
        Morphism {
            src: f.src,
            dst: f.dst,
            coords: self.hom(f.src, f.dst).neg(&f.coords),
        }
    }

    /// `g ∘ f`
    pub fn compose(&self, g: &Morphism, f: &Morphism) -> Result<Morphism> {
        if f.dst != g.src {
            return Err(Error::EndpointMismatch(format!(
                "cannot compose {g:?} after {f:?}"
            )));
        }
        let (a, b, c) = (f.src, f.dst, g.dst);
        let target = self.hom(a, c);
        let rc = target.rank();
        let rg = g.coords.len();
        let t = self.tensor(a, b, c);
        let mut out = vec![0i64; rc];
        if !t.is_empty() {
            for (i, &fi) in f.coords.iter().enumerate() {
                if fi == 0 {
                    continue;
                }
                for (j, &gj) in g.coords.iter().enumerate() {
                    if gj == 0 {
                        continue;
                    }
                    let base = (i * rg + j) * rc;
                    for k in 0..rc {
                        out[k] += fi * gj * t[base + k];
                    }
                }
            }
        }
        Ok(Morphism {
            src: a,
            dst: c,
            coords: target.reduced(out),
        })
    }

    pub fn compose_all(&self, chain: &[&Morphism]) -> Result<Morphism> {
        let (first, rest) = chain.split_first().expect("nonempty chain");
        rest.iter()
            .try_fold((*first).clone(), |acc, g| self.compose(g, &acc))
    }

    /// `x ↦ g ∘ x` as a map `hom(a, g.src) → hom(a, g.dst)`.
    pub fn postcompose_map(&self, g: &Morphism, a: ObjId) -> GroupHom {
        let dom = self.hom(a, g.src).clone();
        let cols: Vec<Vec<i64>> = (0..dom.rank())
            .map(|i| {
                self.compose(g, &self.generator(a, g.src, i))
                    .expect("endpoints match")
                    .coords
            })
            .collect();
        GroupHom::from_columns(dom, self.hom(a, g.dst).clone(), &cols)
            .expect("composition is bilinear")
    }

    /// `x ↦ x ∘ f` as a map `hom(f.dst, c) → hom(f.src, c)`.
    pub fn precompose_map(&self, f: &Morphism, c: ObjId) -> GroupHom {
        let dom = self.hom(f.dst, c).clone();
        let cols: Vec<Vec<i64>> = (0..dom.rank())
            .map(|i| {
                self.compose(&self.generator(f.dst, c, i), f)
                    .expect("endpoints match")
                    .coords
            })
            .collect();
        GroupHom::from_columns(dom, self.hom(f.src, c).clone(), &cols)
            .expect("composition is bilinear")
    }

    pub fn sigma_order(&self) -> usize {
        self.sigma_order
    }

    pub fn suspend_obj(&self, a: ObjId, k: i64) -> ObjId {
        let steps = k.rem_euclid(self.sigma_order as i64);
        (0..steps).fold(a, |x, _| self.sigma[x])
    }

    /// `σ^k f`
    pub fn suspend(&self, f: &Morphism, k: i64) -> Morphism {
        let n = self.len();
        let mut cur = f.clone();
        if k >= 0 {
            for _ in 0..k {
                let m = &self.sigma_maps[cur.src * n + cur.dst];
                cur = Morphism {
                    src: self.sigma[cur.src],
                    dst: self.sigma[cur.dst],
                    coords: m.apply(&cur.coords),
                };
            }
        } else {
            for _ in 0..(-k) {
                let m = self.sigma_inv_maps[cur.src * n + cur.dst]
                    .as_ref()
                    .expect("suspension maps are invertible");
                cur = Morphism {
                    src: self.sigma_inv[cur.src],
                    dst: self.sigma_inv[cur.dst],
                    coords: m.apply(&cur.coords),
                };
            }
        }
        cur
    }

    pub(crate) fn sigma_map(&self, a: ObjId, b: ObjId) -> &GroupHom {
        &self.sigma_maps[a * self.len() + b]
    }

    pub(crate) fn sigma_inverse_available(&self) -> bool {
        self.sigma_inv_maps.iter().all(Option::is_some)
    }

    /// Two-sided inverse of `f`, if any.
    pub fn is_isomorphism(&self, f: &Morphism) -> Option<Morphism> {
        let left = self.precompose_map(f, f.src);
        let g = crate::abgroup::solve(&left, &self.identities[f.src])?;
        let g = Morphism {
            src: f.dst,
            dst: f.src,
            coords: g,
        };
        let back = self.compose(f, &g).ok()?;
        (back == self.identity(f.dst)).then_some(g)
    }

    pub fn biproduct(&self, a: ObjId, b: ObjId) -> Result<Biproduct> {
        if self.is_zero_object(b) {
            return Ok(Biproduct {
                obj: a,
                i1: self.identity(a),
                i2: self.zero(b, a),
                p1: self.identity(a),
                p2: self.zero(a, b),
            });
        }
        if self.is_zero_object(a) {
            return Ok(Biproduct {
                obj: b,
                i1: self.zero(a, b),
                i2: self.identity(b),
                p1: self.zero(b, a),
                p2: self.identity(b),
            });
        }
        self.biproducts
            .as_ref()
            .and_then(|t| t[a * self.len() + b].clone())
            .ok_or(Error::MissingBiproduct(a, b))
    }

    pub fn has_biproduct_table(&self) -> bool {
        self.biproducts.is_some()
    }

    pub(crate) fn biproduct_table(&self) -> Option<&[Option<Biproduct>]> {
        self.biproducts.as_deref()
    }

    pub fn with_cones(&self, cones: ConeSource) -> CatPresentation {
        CatPresentation {
            cones,
            ..self.clone()
        }
    }

    pub fn without_biproducts(&self) -> CatPresentation {
        CatPresentation {
            biproducts: None,
            ..self.clone()
        }
    }

    /// Replace the identity of every object by zero.
    pub fn with_zeroed_identities(&self) -> CatPresentation {
        let mut p = self.clone();
        for (a, id) in p.identities.iter_mut().enumerate() {
            *id = self.hom(a, a).zero();
        }
        p
    }

    pub fn fill_in(
        &self,
        t1: &Triangle,
        t2: &Triangle,
        a: &Morphism,
        b: &Morphism,
    ) -> Result<Morphism> {
        self.fill_in_with(t1, t2, a, b, ChoicePolicy::Least)
    }
}
