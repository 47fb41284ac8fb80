//! Generators of small triangulated categories with known closed forms.
//!
//! Every model is Krull–Schmidt: objects are finite multisets of
//! indecomposable types, and the hom group between two indecomposables is
//! cyclic with a fixed generator. Cones are computed by a per-block engine.

mod split;
mod stable;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::abgroup::FinAbGroup;
use crate::category::{Biproduct, CatPresentation, ConeSource, Morphism, ObjId, PresentationParts, Triangle};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelSpec {
    /// `Z2`-graded `F_p` vector spaces with dimensions at most `d` per parity.
    Split { p: i64, d: usize },
    /// Torsion coefficients `Z/n`, realised as the stable module category of
    /// `Z/n^2` with at most `maxrank` indecomposable summands.
    Torsion { n: i64, maxrank: usize },
    Product {
        left: Box<ModelSpec>,
        right: Box<ModelSpec>,
    },
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Split { p, d } => write!(f, "split:{p}:{d}"),
            ModelSpec::Torsion { n, maxrank } => write!(f, "torsion:{n}:{maxrank}"),
            ModelSpec::Product { left, right } => write!(f, "product({left},{right})"),
        }
    }
}

impl std::str::FromStr for ModelSpec {
    type Err = Error;
    /// Parses `split:P:D` or `torsion:N:MAXRANK`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<i64> {
            parts
                .get(i)
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| Error::BadModel(format!("cannot parse `{s}`")))
        };
        match parts.first().copied() {
            Some("split") => Ok(ModelSpec::Split {
                p: num(1)?,
                d: num(2)? as usize,
            }),
            Some("torsion") => Ok(ModelSpec::Torsion {
                n: num(1)?,
                maxrank: num(2)? as usize,
            }),
            _ => Err(Error::BadModel(format!("unknown model `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
enum Engine {
    Split { p: i64, d: usize },
    Stable { p: i64, l: i64, maxrank: usize },
}

#[derive(Clone, Debug)]
struct Block {
    engine: Engine,
    first: usize,
    ntypes: usize,
}

impl Block {
    fn contains(&self, t: usize) -> bool {
        (self.first..self.first + self.ntypes).contains(&t)
    }

    /// Engine-level label: parity, or exponent.
    fn label(&self, t: usize) -> usize {
        match self.engine {
            Engine::Split { .. } => t - self.first,
            Engine::Stable { .. } => t - self.first + 1,
        }
    }

    fn type_of(&self, label: usize) -> usize {
        match self.engine {
            Engine::Split { .. } => self.first + label,
            Engine::Stable { .. } => self.first + label - 1,
        }
    }

    fn enumerate(&self) -> Vec<Vec<usize>> {
        match self.engine {
            Engine::Split { d, .. } => {
                let mut out = Vec::new();
                for a in 0..=d {
                    for b in 0..=d {
                        let mut v = vec![self.first; a];
                        v.extend(std::iter::repeat_n(self.first + 1, b));
                        out.push(v);
                    }
                }
                out
            }
            Engine::Stable { maxrank, .. } => {
                let mut out = vec![Vec::new()];
                for size in 1..=maxrank {
                    out.extend(multisets(self.first, self.ntypes, size));
                }
                out
            }
        }
    }

    fn name(&self, types: &[usize]) -> String {
        match self.engine {
            Engine::Split { .. } => {
                let even = types.iter().filter(|&&t| self.label(t) == 0).count();
                format!("e{}o{}", even, types.len() - even)
            }
            Engine::Stable { .. } => {
                if types.is_empty() {
                    "q0".into()
                } else {
                    let digits: String = types.iter().map(|&t| self.label(t).to_string()).collect();
                    format!("q{digits}")
                }
            }
        }
    }

    fn hom_order(&self, s: usize, t: usize) -> i64 {
        let (a, b) = (self.label(s), self.label(t));
        match self.engine {
            Engine::Split { p, .. } => {
                if a == b {
                    p
                } else {
                    1
                }
            }
            Engine::Stable { p, l, .. } => stable::hom_order(p, l, a as i64, b as i64),
        }
    }

    fn comp(&self, s: usize, t: usize, u: usize) -> i64 {
        match self.engine {
            Engine::Split { .. } => 1,
            Engine::Stable { p, .. } => {
                let k = stable::comp_exponent(self.label(s) as i64, self.label(t) as i64, self.label(u) as i64);
                p.pow(k as u32)
            }
        }
    }

    fn sigma(&self, t: usize) -> usize {
        match self.engine {
            Engine::Split { .. } => self.type_of(1 - self.label(t)),
            Engine::Stable { l, .. } => self.type_of(l as usize - self.label(t)),
        }
    }
}

/// Sorted multisets of `size` elements from `first..first+k`.
fn multisets(first: usize, k: usize, size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in multisets(first, k, size - 1) {
        let lo = rest.last().copied().unwrap_or(first);
        for t in lo..first + k {
            let mut v = rest.clone();
            v.push(t);
            out.push(v);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// A generator pair `(u, v, order)`: the map from summand `u` of the source
/// to summand `v` of the target.
type Pair = (usize, usize, i64);

#[derive(Debug)]
pub struct KsModel {
    spec: ModelSpec,
    blocks: Vec<Block>,
    /// Number of blocks belonging to the left factor of a product.
    left_blocks: usize,
    prime: i64,
    objects: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, ObjId>,
    names: Vec<String>,
    pairs: Vec<Vec<Pair>>,
}

fn flatten(spec: &ModelSpec, blocks: &mut Vec<Block>) -> Result<i64> {
    let first = blocks.iter().map(|b| b.ntypes).sum();
    match *spec {
        ModelSpec::Split { p, d } => {
            if ![2, 3, 5].contains(&p) || d == 0 || d > 3 {
                return Err(Error::BadModel(format!("split model needs p in {{2,3,5}} and 1 <= d <= 3, got p={p}, d={d}")));
            }
            blocks.push(Block {
                engine: Engine::Split { p, d },
                first,
                ntypes: 2,
            });
            Ok(p)
        }
        ModelSpec::Torsion { n, maxrank } => {
            let (p, k) = prime_power(n)
                .ok_or_else(|| Error::BadModel(format!("torsion order {n} is not a prime power")))?;
            if maxrank == 0 || maxrank > 3 {
                return Err(Error::BadModel(format!("torsion maxrank must be 1..=3, got {maxrank}")));
            }
            let l = 2 * k;
            blocks.push(Block {
                engine: Engine::Stable { p, l, maxrank },
                first,
                ntypes: (l - 1) as usize,
            });
            Ok(p)
        }
        ModelSpec::Product {
            ref left,
            ref right,
        } => {
            let p = flatten(left, blocks)?;
            let q = flatten(right, blocks)?;
            if p != q {
                return Err(Error::BadModel("product factors must share the coefficient prime".into()));
            }
            Ok(p)
        }
    }
}

fn prime_power(n: i64) -> Option<(i64, i64)> {
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

impl KsModel {
    pub fn new(spec: ModelSpec) -> Result<Self> {
        let mut blocks = Vec::new();
        let prime = flatten(&spec, &mut blocks)?;
        let left_blocks = match &spec {
            ModelSpec::Product { left, .. } => {
                let mut tmp = Vec::new();
                flatten(left, &mut tmp)?;
                tmp.len()
            }
            _ => blocks.len(),
        };
        let mut objects: Vec<Vec<usize>> = vec![Vec::new()];
        let mut names: Vec<Vec<String>> = vec![Vec::new()];
        for b in &blocks {
            let parts = b.enumerate();
            let mut next = Vec::new();
            let mut next_names = Vec::new();
            for (o, nm) in objects.iter().zip(&names) {
                for part in &parts {
                    let mut v = o.clone();
                    v.extend(part);
                    next.push(v);
                    let mut n = nm.clone();
                    n.push(b.name(part));
                    next_names.push(n);
                }
            }
            objects = next;
            names = next_names;
        }
        let names: Vec<String> = names.into_iter().map(|n| n.join("x")).collect();
        let index = objects.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
        let mut m = KsModel {
            spec,
            blocks,
            left_blocks,
            prime,
            objects,
            index,
            names,
            pairs: Vec::new(),
        };
        let n = m.objects.len();
        m.pairs = (0..n * n).map(|ab| m.compute_pairs(ab / n, ab % n)).collect();
        Ok(m)
    }

    fn block_of(&self, t: usize) -> &Block {
        self.blocks.iter().find(|b| b.contains(t)).expect("type belongs to a block")
    }

    fn hom_order(&self, s: usize, t: usize) -> i64 {
        let b = self.block_of(s);
        if b.contains(t) {
            b.hom_order(s, t)
        } else {
            1
        }
    }

    fn comp(&self, s: usize, t: usize, u: usize) -> i64 {
        self.block_of(s).comp(s, t, u)
    }

    fn sigma_type(&self, t: usize) -> usize {
        self.block_of(t).sigma(t)
    }

    fn compute_pairs(&self, a: ObjId, b: ObjId) -> Vec<Pair> {
        let (x, y) = (&self.objects[a], &self.objects[b]);
        let mut ps = Vec::new();
        for (u, &s) in x.iter().enumerate() {
            for (v, &t) in y.iter().enumerate() {
                let o = self.hom_order(s, t);
                if o > 1 {
                    ps.push((u, v, o));
                }
            }
        }
        ps.sort_by_key(|&(u, v, o)| (o, u, v));
        ps
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn prime(&self) -> i64 {
        self.prime
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn pairs(&self, a: ObjId, b: ObjId) -> &[Pair] {
        &self.pairs[a * self.len() + b]
    }

    pub fn hom_group(&self, a: ObjId, b: ObjId) -> FinAbGroup {
        let factors = self.pairs(a, b).iter().map(|&(_, _, o)| o).collect();
        FinAbGroup::new(factors).expect("orders are powers of one prime, sorted")
    }

    /// Dense `|Y| × |X|` matrix of a morphism.
    fn to_matrix(&self, f: &Morphism) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.objects[f.src].len()]; self.objects[f.dst].len()];
        for (&(u, v, _), &c) in self.pairs(f.src, f.dst).iter().zip(&f.coords) {
            m[v][u] = c;
        }
        m
    }

    fn morphism_of(&self, a: ObjId, b: ObjId, m: &[Vec<i64>]) -> Morphism {
        Morphism {
            src: a,
            dst: b,
            coords: self
                .pairs(a, b)
                .iter()
                .map(|&(u, v, o)| m[v][u].rem_euclid(o))
                .collect(),
        }
    }

    pub fn compose(&self, g: &Morphism, f: &Morphism) -> Morphism {
        let (x, y, z) = (&self.objects[f.src], &self.objects[f.dst], &self.objects[g.dst]);
        let (fm, gm) = (self.to_matrix(f), self.to_matrix(g));
        let mut out = vec![vec![0; x.len()]; z.len()];
        for (w, row) in out.iter_mut().enumerate() {
            for (u, cell) in row.iter_mut().enumerate() {
                if self.hom_order(x[u], z[w]) == 1 {
                    continue;
                }
                for v in 0..y.len() {
                    if fm[v][u] != 0 && gm[w][v] != 0 {
                        *cell += gm[w][v] * fm[v][u] * self.comp(x[u], y[v], z[w]);
                    }
                }
            }
        }
        self.morphism_of(f.src, g.dst, &out)
    }

    fn identity(&self, a: ObjId) -> Morphism {
        let n = self.objects[a].len();
        let m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        self.morphism_of(a, a, &m)
    }

    /// Position in `σX` of each summand of `X`.
    fn sigma_positions(&self, a: ObjId) -> Vec<usize> {
        let x = &self.objects[a];
        let mut order: Vec<usize> = (0..x.len()).collect();
        order.sort_by_key(|&u| (self.sigma_type(x[u]), u));
        let mut pos = vec![0; x.len()];
        for (k, &u) in order.iter().enumerate() {
            pos[u] = k;
        }
        pos
    }

    pub fn sigma_obj(&self, a: ObjId) -> ObjId {
        let mut t: Vec<usize> = self.objects[a].iter().map(|&s| self.sigma_type(s)).collect();
        t.sort();
        self.index[&t]
    }

    fn suspend(&self, f: &Morphism) -> Morphism {
        let (pa, pb) = (self.sigma_positions(f.src), self.sigma_positions(f.dst));
        let m = self.to_matrix(f);
        let mut out = vec![vec![0; pa.len()]; pb.len()];
        for (v, row) in m.iter().enumerate() {
            for (u, &c) in row.iter().enumerate() {
                out[pb[v]][pa[u]] = c;
            }
        }
        self.morphism_of(self.sigma_obj(f.src), self.sigma_obj(f.dst), &out)
    }

    pub fn object_of(&self, types: &[usize]) -> Option<ObjId> {
        self.index.get(types).copied()
    }

    /// Distinguished triangle on `f`, block by block.
    pub fn cone(&self, f: &Morphism) -> Result<Triangle> {
        let (x, y) = (&self.objects[f.src], &self.objects[f.dst]);
        let fm = self.to_matrix(f);
        let sx_pos = self.sigma_positions(f.src);
        let mut z_types = Vec::new();
        // (z index, y index, coefficient) and (σX position, z index, coefficient)
        let mut g_entries = Vec::new();
        let mut h_entries = Vec::new();
        for b in &self.blocks {
            let xs: Vec<usize> = (0..x.len()).filter(|&u| b.contains(x[u])).collect();
            let ys: Vec<usize> = (0..y.len()).filter(|&v| b.contains(y[v])).collect();
            let xl: Vec<usize> = xs.iter().map(|&u| b.label(x[u])).collect();
            let yl: Vec<usize> = ys.iter().map(|&v| b.label(y[v])).collect();
            let local: Vec<Vec<i64>> = ys.iter().map(|&v| xs.iter().map(|&u| fm[v][u]).collect()).collect();
            let c = match b.engine {
                Engine::Split { p, .. } => split::split_cone(&xl, &yl, &local, p),
                Engine::Stable { p, l, .. } => {
                    let xe: Vec<i64> = xl.iter().map(|&e| e as i64).collect();
                    let ye: Vec<i64> = yl.iter().map(|&e| e as i64).collect();
                    stable::stable_cone(p, l, &xe, &ye, &local)
                }
            };
            let off = z_types.len();
            z_types.extend(c.z_types.iter().map(|&lab| b.type_of(lab)));
            for (zi, row) in c.g.iter().enumerate() {
                for (vi, &coef) in row.iter().enumerate() {
                    g_entries.push((off + zi, ys[vi], coef));
                }
            }
            for (ui, row) in c.h.iter().enumerate() {
                for (zi, &coef) in row.iter().enumerate() {
                    h_entries.push((sx_pos[xs[ui]], off + zi, coef));
                }
            }
        }
        let z = self.object_of(&z_types).ok_or_else(|| {
            Error::MissingCone(format!("{f:?}: cone outside the object range"))
        })?;
        let sx = self.sigma_obj(f.src);
        let mut gm = vec![vec![0; y.len()]; z_types.len()];
        for (zi, v, c) in g_entries {
            gm[zi][v] = c;
        }
        let mut hm = vec![vec![0; z_types.len()]; x.len()];
        for (u, zi, c) in h_entries {
            hm[u][zi] = c;
        }
        Ok(Triangle {
            x: f.src,
            y: f.dst,
            z,
            f: f.clone(),
            g: self.morphism_of(f.dst, z, &gm),
            h: self.morphism_of(z, sx, &hm),
        })
    }

    pub fn biproduct(&self, a: ObjId, b: ObjId) -> Option<Biproduct> {
        let (x, y) = (&self.objects[a], &self.objects[b]);
        let mut all: Vec<(usize, usize, usize)> = x
            .iter()
            .enumerate()
            .map(|(u, &t)| (t, 0, u))
            .chain(y.iter().enumerate().map(|(v, &t)| (t, 1, v)))
            .collect();
        all.sort();
        let types: Vec<usize> = all.iter().map(|e| e.0).collect();
        let m = self.object_of(&types)?;
        let inj = |side: usize, len: usize| -> Vec<Vec<i64>> {
            let mut mat = vec![vec![0; len]; all.len()];
            for (k, &(_, s, i)) in all.iter().enumerate() {
                if s == side {
                    mat[k][i] = 1;
                }
            }
            mat
        };
        let transpose = |mat: &Vec<Vec<i64>>, len: usize| -> Vec<Vec<i64>> {
            (0..len).map(|i| mat.iter().map(|r| r[i]).collect()).collect()
        };
        let (ia, ib) = (inj(0, x.len()), inj(1, y.len()));
        Some(Biproduct {
            obj: m,
            i1: self.morphism_of(a, m, &ia),
            i2: self.morphism_of(b, m, &ib),
            p1: self.morphism_of(m, a, &transpose(&ia, x.len())),
            p2: self.morphism_of(m, b, &transpose(&ib, y.len())),
        })
    }

    /// The object keeping only the summands of one product factor.
    fn restrict(&self, a: ObjId, left: bool) -> ObjId {
        let split_at = self.blocks.get(self.left_blocks).map_or(usize::MAX, |b| b.first);
        let types: Vec<usize> = self.objects[a]
            .iter()
            .copied()
            .filter(|&t| (t < split_at) == left)
            .collect();
        self.index[&types]
    }

    /// Summand in the left factor of a product (`L⊥B` for the left thick
    /// subcategory).
    pub fn left_part(&self, a: ObjId) -> ObjId {
        self.restrict(a, true)
    }

    /// Summand in the right factor (`LB`).
    pub fn right_part(&self, a: ObjId) -> ObjId {
        self.restrict(a, false)
    }

    /// Objects supported in the left factor: the designated thick subcategory.
    pub fn left_objects(&self) -> Vec<ObjId> {
        (0..self.len()).filter(|&a| self.right_part(a) == self.zero()).collect()
    }

    pub fn zero(&self) -> ObjId {
        self.index[&Vec::new()]
    }

    /// Assemble the finite presentation backed by this model.
    pub fn presentation(self: &Arc<Self>) -> CatPresentation {
        let n = self.len();
        let homs: Vec<FinAbGroup> = (0..n * n).map(|ab| self.hom_group(ab / n, ab % n)).collect();
        let gen = |a: ObjId, b: ObjId, i: usize| Morphism {
            src: a,
            dst: b,
            coords: homs[a * n + b].basis(i),
        };
        let mut tensors = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (ri, rj, rk) = (homs[a * n + b].rank(), homs[b * n + c].rank(), homs[a * n + c].rank());
                    let mut t = Vec::new();
                    if ri * rj * rk > 0 {
                        t.reserve(ri * rj * rk);
                        for i in 0..ri {
                            for j in 0..rj {
                                t.extend(self.compose(&gen(b, c, j), &gen(a, b, i)).coords);
                            }
                        }
                    }
                    tensors.push(t);
                }
            }
        }
        let identities = (0..n).map(|a| self.identity(a).coords).collect();
        let sigma = (0..n).map(|a| self.sigma_obj(a)).collect();
        let sigma_maps = (0..n * n)
            .map(|ab| {
                let (a, b) = (ab / n, ab % n);
                let r = homs[ab].rank();
                let cols: Vec<Vec<i64>> = (0..r).map(|i| self.suspend(&gen(a, b, i)).coords).collect();
                let rows = homs[self.sigma_obj(a) * n + self.sigma_obj(b)].rank();
                (0..rows).map(|k| cols.iter().map(|c| c[k]).collect()).collect()
            })
            .collect();
        let biproducts = Some((0..n * n).map(|ab| self.biproduct(ab / n, ab % n)).collect());
        CatPresentation::from_parts(PresentationParts {
            names: self.names.clone(),
            homs,
            tensors,
            identities,
            sigma,
            sigma_maps,
            cones: ConeSource::Model(self.clone()),
            biproducts,
        })
        .expect("model tables are well formed")
    }
}

/// Presentation together with the model and its designated thick
/// generators (the left factor of a product).
#[derive(Clone, Debug)]
pub struct ModelFixture {
    pub model: Arc<KsModel>,
    pub presentation: Arc<CatPresentation>,
    pub thick_generators: Vec<ObjId>,
}

impl ModelFixture {
    pub fn new(spec: ModelSpec) -> Result<Self> {
        let model = Arc::new(KsModel::new(spec)?);
        let presentation = Arc::new(model.presentation());
        let thick_generators = model.left_objects();
        Ok(ModelFixture {
            model,
            presentation,
            thick_generators,
        })
    }

    /// `LB`, the right-factor part.
    pub fn lb(&self, b: ObjId) -> ObjId {
        self.model.right_part(b)
    }

    /// `L⊥B`, the left-factor part.
    pub fn lperp_b(&self, b: ObjId) -> ObjId {
        self.model.left_part(b)
    }
}

pub fn gen_split_graded(p: i64, d: usize) -> Result<CatPresentation> {
    Ok(Arc::new(KsModel::new(ModelSpec::Split { p, d })?).presentation())
}

pub fn gen_torsion_split(n: i64, maxrank: usize) -> Result<CatPresentation> {
    Ok(Arc::new(KsModel::new(ModelSpec::Torsion { n, maxrank })?).presentation())
}

pub fn gen_product(left: ModelSpec, right: ModelSpec) -> Result<ModelFixture> {
    ModelFixture::new(ModelSpec::Product {
        left: Box::new(left),
        right: Box::new(right),
    })
}

/// Two copies of the binary split model with one dimension per parity.
pub fn model_sp() -> ModelFixture {
    gen_product(ModelSpec::Split { p: 2, d: 1 }, ModelSpec::Split { p: 2, d: 1 })
        .expect("valid parameters")
}

/// Binary split model times the `Z/4` torsion model with one summand.
pub fn mixed_fixture() -> ModelFixture {
    gen_product(ModelSpec::Split { p: 2, d: 1 }, ModelSpec::Torsion { n: 4, maxrank: 1 })
        .expect("valid parameters")
}
