//! JSON document format for presentations.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::abgroup::FinAbGroup;
use crate::category::{
    validate_presentation, Biproduct, CatPresentation, ConeSource, Morphism, ObjId, PresentationParts,
    Triangle,
};
use crate::derived::all_triangles;
use crate::error::{Error, Result};
use crate::models::{KsModel, ModelSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub objects: Vec<String>,
    pub homs: Vec<HomEntry>,
    pub compose: Vec<ComposeEntry>,
    pub identities: Vec<Vec<i64>>,
    pub suspension: Suspension,
    pub cones: Cones,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub biproducts: Option<Vec<BiproductEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomEntry {
    pub src: String,
    pub dst: String,
    /// Invariant factors `d_1 | d_2 | …`.
    pub factors: Vec<i64>,
    pub generators: Vec<String>,
}

/// `tensor[i][j]` is the composite of generator `j` of `hom(b, c)` after
/// generator `i` of `hom(a, b)`, in coordinates of `hom(a, c)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComposeEntry {
    pub a: String,
    pub b: String,
    pub c: String,
    pub tensor: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suspension {
    /// Image of each object, in object order.
    pub objects: Vec<String>,
    pub maps: Vec<SigmaEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaEntry {
    pub src: String,
    pub dst: String,
    /// Columns are images of the generators of `hom(src, dst)`.
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cones {
    Model(ModelSpec),
    Triangles(Vec<TriangleEntry>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangleEntry {
    pub x: String,
    pub y: String,
    pub z: String,
    pub f: Vec<i64>,
    pub g: Vec<i64>,
    pub h: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiproductEntry {
    pub a: String,
    pub b: String,
    pub sum: String,
    pub i1: Vec<i64>,
    pub i2: Vec<i64>,
    pub p1: Vec<i64>,
    pub p2: Vec<i64>,
}

impl PresentationFile {
    pub fn from_presentation(p: &CatPresentation) -> Self {
        let n = p.len();
        let name = |a: ObjId| p.name(a).to_string();
        let parts = p.to_parts();
        let mut homs = Vec::new();
        let mut compose = Vec::new();
        let mut maps = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let g = p.hom(a, b);
                if g.rank() > 0 {
                    homs.push(HomEntry {
                        src: name(a),
                        dst: name(b),
                        factors: g.factors().to_vec(),
                        generators: (0..g.rank()).map(|i| format!("{}->{}#{i}", name(a), name(b))).collect(),
                    });
                    maps.push(SigmaEntry { src: name(a), dst: name(b), matrix: parts.sigma_maps[a * n + b].clone() });
                }
                for c in 0..n {
                    let (ra, rb, rc) = (g.rank(), p.hom(b, c).rank(), p.hom(a, c).rank());
                    if ra * rb * rc == 0 {
                        continue;
                    }
                    let t = p.tensor(a, b, c);
                    let tensor = (0..ra)
                        .map(|i| (0..rb).map(|j| t[(i * rb + j) * rc..][..rc].to_vec()).collect())
                        .collect();
                    compose.push(ComposeEntry { a: name(a), b: name(b), c: name(c), tensor });
                }
            }
        }
        let cones = match p.cone_source() {
            ConeSource::Model(m) => Cones::Model(m.spec().clone()),
            ConeSource::Database(_) | ConeSource::Opposite(_) => {
                Cones::Triangles(all_triangles(p).iter().map(|t| triangle_entry(p, t)).collect())
            }
        };
        let biproducts = p.biproduct_table().map(|table| {
            let mut out = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    if let Some(bp) = &table[a * n + b] {
                        out.push(BiproductEntry {
                            a: name(a),
                            b: name(b),
                            sum: name(bp.obj),
                            i1: bp.i1.coords.clone(),
                            i2: bp.i2.coords.clone(),
                            p1: bp.p1.coords.clone(),
                            p2: bp.p2.coords.clone(),
                        });
                    }
                }
            }
            out
        });
        PresentationFile {
            objects: p.names().to_vec(),
            homs,
            compose,
            identities: (0..n).map(|a| p.identity(a).coords).collect(),
            suspension: Suspension { objects: (0..n).map(|a| name(p.suspend_obj(a, 1))).collect(), maps },
            cones,
            biproducts,
        }
    }

    /// Assembles the presentation; does not run the axiom checks.
    pub fn to_presentation(&self) -> Result<CatPresentation> {
        let n = self.objects.len();
        let mut ids = std::collections::HashMap::new();
        for (i, o) in self.objects.iter().enumerate() {
            if ids.insert(o.as_str(), i).is_some() {
                return Err(Error::parse(format!("objects[{i}]"), format!("duplicate object `{o}`")));
            }
        }
        let id = |s: &str, at: &str| -> Result<ObjId> {
            ids.get(s).copied().ok_or_else(|| Error::parse(at, format!("unknown object `{s}`")))
        };
        let mut homs = vec![FinAbGroup::trivial(); n * n];
        let mut seen = vec![false; n * n];
        for (k, h) in self.homs.iter().enumerate() {
            let at = format!("homs[{k}] ({} -> {})", h.src, h.dst);
            let (a, b) = (id(&h.src, &at)?, id(&h.dst, &at)?);
            if std::mem::replace(&mut seen[a * n + b], true) {
                return Err(Error::parse(at, "duplicate hom entry"));
            }
            let g = FinAbGroup::new(h.factors.clone()).map_err(|e| Error::parse(&at, e.to_string()))?;
            if !g.is_finite() {
                return Err(Error::parse(&at, "hom groups must be finite"));
            }
            if h.generators.len() != g.rank() {
                return Err(Error::parse(&at, "one generator name per invariant factor expected"));
            }
            homs[a * n + b] = g;
        }
        let rank = |a: ObjId, b: ObjId| homs[a * n + b].rank();
        let mut tensors = vec![Vec::new(); n * n * n];
        for (k, e) in self.compose.iter().enumerate() {
            let at = format!("compose[{k}] ({}, {}, {})", e.a, e.b, e.c);
            let (a, b, c) = (id(&e.a, &at)?, id(&e.b, &at)?, id(&e.c, &at)?);
            let (ra, rb, rc) = (rank(a, b), rank(b, c), rank(a, c));
            let ok = e.tensor.len() == ra
                && e.tensor.iter().all(|row| row.len() == rb && row.iter().all(|v| v.len() == rc));
            if !ok {
                return Err(Error::parse(at, format!("tensor must have shape {ra}×{rb}×{rc}")));
            }
            tensors[(a * n + b) * n + c] = e.tensor.iter().flatten().flatten().copied().collect();
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let want = rank(a, b) * rank(b, c) * rank(a, c);
                    let t = &mut tensors[(a * n + b) * n + c];
                    if t.is_empty() && want > 0 {
                        return Err(Error::parse(
                            "compose",
                            format!("missing entry for ({}, {}, {})", self.objects[a], self.objects[b], self.objects[c]),
                        ));
                    }
                }
            }
        }
        if self.identities.len() != n {
            return Err(Error::parse("identities", "one entry per object expected"));
        }
        if self.suspension.objects.len() != n {
            return Err(Error::parse("suspension.objects", "one entry per object expected"));
        }
        let sigma = self
            .suspension
            .objects
            .iter()
            .enumerate()
            .map(|(i, s)| id(s, &format!("suspension.objects[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let mut sigma_maps: Vec<Vec<Vec<i64>>> = (0..n * n)
            .map(|ab| vec![vec![0; rank(ab / n, ab % n)]; rank(sigma[ab / n], sigma[ab % n])])
            .collect();
        for (k, m) in self.suspension.maps.iter().enumerate() {
            let at = format!("suspension.maps[{k}] ({} -> {})", m.src, m.dst);
            let (a, b) = (id(&m.src, &at)?, id(&m.dst, &at)?);
            sigma_maps[a * n + b] = m.matrix.clone();
        }
        let morphism = |a: ObjId, b: ObjId, coords: &[i64], at: &str| -> Result<Morphism> {
            if coords.len() != rank(a, b) {
                return Err(Error::parse(at, "coordinate count does not match the hom group"));
            }
            Ok(Morphism { src: a, dst: b, coords: homs[a * n + b].reduced(coords.to_vec()) })
        };
        let cones = match &self.cones {
            Cones::Model(spec) => {
                let m = KsModel::new(spec.clone()).map_err(|e| Error::parse("cones.model", e.to_string()))?;
                if m.names() != self.objects.as_slice() {
                    return Err(Error::parse("cones.model", "object list does not match the model"));
                }
                ConeSource::Model(Arc::new(m))
            }
            Cones::Triangles(ts) => ConeSource::Database(
                ts.iter()
                    .enumerate()
                    .map(|(k, t)| {
                        let at = format!("cones.triangles[{k}]");
                        let (x, y, z) = (id(&t.x, &at)?, id(&t.y, &at)?, id(&t.z, &at)?);
                        Ok(Triangle {
                            x,
                            y,
                            z,
                            f: morphism(x, y, &t.f, &at)?,
                            g: morphism(y, z, &t.g, &at)?,
                            h: morphism(z, sigma[x], &t.h, &at)?,
                        })
                    })
                    .collect::<Result<_>>()?,
            ),
        };
        let biproducts = match &self.biproducts {
            None => None,
            Some(entries) => {
                let mut table = vec![None; n * n];
                for (k, e) in entries.iter().enumerate() {
                    let at = format!("biproducts[{k}]");
                    let (a, b, s) = (id(&e.a, &at)?, id(&e.b, &at)?, id(&e.sum, &at)?);
                    table[a * n + b] = Some(Biproduct {
                        obj: s,
                        i1: morphism(a, s, &e.i1, &at)?,
                        i2: morphism(b, s, &e.i2, &at)?,
                        p1: morphism(s, a, &e.p1, &at)?,
                        p2: morphism(s, b, &e.p2, &at)?,
                    });
                }
                Some(table)
            }
        };
        CatPresentation::from_parts(PresentationParts {
            names: self.objects.clone(),
            homs,
            tensors,
            identities: self.identities.clone(),
            sigma,
            sigma_maps,
            cones,
            biproducts,
        })
    }
}

fn triangle_entry(p: &CatPresentation, t: &Triangle) -> TriangleEntry {
    TriangleEntry {
        x: p.name(t.x).into(),
        y: p.name(t.y).into(),
        z: p.name(t.z).into(),
        f: t.f.coords.clone(),
        g: t.g.coords.clone(),
        h: t.h.coords.clone(),
    }
}

pub fn to_json(p: &CatPresentation) -> String {
    serde_json::to_string_pretty(&PresentationFile::from_presentation(p)).expect("serialisable") + "\n"
}

/// Parses without running the axiom checks.
pub fn from_json(text: &str) -> Result<CatPresentation> {
    let file: PresentationFile = serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    file.to_presentation()
}

/// Reads, assembles and validates a presentation file.
pub fn parse(path: &std::path::Path) -> Result<CatPresentation> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let p = from_json(&text)?;
    let report = validate_presentation(&p);
    if !report.is_valid() {
        return Err(Error::Validation(report.violations));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{gen_split_graded, gen_torsion_split, mixed_fixture, model_sp};

    fn database(p: &CatPresentation) -> CatPresentation {
        p.with_cones(ConeSource::Database(all_triangles(p)))
    }

    #[test]
    fn round_trips() {
        let split = gen_split_graded(3, 1).unwrap();
        let tors = gen_torsion_split(4, 2).unwrap();
        for p in [(*model_sp().presentation).clone(), (*mixed_fixture().presentation).clone(), split, tors] {
            let text = to_json(&p);
            let back = from_json(&text).unwrap();
            assert_eq!(back, p);
            assert_eq!(to_json(&back), text);
        }
        let db = database(&gen_split_graded(2, 1).unwrap());
        assert_eq!(from_json(&to_json(&db)).unwrap(), db);
    }

    #[test]
    fn diagnostics() {
        let p = gen_split_graded(2, 1).unwrap();
        let mut file = PresentationFile::from_presentation(&p);
        file.homs[0].factors = vec![4, 2];
        file.homs[0].generators.push("extra".into());
        let err = file.to_presentation().unwrap_err();
        let Error::Parse { location, .. } = err else { panic!("{err:?}") };
        assert!(location.contains(&file.homs[0].src), "{location}");
        assert!(matches!(from_json("{\"objects\": [1]}"), Err(Error::Parse { .. })));
        let empty = r#"{"objects": [], "homs": [], "compose": [], "identities": [],
            "suspension": {"objects": [], "maps": []}, "cones": {"triangles": []}}"#;
        let e = from_json(empty).unwrap();
        assert!(e.is_empty() && validate_presentation(&e).is_valid());
    }
}
