use std::sync::Arc;

use crate::error::Result;

use super::{Biproduct, CatPresentation, ConeSource, Morphism, PresentationParts, Triangle};

fn flip(m: &Morphism) -> Morphism {
    Morphism {
        src: m.dst,
        dst: m.src,
        coords: m.coords.clone(),
    }
}

/// The opposite category with suspension `σ⁻¹`. A triangle
/// `(X, Y, Z; f, g, h)` of `P` becomes `(σX, Z, Y; h, g, f)`.
pub fn op_category(p: &Arc<CatPresentation>) -> Result<CatPresentation> {
    let n = p.len();
    let mut homs = Vec::with_capacity(n * n);
    let mut sigma_maps = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            homs.push(p.hom(b, a).clone());
            let m = p.sigma_inv_maps[b * n + a]
                .as_ref()
                .expect("validated presentations have invertible suspension");
            sigma_maps.push(m.matrix().to_vec());
        }
    }
    let mut tensors = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let orig = p.tensor(c, b, a);
                let (ri, rj, rk) = (
                    p.hom(b, a).rank(),
                    p.hom(c, b).rank(),
                    p.hom(c, a).rank(),
                );
                let mut t = Vec::new();
                if !orig.is_empty() {
                    t = vec![0; ri * rj * rk];
                    for i in 0..ri {
                        for j in 0..rj {
                            for k in 0..rk {
                                t[(i * rj + j) * rk + k] = orig[(j * ri + i) * rk + k];
                            }
                        }
                    }
                }
                tensors.push(t);
            }
        }
    }
    let cones = match &p.cones {
        ConeSource::Database(ts) => ConeSource::Database(
            ts.iter()
                .map(|t| Triangle {
                    x: p.suspend_obj(t.x, 1),
                    y: t.z,
                    z: t.y,
                    f: flip(&t.h),
                    g: flip(&t.g),
                    h: flip(&t.f),
                })
                .collect(),
        ),
        _ => ConeSource::Opposite(p.clone()),
    };
    let biproducts = p.biproducts.as_ref().map(|table| {
        table
            .iter()
            .map(|e| {
                e.as_ref().map(|b| Biproduct {
                    obj: b.obj,
                    i1: flip(&b.p1),
                    i2: flip(&b.p2),
                    p1: flip(&b.i1),
                    p2: flip(&b.i2),
                })
            })
            .collect()
    });
    CatPresentation::from_parts(PresentationParts {
        names: p.names.clone(),
        homs,
        tensors,
        identities: p.identities.clone(),
        sigma: p.sigma_inv.clone(),
        sigma_maps,
        cones,
        biproducts,
    })
}

impl CatPresentation {
    /// Cone in the opposite of `orig`: for `f': X' → Y'` with underlying
    /// `u: Y' → X'` and `cone(u) = (Y', X', W; u, v, w)`, the result is
    /// `(X', Y', σ⁻¹W; f', −σ⁻¹w, −σ⁻¹v)` read in the opposite category.
    pub(super) fn opposite_cone(&self, orig: &CatPresentation, f: &Morphism) -> Result<Triangle> {
        let u = flip(f);
        let t = orig.cone(&u)?;
        let w = orig.neg(&orig.suspend(&t.h, -1));
        let v = orig.neg(&orig.suspend(&t.g, -1));
        Ok(Triangle {
            x: f.src,
            y: f.dst,
            z: orig.suspend_obj(t.z, -1),
            f: f.clone(),
            g: flip(&w),
            h: flip(&v),
        })
    }
}
