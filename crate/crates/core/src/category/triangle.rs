use crate::abgroup::{direct_sum, solve_with, ChoicePolicy, GroupHom};
use crate::error::{Error, Result};

use super::{CatPresentation, ConeSource, Morphism, Triangle};

impl CatPresentation {
    /// Distinguished triangle on `f`. Deterministic for a given presentation.
    pub fn cone(&self, f: &Morphism) -> Result<Triangle> {
        match &self.cones {
            ConeSource::Database(ts) => ts
                .iter()
                .filter(|t| t.f == *f)
                .min_by(|a, b| (a.z, &a.g, &a.h).cmp(&(b.z, &b.g, &b.h)))
                .cloned()
                .ok_or_else(|| Error::MissingCone(format!("{f:?}"))),
            ConeSource::Model(m) => m.cone(f),
            ConeSource::Opposite(orig) => self.opposite_cone(orig, f),
        }
    }

    /// `(Y, Z, σX; g, h, −σf)`
    pub fn rotate(&self, t: &Triangle) -> Triangle {
        Triangle {
            x: t.y,
            y: t.z,
            z: self.suspend_obj(t.x, 1),
            f: t.g.clone(),
            g: t.h.clone(),
            h: self.neg(&self.suspend(&t.f, 1)),
        }
    }

    /// Inverse of [`rotate`](Self::rotate): `(σ⁻¹Z, X, Y; −σ⁻¹h, f, g)`.
    pub fn rotate_back(&self, t: &Triangle) -> Triangle {
        Triangle {
            x: self.suspend_obj(t.z, -1),
            y: t.x,
            z: t.y,
            f: self.neg(&self.suspend(&t.h, -1)),
            g: t.f.clone(),
            h: t.g.clone(),
        }
    }

    /// Endpoint and vanishing-composite checks; returns a list of problems.
    pub fn triangle_problems(&self, t: &Triangle) -> Vec<String> {
        let mut out = Vec::new();
        let sx = self.suspend_obj(t.x, 1);
        if (t.f.src, t.f.dst, t.g.src, t.g.dst, t.h.src, t.h.dst) != (t.x, t.y, t.y, t.z, t.z, sx)
        {
            out.push("endpoints do not chain".to_string());
            return out;
        }
        for (name, dom, cod) in [("f", t.x, t.y), ("g", t.y, t.z), ("h", t.z, sx)] {
            let m = match name {
                "f" => &t.f,
                "g" => &t.g,
                _ => &t.h,
            };
            if !self.hom(dom, cod).contains(&m.coords) {
                out.push(format!("{name} is not a reduced element of its hom group"));
                return out;
            }
        }
        let zero = |a: &Morphism, b: &Morphism| self.compose(a, b).map(|c| c.is_zero());
        if !zero(&t.g, &t.f).unwrap_or(false) {
            out.push("g∘f ≠ 0".into());
        }
        if !zero(&t.h, &t.g).unwrap_or(false) {
            out.push("h∘g ≠ 0".into());
        }
        if !zero(&self.suspend(&t.f, 1), &t.h).unwrap_or(false) {
            out.push("σf∘h ≠ 0".into());
        }
        out
    }

    /// A morphism `c: Z1 → Z2` completing `(a, b)` to a morphism of triangles.
    pub fn fill_in_with(
        &self,
        t1: &Triangle,
        t2: &Triangle,
        a: &Morphism,
        b: &Morphism,
        policy: ChoicePolicy,
    ) -> Result<Morphism> {
        if (a.src, a.dst, b.src, b.dst) != (t1.x, t2.x, t1.y, t2.y) {
            return Err(Error::EndpointMismatch("fill-in square".into()));
        }
        if self.compose(b, &t1.f)? != self.compose(&t2.f, a)? {
            return Err(Error::SquareNotCommuting);
        }
        // c ↦ (c∘g1, h2∘c) into hom(Y1,Z2) ⊕ hom(Z1,σX2)
        let pre = self.precompose_map(&t1.g, t2.z);
        let post = self.postcompose_map(&t2.h, t1.z);
        let rhs1 = self.compose(&t2.g, b)?;
        let rhs2 = self.compose(&self.suspend(a, 1), &t1.h)?;
        let c = solve_pair(&pre, &post, &rhs1.coords, &rhs2.coords, policy)
            .ok_or(Error::NoFillIn)?;
        self.morphism(t1.z, t2.z, c)
    }
}

/// Solve `p(x) = u` and `q(x) = v` simultaneously for `x` in the shared domain.
pub(crate) fn solve_pair(
    p: &GroupHom,
    q: &GroupHom,
    u: &[i64],
    v: &[i64],
    policy: ChoicePolicy,
) -> Option<Vec<i64>> {
    let ds = direct_sum(&[p.codomain().clone(), q.codomain().clone()]);
    let joint = ds.injections[0]
        .compose(p)
        .and_then(|a| a.add(&ds.injections[1].compose(q)?))
        .expect("shared domain");
    let target = ds
        .group
        .add(&ds.injections[0].apply(u), &ds.injections[1].apply(v));
    solve_with(&joint, &target, policy)
}
