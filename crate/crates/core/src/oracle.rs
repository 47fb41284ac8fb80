//! Brute-force reference computations by exhaustive enumeration. These share
//! no code with the Smith-form machinery beyond group arithmetic, and serve as
//! independent cross-checks.

use std::collections::{BTreeSet, HashMap};

use crate::abgroup::{Colimit, FinAbGroup, FiniteDiagram, GroupHom};

/// Coset enumeration of `(⊕ G_i) / R` where `R` is generated by
/// `ι_s(x) − ι_t(h(x))` for every arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetColimit {
    pub order: u128,
    pub image_orders: Vec<u128>,
}

/// Largest direct sum the oracle will enumerate.
pub const MAX_RAW_ORDER: u128 = 1 << 24;

/// Mixed-radix direct sum of the groups without canonicalisation; elements
/// are encoded as their index in the product of the coordinate ranges.
struct RawSum {
    radices: Vec<u64>,
    offsets: Vec<usize>,
    order: u64,
}

impl RawSum {
    fn new(groups: &[FinAbGroup]) -> Self {
        let mut radices = Vec::new();
        let mut offsets = Vec::new();
        for g in groups {
            offsets.push(radices.len());
            radices.extend(g.factors().iter().map(|&d| d as u64));
        }
        let order = radices.iter().product();
        RawSum { radices, offsets, order }
    }

    fn encode(&self, digits: &[i64]) -> u64 {
        digits
            .iter()
            .zip(&self.radices)
            .rev()
            .fold(0, |acc, (&x, &d)| acc * d + x.rem_euclid(d as i64) as u64)
    }

    fn add(&self, mut a: u64, mut b: u64) -> u64 {
        let (mut out, mut scale) = (0, 1);
        for &d in &self.radices {
            out += (a % d + b % d) % d * scale;
            scale *= d;
            a /= d;
            b /= d;
        }
        out
    }

    fn embed(&self, i: usize, x: &[i64]) -> Vec<i64> {
        let mut v = vec![0; self.radices.len()];
        v[self.offsets[i]..self.offsets[i] + x.len()].copy_from_slice(x);
        v
    }
}

/// Subgroup of the raw sum, grown one generator at a time.
struct Span {
    elems: Vec<u64>,
    member: Vec<bool>,
}

impl Span {
    fn new(sum: &RawSum) -> Self {
        let mut member = vec![false; sum.order as usize];
        member[0] = true;
        Span { elems: vec![0], member }
    }

    /// `<S, g>` is the union of the cosets `S + m·g`.
    fn extend(&mut self, sum: &RawSum, g: u64) {
        let base = self.elems.len();
        let mut k = g;
        while !self.member[k as usize] {
            for i in 0..base {
                let y = sum.add(self.elems[i], k);
                self.member[y as usize] = true;
                self.elems.push(y);
            }
            k = sum.add(k, g);
        }
    }
}

/// Order of the direct sum the oracle enumerates.
pub fn raw_order(d: &FiniteDiagram) -> Option<u128> {
    d.groups.iter().map(|g| g.order()).product()
}

/// `None` when a group is infinite or the direct sum exceeds
/// [`MAX_RAW_ORDER`].
pub fn coset_colimit(d: &FiniteDiagram) -> Option<CosetColimit> {
    if raw_order(d)? > MAX_RAW_ORDER {
        return None;
    }
    let sum = RawSum::new(&d.groups);
    let mut r = Span::new(&sum);
    for (s, t, h) in &d.arrows {
        for k in 0..h.domain().rank() {
            let x = h.domain().basis(k);
            let a = sum.encode(&sum.embed(*s, &x));
            let b = sum.encode(&sum.embed(*t, &h.apply(&x)).iter().map(|v| -v).collect::<Vec<_>>());
            r.extend(&sum, sum.add(a, b));
        }
    }
    let rel = r.elems.len() as u128;
    // |ι(G) + R| / |R| = |G| / |ι(G) ∩ R|
    let image_orders = d
        .groups
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let hits = g
                .elements()
                .expect("finite")
                .filter(|x| r.member[sum.encode(&sum.embed(i, x)) as usize])
                .count() as u128;
            g.order().expect("finite") / hits
        })
        .collect();
    Some(CosetColimit {
        order: sum.order as u128 / rel,
        image_orders,
    })
}

/// Compare a computed colimit against coset enumeration, including that the
/// cocone kills every relation.
pub fn colimit_agrees(d: &FiniteDiagram, c: &Colimit) -> bool {
    let Some(oracle) = coset_colimit(d) else {
        return false;
    };
    if c.group.order() != Some(oracle.order) {
        return false;
    }
    let images_ok = c
        .cocone
        .iter()
        .zip(&oracle.image_orders)
        .all(|(h, &o)| h.image_order().ok() == Some(o));
    let relations_ok = d.arrows.iter().all(|(s, t, h)| {
        (0..h.domain().rank()).all(|k| {
            let x = h.domain().basis(k);
            c.classify(*s, &x) == c.classify(*t, &h.apply(&x))
        })
    });
    images_ok && relations_ok
}

/// Union-find over all pairs `(i, x)`, identifying `(s, x)` with
/// `(t, h(x))`. For a filtered diagram the classes are the colimit elements.
pub struct SetColimit {
    keys: HashMap<(usize, Vec<i64>), usize>,
    parent: Vec<usize>,
}

impl SetColimit {
    pub fn new(d: &FiniteDiagram) -> Option<Self> {
        let mut keys = HashMap::new();
        for (i, g) in d.groups.iter().enumerate() {
            for x in g.elements().ok()? {
                let n = keys.len();
                keys.insert((i, x), n);
            }
        }
        let mut uf = SetColimit {
            parent: (0..keys.len()).collect(),
            keys,
        };
        for (s, t, h) in &d.arrows {
            for x in d.groups[*s].elements().ok()? {
                let a = uf.keys[&(*s, x.clone())];
                let b = uf.keys[&(*t, h.apply(&x))];
                uf.union(a, b);
            }
        }
        Some(uf)
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub fn class_count(&mut self) -> usize {
        let ids: Vec<usize> = (0..self.parent.len()).collect();
        ids.into_iter()
            .map(|i| self.find(i))
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// `(i, x) ~ (j, y)` exactly when the cocone images agree.
    pub fn agrees_with(&mut self, c: &Colimit) -> bool {
        let mut by_class: HashMap<usize, Vec<i64>> = HashMap::new();
        let mut by_value: HashMap<Vec<i64>, usize> = HashMap::new();
        let keys: Vec<((usize, Vec<i64>), usize)> =
            self.keys.iter().map(|(k, &v)| (k.clone(), v)).collect();
        for ((i, x), id) in keys {
            let class = self.find(id);
            let value = c.classify(i, &x);
            if let Some(v) = by_class.get(&class) {
                if *v != value {
                    return false;
                }
            } else {
                by_class.insert(class, value.clone());
            }
            if let Some(&k) = by_value.get(&value) {
                if k != class {
                    return false;
                }
            } else {
                by_value.insert(value, class);
            }
        }
        c.group.order() == Some(by_class.len() as u128)
    }
}

pub fn brute_solve(h: &GroupHom, y: &[i64]) -> Option<Vec<i64>> {
    h.domain().elements().ok()?.find(|x| h.apply(x) == y)
}

/// `ker g == im f`, by enumeration.
pub fn brute_exact(f: &GroupHom, g: &GroupHom) -> bool {
    let Ok(mid) = g.domain().elements() else {
        return false;
    };
    let ker: BTreeSet<Vec<i64>> = mid.filter(|x| g.apply(x).iter().all(|&v| v == 0)).collect();
    let Ok(src) = f.domain().elements() else {
        return false;
    };
    let im: BTreeSet<Vec<i64>> = src.map(|x| f.apply(&x)).collect();
    ker == im
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::colimit;

    #[test]
    fn chain_oracles_agree() {
        let z4 = FinAbGroup::cyclic(4);
        let two = GroupHom::new(z4.clone(), z4.clone(), vec![vec![2]]).unwrap();
        let mut d = FiniteDiagram::new(vec![z4.clone(), z4.clone(), z4]);
        d.add_arrow(0, 1, two.clone());
        d.add_arrow(1, 2, two);
        let c = colimit(&d).unwrap();
        assert!(colimit_agrees(&d, &c));
        let o = coset_colimit(&d).unwrap();
        assert_eq!(o.order, 4);
        assert_eq!(o.image_orders, vec![1, 2, 4]);
        let mut s = SetColimit::new(&d).unwrap();
        assert_eq!(s.class_count(), 4);
        assert!(s.agrees_with(&c));
    }
}
