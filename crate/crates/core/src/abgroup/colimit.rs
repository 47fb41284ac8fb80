use crate::error::{Error, Result};

use super::{presentation_to_group, FinAbGroup, GroupHom};

/// A diagram of finite abelian groups indexed by a finite graph.
#[derive(Clone, Debug, Default)]
pub struct FiniteDiagram {
    pub groups: Vec<FinAbGroup>,
    /// `(source, target, map)`
    pub arrows: Vec<(usize, usize, GroupHom)>,
}

impl FiniteDiagram {
    pub fn new(groups: Vec<FinAbGroup>) -> Self {
        FiniteDiagram {
            groups,
            arrows: Vec::new(),
        }
    }

    pub fn add_arrow(&mut self, src: usize, dst: usize, map: GroupHom) {
        self.arrows.push((src, dst, map));
    }

    pub fn validate(&self) -> Result<()> {
        for (k, (s, t, h)) in self.arrows.iter().enumerate() {
            let ok = *s < self.groups.len()
                && *t < self.groups.len()
                && h.domain() == &self.groups[*s]
                && h.codomain() == &self.groups[*t];
            if !ok {
                return Err(Error::EndpointMismatch(format!("diagram arrow {k}")));
            }
        }
        Ok(())
    }

    /// Total number of elements across all groups.
    pub fn total_order(&self) -> Option<u128> {
        self.groups.iter().map(|g| g.order()).sum()
    }
}

/// Colimit group with its cocone and, for each generator, a finite sum of
/// indexed elements mapping onto it.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub group: FinAbGroup,
    pub cocone: Vec<GroupHom>,
    pub lifts: Vec<Vec<(usize, Vec<i64>)>>,
}

impl Colimit {
    /// Class of `x ∈ G_index` in the colimit.
    pub fn classify(&self, index: usize, x: &[i64]) -> Vec<i64> {
        self.cocone[index].apply(x)
    }

    /// The map out of the colimit induced by a compatible family `G_i → H`.
    pub fn map_out(&self, target: &FinAbGroup, family: &[GroupHom]) -> Result<GroupHom> {
        let cols: Vec<Vec<i64>> = self
            .lifts
            .iter()
            .map(|pieces| {
                pieces.iter().fold(target.zero(), |acc, (i, x)| {
                    target.add(&acc, &family[*i].apply(x))
                })
            })
            .collect();
        GroupHom::from_columns(self.group.clone(), target.clone(), &cols)
    }

    /// An index and element representing a colimit class.
    pub fn represent(&self, y: &[i64]) -> Option<(usize, Vec<i64>)> {
        self.cocone
            .iter()
            .enumerate()
            .find_map(|(i, c)| super::solve(c, y).map(|x| (i, x)))
    }
}

pub fn colimit(d: &FiniteDiagram) -> Result<Colimit> {
    d.validate()?;
    if d.groups.iter().any(|g| !g.is_finite()) {
        return Err(Error::InfiniteGroup);
    }
    let modulus = d.groups.iter().fold(1i64, |a, g| lcm(a, g.exponent()));
    let mut offsets = Vec::with_capacity(d.groups.len());
    let mut n = 0;
    for g in &d.groups {
        offsets.push(n);
        n += g.rank();
    }

    let mut el = Eliminator::new(n, modulus);
    for (g, &off) in d.groups.iter().zip(&offsets) {
        for (k, &dk) in g.factors().iter().enumerate() {
            if dk != modulus {
                let mut row = vec![0; n];
                row[off + k] = dk;
                el.insert(row);
            }
        }
    }
    for (s, t, h) in &d.arrows {
        for k in 0..h.domain().rank() {
            let mut row = vec![0; n];
            row[offsets[*s] + k] += 1;
            for (i, v) in h.column(k).into_iter().enumerate() {
                row[offsets[*t] + i] -= v;
            }
            el.insert(row);
        }
    }

    let free: Vec<usize> = (0..n).filter(|&c| el.pivots[c].is_none()).collect();
    let mut free_index = vec![usize::MAX; n];
    for (i, &c) in free.iter().enumerate() {
        free_index[c] = i;
    }
    let mut rels: Vec<Vec<i64>> = el
        .rest
        .iter()
        .map(|r| free.iter().map(|&c| r[c]).collect())
        .collect();
    for i in 0..free.len() {
        let mut r = vec![0; free.len()];
        r[i] = modulus;
        rels.push(r);
    }
    let pres = presentation_to_group(free.len(), &rels);
    let q = pres.group.clone();

    let column_image = |c: usize| -> Vec<i64> {
        match &el.pivots[c] {
            None => pres.projection.column(free_index[c]),
            Some(row) => free.iter().fold(q.zero(), |acc, &f| {
                let img = pres.projection.column(free_index[f]);
                q.sub(&acc, &q.scale(row[f], &img))
            }),
        }
    };
    let cocone = d
        .groups
        .iter()
        .zip(&offsets)
        .map(|(g, &off)| {
            let cols: Vec<Vec<i64>> = (0..g.rank()).map(|k| column_image(off + k)).collect();
            GroupHom::from_columns(g.clone(), q.clone(), &cols)
        })
        .collect::<Result<Vec<_>>>()?;
    let lifts = pres
        .lifts
        .iter()
        .map(|l| {
            let mut full = vec![0i64; n];
            for (i, &c) in free.iter().enumerate() {
                full[c] = l[i];
            }
            d.groups
                .iter()
                .zip(&offsets)
                .enumerate()
                .filter_map(|(i, (g, &off))| {
                    let x = g.reduced(full[off..off + g.rank()].to_vec());
                    x.iter().any(|&v| v != 0).then_some((i, x))
                })
                .collect()
        })
        .collect();
    Ok(Colimit {
        group: q,
        cocone,
        lifts,
    })
}

/// Row reduction over `Z/modulus`. Rows with a unit entry become pivots and
/// are eliminated everywhere; the remaining rows involve only free columns.
struct Eliminator {
    modulus: i64,
    pivots: Vec<Option<Vec<i64>>>,
    pivot_cols: Vec<usize>,
    rest: Vec<Vec<i64>>,
}

impl Eliminator {
    fn new(n: usize, modulus: i64) -> Self {
        Eliminator {
            modulus,
            pivots: vec![None; n],
            pivot_cols: Vec::new(),
            rest: Vec::new(),
        }
    }

    fn reduce(&self, row: &mut [i64]) {
        let m = self.modulus;
        for &c in &self.pivot_cols {
            let k = row[c].rem_euclid(m);
            if k != 0 {
                let p = self.pivots[c].as_ref().expect("pivot row");
                for (x, &y) in row.iter_mut().zip(p) {
                    *x = (*x - k * y).rem_euclid(m);
                }
            }
        }
        row.iter_mut().for_each(|x| *x = x.rem_euclid(m));
    }

    fn insert(&mut self, mut row: Vec<i64>) {
        let m = self.modulus;
        self.reduce(&mut row);
        if row.iter().all(|&x| x == 0) {
            return;
        }
        let Some(c) = (0..row.len()).find(|&c| row[c] != 0 && gcd(row[c], m) == 1) else {
            self.rest.push(row);
            return;
        };
        let inv = mod_inverse(row[c], m);
        row.iter_mut().for_each(|x| *x = (*x * inv).rem_euclid(m));
        let clear = |other: &mut Vec<i64>| {
            let k = other[c];
            if k != 0 {
                for (x, &y) in other.iter_mut().zip(&row) {
                    *x = (*x - k * y).rem_euclid(m);
                }
            }
        };
        for &p in &self.pivot_cols {
            clear(self.pivots[p].as_mut().expect("pivot row"));
        }
        self.rest.iter_mut().for_each(clear);
        self.rest.retain(|r| r.iter().any(|&x| x != 0));
        self.pivots[c] = Some(row);
        self.pivot_cols.push(c);
    }
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> FinAbGroup {
        FinAbGroup::cyclic(n)
    }

    #[test]
    fn single_object() {
        let c = colimit(&FiniteDiagram::new(vec![z(2)])).unwrap();
        assert_eq!(c.group, z(2));
        assert_eq!(c.cocone[0], GroupHom::identity(z(2)));
    }

    #[test]
    fn identity_arrow_glues() {
        let mut d = FiniteDiagram::new(vec![z(2), z(2)]);
        d.add_arrow(0, 1, GroupHom::identity(z(2)));
        let c = colimit(&d).unwrap();
        assert_eq!(c.group, z(2));
        assert_eq!(c.classify(0, &[1]), c.classify(1, &[1]));
    }

    #[test]
    fn doubling_chain() {
        let two = GroupHom::new(z(4), z(4), vec![vec![2]]).unwrap();
        let mut d = FiniteDiagram::new(vec![z(4), z(4), z(4)]);
        d.add_arrow(0, 1, two.clone());
        d.add_arrow(1, 2, two);
        let c = colimit(&d).unwrap();
        assert_eq!(c.group, z(4));
        let last = &c.cocone[2];
        assert!(last.is_isomorphism());
        assert!(c.cocone[0].is_zero());
        for x in 0..4 {
            assert_eq!(c.classify(1, &[x]), last.apply(&[2 * x]));
        }
    }

    #[test]
    fn free_factor_rejected() {
        let d = FiniteDiagram::new(vec![FinAbGroup::free(1)]);
        assert_eq!(colimit(&d).unwrap_err(), Error::InfiniteGroup);
    }

    #[test]
    fn lifts_hit_generators() {
        let mut d = FiniteDiagram::new(vec![z(2), z(6), z(3)]);
        d.add_arrow(0, 1, GroupHom::new(z(2), z(6), vec![vec![3]]).unwrap());
        let c = colimit(&d).unwrap();
        assert_eq!(c.group.order(), Some(18));
        for (k, pieces) in c.lifts.iter().enumerate() {
            let sum = pieces.iter().fold(c.group.zero(), |acc, (i, x)| {
                c.group.add(&acc, &c.classify(*i, x))
            });
            assert_eq!(sum, c.group.basis(k));
        }
    }
}
