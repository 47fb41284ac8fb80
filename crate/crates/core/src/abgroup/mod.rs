//! Finitely generated abelian groups in invariant-factor form, homomorphisms
//! between them, and colimits of finite diagrams.

mod colimit;
pub mod linsolve;
pub mod snf;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use linsolve::solve_integer_system;
use snf::{smith_normal_form, IntMatrix};

pub use colimit::{colimit, Colimit, FiniteDiagram};

/// Abelian group `Z/d_1 ⊕ … ⊕ Z/d_k` with `d_i | d_{i+1}`. Factors equal to
/// one are never stored; a zero factor is a copy of `Z` and sorts last.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct FinAbGroup {
    factors: Vec<i64>,
}

impl TryFrom<Vec<i64>> for FinAbGroup {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        FinAbGroup::new(v)
    }
}

impl From<FinAbGroup> for Vec<i64> {
    fn from(g: FinAbGroup) -> Vec<i64> {
        g.factors
    }
}

impl FinAbGroup {
    pub fn new(factors: Vec<i64>) -> Result<Self> {
        let bad = || Error::BadFactors(factors.clone());
        let mut seen_free = false;
        for (i, &d) in factors.iter().enumerate() {
            if d < 0 || d == 1 {
                return Err(bad());
            }
            if d == 0 {
                seen_free = true;
            } else if seen_free {
                return Err(bad());
            }
            if i > 0 && d != 0 && d % factors[i - 1] != 0 {
                return Err(bad());
            }
        }
        Ok(FinAbGroup { factors })
    }

    pub fn trivial() -> Self {
        FinAbGroup::default()
    }

    pub fn cyclic(n: i64) -> Self {
        if n == 1 {
            Self::trivial()
        } else {
            FinAbGroup { factors: vec![n] }
        }
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup {
            factors: vec![0; rank],
        }
    }

    /// Canonical form of `⊕ Z/orders[i]`, without any isomorphism data.
    pub fn from_cyclic_orders(orders: &[i64]) -> Self {
        let rels: Vec<Vec<i64>> = orders
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut r = vec![0; orders.len()];
                r[i] = d;
                r
            })
            .collect();
        presentation_to_group(orders.len(), &rels).group
    }

    pub fn factors(&self) -> &[i64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_finite(&self) -> bool {
        self.factors.iter().all(|&d| d != 0)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Group order, or `None` when a free factor is present.
    pub fn order(&self) -> Option<u128> {
        if !self.is_finite() {
            return None;
        }
        Some(self.factors.iter().map(|&d| d as u128).product())
    }

    /// Least common multiple of the factors (the exponent). Finite groups only.
    pub fn exponent(&self) -> i64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn reduce(&self, coords: &mut [i64]) {
        debug_assert_eq!(coords.len(), self.rank());
        for (x, &d) in coords.iter_mut().zip(&self.factors) {
            if d != 0 {
                *x = x.rem_euclid(d);
            }
        }
    }

    pub fn reduced(&self, mut coords: Vec<i64>) -> Vec<i64> {
        self.reduce(&mut coords);
        coords
    }

    pub fn contains(&self, coords: &[i64]) -> bool {
        coords.len() == self.rank()
            && coords
                .iter()
                .zip(&self.factors)
                .all(|(&x, &d)| d == 0 || (0..d).contains(&x))
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.reduced(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.reduced(a.iter().zip(b).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        self.reduced(a.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, k: i64, a: &[i64]) -> Vec<i64> {
        self.reduced(a.iter().map(|x| k * x).collect())
    }

    pub fn basis(&self, i: usize) -> Vec<i64> {
        let mut e = self.zero();
        e[i] = 1;
        e
    }

    /// All elements in lexicographic order of canonical coordinates.
    pub fn elements(&self) -> Result<Elements> {
        if !self.is_finite() {
            return Err(Error::InfiniteGroup);
        }
        Ok(Elements {
            factors: self.factors.clone(),
            next: if self.factors.iter().all(|&d| d > 0) {
                Some(vec![0; self.rank()])
            } else {
                None
            },
        })
    }

    /// Mixed-radix index of an element, lexicographic order.
    pub fn index_of(&self, coords: &[i64]) -> usize {
        coords
            .iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&x, &d)| acc * d as usize + x as usize)
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&d| if d == 0 { "Z".into() } else { format!("Z/{d}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub struct Elements {
    factors: Vec<i64>,
    next: Option<Vec<i64>>,
}

impl Iterator for Elements {
    type Item = Vec<i64>;
    fn next(&mut self) -> Option<Vec<i64>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.factors[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    }
}

/// An element paired with the group it lives in.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement {
    pub group: FinAbGroup,
    pub coords: Vec<i64>,
}

impl GroupElement {
    pub fn new(group: FinAbGroup, coords: Vec<i64>) -> Self {
        let coords = group.reduced(coords);
        GroupElement { group, coords }
    }
}

/// Homomorphism given by its action on generators: column `j` of `matrix`
/// is the image of the `j`-th domain generator.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupHom {
    domain: FinAbGroup,
    codomain: FinAbGroup,
    /// Row-major, `codomain.rank()` rows by `domain.rank()` columns.
    matrix: Vec<Vec<i64>>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} -> {}] {:?}", self.domain, self.codomain, self.matrix)
    }
}

impl GroupHom {
    pub fn new(domain: FinAbGroup, codomain: FinAbGroup, matrix: Vec<Vec<i64>>) -> Result<Self> {
        if matrix.len() != codomain.rank() || matrix.iter().any(|r| r.len() != domain.rank()) {
            return Err(Error::BadHom(format!(
                "shape mismatch for {domain} -> {codomain}"
            )));
        }
        let mut h = GroupHom {
            domain,
            codomain,
            matrix,
        };
        for (i, row) in h.matrix.iter_mut().enumerate() {
            let d = h.codomain.factors[i];
            if d != 0 {
                row.iter_mut().for_each(|x| *x = x.rem_euclid(d));
            }
        }
        for (j, &d) in h.domain.factors.iter().enumerate() {
            let col = h.column(j);
            let scaled = h.codomain.scale(d, &col);
            if d != 0 && scaled.iter().any(|&x| x != 0) {
                return Err(Error::BadHom(format!(
                    "generator {j} of order {d} maps to element of larger order"
                )));
            }
        }
        Ok(h)
    }

    /// Homomorphism from the images of the domain generators.
    pub fn from_columns(
        domain: FinAbGroup,
        codomain: FinAbGroup,
        columns: &[Vec<i64>],
    ) -> Result<Self> {
        if columns.len() != domain.rank() {
            return Err(Error::BadHom("wrong number of columns".into()));
        }
        let matrix = (0..codomain.rank())
            .map(|i| columns.iter().map(|c| c[i]).collect())
            .collect();
        Self::new(domain, codomain, matrix)
    }

    pub fn zero(domain: FinAbGroup, codomain: FinAbGroup) -> Self {
        let matrix = vec![vec![0; domain.rank()]; codomain.rank()];
        GroupHom {
            domain,
            codomain,
            matrix,
        }
    }

    pub fn identity(g: FinAbGroup) -> Self {
        let n = g.rank();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        GroupHom {
            domain: g.clone(),
            codomain: g,
            matrix,
        }
    }

    pub fn domain(&self) -> &FinAbGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FinAbGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.matrix.iter().map(|r| r[j]).collect()
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let y = self
            .matrix
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect();
        self.codomain.reduced(y)
    }

    /// `self ∘ f`
    pub fn compose(&self, f: &GroupHom) -> Result<GroupHom> {
        if f.codomain != self.domain {
            return Err(Error::EndpointMismatch(format!(
                "{} vs {}",
                f.codomain, self.domain
            )));
        }
        let cols: Vec<Vec<i64>> = (0..f.domain.rank())
            .map(|j| self.apply(&f.column(j)))
            .collect();
        GroupHom::from_columns(f.domain.clone(), self.codomain.clone(), &cols)
    }

    pub fn add(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::EndpointMismatch("sum of homs".into()));
        }
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        GroupHom::new(self.domain.clone(), self.codomain.clone(), matrix)
    }

    pub fn scale(&self, k: i64) -> GroupHom {
        let matrix = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| k * x).collect())
            .collect();
        GroupHom::new(self.domain.clone(), self.codomain.clone(), matrix)
            .expect("scaling preserves well-definedness")
    }

    pub fn neg(&self) -> GroupHom {
        self.scale(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&x| x == 0)
    }

    /// Integer system `M x − D z = rhs` whose solutions describe preimages.
    fn preimage_system(&self, rhs: &[i64]) -> (IntMatrix, Vec<i128>) {
        let (m, n) = (self.codomain.rank(), self.domain.rank());
        let mut a = IntMatrix::zeros(m, n + m);
        for i in 0..m {
            for j in 0..n {
                a[(i, j)] = self.matrix[i][j] as i128;
            }
            a[(i, n + i)] = -(self.codomain.factors[i] as i128);
        }
        (a, rhs.iter().map(|&x| x as i128).collect())
    }

    /// Generators of the kernel, as domain elements.
    pub fn kernel_generators(&self) -> Vec<Vec<i64>> {
        let (a, b) = self.preimage_system(&self.codomain.zero());
        let n = self.domain.rank();
        let sol = solve_integer_system(&a, &b).expect("homogeneous system is solvable");
        let mut gens: Vec<Vec<i64>> = sol
            .kernel
            .iter()
            .map(|k| self.domain.reduced(k[..n].iter().map(|&x| reduce_i128(x, 0)).collect()))
            .filter(|k| k.iter().any(|&x| x != 0))
            .collect();
        gens.sort();
        gens.dedup();
        gens
    }

    /// Some preimage of `y` (not necessarily least), with kernel generators.
    fn preimage(&self, y: &[i64]) -> Option<(Vec<i64>, Vec<Vec<i64>>)> {
        let (a, b) = self.preimage_system(y);
        let n = self.domain.rank();
        let sol = solve_integer_system(&a, &b)?;
        let to_dom = |v: &[i128]| -> Vec<i64> {
            let raw: Vec<i64> = v[..n]
                .iter()
                .zip(&self.domain.factors)
                .map(|(&x, &d)| reduce_i128(x, d))
                .collect();
            self.domain.reduced(raw)
        };
        let p = to_dom(&sol.particular);
        let ks = sol.kernel.iter().map(|k| to_dom(k)).collect();
        Some((p, ks))
    }

    /// Order of the image subgroup (finite codomain).
    pub fn image_order(&self) -> Result<u128> {
        let total = self.codomain.order().ok_or(Error::InfiniteGroup)?;
        let coker = self.cokernel();
        Ok(total / coker.order().ok_or(Error::InfiniteGroup)?)
    }

    pub fn cokernel(&self) -> FinAbGroup {
        let m = self.codomain.rank();
        let mut rels: Vec<Vec<i64>> = (0..m)
            .map(|i| {
                let mut r = vec![0; m];
                r[i] = self.codomain.factors[i];
                r
            })
            .collect();
        rels.extend((0..self.domain.rank()).map(|j| self.column(j)));
        presentation_to_group(m, &rels).group
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    pub fn is_injective(&self) -> Result<bool> {
        let dom = self.domain.order().ok_or(Error::InfiniteGroup)?;
        Ok(self.image_order()? == dom)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.domain.is_finite()
            && self.codomain.is_finite()
            && self.domain.order() == self.codomain.order()
            && self.is_surjective()
    }

    pub fn inverse(&self) -> Option<GroupHom> {
        if !self.is_isomorphism() {
            return None;
        }
        let cols: Vec<Vec<i64>> = (0..self.codomain.rank())
            .map(|i| solve(self, &self.codomain.basis(i)).expect("surjective"))
            .collect();
        GroupHom::from_columns(self.codomain.clone(), self.domain.clone(), &cols).ok()
    }
}

fn reduce_i128(x: i128, d: i64) -> i64 {
    if d == 0 {
        i64::try_from(x).expect("coordinate overflow")
    } else {
        x.rem_euclid(d as i128) as i64
    }
}

/// Which solution to return when several exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum ChoicePolicy {
    #[default]
    Least,
    Greatest,
}

/// Lexicographically least `x` with `h(x) = y`, or `None`.
pub fn solve(h: &GroupHom, y: &[i64]) -> Option<Vec<i64>> {
    solve_with(h, y, ChoicePolicy::Least)
}

const ENUMERATION_LIMIT: usize = 1 << 16;

pub fn solve_with(h: &GroupHom, y: &[i64], policy: ChoicePolicy) -> Option<Vec<i64>> {
    let y = h.codomain.reduced(y.to_vec());
    let (p, kernel) = h.preimage(&y)?;
    if !h.domain.is_finite() {
        return Some(p);
    }
    match subgroup_elements_bounded(&h.domain, &kernel, ENUMERATION_LIMIT) {
        Some(ks) => {
            let sols = ks.iter().map(|k| h.domain.add(&p, k));
            match policy {
                ChoicePolicy::Least => sols.min(),
                ChoicePolicy::Greatest => sols.max(),
            }
        }
        None => Some(greedy_extreme(h, &y, policy)),
    }
}

/// Coordinate-by-coordinate search for the extreme solution of a large coset.
fn greedy_extreme(h: &GroupHom, y: &[i64], policy: ChoicePolicy) -> Vec<i64> {
    let n = h.domain.rank();
    let mut fixed: Vec<i64> = Vec::new();
    for i in 0..n {
        let d = h.domain.factors[i];
        let candidates: Box<dyn Iterator<Item = i64>> = match policy {
            ChoicePolicy::Least => Box::new(0..d),
            ChoicePolicy::Greatest => Box::new((0..d).rev()),
        };
        for v in candidates {
            let mut trial = fixed.clone();
            trial.push(v);
            if constrained_solvable(h, y, &trial) {
                fixed = trial;
                break;
            }
        }
    }
    fixed
}

fn constrained_solvable(h: &GroupHom, y: &[i64], prefix: &[i64]) -> bool {
    let (m, n) = (h.codomain.rank(), h.domain.rank());
    let k = prefix.len();
    let mut a = IntMatrix::zeros(m + k, n + m + k);
    let mut b = vec![0i128; m + k];
    for i in 0..m {
        for j in 0..n {
            a[(i, j)] = h.matrix[i][j] as i128;
        }
        a[(i, n + i)] = -(h.codomain.factors[i] as i128);
        b[i] = y[i] as i128;
    }
    for (t, &v) in prefix.iter().enumerate() {
        a[(m + t, t)] = 1;
        a[(m + t, n + m + t)] = -(h.domain.factors[t] as i128);
        b[m + t] = v as i128;
    }
    solve_integer_system(&a, &b).is_some()
}

/// Elements of the subgroup generated by `gens`, sorted; `None` if larger
/// than `limit`.
pub fn subgroup_elements_bounded(
    g: &FinAbGroup,
    gens: &[Vec<i64>],
    limit: usize,
) -> Option<Vec<Vec<i64>>> {
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    let zero = g.zero();
    seen.insert(zero.clone());
    queue.push_back(zero);
    while let Some(x) = queue.pop_front() {
        for s in gens {
            let y = g.add(&x, s);
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    Some(seen.into_iter().collect())
}

pub fn subgroup_elements(g: &FinAbGroup, gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    subgroup_elements_bounded(g, gens, usize::MAX).expect("unbounded")
}

/// `ker(g) / im(f)` for `A --f--> M --g--> C`.
pub fn homology_at(f: &GroupHom, g: &GroupHom) -> Result<FinAbGroup> {
    if f.codomain != g.domain {
        return Err(Error::EndpointMismatch(format!(
            "homology_at: {} vs {}",
            f.codomain, g.domain
        )));
    }
    if !g.compose(f)?.is_zero() {
        return Err(Error::CompositeNonzero);
    }
    let mid = &g.domain;
    let kgens = g.kernel_generators();
    let r = kgens.len();
    if r == 0 {
        return Ok(FinAbGroup::trivial());
    }
    // Presentation of ker(g) on the generators kgens, then quotient by im(f).
    let incl = GroupHom::from_columns(FinAbGroup::free(r), mid.clone(), &kgens)?;
    let mut rels: Vec<Vec<i64>> = incl.kernel_generators();
    for j in 0..f.domain.rank() {
        let (p, _) = incl
            .preimage(&f.column(j))
            .ok_or(Error::CompositeNonzero)?;
        rels.push(p);
    }
    Ok(presentation_to_group(r, &rels).group)
}

/// Cokernel of an integer relation matrix, with the projection from the free
/// group on the generators and a lift of every quotient generator.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub group: FinAbGroup,
    pub projection: GroupHom,
    pub lifts: Vec<Vec<i64>>,
}

pub fn presentation_to_group(num_gens: usize, relations: &[Vec<i64>]) -> Presentation {
    let m = IntMatrix::from_rows(num_gens, relations);
    let snf = smith_normal_form(&m);
    let diag = |i: usize| -> i128 {
        if i < m.rows() {
            snf.s[(i, i)]
        } else {
            0
        }
    };
    let kept: Vec<usize> = (0..num_gens).filter(|&i| diag(i) != 1).collect();
    let factors: Vec<i64> = kept
        .iter()
        .map(|&i| i64::try_from(diag(i)).expect("invariant factor overflow"))
        .collect();
    let group = FinAbGroup::new(factors.clone()).expect("smith form yields a divisibility chain");
    let columns: Vec<Vec<i64>> = (0..num_gens)
        .map(|j| {
            kept.iter()
                .zip(&factors)
                .map(|(&i, &d)| reduce_i128(snf.v[(j, i)], d))
                .collect()
        })
        .collect();
    let projection = GroupHom::from_columns(FinAbGroup::free(num_gens), group.clone(), &columns)
        .expect("projection from a free group is well defined");
    let lifts = kept
        .iter()
        .map(|&i| {
            (0..num_gens)
                .map(|j| i64::try_from(snf.v_inv[(i, j)]).expect("lift overflow"))
                .collect()
        })
        .collect();
    Presentation {
        group,
        projection,
        lifts,
    }
}

/// `G_1 ⊕ … ⊕ G_k` in canonical form with structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: FinAbGroup,
    pub injections: Vec<GroupHom>,
    pub projections: Vec<GroupHom>,
}

pub fn direct_sum(parts: &[FinAbGroup]) -> DirectSum {
    let n: usize = parts.iter().map(|g| g.rank()).sum();
    let mut rels = Vec::new();
    let mut offsets = Vec::new();
    let mut off = 0;
    for g in parts {
        offsets.push(off);
        for (i, &d) in g.factors.iter().enumerate() {
            let mut r = vec![0; n];
            r[off + i] = d;
            rels.push(r);
        }
        off += g.rank();
    }
    let pres = presentation_to_group(n, &rels);
    let injections = parts
        .iter()
        .zip(&offsets)
        .map(|(g, &o)| {
            let cols: Vec<Vec<i64>> = (0..g.rank()).map(|i| pres.projection.column(o + i)).collect();
            GroupHom::from_columns(g.clone(), pres.group.clone(), &cols).expect("injection")
        })
        .collect();
    let projections = parts
        .iter()
        .zip(&offsets)
        .map(|(g, &o)| {
            let cols: Vec<Vec<i64>> = pres
                .lifts
                .iter()
                .map(|l| g.reduced(l[o..o + g.rank()].to_vec()))
                .collect();
            GroupHom::from_columns(pres.group.clone(), g.clone(), &cols).expect("projection")
        })
        .collect();
    DirectSum {
        group: pres.group,
        injections,
        projections,
    }
}


#[cfg(test)]
mod proptests;
