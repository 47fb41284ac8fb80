//! Smith normal form over the integers, with unimodular transforms.

use std::fmt;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows<T: Copy + Into<i128>>(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {i} has wrong length");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x.into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> i128 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a = self.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[(k, k)] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[(i, k)] != 0) else {
                    return 0;
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[(i, j)] = (a[(i, j)] * a[(k, k)] - a[(i, k)] * a[(k, j)]) / prev;
                }
            }
            prev = a[(k, k)];
        }
        sign * a[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i128) {
        if k == 0 {
            return;
        }
        for j in 0..self.cols {
            let v = self[(src, j)];
            self[(dst, j)] += k * v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: i128) {
        if k == 0 {
            return;
        }
        for i in 0..self.rows {
            let v = self[(i, src)];
            self[(i, dst)] += k * v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[i128]> = (0..self.rows).map(|i| self.row(i)).collect();
        write!(f, "{}x{} {:?}", self.rows, self.cols, rows)
    }
}

/// `u * m * v == s`, with `s` diagonal, nonnegative, and each diagonal entry
/// dividing the next (zeros last).
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `v`, kept alongside so cokernel generators can be lifted.
    pub v_inv: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i128> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)])
            .collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);

    for t in 0..r.min(c) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let Some((pi, pj)) = min_abs_entry(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if a[(i, t)] != 0 {
                    let q = a[(i, t)].div_euclid(a[(t, t)]);
                    a.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                    if a[(i, t)] != 0 {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..c {
                if a[(t, j)] != 0 {
                    let q = a[(t, j)].div_euclid(a[(t, t)]);
                    a.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                    // v_inv tracks the inverse column operation as a row operation.
                    v_inv.add_row(t, j, q);
                    if a[(t, j)] != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                // Divisibility: fold any offending row into the pivot row.
                let p = a[(t, t)];
                let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| a[(i, j)] % p != 0));
                match bad {
                    Some(i) => {
                        a.add_row(t, i, 1);
                        u.add_row(t, i, 1);
                    }
                    None => break,
                }
            }
            let (pi, pj) = min_abs_entry_cross(&a, t);
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);
        }
        if a[(t, t)] < 0 {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    Snf { u, s: a, v, v_inv }
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(i128, usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a[(i, j)].abs();
            if x != 0 && best.is_none_or(|(b, _, _)| x < b) {
                best = Some((x, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Smallest nonzero entry in pivot row `t` and column `t`; the pivot itself
/// is nonzero so this always succeeds.
fn min_abs_entry_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (a[(t, t)].abs(), t, t);
    for i in t + 1..a.rows() {
        let x = a[(i, t)].abs();
        if x != 0 && x < best.0 {
            best = (x, i, t);
        }
    }
    for j in t + 1..a.cols() {
        let x = a[(t, j)].abs();
        if x != 0 && x < best.0 {
            best = (x, t, j);
        }
    }
    (best.1, best.2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Snf {
        let snf = smith_normal_form(m);
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.s);
        assert_eq!(snf.u.determinant().abs(), 1);
        assert_eq!(snf.v.determinant().abs(), 1);
        assert_eq!(snf.v.mul(&snf.v_inv), IntMatrix::identity(m.cols()));
        let d = snf.diagonal();
        for w in d.windows(2) {
            if w[1] != 0 {
                assert_eq!(w[1] % w[0], 0, "chain broken: {d:?}");
            } else if w[0] == 0 {
                assert_eq!(w[1], 0);
            }
        }
        snf
    }

    #[test]
    fn diag_two_three() {
        let m = IntMatrix::from_rows(2, &[vec![2i64, 0], vec![0, 3]]);
        let snf = check(&m);
        assert_eq!(snf.diagonal(), vec![1, 6]);
    }

    #[test]
    fn zero_and_identity() {
        let z = IntMatrix::from_rows(1, &[vec![0i64]]);
        assert_eq!(check(&z).diagonal(), vec![0]);
        let id = IntMatrix::identity(2);
        assert_eq!(check(&id).diagonal(), vec![1, 1]);
    }

    #[test]
    fn rectangular() {
        let m = IntMatrix::from_rows(3, &[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(check(&m).diagonal(), vec![2, 6, 12]);
        let m = IntMatrix::from_rows(2, &[vec![4i64, 0], vec![0, 6], vec![0, 0]]);
        assert_eq!(check(&m).diagonal(), vec![2, 12]);
    }

    #[test]
    fn empty_shapes() {
        let m = IntMatrix::zeros(0, 3);
        let snf = check(&m);
        assert!(snf.diagonal().is_empty());
        assert_eq!(snf.v, IntMatrix::identity(3));
    }
}
