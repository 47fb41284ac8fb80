//! Semisimple cone engine: `Z2`-graded vector spaces over `F_p`, where the
//! cone of `f` is `coker f ⊕ (ker f)[1]`.

/// Reduced row echelon form over `F_p`; returns pivot columns.
fn rref(m: &mut [Vec<i64>], cols: usize, p: i64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(i) = (r..m.len()).find(|&i| m[i][c].rem_euclid(p) != 0) else {
            continue;
        };
        m.swap(r, i);
        let inv = inverse_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = (*x * inv).rem_euclid(p);
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let k = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] - k * m[r][j]).rem_euclid(p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn inverse_mod(a: i64, p: i64) -> i64 {
    (1..p).find(|&x| (a * x).rem_euclid(p) == 1).expect("p is prime")
}

/// Basis of `{x : A x = 0}` as columns, for an `r × c` matrix.
pub(crate) fn nullspace(a: &[Vec<i64>], c: usize, p: i64) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = a.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let pivots = rref(&mut m, c, p);
    (0..c)
        .filter(|j| !pivots.contains(j))
        .map(|free| {
            let mut v = vec![0; c];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (-m[row][free]).rem_euclid(p);
            }
            v
        })
        .collect()
}

/// Rows spanning `{y : y A = 0}`.
pub(crate) fn left_nullspace(a: &[Vec<i64>], r: usize, c: usize, p: i64) -> Vec<Vec<i64>> {
    let t: Vec<Vec<i64>> = (0..c).map(|j| (0..r).map(|i| a[i][j]).collect()).collect();
    nullspace(&t, r, p)
}

/// Cone data in local terms: `parities` of the summands of `Z` (sorted),
/// `g[z][v]` for `Y → Z`, and `h[u][z]` for `Z → σX` landing on the
/// summand `σX_u`.
pub(crate) struct LocalCone {
    pub z_types: Vec<usize>,
    pub g: Vec<Vec<i64>>,
    pub h: Vec<Vec<i64>>,
}

pub(crate) fn split_cone(x: &[usize], y: &[usize], f: &[Vec<i64>], p: i64) -> LocalCone {
    let mut coker = [Vec::new(), Vec::new()];
    let mut ker = [Vec::new(), Vec::new()];
    let mut xs = [Vec::new(), Vec::new()];
    let mut ys = [Vec::new(), Vec::new()];
    for par in 0..2 {
        xs[par] = (0..x.len()).filter(|&u| x[u] == par).collect::<Vec<_>>();
        ys[par] = (0..y.len()).filter(|&v| y[v] == par).collect::<Vec<_>>();
        let block: Vec<Vec<i64>> = ys[par]
            .iter()
            .map(|&v| xs[par].iter().map(|&u| f[v][u]).collect())
            .collect();
        coker[par] = left_nullspace(&block, ys[par].len(), xs[par].len(), p);
        ker[par] = nullspace(&block, xs[par].len(), p);
    }
    // Parity i of Z: the cokernel in parity i, then the kernel from parity 1-i.
    let mut z_types = Vec::new();
    let mut g_rows = Vec::new();
    let mut h_cols: Vec<Vec<(usize, i64)>> = Vec::new();
    for par in 0..2 {
        for q in &coker[par] {
            z_types.push(par);
            let mut row = vec![0; y.len()];
            for (k, &v) in ys[par].iter().enumerate() {
                row[v] = q[k];
            }
            g_rows.push(row);
            h_cols.push(Vec::new());
        }
        for kv in &ker[1 - par] {
            z_types.push(par);
            g_rows.push(vec![0; y.len()]);
            h_cols.push(
                xs[1 - par]
                    .iter()
                    .zip(kv)
                    .map(|(&u, &c)| (u, c))
                    .collect(),
            );
        }
    }
    let mut h = vec![vec![0; z_types.len()]; x.len()];
    for (z, col) in h_cols.iter().enumerate() {
        for &(u, c) in col {
            h[u][z] = c;
        }
    }
    LocalCone {
        z_types,
        g: g_rows,
        h,
    }
}
