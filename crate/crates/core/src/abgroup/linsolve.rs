//! Integer linear systems `A x = b` via Smith normal form.

use super::snf::{smith_normal_form, IntMatrix};

/// Solution set of an integer system: `particular + span(kernel)`.
#[derive(Clone, Debug)]
pub struct IntSolution {
    pub particular: Vec<i128>,
    pub kernel: Vec<Vec<i128>>,
}

pub fn solve_integer_system(a: &IntMatrix, b: &[i128]) -> Option<IntSolution> {
    assert_eq!(a.rows(), b.len());
    let snf = smith_normal_form(a);
    let (m, n) = (a.rows(), a.cols());
    let ub: Vec<i128> = (0..m)
        .map(|i| (0..m).map(|k| snf.u[(i, k)] * b[k]).sum())
        .collect();
    let mut y = vec![0i128; n];
    let mut rank = 0;
    for i in 0..m {
        let s = if i < n { snf.s[(i, i)] } else { 0 };
        if s == 0 {
            if ub[i] != 0 {
                return None;
            }
        } else {
            if ub[i] % s != 0 {
                return None;
            }
            y[i] = ub[i] / s;
            rank = i + 1;
        }
    }
    let particular = (0..n)
        .map(|i| (0..n).map(|j| snf.v[(i, j)] * y[j]).sum())
        .collect();
    let kernel = (rank..n)
        .map(|j| (0..n).map(|i| snf.v[(i, j)]).collect())
        .collect();
    Some(IntSolution { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_and_rejects() {
        let a = IntMatrix::from_rows(2, &[vec![2i64, 4]]);
        let sol = solve_integer_system(&a, &[6]).unwrap();
        let p = &sol.particular;
        assert_eq!(2 * p[0] + 4 * p[1], 6);
        assert_eq!(sol.kernel.len(), 1);
        let k = &sol.kernel[0];
        assert_eq!(2 * k[0] + 4 * k[1], 0);
        assert!(solve_integer_system(&a, &[3]).is_none());
    }
}
