//! Stable module category of `Z/p^L`. Indecomposables are `Z/p^j` for
//! `0 < j < L`; `Z/p^L` itself is projective-injective and hence zero.

use crate::abgroup::presentation_to_group;

use super::split::LocalCone;

fn pow(p: i64, e: i64) -> i64 {
    p.pow(e as u32)
}

/// Order of the stable hom group between `Z/p^a` and `Z/p^b`.
pub(crate) fn hom_order(p: i64, l: i64, a: i64, b: i64) -> i64 {
    pow(p, a.min(b).min(l - a).min(l - b))
}

/// Exponent of `k` in `g_bc ∘ g_ab = p^k g_ac`, where `g_ab` is the map
/// `1 ↦ p^{max(0, b-a)}`.
pub(crate) fn comp_exponent(a: i64, b: i64, c: i64) -> i64 {
    (b - a).max(0) + (c - b).max(0) - (c - a).max(0)
}

/// Happel cone: the pushout of `f` along `X → I(X)`, decomposed into cyclic
/// summands with projective summands discarded.
///
/// `x`, `y` are exponents; `f[v][u]` is the coefficient of `g_{x_u y_v}`.
pub(crate) fn stable_cone(p: i64, l: i64, x: &[i64], y: &[i64], f: &[Vec<i64>]) -> LocalCone {
    let (nx, ny) = (x.len(), y.len());
    let n = ny + nx;
    let mut rels = Vec::new();
    for (v, &e) in y.iter().enumerate() {
        let mut r = vec![0; n];
        r[v] = pow(p, e);
        rels.push(r);
    }
    for (u, &e) in x.iter().enumerate() {
        let mut r = vec![0; n];
        r[ny + u] = pow(p, l);
        rels.push(r);
        let mut r = vec![0; n];
        for (v, &ev) in y.iter().enumerate() {
            r[v] = f[v][u] * pow(p, (ev - e).max(0));
        }
        r[ny + u] = -pow(p, l - e);
        rels.push(r);
    }
    let pres = presentation_to_group(n, &rels);
    let exps: Vec<i64> = pres
        .group
        .factors()
        .iter()
        .map(|&d| (d as f64).log(p as f64).round() as i64)
        .collect();
    let kept: Vec<usize> = (0..exps.len()).filter(|&k| exps[k] < l).collect();
    let z_exps: Vec<i64> = kept.iter().map(|&k| exps[k]).collect();

    let g = kept
        .iter()
        .map(|&k| {
            let e = exps[k];
            (0..ny)
                .map(|v| {
                    let m = pres.projection.column(v)[k];
                    let unit = pow(p, (e - y[v]).max(0));
                    debug_assert_eq!(m % unit, 0);
                    (m / unit).rem_euclid(hom_order(p, l, y[v], e))
                })
                .collect()
        })
        .collect();
    let h = (0..nx)
        .map(|u| {
            let target = l - x[u];
            kept.iter()
                .map(|&k| {
                    let e = exps[k];
                    let m = pres.lifts[k][ny + u].rem_euclid(pow(p, target));
                    let unit = pow(p, (target - e).max(0));
                    debug_assert_eq!(m % unit, 0);
                    (m / unit).rem_euclid(hom_order(p, l, e, target))
                })
                .collect()
        })
        .collect();
    LocalCone {
        z_types: z_exps.iter().map(|&e| e as usize).collect(),
        g,
        h,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hom_orders() {
        assert_eq!(hom_order(2, 4, 2, 2), 4);
        assert_eq!(hom_order(2, 4, 1, 3), 2);
        assert_eq!(hom_order(2, 4, 3, 3), 2);
    }

    #[test]
    fn cone_of_identity_vanishes() {
        let c = stable_cone(2, 4, &[2], &[2], &[vec![1]]);
        assert!(c.z_types.is_empty());
    }

    #[test]
    fn cone_of_zero_is_sum() {
        let c = stable_cone(2, 4, &[1], &[3], &[vec![0]]);
        let mut t = c.z_types.clone();
        t.sort();
        assert_eq!(t, vec![3, 3]);
    }

    #[test]
    fn cone_of_doubling() {
        // ·2 on Z/4: cokernel Z/2 and the shifted kernel Ω⁻¹(Z/2) = Z/8.
        let c = stable_cone(2, 4, &[2], &[2], &[vec![2]]);
        assert_eq!(c.z_types, vec![1, 3]);
    }
}
