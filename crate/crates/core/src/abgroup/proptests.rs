use proptest::prelude::*;

use super::colimit::gcd;
use super::snf::{smith_normal_form, IntMatrix};
use super::*;
use crate::oracle::{brute_exact, brute_solve, colimit_agrees};

fn small_group() -> impl Strategy<Value = FinAbGroup> {
    prop::collection::vec(prop::sample::select(vec![2i64, 3, 4, 6, 8]), 0..=2)
        .prop_map(|orders| FinAbGroup::from_cyclic_orders(&orders))
        .prop_filter("bounded", |g| g.order().unwrap() <= 32)
}

/// Random hom: each entry is scaled by `e_i / gcd(e_i, d_j)` so that the
/// column is killed by the order of its generator.
fn hom_between(dom: FinAbGroup, cod: FinAbGroup) -> impl Strategy<Value = GroupHom> {
    let (r, c) = (cod.rank(), dom.rank());
    prop::collection::vec(-20i64..20, r * c).prop_map(move |v| {
        let cols: Vec<Vec<i64>> = (0..c)
            .map(|j| {
                let d = dom.factors()[j];
                (0..r)
                    .map(|i| {
                        let e = cod.factors()[i];
                        v[i * c + j] * (e / gcd(e, d))
                    })
                    .collect()
            })
            .collect();
        GroupHom::from_columns(dom.clone(), cod.clone(), &cols).expect("well defined")
    })
}

fn any_hom() -> impl Strategy<Value = GroupHom> {
    (small_group(), small_group()).prop_flat_map(|(a, b)| hom_between(a, b))
}

fn diagram() -> impl Strategy<Value = FiniteDiagram> {
    prop::collection::vec(small_group(), 1..=3)
        .prop_filter("total order", |gs| {
            gs.iter().map(|g| g.order().unwrap()).product::<u128>() <= 4096
        })
        .prop_flat_map(|groups| {
            let n = groups.len();
            let arrows = prop::collection::vec((0..n, 0..n), 0..=3).prop_flat_map({
                let groups = groups.clone();
                move |pairs| {
                    pairs
                        .into_iter()
                        .map(|(s, t)| {
                            hom_between(groups[s].clone(), groups[t].clone())
                                .prop_map(move |h| (s, t, h))
                        })
                        .collect::<Vec<_>>()
                }
            });
            (Just(groups), arrows)
        })
        .prop_map(|(groups, arrows)| FiniteDiagram { groups, arrows })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_a_unimodular_diagonalisation(
        (r, c, v) in (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), prop::collection::vec(-9i64..=9, r * c))
        })
    ) {
        let rows: Vec<Vec<i64>> = v.chunks(c).map(|ch| ch.to_vec()).collect();
        let m = IntMatrix::from_rows(c, &rows);
        let snf = smith_normal_form(&m);
        prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.s.clone());
        prop_assert_eq!(snf.u.determinant().abs(), 1);
        prop_assert_eq!(snf.v.determinant().abs(), 1);
        for i in 0..r {
            for j in 0..c {
                if i != j {
                    prop_assert_eq!(snf.s[(i, j)], 0);
                }
            }
        }
        let d = snf.diagonal();
        for w in d.windows(2) {
            prop_assert!(w[0] >= 0);
            if w[1] != 0 {
                prop_assert_eq!(w[1] % w[0], 0);
            }
        }
    }

    #[test]
    fn colimit_matches_coset_enumeration(d in diagram()) {
        let c = colimit(&d).unwrap();
        prop_assert!(colimit_agrees(&d, &c));
    }

    #[test]
    fn colimit_ignores_arrow_order(d in diagram()) {
        let mut rev = d.clone();
        rev.arrows.reverse();
        prop_assert_eq!(colimit(&d).unwrap().group, colimit(&rev).unwrap().group);
    }

    #[test]
    fn solve_matches_enumeration(h in any_hom(), seed in 0usize..64) {
        let elems: Vec<Vec<i64>> = h.codomain().elements().unwrap().collect();
        let y = &elems[seed % elems.len()];
        let fast = solve(&h, y);
        let slow = brute_solve(&h, y);
        prop_assert_eq!(fast.is_some(), slow.is_some());
        if let Some(x) = fast {
            prop_assert_eq!(&h.apply(&x), y);
            // least solution in lexicographic order
            prop_assert_eq!(Some(x), slow);
        }
    }

    #[test]
    fn homology_trivial_iff_exact(
        (g, picks) in (any_hom(), prop::collection::vec(0usize..1000, 0..=3))
    ) {
        // f maps a sum of cyclic groups onto chosen elements of ker g.
        let ker = subgroup_elements(g.domain(), &g.kernel_generators());
        let chosen: Vec<Vec<i64>> = picks.iter().map(|&i| ker[i % ker.len()].clone()).collect();
        let orders: Vec<i64> = chosen
            .iter()
            .map(|x| (1..).find(|&k| g.domain().scale(k, x).iter().all(|&v| v == 0)).unwrap())
            .collect();
        let ds = direct_sum(&orders.iter().map(|&o| FinAbGroup::cyclic(o)).collect::<Vec<_>>());
        let cols: Vec<Vec<i64>> = (0..ds.group.rank())
            .map(|k| {
                let lift = ds.projections.iter().zip(&chosen).fold(g.domain().zero(), |acc, (p, x)| {
                    let c = p.column(k);
                    let coef = c.first().copied().unwrap_or(0);
                    g.domain().add(&acc, &g.domain().scale(coef, x))
                });
                lift
            })
            .collect();
        let f = GroupHom::from_columns(ds.group.clone(), g.domain().clone(), &cols).unwrap();
        let h = homology_at(&f, &g).unwrap();
        prop_assert_eq!(h.is_trivial(), brute_exact(&f, &g));
        let expected = ker.len() as u128 / f.image_order().unwrap();
        prop_assert_eq!(h.order(), Some(expected));
    }

    #[test]
    fn kernel_generators_span_kernel(g in any_hom()) {
        let ks = subgroup_elements(g.domain(), &g.kernel_generators());
        let brute: Vec<Vec<i64>> = g
            .domain()
            .elements()
            .unwrap()
            .filter(|x| g.apply(x).iter().all(|&v| v == 0))
            .collect();
        prop_assert_eq!(ks, brute);
    }

    #[test]
    fn composite_nonzero_rejected(f in any_hom()) {
        let id = GroupHom::identity(f.codomain().clone());
        if !f.is_zero() {
            prop_assert_eq!(homology_at(&f, &id), Err(Error::CompositeNonzero));
        }
    }
}
