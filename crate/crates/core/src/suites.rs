//! Batch check suites run by the command line tool.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abgroup::{subgroup_elements, FinAbGroup};
use crate::category::{Morphism, ObjId};
use crate::derived::HomFunctor;
use crate::error::Result;
use crate::fractions::{ore_equalize, ore_square, wo_filtered_witness};
use crate::colocal::subo_filtered_witness;
use crate::functor::Representable;
use crate::les::{default_window, tria_filtered_witness, tria_forgetful_check, verify_exact, LesBuilder};
use crate::oracle::{colimit_agrees, raw_order, MAX_RAW_ORDER};
use crate::report::CheckReport;
use crate::setting::Setting;
use crate::thick::check_two_out_of_six;

pub const SUITES: [&str; 5] = ["ore", "filtered", "twosix", "les", "oracle"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_element(g: &FinAbGroup, rng: &mut impl Rng) -> Vec<i64> {
    g.factors().iter().map(|&d| rng.gen_range(0..d)).collect()
}

pub fn random_morphism(set: &Setting, a: ObjId, b: ObjId, rng: &mut impl Rng) -> Morphism {
    Morphism { src: a, dst: b, coords: random_element(set.cat().hom(a, b), rng) }
}

/// A weak equivalence out of a random object with a nonempty `Wo` diagram.
pub fn random_weak(set: &Setting, rng: &mut impl Rng) -> Result<Morphism> {
    let n = set.cat().len();
    loop {
        let a = rng.gen_range(0..n);
        if let Some(s) = set.wo(a)?.objects.choose(rng) {
            return Ok(s.clone());
        }
    }
}

pub fn ore_suite(set: &Setting, samples: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let p = set.cat();
    let e = set.thick();
    let mut rng = rng(seed);
    let mut square = CheckReport::new("ore_square");
    let mut equal = CheckReport::new("ore_equalize");
    for _ in 0..samples {
        let s = random_weak(set, &mut rng)?;
        let c = rng.gen_range(0..p.len());
        let f = random_morphism(set, s.src, c, &mut rng);
        match ore_square(&s, &f, set) {
            Ok(sq) => square.check(
                p.compose(&sq.g, &s)? == p.compose(&sq.t, &f)? && e.is_weak_equivalence(&sq.t) == Ok(true),
                || format!("postcondition fails for s = {s:?}, f = {f:?}"),
            ),
            Err(err) => square.fail(format!("s = {s:?}, f = {f:?}: {err}")),
        }
        // g = f + k with k∘s = 0
        let b = rng.gen_range(0..p.len());
        let f = random_morphism(set, s.dst, b, &mut rng);
        let pre = p.precompose_map(&s, b);
        let kernel = subgroup_elements(pre.domain(), &pre.kernel_generators());
        let k = kernel.choose(&mut rng).cloned().unwrap_or_else(|| pre.domain().zero());
        let g = p.add(&f, &p.morphism(s.dst, b, k)?)?;
        match ore_equalize(&f, &g, &s, set) {
            Ok((t, _)) => equal.check(
                p.compose(&t, &f)? == p.compose(&t, &g)? && e.is_weak_equivalence(&t) == Ok(true),
                || format!("postcondition fails for f = {f:?}, g = {g:?}, s = {s:?}"),
            ),
            Err(err) => equal.fail(format!("f = {f:?}, g = {g:?}: {err}")),
        }
    }
    Ok(vec![square, equal])
}

pub fn filtered_suite(set: &Setting) -> Result<Vec<CheckReport>> {
    let mut wo = CheckReport::new("wo_filtered_witness");
    let mut subo = CheckReport::new("subo_filtered_witness");
    let mut tria = CheckReport::new("tria_filtered_witness");
    let mut forget = CheckReport::new("tria_forgetful_check");
    for b in set.cat().objects() {
        wo.merge(wo_filtered_witness(b, set)?);
        subo.merge(subo_filtered_witness(b, set)?);
        tria.merge(tria_filtered_witness(b, set)?);
        forget.merge(tria_forgetful_check(b, set)?);
    }
    Ok(vec![wo, subo, tria, forget])
}

/// Composable triples, half drawn from chains of weak equivalences so that
/// the hypothesis is met often.
pub fn twosix_suite(set: &Setting, samples: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let p = set.cat();
    let mut rng = rng(seed);
    let mut r = CheckReport::new("two_out_of_six");
    for k in 0..samples {
        let n = p.len();
        let (f, g, h) = if k % 2 == 0 {
            let f = random_weak(set, &mut rng)?;
            let g = set.wo(f.dst)?.objects.choose(&mut rng).cloned().expect("identity is weak");
            let h = set.wo(g.dst)?.objects.choose(&mut rng).cloned().expect("identity is weak");
            (f, g, h)
        } else {
            let (a, b, c, d) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            (
                random_morphism(set, a, b, &mut rng),
                random_morphism(set, b, c, &mut rng),
                random_morphism(set, c, d, &mut rng),
            )
        };
        r.merge(check_two_out_of_six(&f, &g, &h, set.thick()));
    }
    Ok(vec![r])
}

pub fn les_suite(set: &Setting) -> Result<Vec<CheckReport>> {
    let p = set.cat();
    let window = default_window(set);
    let mut r = CheckReport::new("hom_les exactness");
    for a in p.objects() {
        let lb = LesBuilder::new(HomFunctor::representable(p, a), set)?;
        for b in p.objects() {
            let les = lb.build(b, &window)?;
            let (ok, at) = verify_exact(&les);
            r.check(ok && les.comparison_isomorphic, || {
                format!("T({}, -) at {}: first inexact node {at:?}", p.name(a), p.name(b))
            });
        }
    }
    Ok(vec![r])
}

/// Smith colimits against coset enumeration on every `Wo`, `Subo` and
/// `Tria` diagram of representables whose groups have orders summing to at
/// most `bound`. Diagrams whose direct sum is too large to enumerate count
/// as not applicable.
pub fn oracle_suite(set: &Setting, bound: u128) -> Result<Vec<CheckReport>> {
    let p = set.cat();
    let mut r = CheckReport::new("colimit oracle");
    for b in p.objects() {
        let (wo, subo, tria) = (set.wo(b)?, set.subo(b)?, set.tria(b)?);
        for a in p.objects() {
            let f = Representable { cat: p.clone(), a };
            let diagrams = [
                ("Wo", wo.apply(&f)),
                ("Subo", subo.apply(&f)),
                ("Tria first", tria.first_vertex(&f)),
                ("Tria third", tria.third_vertex(&f)),
            ];
            for (kind, d) in diagrams {
                let too_big = d.total_order().is_none_or(|o| o > bound)
                    || raw_order(&d).is_none_or(|o| o > MAX_RAW_ORDER);
                if too_big {
                    r.not_applicable += 1;
                    continue;
                }
                let c = crate::abgroup::colimit(&d)?;
                r.check(colimit_agrees(&d, &c), || {
                    format!("{kind}({}) with T({}, -)", p.name(b), p.name(a))
                });
            }
        }
    }
    Ok(vec![r])
}

pub fn run_suite(name: &str, set: &Setting, seed: u64) -> Result<Vec<CheckReport>> {
    match name {
        "ore" => ore_suite(set, 1000, seed),
        "filtered" => filtered_suite(set),
        "twosix" => twosix_suite(set, 1000, seed),
        "les" => les_suite(set),
        "oracle" => oracle_suite(set, 4096),
        other => Err(crate::Error::parse("--suite", format!("unknown suite `{other}`"))),
    }
}
