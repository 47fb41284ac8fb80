//! End-to-end acceptance suite: one PASS/FAIL line per criterion.

use std::collections::HashMap;
use std::process::Command;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;

use triloc::category::{validate_presentation, ObjId};
use triloc::colocal::{colocalised_hom, compose_coroofs, compose_coroofs_dual, ColocalisedHom, Coroof};
use triloc::derived::{
    all_triangles, check_homological_on, extend_from_sub, factor_through_localisation, is_local,
    right_colocalise, right_localise, HomFunctor, NatTransformation,
};
use triloc::format::{from_json, to_json};
use triloc::fractions::localised_hom;
use triloc::les::{default_window, locality_criterion, nat_invertibility, verify_exact, LesBuilder};
use triloc::models::{mixed_fixture, model_sp, ModelFixture, ModelSpec};
use triloc::report::CheckReport;
use triloc::setting::Setting;
use triloc::suites::{filtered_suite, oracle_suite, ore_suite, random_element, rng, twosix_suite};
use triloc::thick::thick_closure;
use triloc::Result;

const SEED: u64 = 20_240_917;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn setting(fx: &ModelFixture) -> Setting {
    Setting::new(thick_closure(&fx.presentation, &fx.thick_generators).expect("closure"))
}

fn fixtures() -> [(&'static str, ModelFixture); 2] {
    [("model_sp", model_sp()), ("mixed", mixed_fixture())]
}

fn summary(r: &CheckReport) -> String {
    format!(
        "{}: {} passed, {} n/a, {} failed, {} undecidable",
        r.name,
        r.passed,
        r.not_applicable,
        r.failures.len(),
        r.non_verifiable.len()
    )
}

fn first_failure(rs: &[CheckReport]) -> Option<String> {
    rs.iter().find_map(|r| r.failures.first().cloned())
}

fn criterion_1() -> Result<Outcome> {
    let fx = model_sp();
    let set = setting(&fx);
    let p = set.cat();
    let window = default_window(&set);
    let (mut exact, mut total) = (0, 0);
    let mut bad = Vec::new();
    for a in p.objects() {
        let lb = LesBuilder::new(HomFunctor::representable(p, a), &set)?;
        for b in p.objects() {
            let r = lb.build(b, &window)?;
            total += 1;
            if verify_exact(&r).0 && r.comparison_isomorphic {
                exact += 1;
            } else {
                bad.push(format!("({}, {})", p.name(a), p.name(b)));
            }
        }
    }
    outcome(
        exact == total && total == 256,
        format!("{exact}/{total} pairs exact over shifts {window:?} {}", bad.join(" ")),
    )
}

fn criterion_2() -> Result<Outcome> {
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, fx) in fixtures() {
        let set = setting(&fx);
        let p = set.cat();
        let mut ok = 0;
        for a in p.objects() {
            for b in p.objects() {
                let loc = localised_hom(a, b, &set)?;
                let coloc = colocalised_hom(a, b, &set)?;
                if loc.group() == p.hom(a, fx.lb(b)) && coloc.group() == p.hom(a, fx.lperp_b(b)) {
                    ok += 1;
                }
            }
        }
        pass &= ok == p.len() * p.len();
        lines.push(format!("{name} {ok}/{}", p.len() * p.len()));
    }
    outcome(pass, lines.join(", "))
}

fn criterion_3() -> Result<Outcome> {
    let set = setting(&model_sp());
    let r = oracle_suite(&set, 4096)?.remove(0);
    outcome(r.no_failures() && r.passed > 0, summary(&r))
}

fn criterion_4() -> Result<Outcome> {
    let mut lines = Vec::new();
    let mut reports = Vec::new();
    for (k, (name, fx)) in fixtures().into_iter().enumerate() {
        let set = setting(&fx);
        let mut rs = ore_suite(&set, 1000, SEED + k as u64)?;
        rs.extend(twosix_suite(&set, 1000, SEED + k as u64)?);
        lines.push(format!("{name} [{}]", rs.iter().map(summary).collect::<Vec<_>>().join("; ")));
        reports.extend(rs);
    }
    let sampled_ok = reports
        .iter()
        .filter(|r| r.name.starts_with("ore"))
        .all(|r| r.passed == 1000);
    let pass = sampled_ok && reports.iter().all(CheckReport::no_failures);
    outcome(pass, format!("{}{}", lines.join(" | "), first_failure(&reports).unwrap_or_default()))
}

fn criterion_5() -> Result<Outcome> {
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, fx) in fixtures() {
        let rs = filtered_suite(&setting(&fx))?;
        for r in &rs {
            pass &= if r.name == "tria_forgetful_check" { r.no_failures() } else { r.full_pass() };
        }
        lines.push(format!("{name} [{}]", rs.iter().map(summary).collect::<Vec<_>>().join("; ")));
    }
    outcome(pass, lines.join(" | "))
}

fn criterion_6() -> Result<Outcome> {
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, fx) in fixtures() {
        let set = setting(&fx);
        let p = set.cat().clone();
        let triangles = all_triangles(&p);
        let mut functors: Vec<HomFunctor> = p.objects().map(|a| HomFunctor::representable(&p, a)).collect();
        let last = p.len() - 1;
        functors.push(functors[1].direct_sum(&functors[last], &p)?);
        functors.push(functors[2].direct_sum(&functors[last - 1], &p)?);
        let keep: Vec<bool> = p.objects().map(|a| set.thick().contains(a)).collect();
        functors.push(extend_from_sub(&functors[last].restrict(&keep, &p), &set)?);
        let mut failures = Vec::new();
        for f in &functors {
            let rf = right_localise(f, &set)?;
            let rc = right_colocalise(f, &set)?;
            let rrf = right_localise(&rf.functor, &set)?;
            let checks = [
                ("RF homological", check_homological_on(&rf.functor, &p, &triangles).full_pass()),
                ("R⊥F homological", check_homological_on(&rc.functor, &p, &triangles).full_pass()),
                (
                    "RF vanishes on E",
                    set.thick().members().iter().all(|&m| rf.functor.group(m).is_trivial()),
                ),
                (
                    "counit invertible on E",
                    set.thick()
                        .members()
                        .iter()
                        .all(|&m| rc.counit.component(m).is_some_and(|c| c.is_isomorphism())),
                ),
                ("locality conditions agree", is_local(f, &set)?.agree() && is_local(&rf.functor, &set)?.agree()),
                ("locality criterion", locality_criterion(f, &set)?.agree()),
                ("RF local", rrf.unit.is_invertible()),
                ("RRF ≅ RF", p.objects().all(|b| rrf.functor.group(b) == rf.functor.group(b))),
            ];
            for (what, ok) in checks {
                if !ok {
                    failures.push(format!("{what} for {}", f.label));
                }
            }
        }
        pass &= failures.is_empty();
        lines.push(format!("{name}: {} functors, {} failures {}", functors.len(), failures.len(), failures.join(", ")));
    }
    outcome(pass, lines.join(" | "))
}

/// `Φ: T(A, −) ⇒ G` with `G` local, either `G = R T(A', −)` and
/// `Φ = unit∘(−∘u)`, or `G = T(A', −)` for `A'` orthogonal to the
/// subcategory and `Φ = −∘u`, for random `u: A' → A`.
fn criterion_7() -> Result<Outcome> {
    let fx = model_sp();
    let set = setting(&fx);
    let p = set.cat().clone();
    let mut rng = rng(SEED);
    let local_objects: Vec<ObjId> = p.objects().filter(|&a| fx.lb(a) == a).collect();
    let (mut ok, mut trials, mut errors) = (0, 0, Vec::new());
    while trials < 50 {
        let a = rng.gen_range(0..p.len());
        let via_unit = trials % 2 == 0;
        let a2 = if via_unit { rng.gen_range(0..p.len()) } else { *local_objects.choose(&mut rng).unwrap() };
        let u = p.morphism(a2, a, random_element(p.hom(a2, a), &mut rng))?;
        let f = HomFunctor::representable(&p, a);
        let pre = NatTransformation::precomposition(&p, &u);
        let (g, phi) = if via_unit {
            let rg = right_localise(&HomFunctor::representable(&p, a2), &set)?;
            let phi = rg.unit.compose(&pre)?;
            (rg.functor, phi)
        } else {
            (HomFunctor::representable(&p, a2), pre)
        };
        trials += 1;
        let rf = right_localise(&f, &set)?;
        match factor_through_localisation(&phi, &f, &g, &set) {
            Ok(lifted) if lifted.compose(&rf.unit)? == phi => ok += 1,
            Ok(_) => errors.push(format!("Φ'∘unit ≠ Φ for u = {u:?}")),
            Err(e) => errors.push(format!("u = {u:?}: {e}")),
        }
    }
    outcome(ok == 50, format!("{ok}/{trials} factorisations {}", errors.join("; ")))
}

fn criterion_8() -> Result<Outcome> {
    let fx = mixed_fixture();
    let set = setting(&fx);
    let p = set.cat().clone();
    let mut rng = rng(SEED);
    let mut cache: HashMap<(ObjId, ObjId), ColocalisedHom> = HashMap::new();
    let mut hom = |a: ObjId, b: ObjId| -> Result<ColocalisedHom> {
        if let Some(h) = cache.get(&(a, b)) {
            return Ok(h.clone());
        }
        let h = colocalised_hom(a, b, &set)?;
        cache.insert((a, b), h.clone());
        Ok(h)
    };
    let random_coroof = |h: &ColocalisedHom, rng: &mut rand_chacha::ChaCha8Rng| -> Result<Coroof> {
        let s = h.diagram.objects.choose(rng).expect("zero map is in the diagram").clone();
        let f = p.morphism(h.a, s.src, random_element(p.hom(h.a, s.src), rng))?;
        Ok(Coroof { f, s })
    };
    let mut r = CheckReport::new("coroofs");
    for _ in 0..1000 {
        let [a, b, c, d] = [(); 4].map(|_| rng.gen_range(0..p.len()));
        let (ab, bc, cd) = (hom(a, b)?, hom(b, c)?, hom(c, d)?);
        let (ac, ad) = (hom(a, c)?, hom(a, d)?);
        let x = random_coroof(&ab, &mut rng)?;
        let y = random_coroof(&bc, &mut rng)?;
        let z = random_coroof(&cd, &mut rng)?;
        // to_hom∘classify is composition
        let to_hom_ok = [(&ab, &x), (&bc, &y), (&cd, &z)]
            .iter()
            .all(|(h, k)| h.classify(k).is_ok_and(|v| h.to_hom.apply(&v) == p.compose(&k.s, &k.f).unwrap().coords));
        r.check(to_hom_ok, || format!("to_hom mismatch on ({a}, {b}, {c}, {d})"));
        let yx = compose_coroofs(&y, &x, &p)?;
        let two = ac.classify(&yx)? == ac.classify(&compose_coroofs_dual(&y, &x, &p)?)?;
        r.check(two, || format!("descriptions differ on ({a}, {b}, {c})"));
        let left = ad.classify(&compose_coroofs(&z, &yx, &p)?)?;
        let right = ad.classify(&compose_coroofs(&compose_coroofs(&z, &y, &p)?, &x, &p)?)?;
        r.check(left == right, || format!("associativity fails on ({a}, {b}, {c}, {d})"));
        // the product only depends on the classes
        let x2 = ab.coroof_of(&ab.classify(&x)?)?;
        let moved = ac.classify(&compose_coroofs(&y, &x2, &p)?)? == ac.classify(&yx)?;
        r.check(moved, || format!("product depends on representatives on ({a}, {b}, {c})"));
    }
    outcome(r.no_failures() && r.passed == 4000, summary(&r))
}

/// Transformations `(−∘u): T(A, −) ⇒ T(A', −)` for `u` ranging over
/// identities, random maps, and maps from the two factors of `A`; the last
/// two kinds produce local-only and colocal-only failures.
fn criterion_9() -> Result<Outcome> {
    let fx = model_sp();
    let set = setting(&fx);
    let p = set.cat().clone();
    let mut rng = rng(SEED + 9);
    let mut r = CheckReport::new("nat_invertibility");
    let (mut only_local, mut only_colocal, mut invertible) = (0, 0, 0);
    for k in 0..100 {
        let a = rng.gen_range(0..p.len());
        let a2 = match k % 4 {
            0 => a,
            1 => rng.gen_range(0..p.len()),
            2 => fx.lb(a),
            _ => fx.lperp_b(a),
        };
        let u = if k % 8 == 0 {
            p.identity(a)
        } else {
            p.morphism(a2, a, random_element(p.hom(a2, a), &mut rng))?
        };
        let phi = NatTransformation::precomposition(&p, &u);
        let (f, g) = (HomFunctor::representable(&p, a), HomFunctor::representable(&p, a2));
        let v = nat_invertibility(&phi, &f, &g, &set)?;
        let direct = phi.components.iter().all(|c| c.as_ref().is_some_and(|c| c.is_isomorphism()));
        r.check(v.agree() && v.invertible == direct, || format!("verdict {v:?} for u = {u:?}"));
        match (v.localised_invertible, v.colocalised_invertible) {
            (true, true) => invertible += 1,
            (true, false) => only_local += 1,
            (false, true) => only_colocal += 1,
            _ => {}
        }
    }
    let covered = only_local > 0 && only_colocal > 0 && invertible > 0;
    outcome(
        r.no_failures() && r.passed == 100 && covered,
        format!(
            "{}; {invertible} invertible, {only_local} with only RΦ invertible, {only_colocal} with only R⊥Φ invertible",
            summary(&r)
        ),
    )
}

fn criterion_10() -> Result<Outcome> {
    let specs = [
        "split:2:1",
        "split:3:1",
        "split:2:2",
        "torsion:4:1",
        "torsion:2:2",
        "torsion:4:2",
        "product split:2:1 split:2:1",
        "product split:2:1 torsion:4:1",
    ];
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).expect("scratch directory");
    let bin = env!("CARGO_BIN_EXE_triloc");
    let mut failures = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let args: Vec<String> = match spec.split(' ').collect::<Vec<_>>()[..] {
            ["product", l, r] => vec!["product".into(), "--left".into(), l.into(), "--right".into(), r.into()],
            [m] => {
                let m: ModelSpec = m.parse()?;
                match m {
                    ModelSpec::Split { p, d } => vec!["split".into(), "--p".into(), p.to_string(), "--d".into(), d.to_string()],
                    ModelSpec::Torsion { n, maxrank } => {
                        vec!["torsion".into(), "--n".into(), n.to_string(), "--maxrank".into(), maxrank.to_string()]
                    }
                    ModelSpec::Product { .. } => unreachable!(),
                }
            }
            _ => unreachable!(),
        };
        let files = [dir.join(format!("f{i}a.json")), dir.join(format!("f{i}b.json"))];
        for file in &files {
            let out = Command::new(bin).arg("gen").args(&args).arg("-o").arg(file).output().expect("binary runs");
            if !out.status.success() {
                failures.push(format!("{spec}: gen failed"));
            }
        }
        let text = std::fs::read_to_string(&files[0]).unwrap_or_default();
        if text != std::fs::read_to_string(&files[1]).unwrap_or_default() {
            failures.push(format!("{spec}: gen is not deterministic"));
        }
        let status = Command::new(bin).arg("validate").arg(&files[0]).output().expect("binary runs").status;
        if status.code() != Some(0) {
            failures.push(format!("{spec}: validate exit {status}"));
        }
        match from_json(&text) {
            Ok(p) => {
                if !validate_presentation(&p).is_valid() {
                    failures.push(format!("{spec}: invalid presentation"));
                }
                if to_json(&p) != text {
                    failures.push(format!("{spec}: round trip changed the file"));
                }
            }
            Err(e) => failures.push(format!("{spec}: {e}")),
        }
    }
    outcome(failures.is_empty(), format!("{} fixtures {}", specs.len(), failures.join("; ")))
}

type Criterion = fn() -> Result<Outcome>;

fn main() {
    let criteria: [(u32, Criterion); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!(
            "criterion {n}: {} ({:.1}s) {}",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            detail.trim_end()
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
