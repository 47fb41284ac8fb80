//! Command line interface. Every subcommand prints one JSON document on
//! stdout; the exit status is zero iff all checks passed.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::category::{validate_presentation, CatPresentation, ObjId};
use crate::colocal::colocalised_hom;
use crate::derived::HomFunctor;
use crate::error::{Error, Result};
use crate::format::{from_json, parse, to_json};
use crate::fractions::localised_hom;
use crate::les::{build_les, default_window, verify_exact};
use crate::models::{ModelFixture, ModelSpec};
use crate::setting::Setting;
use crate::suites::run_suite;
use crate::thick::thick_closure;

#[derive(Parser, Debug)]
#[command(name = "triloc", version, about = "Localisation and colocalisation of finite triangulated categories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug)]
pub struct Context {
    /// Presentation file.
    #[arg(long)]
    pub cat: PathBuf,
    /// Comma-separated generators of the thick subcategory.
    #[arg(long, value_delimiter = ',')]
    pub thick: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the axioms of a presentation file.
    Validate { file: PathBuf },
    /// Write a model presentation.
    Gen {
        #[command(subcommand)]
        model: GenModel,
    },
    /// Localised hom group.
    LocHom {
        #[command(flatten)]
        ctx: Context,
        #[arg(long)]
        src: String,
        #[arg(long)]
        dst: String,
    },
    /// Colocalised hom group.
    ColocHom {
        #[command(flatten)]
        ctx: Context,
        #[arg(long)]
        src: String,
        #[arg(long)]
        dst: String,
    },
    /// Long exact sequence of a representable functor.
    Les {
        #[command(flatten)]
        ctx: Context,
        /// `hom:A`
        #[arg(long)]
        functor: String,
        #[arg(long)]
        object: String,
        /// Shifts `-K..=K`; one full period plus a margin by default.
        #[arg(long)]
        window: Option<i64>,
    },
    /// Run a check suite.
    Check {
        #[command(flatten)]
        ctx: Context,
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenModel {
    Split {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        d: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    Torsion {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        maxrank: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Product of two models; the first factor is the thick subcategory.
    Product {
        /// `split:P:D` or `torsion:N:R`
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Ore,
    Filtered,
    Twosix,
    Les,
    Oracle,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Ore => "ore",
            Suite::Filtered => "filtered",
            Suite::Twosix => "twosix",
            Suite::Les => "les",
            Suite::Oracle => "oracle",
        }
    }
}

/// Outcome of a subcommand: the report and whether everything passed.
pub struct Outcome {
    pub report: Value,
    pub ok: bool,
}

fn load(ctx: &Context) -> Result<(Setting, Arc<CatPresentation>)> {
    let p = Arc::new(parse(&ctx.cat)?);
    let gens = ctx
        .thick
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| p.id(s))
        .collect::<Result<Vec<ObjId>>>()?;
    let e = thick_closure(&p, &gens)?;
    Ok((Setting::new(e), p))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn group_json(g: &crate::abgroup::FinAbGroup) -> Value {
    json!({ "factors": g.factors(), "order": g.order().map(|o| o.to_string()) })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serialisable")
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Validate { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
            let p = from_json(&text)?;
            let r = validate_presentation(&p);
            Ok(Outcome {
                ok: r.is_valid(),
                report: json!({
                    "valid": r.is_valid(),
                    "objects": p.len(),
                    "violations": r.violations,
                    "cones_checked": r.cones_checked,
                    "cones_out_of_range": r.cones_out_of_range,
                }),
            })
        }
        Command::Gen { model } => {
            let (spec, output) = match model {
                GenModel::Split { p, d, output } => (ModelSpec::Split { p: *p, d: *d }, output),
                GenModel::Torsion { n, maxrank, output } => (ModelSpec::Torsion { n: *n, maxrank: *maxrank }, output),
                GenModel::Product { left, right, output } => (
                    ModelSpec::Product { left: Box::new(left.parse()?), right: Box::new(right.parse()?) },
                    output,
                ),
            };
            let fx = ModelFixture::new(spec.clone())?;
            let p = &fx.presentation;
            let thick: Option<Vec<&str>> = matches!(spec, ModelSpec::Product { .. })
                .then(|| fx.thick_generators.iter().map(|&g| p.name(g)).collect());
            write(output, &to_json(p))?;
            Ok(Outcome {
                ok: true,
                report: json!({
                    "model": spec.to_string(),
                    "objects": p.len(),
                    "output": output.display().to_string(),
                    "thick_generators": thick,
                }),
            })
        }
        Command::LocHom { ctx, src, dst } => {
            let (set, p) = load(ctx)?;
            let (a, b) = (p.id(src)?, p.id(dst)?);
            let lh = localised_hom(a, b, &set)?;
            Ok(Outcome {
                ok: true,
                report: json!({
                    "src": src, "dst": dst,
                    "group": group_json(lh.group()),
                    "diagram_objects": lh.diagram.objects.len(),
                    "diagram_arrows": lh.diagram.arrows.len(),
                    "skipped": lh.diagram.skipped,
                }),
            })
        }
        Command::ColocHom { ctx, src, dst } => {
            let (set, p) = load(ctx)?;
            let (a, b) = (p.id(src)?, p.id(dst)?);
            let ch = colocalised_hom(a, b, &set)?;
            Ok(Outcome {
                ok: true,
                report: json!({
                    "src": src, "dst": dst,
                    "group": group_json(ch.group()),
                    "to_hom": to_value(&ch.to_hom),
                    "diagram_objects": ch.diagram.objects.len(),
                    "diagram_arrows": ch.diagram.arrows.len(),
                }),
            })
        }
        Command::Les { ctx, functor, object, window } => {
            let (set, p) = load(ctx)?;
            let a = functor
                .strip_prefix("hom:")
                .ok_or_else(|| Error::parse("--functor", "expected `hom:A`"))?;
            let f = HomFunctor::representable(&p, p.id(a)?);
            let window = match window {
                Some(k) => (-k..=*k).collect(),
                None => default_window(&set),
            };
            let r = build_les(&f, p.id(object)?, &set, &window)?;
            let (exact, first_failure) = verify_exact(&r);
            Ok(Outcome {
                ok: exact,
                report: json!({ "exact": exact, "first_failure": first_failure, "sequence": to_value(&r) }),
            })
        }
        Command::Check { ctx, suite, seed } => {
            let (set, _) = load(ctx)?;
            let reports = run_suite(suite.name(), &set, *seed)?;
            let ok = reports.iter().all(|r| r.no_failures());
            Ok(Outcome {
                ok,
                report: json!({ "suite": suite.name(), "seed": seed, "passed": ok, "reports": to_value(&reports) }),
            })
        }
    }
}

/// Prints the document; a closed pipe is not an error.
fn emit(doc: &Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(doc).expect("serialisable");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

/// Runs the parsed command, printing the report; returns the exit code.
pub fn main_with(cli: &Cli) -> i32 {
    match run(cli) {
        Ok(out) => {
            emit(&out.report);
            if out.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            emit(&json!({ "error": e.to_string() }));
            eprintln!("error: {e}");
            2
        }
    }
}
