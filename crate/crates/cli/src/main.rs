use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use locfin::claims::{claims, evaluate_all, single_object_search};
use locfin::coalg::{coalgebra_of, conilpotency_index, long_quotient, validate_coalgebra};
use locfin::ext::{closure_trials, ClosureKind};
use locfin::frontier::{check_left_strict, degree_n_frontier, find_standard_frontier, verify_frontier};
use locfin::gallery;
use locfin::lift::{
    dualize_comodule, is_cofinite, is_contrafinite, lift_to_comodule, lift_to_contramodule, minimal_big_submodule,
    DeclaredModule, Lifted,
};
use locfin::lincat::{
    category_from_json, category_to_json, module_from_json, parse_window, validate_category, validate_module,
    with_schema, Generator, ModuleFile,
};
use locfin::order::{check_interval_finiteness, check_upper_lower_finite, compute_preorder};
use locfin::{Error, Field, Scope, Side, Verdict, Window};
use serde_json::{json, Value};

const USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "locfin", version, about = "Analyses of locally finite linear categories and their modules")]
struct Cli {
    /// Ground field: Q, or a prime such as 2 or F3.
    #[arg(long, global = true, default_value = "2")]
    field: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CategoryArgs {
    /// `gallery:NAME`, `gallery:NAME:PARAM`, or a path to a category file.
    #[arg(long)]
    category: String,
    /// Inclusive integer range such as `-4..-1`.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LiftTo {
    Comodule,
    Contramodule,
}

#[derive(Subcommand)]
enum GalleryCommand {
    /// Names and parameters of the built-in categories.
    List,
    /// Presentation of one built-in category.
    Instantiate {
        name: String,
        #[arg(allow_hyphen_values = true)]
        parameter: String,
    },
}

#[derive(Subcommand)]
enum Command {
    /// Check the category axioms, and a module's if one is given.
    Validate {
        #[command(flatten)]
        cat: Option<CategoryArgs>,
        #[arg(long)]
        module: Option<String>,
    },
    /// Preorder, classes, distances and finiteness verdicts.
    Analyze {
        #[command(flatten)]
        cat: CategoryArgs,
    },
    /// The coalgebra, its validity and the conilpotency index of its long part.
    Coalgebra {
        #[command(flatten)]
        cat: CategoryArgs,
    },
    /// Frontier of one object, or its degree-n standard frontier.
    Frontier {
        #[command(flatten)]
        cat: CategoryArgs,
        #[arg(long, allow_hyphen_values = true)]
        object: String,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Decide whether a module comes from a comodule or a contramodule.
    Lift {
        #[arg(long, value_enum)]
        to: LiftTo,
        #[arg(long)]
        module: String,
    },
    /// Componentwise dual of a module, with the dual contramodule of a right comodule.
    Dualize {
        #[arg(long)]
        module: String,
    },
    /// The smallest submodule with contrafinite quotient.
    Bigmin {
        #[arg(long)]
        module: String,
    },
    /// Random extensions checked against a closure property.
    Exttest {
        #[arg(long, default_value = "contrafinite-left")]
        kind: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_half: i64,
        /// Window generator: zchain or zneg.
        #[arg(long, default_value = "zchain")]
        generator: String,
    },
    /// Built-in categories.
    Gallery {
        #[command(subcommand)]
        command: GalleryCommand,
    },
    /// Evaluate the expected verdicts of the gallery.
    Report,
    /// Search small windows for contramodules acted on from infinitely many objects at one object.
    Experiment {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

/// What a command prints and how the process exits.
struct Outcome {
    body: Value,
    code: u8,
}

impl Outcome {
    fn ok(body: Value) -> Outcome {
        Outcome { body, code: 0 }
    }

    fn verdict(body: Value, v: &Verdict) -> Outcome {
        Outcome {
            body,
            code: v.exit_code() as u8,
        }
    }
}

fn parse_field(s: &str) -> Result<Field, Error> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("q") {
        return Ok(Field::Rationals);
    }
    let digits = t.trim_start_matches(['F', 'f']);
    let p: u32 = digits.parse().map_err(|_| Error::Parse(format!("unknown field {s:?}")))?;
    Field::prime(p)
}

fn resolve_scope(args: &CategoryArgs, field: Field) -> Result<Scope, Error> {
    if let Some(rest) = args.category.strip_prefix("gallery:") {
        let (name, param) = match rest.split_once(':') {
            Some((n, p)) => (n, Some(p.to_string())),
            None => (rest, None),
        };
        let param = args
            .window
            .clone()
            .or(param)
            .ok_or_else(|| Error::BadWindow(format!("{name} needs a parameter or --window")))?;
        return gallery::instantiate(name, &param, field);
    }
    let text = fs::read_to_string(&args.category)?;
    let cat = category_from_json(&serde_json::from_str(&text)?)?;
    match &args.window {
        None => Ok(Scope::Finite(cat)),
        Some(w) => {
            let (lo, hi) = parse_window(w)?;
            Ok(Scope::Window(Window::undeclared(&args.category, cat, lo, hi)?))
        }
    }
}

fn load_module(path: &str, field: Field) -> Result<DeclaredModule, Error> {
    let file = ModuleFile::parse(&fs::read_to_string(path)?)?;
    let field = file.field.unwrap_or(field);
    let args = CategoryArgs {
        category: file.category.clone(),
        window: file.body.get("window").and_then(Value::as_str).map(str::to_string),
    };
    match resolve_scope(&args, field)? {
        Scope::Finite(cat) => Ok(DeclaredModule::finite(&cat, module_from_json(&cat, &file.body)?)),
        Scope::Window(w) => DeclaredModule::from_json(&w, &file.body),
    }
}

/// `LOCFIN_SEED` takes precedence over the command-line seed.
fn seed_from_env(seed: u64) -> Result<u64, Error> {
    match std::env::var("LOCFIN_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| Error::Parse(format!("LOCFIN_SEED={s:?} is not a seed"))),
        Err(_) => Ok(seed),
    }
}

fn require_valid(d: &DeclaredModule) -> Result<(), Error> {
    let v = validate_module(d.scope().cat(), &d.module())?;
    if v.is_certified() {
        Ok(())
    } else {
        Err(Error::MalformedPresentation(format!("module fails the module axioms: {v}")))
    }
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    let field = parse_field(&cli.field)?;
    match cli.command {
        Command::Validate { cat, module } => {
            let mut body = serde_json::Map::new();
            let mut worst = Verdict::certified();
            if let Some(cat) = cat {
                let scope = resolve_scope(&cat, field)?;
                let v = validate_category(scope.cat());
                body.insert("scope".into(), json!(scope.describe()));
                body.insert("category".into(), json!(v));
                worst = v;
            }
            if let Some(path) = module {
                let d = load_module(&path, field)?;
                let v = validate_module(d.scope().cat(), &d.module())?;
                body.insert("module".into(), json!(v));
                if worst.is_certified() {
                    worst = v;
                }
            }
            if body.is_empty() {
                return Err(Error::Parse("nothing to validate: give --category or --module".into()));
            }
            body.insert("verdict".into(), json!(worst.label()));
            Ok(Outcome::verdict(Value::Object(body), &worst))
        }
        Command::Analyze { cat } => {
            let scope = resolve_scope(&cat, field)?;
            let (upper, lower) = check_upper_lower_finite(&scope);
            Ok(Outcome::ok(json!({
                "scope": scope.describe(),
                "preorder": compute_preorder(&scope).to_json(),
                "interval_finite": check_interval_finiteness(&scope),
                "upper_finite": upper,
                "lower_finite": lower,
            })))
        }
        Command::Coalgebra { cat } => {
            let scope = resolve_scope(&cat, field)?;
            let g = coalgebra_of(&scope)?;
            let v = validate_coalgebra(&g);
            let d = long_quotient(&g, scope.cat());
            Ok(Outcome::verdict(
                json!({
                    "scope": scope.describe(),
                    "coalgebra": g.to_json(),
                    "valid": v,
                    "long_conilpotency_index": conilpotency_index(&d).to_string(),
                }),
                &v,
            ))
        }
        Command::Frontier { cat, object, degree } => {
            let scope = resolve_scope(&cat, field)?;
            match degree {
                None | Some(1) => {
                    let s = find_standard_frontier(&scope, &object)?;
                    Ok(Outcome::verdict(s.to_json(), &s.verdict))
                }
                Some(n) => {
                    let report = check_left_strict(&scope)?;
                    let Some(tower) = &report.tower else {
                        return Ok(Outcome::verdict(report.to_json(), &report.verdict));
                    };
                    let f = degree_n_frontier(tower, &object, n)?;
                    let v = verify_frontier(&scope, &f)?;
                    Ok(Outcome::verdict(
                        json!({"degree": n, "frontier": f, "verdict": v}),
                        &v,
                    ))
                }
            }
        }
        Command::Lift { to, module } => {
            let d = load_module(&module, field)?;
            require_valid(&d)?;
            let r = match to {
                LiftTo::Comodule => lift_to_comodule(&d)?,
                LiftTo::Contramodule => lift_to_contramodule(&d)?,
            };
            let predicate = match (to, d.side()) {
                (LiftTo::Contramodule, Side::Left) => Some(("contrafinite", is_contrafinite(&d)?)),
                (LiftTo::Comodule, Side::Right) => Some(("cofinite", is_cofinite(&d)?)),
                _ => None,
            };
            let mut body = r.to_json(d.scope().cat().objects());
            if let (Value::Object(m), Some((name, v))) = (&mut body, predicate) {
                m.insert(name.into(), json!(v));
            }
            Ok(Outcome {
                body,
                code: r.exit_code() as u8,
            })
        }
        Command::Dualize { module } => {
            let d = load_module(&module, field)?;
            require_valid(&d)?;
            let dual = d.transpose_dual();
            let mut body = json!({"scope": d.scope().describe(), "dual": dual.to_json()});
            if d.side() == Side::Right {
                if let Some(Lifted::Comodule(c)) = lift_to_comodule(&d)?.lifted {
                    body["dual_contramodule"] = dualize_comodule(&c).to_json(d.scope().cat().objects());
                }
            }
            Ok(Outcome::ok(body))
        }
        Command::Bigmin { module } => {
            let d = load_module(&module, field)?;
            require_valid(&d)?;
            let k = minimal_big_submodule(&d)?;
            let span = |s: &locfin::Subspace| s.basis().to_json();
            let objects = d.scope().cat().objects();
            let window: serde_json::Map<String, Value> =
                objects.iter().cloned().zip(k.window.iter().map(span)).collect();
            Ok(Outcome::ok(json!({
                "scope": d.scope().describe(),
                "window": window,
                "lower": k.lower.as_ref().map(span),
                "upper_prefix": k.upper_prefix.iter().map(span).collect::<Vec<_>>(),
                "upper_cycle": k.upper_cycle.iter().map(span).collect::<Vec<_>>(),
            })))
        }
        Command::Exttest {
            kind,
            trials,
            seed,
            max_half,
            generator,
        } => {
            let kind = ClosureKind::parse(&kind).ok_or_else(|| Error::Parse(format!("unknown closure kind {kind:?}")))?;
            let seed = seed_from_env(seed)?;
            let generator = match generator.as_str() {
                "zchain" => Generator::ZChain,
                "zneg" => Generator::ZNeg,
                other => return Err(Error::UnknownGallery(other.into())),
            };
            let r = closure_trials(kind, generator, field, trials, seed, max_half)?;
            let v = r.verdict();
            Ok(Outcome::verdict(json!({"report": r, "verdict": v}), &v))
        }
        Command::Gallery { command } => match command {
            GalleryCommand::List => Ok(Outcome::ok(json!({
                "entries": gallery::entries().iter().map(|e| json!({
                    "name": e.name,
                    "description": e.description,
                    "parameter": e.parameter,
                    "notes": claims()
                        .iter()
                        .filter(|c| c.entry.split(':').next() == Some(e.name))
                        .map(|c| json!({"id": c.id, "instance": c.entry, "anchor": c.anchor, "expected": c.expected}))
                        .collect::<Vec<_>>(),
                })).collect::<Vec<_>>()
            }))),
            GalleryCommand::Instantiate { name, parameter } => {
                let scope = gallery::instantiate(&name, &parameter, field)?;
                let v = validate_category(scope.cat());
                Ok(Outcome::verdict(
                    json!({
                        "scope": scope.describe(),
                        "category": category_to_json(scope.cat()),
                        "valid": v,
                    }),
                    &v,
                ))
            }
        },
        Command::Report => {
            let outcomes = evaluate_all(field)?;
            let failing = outcomes.iter().filter(|o| !o.holds()).count();
            Ok(Outcome {
                body: json!({
                    "claims": outcomes.iter().map(|o| o.to_json()).collect::<Vec<_>>(),
                    "failing": failing,
                }),
                code: if failing == 0 { 0 } else { 2 },
            })
        }
        Command::Experiment { seed, samples } => {
            let seed = seed_from_env(seed)?;
            Ok(Outcome::ok(single_object_search(field, seed, samples)?.to_json()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&with_schema(out.body)).expect("json values serialize");
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::from(out.code)
        }
        Err(e) => {
            let body = with_schema(json!({"error": e.to_string()}));
            eprintln!("{}", serde_json::to_string_pretty(&body).expect("json values serialize"));
            ExitCode::from(1)
        }
    }
}
