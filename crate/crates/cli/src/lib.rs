//! Command-line front end: structure checks, central series, derivation
//! spaces, certificate-producing local-derivation and local-automorphism
//! constructions, falsification, probe bounds, exponentials and the
//! example catalog.
//!
//! Exit codes: 0 = success / claim verified; 1 = claim refuted or the
//! construction is degenerate for the input (characteristic 2, no suitable
//! scaling parameter, wrong nilindex, ...); 2 = usage or input errors.
//! Identical argv and seed give byte-identical output.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use nilpo_core::autolocal::{self, AutWitnessFamily};
use nilpo_core::catalog::{self, CatalogParams};
use nilpo_core::deriv;
use nilpo_core::error::Error;
use nilpo_core::json as njson;
use nilpo_core::localder::{self, ProbeVerdict, SamplingPlan};
use nilpo_core::matrix::{format_vector, parse_vector};
use nilpo_core::{AlgebraTable, FieldSpec, LinearMap, Scalar};

const DEFAULT_VERIFY_SEED: u64 = 0;

#[derive(Parser)]
#[command(name = "nilpo", version, about = "Exact derivation and local-map computations for structure-constant algebras")]
struct Cli {
    /// Output format: text or json
    #[arg(long, global = true, default_value = "text")]
    format: String,

    /// Seed for randomized sampling (falls back to NILPO_SEED)
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Catalog entry name (see `nilpo catalog list`)
    #[arg(long)]
    catalog: Option<String>,

    /// Size parameter for parametric catalog entries
    #[arg(long)]
    n: Option<usize>,

    /// Field override: Q or F<p>
    #[arg(long)]
    field: Option<String>,

    /// Algebra file (.alg text format, .json for the JSON schema)
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Structural flags of a table
    Check(InputArgs),
    /// Lower central series, nilindex and center
    Series(InputArgs),
    /// Basis and dimension of the derivation algebra
    Der(InputArgs),
    /// Local derivations
    #[command(subcommand)]
    Locder(LocderCommand),
    /// Automorphisms
    #[command(subcommand)]
    Aut(AutCommand),
    /// Local automorphisms
    #[command(subcommand)]
    Locaut(LocautCommand),
    /// Built-in example algebras
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Subcommand)]
enum LocderCommand {
    /// Build and certify a local derivation that is not a derivation
    Construct {
        #[command(flatten)]
        input: InputArgs,
        /// Extra random points checked beyond the structured probes
        #[arg(long, default_value_t = 1000)]
        random_points: usize,
    },
    /// Find a derivation matching a candidate map at one point
    Witness {
        #[command(flatten)]
        input: InputArgs,
        /// Candidate map file (JSON)
        #[arg(long)]
        map: PathBuf,
        /// Point as comma-separated scalars, e.g. "1,0,-2/3"
        #[arg(long)]
        point: String,
    },
    /// Search for a point where no derivation matches the candidate
    Falsify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        map: PathBuf,
        /// Random points tried after the structured probes
        #[arg(long, default_value_t = 1000)]
        budget: usize,
    },
    /// Probe-refinement upper bound for the space of local derivations
    Probe {
        #[command(flatten)]
        input: InputArgs,
        /// Probe list file (JSON); defaults to the structured probes
        #[arg(long)]
        probes: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum AutCommand {
    /// Exponential of a nilpotent derivation
    Exp {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        map: PathBuf,
    },
    /// Check a map for multiplicativity and invertibility
    Check {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        map: PathBuf,
    },
    /// Two-weight scaling automorphism of a 2-step table
    Scale {
        #[command(flatten)]
        input: InputArgs,
        /// Scaling parameter
        #[arg(long, default_value = "2")]
        epsilon: String,
    },
}

#[derive(Subcommand)]
enum LocautCommand {
    /// Build and certify a local automorphism that is not an automorphism
    Construct {
        #[command(flatten)]
        input: InputArgs,
        /// Scaling parameter for the 2-step construction
        #[arg(long, default_value = "2")]
        epsilon: String,
        #[arg(long, default_value_t = 1000)]
        random_points: usize,
    },
    /// Find an automorphism matching a candidate map at one point
    Witness {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        point: String,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List the built-in algebras
    List,
    /// Replay every known fact about one entry
    Verify {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        field: Option<String>,
    },
}

/// Entry point shared by the binary and the integration tests.
pub fn run(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let kind = e.kind();
            if kind == ErrorKind::DisplayHelp || kind == ErrorKind::DisplayVersion {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            return 2;
        }
    };
    let format = match cli.format.as_str() {
        "text" => Format::Text,
        "json" => Format::Json,
        other => {
            eprintln!("error: unknown format {other:?} (expected text or json)");
            return 2;
        }
    };
    let seed = cli.seed.or_else(|| {
        std::env::var("NILPO_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    match dispatch(cli.command, format, seed) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Text,
    Json,
}

/// 1 for mathematically refuted or degenerate inputs, 2 for everything a
/// caller got wrong syntactically.
fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::DegenerateInChar2
        | Error::NoSuitableScalar { .. }
        | Error::NotNilpotent
        | Error::WrongNilindex { .. }
        | Error::WrongGeneratorCount { .. }
        | Error::NotLieTable { .. }
        | Error::NotADerivation { .. }
        | Error::NotNilpotentMap
        | Error::FactorialNotInvertible { .. }
        | Error::TrivialDerivation
        | Error::RestrictionPrecondition { .. }
        | Error::WitnessUnavailable { .. } => 1,
        _ => 2,
    }
}

fn load_algebra(input: &InputArgs) -> Result<AlgebraTable, Error> {
    match (&input.catalog, &input.input) {
        (Some(name), None) => {
            let field = input.field.as_deref().map(FieldSpec::parse).transpose()?;
            let params = CatalogParams {
                n: input.n,
                field,
            };
            catalog::build(name, &params)
        }
        (None, Some(path)) => {
            if input.field.is_some() || input.n.is_some() {
                return Err(Error::InvalidParameter {
                    name: "input",
                    reason: "--field and --n apply to catalog entries only; files declare their own".into(),
                });
            }
            let text = fs::read_to_string(path).map_err(|e| Error::InvalidParameter {
                name: "input",
                reason: format!("{}: {e}", path.display()),
            })?;
            if path.extension().is_some_and(|ext| ext == "json") {
                njson::algebra_from_json(&text)
            } else {
                nilpo_core::parse::parse_text(&text)
            }
        }
        _ => Err(Error::InvalidParameter {
            name: "input",
            reason: "exactly one of --catalog or --input is required".into(),
        }),
    }
}

fn load_map(path: &PathBuf, a: &AlgebraTable) -> Result<LinearMap, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidParameter {
        name: "map",
        reason: format!("{}: {e}", path.display()),
    })?;
    let map = njson::map_from_json(&text)?;
    if map.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            context: "map dimension",
            expected: a.dim(),
            found: map.dim(),
        });
    }
    if map.field() != a.field() {
        return Err(Error::FieldMismatch {
            left: a.field(),
            right: map.field(),
        });
    }
    Ok(map)
}

fn matrix_lines(m: &LinearMap) -> String {
    let rows = njson::matrix_rows(m.matrix());
    let mut out = String::new();
    for row in rows {
        let _ = writeln!(out, "  [{}]", row.join(", "));
    }
    out
}

fn describe(a: &AlgebraTable) -> String {
    format!("algebra {} (dim {} over {})", a.name(), a.dim(), a.field())
}

fn emit(format: Format, text: String, json: Value) -> i32 {
    match format {
        Format::Text => print!("{text}"),
        Format::Json => println!("{json}"),
    }
    0
}

fn dispatch(cmd: Command, format: Format, seed: Option<u64>) -> Result<i32, Error> {
    match cmd {
        Command::Check(input) => {
            let a = load_algebra(&input)?;
            let s = a.check_structure();
            let text = format!(
                "{}\nanticommutative: {}\ncommutative: {}\njacobi: {}\nlie: {}\n",
                describe(&a),
                s.anticommutative,
                s.commutative,
                s.jacobi,
                a.is_lie()
            );
            let json = json!({
                "name": a.name(),
                "dim": a.dim(),
                "field": a.field().to_string(),
                "anticommutative": s.anticommutative,
                "commutative": s.commutative,
                "jacobi": s.jacobi,
                "lie": a.is_lie(),
            });
            Ok(emit(format, text, json))
        }
        Command::Series(input) => {
            let a = load_algebra(&input)?;
            let report = a.lower_central_series();
            let mut text = format!("{}\nnilindex: {}\n", describe(&a), report.nilindex);
            let mut layers_json = Vec::new();
            for (idx, layer) in report.layers.iter().enumerate() {
                let basis: Vec<String> =
                    layer.basis_rows().iter().map(|r| format_vector(r)).collect();
                let _ = writeln!(
                    text,
                    "layer {}: dim {}{}",
                    idx + 1,
                    layer.dim(),
                    if basis.is_empty() {
                        String::new()
                    } else {
                        format!("  ({})", basis.join("; "))
                    }
                );
                layers_json.push(json!({
                    "k": idx + 1,
                    "dim": layer.dim(),
                    "basis": layer.basis_rows().iter().map(|r| format_vector(r)).collect::<Vec<_>>(),
                }));
            }
            let center_basis: Vec<String> = report
                .center
                .basis_rows()
                .iter()
                .map(|r| format_vector(r))
                .collect();
            let _ = writeln!(
                text,
                "center: dim {}  ({})",
                report.center.dim(),
                center_basis.join("; ")
            );
            let json = json!({
                "name": a.name(),
                "nilindex": report.nilindex.to_string(),
                "layers": layers_json,
                "center": {"dim": report.center.dim(), "basis": center_basis},
            });
            Ok(emit(format, text, json))
        }
        Command::Der(input) => {
            let a = load_algebra(&input)?;
            let ders = deriv::derivation_space(&a);
            let param = ders.parametrized_matrix();
            let mut text = format!("{}\ndim Der = {}\n", describe(&a), ders.dim());
            let _ = writeln!(text, "general element (parameters t1..t{}):", ders.dim());
            for row in &param {
                let _ = writeln!(text, "  [{}]", row.join(", "));
            }
            let json = json!({
                "name": a.name(),
                "dim_der": ders.dim(),
                "parametrized": param,
                "basis": ders.maps.iter().map(|m| njson::matrix_rows(m.matrix())).collect::<Vec<_>>(),
            });
            Ok(emit(format, text, json))
        }
        Command::Locder(cmd) => dispatch_locder(cmd, format, seed),
        Command::Aut(cmd) => dispatch_aut(cmd, format),
        Command::Locaut(cmd) => dispatch_locaut(cmd, format, seed),
        Command::Catalog(cmd) => dispatch_catalog(cmd, format, seed),
    }
}

fn dispatch_locder(cmd: LocderCommand, format: Format, seed: Option<u64>) -> Result<i32, Error> {
    match cmd {
        LocderCommand::Construct {
            input,
            random_points,
        } => {
            let a = load_algebra(&input)?;
            let plan = SamplingPlan {
                seed,
                random_points,
                ..SamplingPlan::default()
            };
            let (cert, route) = localder::construct_pure_local_derivation(&a, &plan)?;
            localder::verify_der_certificate(&a, &cert)?;
            let mut text = format!("{}\n", describe(&a));
            if let Some(route) = route {
                let _ = writeln!(text, "derivation route: {}", route.as_str());
            }
            let _ = writeln!(text, "constructed map (columns are basis images):");
            text.push_str(&matrix_lines(&cert.map));
            let _ = writeln!(
                text,
                "not a derivation: residual {} at ({}, {})",
                format_vector(&cert.failure.residual),
                format_vector(&cert.failure.left),
                format_vector(&cert.failure.right)
            );
            let _ = writeln!(text, "strategy: {}", cert.strategy);
            let _ = writeln!(
                text,
                "witnesses: {} structured probes verified; {} extra points{}",
                cert.witnesses.len(),
                cert.extra_points_checked,
                if cert.exhaustive {
                    " (exhaustive)".to_string()
                } else {
                    match cert.seed {
                        Some(s) => format!(" (seed {s})"),
                        None => String::new(),
                    }
                }
            );
            let _ = writeln!(text, "verdict: certified pure local derivation");
            let mut json: Value =
                serde_json::from_str(&njson::der_certificate_to_json(&cert))?;
            if let Some(route) = route {
                json["route"] = Value::String(route.as_str().to_string());
            }
            Ok(emit(format, text, json))
        }
        LocderCommand::Witness { input, map, point } => {
            let a = load_algebra(&input)?;
            let candidate = load_map(&map, &a)?;
            let x = parse_vector(&point, a.dim(), a.field())?;
            let ders = deriv::derivation_space(&a);
            match localder::derivation_witness_at(&a, &ders, &candidate, &x)? {
                Some(w) => {
                    let text = format!(
                        "witness derivation at {} (verified):\n{}",
                        format_vector(&x),
                        matrix_lines(&w)
                    );
                    let json = json!({
                        "point": format_vector(&x),
                        "witness": njson::matrix_rows(w.matrix()),
                    });
                    Ok(emit(format, text, json))
                }
                None => {
                    let text = format!("no derivation matches the candidate at {}\n", format_vector(&x));
                    let json = json!({"point": format_vector(&x), "witness": Value::Null});
                    emit(format, text, json);
                    Ok(1)
                }
            }
        }
        LocderCommand::Falsify { input, map, budget } => {
            let a = load_algebra(&input)?;
            let candidate = load_map(&map, &a)?;
            let seed = seed.ok_or(Error::SeedRequired)?;
            let ders = deriv::derivation_space(&a);
            match localder::falsify(&a, &ders, &candidate, seed, budget)? {
                Some(x) => {
                    let text = format!(
                        "not a local derivation: no witness at {}\n",
                        format_vector(&x)
                    );
                    let json = json!({"refuted": true, "point": format_vector(&x)});
                    emit(format, text, json);
                    Ok(1)
                }
                None => {
                    let text = format!(
                        "no counterexample among structured probes and {budget} random points (seed {seed})\n"
                    );
                    let json = json!({"refuted": false, "budget": budget, "seed": seed});
                    Ok(emit(format, text, json))
                }
            }
        }
        LocderCommand::Probe { input, probes } => {
            let a = load_algebra(&input)?;
            let ders = deriv::derivation_space(&a);
            let probe_list = match probes {
                Some(path) => {
                    let text = fs::read_to_string(&path).map_err(|e| Error::InvalidParameter {
                        name: "probes",
                        reason: format!("{}: {e}", path.display()),
                    })?;
                    let (dim, field, probes) = njson::probes_from_json(&text)?;
                    if dim != a.dim() || field != a.field() {
                        return Err(Error::InvalidParameter {
                            name: "probes",
                            reason: "probe file does not match the algebra".into(),
                        });
                    }
                    probes
                }
                None => localder::default_probes(&a),
            };
            let report = localder::local_derivation_upper_bound(&a, &ders, &probe_list)?;
            let text = format!(
                "{}\nprobes: {}\ndim Der = {}\ndim upper bound = {}\nverdict: {}\n",
                describe(&a),
                report.probes.len(),
                report.der_subspace.dim(),
                report.upper_bound.dim(),
                report.verdict.as_str()
            );
            let json = json!({
                "name": a.name(),
                "probes": report.probes.iter().map(|p| format_vector(p)).collect::<Vec<_>>(),
                "dim_der": report.der_subspace.dim(),
                "dim_upper_bound": report.upper_bound.dim(),
                "verdict": report.verdict.as_str(),
            });
            emit(format, text, json);
            Ok(if report.verdict == ProbeVerdict::LocDerEqualsDer {
                0
            } else {
                1
            })
        }
    }
}

fn dispatch_aut(cmd: AutCommand, format: Format) -> Result<i32, Error> {
    match cmd {
        AutCommand::Exp { input, map } => {
            let a = load_algebra(&input)?;
            let d = load_map(&map, &a)?;
            let e = autolocal::exp_nilpotent(&a, &d)?;
            let text = format!(
                "exponential (verified automorphism):\n{}",
                matrix_lines(e.map())
            );
            let json = json!({
                "exp": njson::matrix_rows(e.map().matrix()),
                "inverse": njson::matrix_rows(e.inverse().matrix()),
            });
            Ok(emit(format, text, json))
        }
        AutCommand::Check { input, map } => {
            let a = load_algebra(&input)?;
            let f = load_map(&map, &a)?;
            let check = autolocal::is_automorphism(&a, &f)?;
            let mut text = format!("automorphism: {}\n", check.ok);
            if !check.invertible {
                let _ = writeln!(text, "map is not invertible");
            }
            if let Some(fail) = &check.failure {
                let _ = writeln!(
                    text,
                    "multiplicativity fails at (e{}, e{}): residual {}",
                    fail.i + 1,
                    fail.j + 1,
                    format_vector(&fail.residual)
                );
            }
            let json = json!({
                "automorphism": check.ok,
                "invertible": check.invertible,
                "failure": check.failure.as_ref().map(|f| json!({
                    "i": f.i + 1,
                    "j": f.j + 1,
                    "residual": format_vector(&f.residual),
                })),
            });
            emit(format, text, json);
            Ok(if check.ok { 0 } else { 1 })
        }
        AutCommand::Scale { input, epsilon } => {
            let a = load_algebra(&input)?;
            let eps = Scalar::parse(&epsilon, a.field())?;
            let psi = autolocal::scaling_automorphism(&a, &eps)?;
            let text = format!(
                "scaling automorphism with parameter {}:\n{}",
                eps.serialized(),
                matrix_lines(psi.map())
            );
            let json = json!({
                "epsilon": eps.serialized(),
                "map": njson::matrix_rows(psi.map().matrix()),
            });
            Ok(emit(format, text, json))
        }
    }
}

fn dispatch_locaut(cmd: LocautCommand, format: Format, seed: Option<u64>) -> Result<i32, Error> {
    match cmd {
        LocautCommand::Construct {
            input,
            epsilon,
            random_points,
        } => {
            let a = load_algebra(&input)?;
            let eps = Scalar::parse(&epsilon, a.field())?;
            let plan = SamplingPlan {
                seed,
                random_points,
                ..SamplingPlan::default()
            };
            let (cert, route) = autolocal::construct_pure_local_automorphism(&a, &eps, &plan)?;
            autolocal::verify_aut_certificate(&a, &cert)?;
            let mut text = format!("{}\n", describe(&a));
            if let Some(route) = route {
                let _ = writeln!(text, "derivation route: {}", route.as_str());
            }
            if let Some(e) = &cert.epsilon {
                let _ = writeln!(text, "scaling parameter: {}", e.serialized());
            }
            let _ = writeln!(text, "constructed map (columns are basis images):");
            text.push_str(&matrix_lines(&cert.map));
            let _ = writeln!(
                text,
                "not an automorphism: residual {} at ({}, {})",
                format_vector(&cert.failure.residual),
                format_vector(&cert.failure.left),
                format_vector(&cert.failure.right)
            );
            let _ = writeln!(text, "strategy: {}", cert.strategy);
            let _ = writeln!(
                text,
                "witnesses: {} structured probes verified; {} extra points{}",
                cert.witnesses.len(),
                cert.extra_points_checked,
                if cert.exhaustive {
                    " (exhaustive)".to_string()
                } else {
                    match cert.seed {
                        Some(s) => format!(" (seed {s})"),
                        None => String::new(),
                    }
                }
            );
            let _ = writeln!(text, "verdict: certified pure local automorphism");
            let mut json: Value = serde_json::from_str(&njson::aut_certificate_to_json(&cert))?;
            if let Some(route) = route {
                json["route"] = Value::String(route.as_str().to_string());
            }
            Ok(emit(format, text, json))
        }
        LocautCommand::Witness { input, map, point } => {
            let a = load_algebra(&input)?;
            let candidate = load_map(&map, &a)?;
            let x = parse_vector(&point, a.dim(), a.field())?;
            let ders = deriv::derivation_space(&a);
            let family = AutWitnessFamily::ExpDerivationSolve { ders: &ders };
            match autolocal::automorphism_witness_at(&a, &candidate, &x, family)? {
                Some(w) => {
                    let text = format!(
                        "witness automorphism at {} (verified):\n{}",
                        format_vector(&x),
                        matrix_lines(w.map())
                    );
                    let json = json!({
                        "point": format_vector(&x),
                        "witness": njson::matrix_rows(w.map().matrix()),
                    });
                    Ok(emit(format, text, json))
                }
                None => {
                    let text = format!(
                        "no automorphism witness found at {} via the exponential solve\n",
                        format_vector(&x)
                    );
                    let json = json!({"point": format_vector(&x), "witness": Value::Null});
                    emit(format, text, json);
                    Ok(1)
                }
            }
        }
    }
}

fn dispatch_catalog(cmd: CatalogCommand, format: Format, seed: Option<u64>) -> Result<i32, Error> {
    match cmd {
        CatalogCommand::List => {
            let mut text = String::new();
            let mut entries_json = Vec::new();
            for e in catalog::entries() {
                let _ = writeln!(text, "{:<12} {}", e.name, e.summary);
                let _ = writeln!(text, "{:<12}   parameters: {}", "", e.parameters);
                entries_json.push(json!({
                    "name": e.name,
                    "summary": e.summary,
                    "parameters": e.parameters,
                }));
            }
            Ok(emit(format, text, json!({ "entries": entries_json })))
        }
        CatalogCommand::Verify { name, n, field } => {
            let field = field.as_deref().map(FieldSpec::parse).transpose()?;
            let params = CatalogParams { n, field };
            let report =
                catalog::verify_example(&name, &params, seed.unwrap_or(DEFAULT_VERIFY_SEED))?;
            let mut text = format!("verifying {}\n", report.algebra);
            let mut facts_json = Vec::new();
            for f in &report.facts {
                let _ = writeln!(
                    text,
                    "{} {:<48} {}",
                    if f.passed { "PASS" } else { "FAIL" },
                    f.label,
                    f.detail
                );
                facts_json.push(json!({
                    "label": f.label,
                    "passed": f.passed,
                    "detail": f.detail,
                }));
            }
            let all = report.all_passed();
            let _ = writeln!(
                text,
                "{}: {}/{} facts passed",
                if all { "OK" } else { "FAILED" },
                report.facts.iter().filter(|f| f.passed).count(),
                report.facts.len()
            );
            let json = json!({
                "algebra": report.algebra,
                "all_passed": all,
                "facts": facts_json,
            });
            emit(format, text, json);
            Ok(if all { 0 } else { 1 })
        }
    }
}
