//! Command-line front end.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or input error,
//! 3 soundness violation.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use relfix::comparison::{classify_phi, ClassifyOptions, ComparisonFn, Verdict};
use relfix::generate::{master_seed, run_suite, GeneratorConfig, DEFAULT_SEED};
use relfix::io::{self, Instance, LoadError};
use relfix::picard::{catalog_map, numeric_picard, orbit, Norm, NumericOptions, NumericStatus, CATALOG_MAPS};
use relfix::reduction::{reduce_to_banach, ReductionError};
use relfix::relation::rs_cover;
use relfix::scalar::{format_rational, parse_rational, Rational};
use relfix::special::{quasi_order_error, verify_edelstein, verify_nieto_lopez};
use relfix::theorem::{
    verify_ai_functional, verify_ai_linear_rs, verify_banach, verify_banach_bounded, verify_kirk, Item, Status,
    TheoremId, TheoremReport,
};

#[derive(Parser)]
#[command(name = "relfix", version, about = "Verify fixed-point theorems on finite relational metric spaces")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Master seed for generated suites; RELFIX_SEED takes precedence.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Max,
    Euclidean,
}

#[derive(Subcommand)]
enum Command {
    /// Load an instance file and check every invariant.
    Validate { file: PathBuf },
    /// Verify one theorem on an instance.
    Check {
        /// B-cp-ms, B-cp-bdms, K-asy-rms, AI-fct-rms, AI-lin-rsms, E-cp-ms or NL-lin-qoms.
        theorem: String,
        file: PathBuf,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        epsilon: Option<String>,
        /// Comparison function, e.g. `linear:0.5` or `t_over_1_plus_t`.
        #[arg(long)]
        phi: Option<String>,
        /// Also trace the Picard orbit of this point.
        #[arg(long)]
        start: Option<String>,
    },
    /// Trace the Picard orbit of a point.
    Picard {
        file: PathBuf,
        #[arg(long)]
        from: Option<String>,
    },
    /// Reduce the symmetric linear theorem to the Banach principle on one class.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Heuristic Matkowski/Browder admissibility of a comparison function.
    ClassifyPhi {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        tail_tolerance: Option<f64>,
    },
    /// Iterate a catalog map on real vectors.
    NumericPicard {
        /// cos, half or shift.
        #[arg(long)]
        map: String,
        /// Comma-separated start vector.
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        /// Contraction modulus for the a posteriori bound.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, value_enum, default_value_t = NormArg::Max)]
        norm: NormArg,
    },
    /// Run the soundness suite on generated instances.
    Suite {
        /// Restrict to one theorem.
        #[arg(long)]
        theorem: Option<String>,
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 12)]
        max_points: usize,
    },
}

const PASS: u8 = 0;
const FAILED: u8 = 1;
const USAGE: u8 = 2;
const VIOLATION: u8 = 3;

/// Error that ends the command with exit code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

struct Outcome {
    code: u8,
    text: String,
    json: Value,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { PASS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Text => out.text,
                Format::Json => io::to_pretty(&out.json),
            };
            emit(&body);
            ExitCode::from(out.code)
        }
        Err(UsageError(message)) => {
            if cli.format == Format::Json {
                emit(&io::to_pretty(&json!({ "error": message })));
            }
            eprintln!("error: {message}");
            ExitCode::from(USAGE)
        }
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(body: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{body}");
}

fn run(cli: &Cli) -> Result<Outcome, UsageError> {
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Check { theorem, file, lambda, epsilon, phi, start } => {
            check(theorem, file, lambda.as_deref(), epsilon.as_deref(), phi.as_deref(), start.as_deref())
        }
        Command::Picard { file, from } => picard(file, from.as_deref()),
        Command::Reduce { file, start, lambda } => reduce(file, start.as_deref(), lambda.as_deref()),
        Command::ClassifyPhi { phi, horizon, tail_tolerance } => classify(phi, *horizon, *tail_tolerance),
        Command::NumericPicard { map, x0, tol, max_iter, lambda, norm } => {
            numeric(map, x0, *tol, *max_iter, *lambda, *norm)
        }
        Command::Suite { theorem, count, max_points } => suite(cli.seed, theorem.as_deref(), *count, *max_points),
    }
}

fn load(file: &Path) -> Result<Instance, UsageError> {
    io::load_instance(file).map_err(UsageError::from)
}

fn validate(file: &Path) -> Result<Outcome, UsageError> {
    match io::load_instance::<Rational>(file) {
        Ok(inst) => {
            let report = inst.space.validate();
            let text = format!(
                "{}: valid instance with {} points, {} related pairs",
                file.display(),
                inst.space.len(),
                inst.relation.edge_count()
            );
            let mut json = io::validation_json(&inst.space, &report);
            json["points"] = json!(inst.space.len());
            Ok(Outcome { code: PASS, text, json })
        }
        Err(e @ LoadError::Validation { .. }) => {
            let text = e.to_string();
            let LoadError::Validation { location, message, witness } = e else { unreachable!() };
            Ok(Outcome {
                code: FAILED,
                text,
                json: json!({ "valid": false, "location": location, "message": message, "witness": witness }),
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn rational_arg(name: &str, value: &str) -> Result<Rational, UsageError> {
    parse_rational(value).ok_or_else(|| UsageError(format!("--{name}: not a number: {value:?}")))
}

/// `--lambda`, else a linear modulus from the file.
fn lambda_of(arg: Option<&str>, inst: &Instance) -> Result<Rational, UsageError> {
    match (arg, &inst.modulus) {
        (Some(v), _) => rational_arg("lambda", v),
        (None, Some(ComparisonFn::Linear(l))) => Ok(l.clone()),
        _ => Err(UsageError("no contraction modulus: pass --lambda or give a linear modulus in the file".into())),
    }
}

fn point_of(inst: &Instance, id: &str) -> Result<usize, UsageError> {
    inst.point(id).ok_or_else(|| UsageError(format!("unknown point id {id:?}")))
}

fn check(
    theorem: &str,
    file: &PathBuf,
    lambda: Option<&str>,
    epsilon: Option<&str>,
    phi: Option<&str>,
    start: Option<&str>,
) -> Result<Outcome, UsageError> {
    let id: TheoremId = theorem.parse()?;
    let inst = load(file)?;
    let (space, t) = (&inst.space, &inst.map);
    let mut report = match id {
        TheoremId::BanachMetric => verify_banach(space, t, &lambda_of(lambda, &inst)?)?,
        TheoremId::BanachBounded => verify_banach_bounded(space, t, &lambda_of(lambda, &inst)?)?,
        TheoremId::KirkAsymptotic => verify_kirk(space, t, &inst.relation)?,
        TheoremId::AlamImdadFunctional => {
            let phi = match (phi, lambda, &inst.modulus) {
                (Some(spec), _, _) => ComparisonFn::parse(spec)?,
                (None, Some(l), _) => ComparisonFn::Linear(rational_arg("lambda", l)?),
                (None, None, Some(m)) => m.clone(),
                (None, None, None) => {
                    return Err(UsageError("no comparison function: pass --phi or give a modulus in the file".into()))
                }
            };
            verify_ai_functional(space, t, &inst.relation, &phi)?
        }
        TheoremId::AlamImdadLinearSymmetric => {
            verify_ai_linear_rs(space, t, &rs_cover(&inst.relation), &lambda_of(lambda, &inst)?)?
        }
        TheoremId::Edelstein => {
            let eps = match (epsilon, &inst.epsilon) {
                (Some(v), _) => rational_arg("epsilon", v)?,
                (None, Some(e)) => e.clone(),
                (None, None) => return Err(UsageError("no epsilon: pass --epsilon or set it in the file".into())),
            };
            verify_edelstein(space, t, &eps, &lambda_of(lambda, &inst)?)?
        }
        TheoremId::NietoLopez => {
            let order = inst.order.as_ref().ok_or_else(|| UsageError("the file has no order".into()))?;
            if let Some(e) = quasi_order_error(order) {
                return Err(UsageError(format!("order is {}", io::describe_relation_error(space, &e))));
            }
            verify_nieto_lopez(space, t, order, &lambda_of(lambda, &inst)?)?
        }
    };
    if let Some(x) = start.map(|id| point_of(&inst, id)).transpose()?.or(inst.start) {
        let trace = orbit(t, x);
        report.checks.push(
            Item::new(format!("orbit from {}", space.id(x)), if trace.limit().is_some() { Status::Holds } else { Status::Fails })
                .with_detail(io::picard_text(space, &trace)),
        );
    }
    Ok(Outcome { code: check_code(&report), text: report.to_string(), json: io::theorem_report_json(&report) })
}

fn check_code(report: &TheoremReport) -> u8 {
    let side_checks_hold = report
        .checks
        .iter()
        .chain(report.instantiation.iter().flat_map(|i| &i.checks))
        .all(|c| c.status.is_satisfied());
    if report.is_violation() {
        VIOLATION
    } else if report.passed() && side_checks_hold {
        PASS
    } else {
        FAILED
    }
}

fn picard(file: &PathBuf, from: Option<&str>) -> Result<Outcome, UsageError> {
    let inst = load(file)?;
    let x = match from {
        Some(id) => point_of(&inst, id)?,
        None => inst.start.ok_or_else(|| UsageError("no start point: pass --from or set start in the file".into()))?,
    };
    let trace = orbit(&inst.map, x);
    let code = if trace.limit().is_some() { PASS } else { FAILED };
    Ok(Outcome { code, text: io::picard_text(&inst.space, &trace), json: io::picard_json(&inst.space, &trace) })
}

fn reduce(file: &PathBuf, start: Option<&str>, lambda: Option<&str>) -> Result<Outcome, UsageError> {
    let inst = load(file)?;
    let x0 = match start {
        Some(id) => point_of(&inst, id)?,
        None => inst.start.ok_or_else(|| UsageError("no start point: pass --start or set start in the file".into()))?,
    };
    let lambda = lambda_of(lambda, &inst)?;
    let s = rs_cover(&inst.relation);
    match reduce_to_banach(&inst.space, &inst.map, &s, &lambda, x0) {
        Ok(reduced) => {
            let ids: Vec<&str> = reduced.class_points.iter().map(|&p| inst.space.id(p)).collect();
            let text = format!(
                "class of {}: {{{}}}\nreduced instance passes the Banach principle with modulus {}\n\
                 limit of the reduced orbit: {}\nlimit of the original orbit: {}",
                inst.space.id(x0),
                ids.join(","),
                format_rational(&lambda),
                inst.space.id(reduced.reduced_limit),
                inst.space.id(reduced.original_limit),
            );
            Ok(Outcome { code: PASS, text, json: io::reduction_json(&inst.space, &reduced) })
        }
        Err(ReductionError::Harness(e)) => Err(e.into()),
        Err(e) => {
            let code = if matches!(e, ReductionError::LemmaViolation { .. }) { VIOLATION } else { FAILED };
            let text = format!("reduction failed: {e}");
            Ok(Outcome { code, json: json!({ "reduced": false, "reason": e.to_string() }), text })
        }
    }
}

fn classify(phi: &str, horizon: Option<usize>, tail_tolerance: Option<f64>) -> Result<Outcome, UsageError> {
    let phi = ComparisonFn::parse(phi)?;
    let defaults = ClassifyOptions::default();
    let opts = ClassifyOptions {
        horizon: horizon.unwrap_or(defaults.horizon),
        tail_tolerance: tail_tolerance.unwrap_or(defaults.tail_tolerance),
        ..defaults
    };
    let a = classify_phi(&phi, &opts)?;
    let code = if a.matkowski == Verdict::Yes && a.browder == Verdict::Yes { PASS } else { FAILED };
    let text = format!("{}: matkowski: {}, browder: {} (heuristic)", phi, a.matkowski, a.browder);
    Ok(Outcome { code, text, json: io::admissibility_json(&a) })
}

fn numeric(
    name: &str,
    x0: &str,
    tol: f64,
    max_iter: usize,
    lambda: Option<f64>,
    norm: NormArg,
) -> Result<Outcome, UsageError> {
    let map = catalog_map(name)
        .ok_or_else(|| UsageError(format!("unknown map {name:?}; known maps: {}", CATALOG_MAPS.join(", "))))?;
    let x0 = x0
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| UsageError(format!("--x0: not a number: {v:?}"))))
        .collect::<Result<Vec<f64>, _>>()?;
    let norm = match norm {
        NormArg::Max => Norm::Max,
        NormArg::Euclidean => Norm::Euclidean,
    };
    let trace = numeric_picard(map, &x0, &NumericOptions { norm, tol, max_iter, lambda })?;
    let converged = trace.status == NumericStatus::Converged;
    let mut text = format!(
        "{} after {} iterations: x = {:?}, last step {:e}",
        if converged { "converged" } else { "no convergence" },
        trace.iterations(),
        trace.last(),
        trace.step_norms.last().copied().unwrap_or(0.0)
    );
    if let Some(b) = trace.a_posteriori_bound() {
        text.push_str(&format!(", error bound {b:e}"));
    }
    Ok(Outcome { code: if converged { PASS } else { FAILED }, text, json: io::numeric_json(&trace) })
}

fn suite(seed: Option<u64>, theorem: Option<&str>, count: usize, max_points: usize) -> Result<Outcome, UsageError> {
    if max_points == 0 {
        return Err(UsageError("--max-points must be at least 1".into()));
    }
    let seed = if std::env::var_os("RELFIX_SEED").is_some() { master_seed() } else { seed.unwrap_or(DEFAULT_SEED) };
    let theorems: Vec<TheoremId> = match theorem {
        Some(t) => vec![t.parse()?],
        None => TheoremId::ALL.to_vec(),
    };
    let cfg = GeneratorConfig { min_points: 1, max_points };
    let mut code = PASS;
    let mut lines = vec![format!("master seed {seed}, {count} instances per theorem, at most {max_points} points")];
    let mut rows = Vec::new();
    for id in theorems {
        let summary = run_suite(id, count, seed, &cfg);
        if !summary.violations.is_empty() {
            code = VIOLATION;
        } else if !summary.errors.is_empty() && code == PASS {
            code = FAILED;
        }
        lines.push(format!(
            "{:<12} premises held {:>5}  conclusions held {:>5}  violations {}  errors {}",
            id.as_str(),
            summary.premises_held,
            summary.conclusions_held,
            summary.violations.len(),
            summary.errors.len()
        ));
        for v in &summary.violations {
            lines.push(v.to_string());
        }
        rows.push(json!({
            "theorem": id.as_str(),
            "instances": summary.instances,
            "premises_held": summary.premises_held,
            "conclusions_held": summary.conclusions_held,
            "violations": summary.violations.iter().map(io::theorem_report_json).collect::<Vec<_>>(),
            "errors": summary.errors.iter().map(|(s, e)| json!({"seed": s, "error": e})).collect::<Vec<_>>(),
        }));
    }
    Ok(Outcome { code, text: lines.join("\n"), json: json!({ "seed": seed, "theorems": rows }) })
}
