//! Batch front door: JSON problem files in, JSON reports (or CSV scan
//! tables) out. One pipeline per invocation; exit code 0 whenever the
//! pipeline completes — a No or Unknown verdict is a result, not an error —
//! and nonzero only for input, validation or I/O failures.

use clap::{Parser, Subcommand};
use hbcomp::hbspace::decompose;
use hbcomp::mate::{mate_from_a, pythagorean_mate, MateData};
use hbcomp::polyrat::RatFunc;
use hbcomp::report::{self, apply_tol_overrides, Options, ProblemSpec};
use hbcomp::scan::{carleson_scan, GridSpec};
use hbcomp::symbol::profile;
use hbcomp::tol::Tol;
use hbcomp::weight::build_u;
use hbcomp::Error;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "hbcomp",
    version,
    about = "Composition operators on de Branges-Rovnyak spaces H(b): \
             boundedness, compactness and Hilbert-Schmidt classification for rational data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scan grid depth: radii 1 − 2^{−q} up to this q.
    #[arg(long, global = true, value_name = "q")]
    grid_depth: Option<u32>,

    /// Matrix truncation size K.
    #[arg(long, global = true, value_name = "K")]
    trunc: Option<usize>,

    /// Tolerance override, repeatable (names: coeff, cluster, circle, quad).
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,

    /// Output file (defaults to stdout).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Pythagorean mate of b (or b from a): reads {"b": …} or {"a": …}.
    Mate { input: Option<PathBuf> },
    /// H(b) membership and decomposition: reads {"b"|"a": …, "f": …}.
    HbMembership { input: Option<PathBuf> },
    /// Equivalent H² weight u: reads {"b"|"a": …, "phi": …}.
    U { input: Option<PathBuf> },
    /// Full pipeline report: reads {"b"|"a": …, "phi": …, "options": …}.
    Analyze { input: Option<PathBuf> },
    /// Carleson window scan as CSV (re_w, im_w, I_w).
    Scan { input: Option<PathBuf> },
    /// Truncated operator matrix with Frobenius and singular-value summary.
    Matrix { input: Option<PathBuf> },
    /// Run the embedded regression gallery (optionally filtered by tag/id).
    Gallery { filter: Option<String> },
}

/// Wire shape shared by the single-function subcommands.
#[derive(Deserialize)]
struct SpaceInput {
    b: Option<RatFunc>,
    a: Option<RatFunc>,
    f: Option<RatFunc>,
    phi: Option<RatFunc>,
    #[serde(default)]
    grid: Option<GridSpec>,
    #[serde(default)]
    options: Option<Options>,
}

fn main() {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(body) => {
            if let Err(e) = emit(&cli.out, &body) {
                eprintln!("error: cannot write output: {e}");
                std::process::exit(3);
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}

/// Input and validation problems exit 2, internal numerical failures 1.
fn exit_code(e: &CliError) -> i32 {
    match e {
        CliError::Io(_) | CliError::Json(_) | CliError::Usage(_) => 2,
        CliError::Pipeline(err) => match err {
            // The input lies outside the toolkit's mathematical domain.
            Error::InvalidInput { .. }
            | Error::IsInner
            | Error::NotASelfMap { .. }
            | Error::NotInHardy { .. }
            | Error::NotOuter { .. }
            | Error::NormExceeded { .. }
            | Error::NotInHb { .. }
            | Error::WrongSpace { .. } => 2,
            _ => 1,
        },
    }
}

enum CliError {
    Io(std::io::Error),
    Json(serde_json::Error),
    Usage(String),
    Pipeline(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Json(e) => write!(f, "invalid input JSON: {e}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Pipeline(e) => write!(f, "{e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}
impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Pipeline(e)
    }
}

fn dispatch(cli: &Cli) -> Result<String, CliError> {
    let tol = effective_tol(&cli.tol)?;
    match &cli.command {
        Command::Mate { input } => {
            let (mate, _) = mate_of(&read_input(input)?, &tol)?;
            Ok(to_json(&mate)?)
        }
        Command::HbMembership { input } => {
            let parsed = read_input(input)?;
            let f = parsed.f.clone().ok_or_else(|| {
                CliError::Usage("hb-membership needs an \"f\" field".into())
            })?;
            let (mate, _) = mate_of(&parsed, &tol)?;
            let value = match decompose(&f, &mate, &tol) {
                Ok(d) => serde_json::json!({
                    "member": true,
                    "p_f": d.p_f,
                    "f_tilde": d.f_tilde,
                    "norm_sq": d.norm_sq,
                }),
                Err(Error::NotInHb { witness }) => serde_json::json!({
                    "member": false,
                    "p_f": null,
                    "f_tilde": null,
                    "norm_sq": null,
                    "witness": [witness.re, witness.im],
                }),
                Err(other) => return Err(other.into()),
            };
            Ok(serde_json::to_string_pretty(&value)?)
        }
        Command::U { input } => {
            let parsed = read_input(input)?;
            let (mate, phi) = mate_and_phi(&parsed, &tol)?;
            let pr = profile(&phi, &mate, &tol)?;
            let pack = build_u(&pr, &mate, &tol)?;
            let value = serde_json::json!({
                "u": pack.u,
                "in_H2": pack.u_in_h2,
                "witness_pole": pack.witness_pole.map(|p| [p.re, p.im]),
            });
            Ok(serde_json::to_string_pretty(&value)?)
        }
        Command::Analyze { input } => {
            let spec = problem_spec(cli, &read_input(input)?)?;
            let report = report::run(&spec, &tol)?;
            Ok(to_json(&report)?)
        }
        Command::Scan { input } => {
            let parsed = read_input(input)?;
            let (mate, phi) = mate_and_phi(&parsed, &tol)?;
            let pr = profile(&phi, &mate, &tol)?;
            let pack = build_u(&pr, &mate, &tol)?;
            let grid = grid_of(cli, &parsed);
            let data = carleson_scan(&pack, &pr, &grid, &tol)?;
            let mut csv = String::from("re_w,im_w,I_w\n");
            for p in &data.carleson_grid {
                csv.push_str(&format!("{},{},{}\n", p.w[0], p.w[1], p.value));
            }
            Ok(csv)
        }
        Command::Matrix { input } => {
            let mut spec = problem_spec(cli, &read_input(input)?)?;
            if spec.options.truncation.is_none() {
                spec.options.truncation = Some(64);
            }
            let report = report::run(&spec, &tol)?;
            match report.matrix {
                Some(summary) => Ok(to_json(&summary)?),
                None => Err(CliError::Usage(format!(
                    "no matrix was produced: {}",
                    report
                        .notes
                        .iter()
                        .map(String::as_str)
                        .collect::<Vec<_>>()
                        .join("; ")
                ))),
            }
        }
        Command::Gallery { filter } => {
            let outcomes = report::gallery(filter.as_deref(), &tol);
            if outcomes.is_empty() {
                return Err(CliError::Usage(format!(
                    "no gallery case matches \"{}\"",
                    filter.as_deref().unwrap_or("")
                )));
            }
            let mut table = String::new();
            let mut all_passed = true;
            for o in &outcomes {
                table.push_str(&format!(
                    "{:<5} {:<22} {:>6} ms  {}\n",
                    if o.passed { "pass" } else { "FAIL" },
                    o.id,
                    o.runtime_ms,
                    o.title
                ));
                for failure in &o.failures {
                    table.push_str(&format!("      - {failure}\n"));
                }
                all_passed &= o.passed;
            }
            table.push_str(&format!(
                "{} of {} cases passed\n",
                outcomes.iter().filter(|o| o.passed).count(),
                outcomes.len()
            ));
            if !all_passed {
                // A failing gallery is a completed pipeline, but scripts
                // want to notice; report it through stderr, not the code.
                eprintln!("warning: gallery regressions detected");
            }
            Ok(table)
        }
    }
}

fn effective_tol(overrides: &[String]) -> Result<Tol, CliError> {
    let mut map = BTreeMap::new();
    for item in overrides {
        let (name, value) = item.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("--tol takes NAME=VALUE, got \"{item}\""))
        })?;
        let parsed: f64 = value.parse().map_err(|_| {
            CliError::Usage(format!("--tol {name}: \"{value}\" is not a number"))
        })?;
        map.insert(name.to_string(), parsed);
    }
    Ok(apply_tol_overrides(&Tol::default(), &map)?)
}

fn read_input(path: &Option<PathBuf>) -> Result<SpaceInput, CliError> {
    let text = match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)?,
        _ => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    Ok(serde_json::from_str(&text)?)
}

fn mate_of(parsed: &SpaceInput, tol: &Tol) -> Result<(MateData, &'static str), CliError> {
    match (&parsed.b, &parsed.a) {
        (Some(b), None) => Ok((pythagorean_mate(b, tol)?, "b")),
        (None, Some(a)) => Ok((mate_from_a(a, tol)?, "a")),
        (Some(_), Some(_)) => Err(CliError::Usage(
            "give exactly one of \"b\" or \"a\", not both".into(),
        )),
        (None, None) => Err(CliError::Usage(
            "missing space data: give \"b\" or \"a\"".into(),
        )),
    }
}

fn mate_and_phi(parsed: &SpaceInput, tol: &Tol) -> Result<(MateData, RatFunc), CliError> {
    let phi = parsed
        .phi
        .clone()
        .ok_or_else(|| CliError::Usage("missing \"phi\" field".into()))?;
    let (mate, _) = mate_of(parsed, tol)?;
    Ok((mate, phi))
}

/// Assemble a ProblemSpec from parsed input plus command-line overrides.
fn problem_spec(cli: &Cli, parsed: &SpaceInput) -> Result<ProblemSpec, CliError> {
    let phi = parsed
        .phi
        .clone()
        .ok_or_else(|| CliError::Usage("missing \"phi\" field".into()))?;
    let given = match (&parsed.b, &parsed.a) {
        (Some(b), None) => report::Symbol::B(b.clone()),
        (None, Some(a)) => report::Symbol::A(a.clone()),
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give exactly one of \"b\" or \"a\", not both".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Usage(
                "missing space data: give \"b\" or \"a\"".into(),
            ))
        }
    };
    let mut options = parsed.options.clone().unwrap_or_default();
    if let Some(grid) = parsed.grid {
        options.grid = grid;
    }
    if let Some(q) = cli.grid_depth {
        options.grid.q_max = q;
    }
    if let Some(k) = cli.trunc {
        options.truncation = Some(k);
    }
    Ok(ProblemSpec {
        given,
        phi,
        options,
    })
}

fn grid_of(cli: &Cli, parsed: &SpaceInput) -> GridSpec {
    let mut grid = parsed
        .options
        .as_ref()
        .map(|o| o.grid)
        .or(parsed.grid)
        .unwrap_or_default();
    if let Some(q) = cli.grid_depth {
        grid.q_max = q;
    }
    grid
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, serde_json::Error> {
    serde_json::to_string_pretty(value)
}

fn emit(out: &Option<PathBuf>, body: &str) -> std::io::Result<()> {
    let mut body = body.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}
