//! The `hyperfactor` command line: `generate`, `verify`, `feasible` and
//! `oracle`.
//!
//! Exit codes: 0 success, 1 verification failure or oracle disagreement,
//! 2 rejected parameters, 3 internal invariant failure, 4 I/O or parse
//! error, 5 instance too large for the oracle.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperfactor::format::{from_json, to_json, to_json_with, to_text};
use hyperfactor::oracle::Unknown;
use hyperfactor::{
    brute_force_factorize, check_feasibility, construct_checked, verify_factorization, CheckMode,
    Error, Factorization, FeasibilityReport, OracleOutcome, Params, SearchBudget,
    VerificationReport,
};
use serde_json::json;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_PARAMS: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;
pub const EXIT_IO: u8 = 4;
pub const EXIT_TOO_LARGE: u8 = 5;

/// Default output directory for `generate` when `--output` is absent.
pub const OUT_DIR_VAR: &str = "HYPERFACTOR_OUT_DIR";

/// `generate` refuses more edges than this without `--force`.
pub const EDGE_GUARD: u64 = 1_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "hyperfactor",
    version,
    about = "Connected factorizations of λK_n^h"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a factorization and write it out
    Generate(GenerateArgs),
    /// Check a factorization file
    Verify(VerifyArgs),
    /// Print the feasibility conditions for a parameter set
    Feasible(FeasibleArgs),
    /// Compare the feasibility conditions with exhaustive search
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
struct ParamArgs {
    /// Number of vertices
    #[arg(long)]
    n: usize,
    /// Edge size
    #[arg(long)]
    h: usize,
    /// Multiplicity of every h-subset
    #[arg(long, default_value_t = 1)]
    lambda: usize,
    /// Factor degrees, comma separated
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    r: Vec<usize>,
}

impl ParamArgs {
    fn params(&self) -> Params {
        Params::new(self.n, self.h, self.lambda, self.r.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    #[value(alias = "structured")]
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Full,
    Final,
    Off,
}

impl From<Check> for CheckMode {
    fn from(c: Check) -> Self {
        match c {
            Check::Full => CheckMode::Full,
            Check::Final => CheckMode::Final,
            Check::Off => CheckMode::Off,
        }
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Invariant checking; defaults to full for n <= 10, else final. An
    /// explicit `full` also embeds the stage reports in JSON output.
    #[arg(long, value_enum)]
    check: Option<Check>,
    /// Output file; defaults to a file in $HYPERFACTOR_OUT_DIR, or stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Allow more than a million edges
    #[arg(long)]
    force: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Factorization in JSON form
    file: PathBuf,
    /// Report format
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct FeasibleArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Search time limit in seconds
    #[arg(long, default_value_t = 120.0)]
    time_limit: f64,
    /// Write the factorization found by the search here
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return u8::try_from(e.exit_code()).unwrap_or(EXIT_PARAMS);
        }
    };
    match cli.command {
        Command::Generate(a) => cmd_generate(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Feasible(a) => cmd_feasible(&a),
        Command::Oracle(a) => cmd_oracle(&a),
    }
}

fn param_error(e: &Error) -> u8 {
    eprintln!("error: {e}");
    EXIT_PARAMS
}

fn cmd_generate(a: &GenerateArgs) -> u8 {
    let params = a.params.params();
    let report = match check_feasibility(&params) {
        Ok(r) => r,
        Err(e) => return param_error(&e),
    };
    if !report.ok {
        eprint!("{}", feasibility_text(&report));
        return EXIT_PARAMS;
    }
    let edges = u64::try_from(params.edge_count()).unwrap_or(u64::MAX);
    if edges > EDGE_GUARD && !a.force {
        eprintln!(
            "error: {edges} edges exceeds the limit of {EDGE_GUARD}; pass --force to build anyway"
        );
        return EXIT_PARAMS;
    }

    let mode = a
        .check
        .map_or_else(|| CheckMode::default_for(&params), CheckMode::from);
    let built = match construct_checked(&params, a.seed, mode) {
        Ok(c) => c,
        Err(e @ Error::Invariant(_)) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
        Err(e @ (Error::Param(_) | Error::Unsupported(_) | Error::Infeasible(_))) => {
            return param_error(&e)
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };

    let f = &built.factorization;
    let body = match a.format {
        Format::Json if a.check == Some(Check::Full) => {
            let stages = serde_json::to_value(&built.stages).unwrap_or_default();
            to_json_with(f, &[("stages", stages)])
        }
        Format::Json => to_json(f),
        Format::Text => {
            let mut out = to_text(f);
            for s in &built.stages {
                let _ = writeln!(
                    out,
                    "# {}: {}",
                    s.stage,
                    if s.overall { "pass" } else { "fail" }
                );
            }
            out
        }
    };

    let target = a.output.clone().or_else(|| {
        std::env::var_os(OUT_DIR_VAR).map(|dir| PathBuf::from(dir).join(default_name(&params, a)))
    });
    match target {
        Some(path) => {
            if let Err(e) = write_file(&path, &body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_IO;
            }
            eprintln!("wrote {} ({} edges)", path.display(), f.edge_count());
        }
        None => print!("{body}"),
    }
    EXIT_OK
}

fn default_name(params: &Params, a: &GenerateArgs) -> String {
    let r: Vec<String> = params.r.iter().map(ToString::to_string).collect();
    let ext = match a.format {
        Format::Json => "json",
        Format::Text => "txt",
    };
    format!(
        "factorization-n{}-h{}-l{}-r{}-s{}.{ext}",
        params.n,
        params.h,
        params.lambda,
        r.join("_"),
        a.seed
    )
}

fn write_file(path: &Path, body: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, body)
}

fn cmd_verify(a: &VerifyArgs) -> u8 {
    let text = match std::fs::read_to_string(&a.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", a.file.display());
            return EXIT_IO;
        }
    };
    let f = match from_json(&text) {
        Ok(f) => f,
        Err(e) => {
            eprintln!(
                "error: {}:{}:{}: {e}",
                a.file.display(),
                e.line(),
                e.column()
            );
            return EXIT_IO;
        }
    };
    let report = verify_factorization(&f);
    match a.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report).unwrap_or_default()
        ),
        Format::Text => print!("{}", verification_text(&report)),
    }
    if report.overall {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn verification_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{}: {}",
        report.stage,
        if report.overall { "PASS" } else { "FAIL" }
    );
    for c in &report.checks {
        let _ = write!(
            out,
            "  {} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name
        );
        match &c.witness {
            Some(w) => {
                let _ = writeln!(out, ": {w}");
            }
            None => out.push('\n'),
        }
    }
    out
}

fn feasibility_text(report: &FeasibilityReport) -> String {
    let p = &report.params;
    let r: Vec<String> = p.r.iter().map(ToString::to_string).collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "n={} h={} lambda={} r={}",
        p.n,
        p.h,
        p.lambda,
        r.join(",")
    );
    let width = report
        .conditions
        .iter()
        .map(|c| c.name.len())
        .max()
        .unwrap_or(0);
    for c in &report.conditions {
        let mark = if c.holds { "ok  " } else { "FAIL" };
        let _ = writeln!(out, "  {:width$}  {mark}  {}", c.name, c.detail);
    }
    for (i, (&ri, &conn)) in p.r.iter().zip(&report.connected).enumerate() {
        let note = if conn {
            "connected"
        } else {
            "no connectivity guarantee"
        };
        let _ = writeln!(out, "  factor {}: r={ri}, {note}", i + 1);
    }
    let _ = writeln!(out, "{}", if report.ok { "feasible" } else { "infeasible" });
    out
}

fn cmd_feasible(a: &FeasibleArgs) -> u8 {
    let report = match check_feasibility(&a.params.params()) {
        Ok(r) => r,
        Err(e) => return param_error(&e),
    };
    match a.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report).unwrap_or_default()
        ),
        Format::Text => print!("{}", feasibility_text(&report)),
    }
    if report.ok {
        EXIT_OK
    } else {
        EXIT_PARAMS
    }
}

fn cmd_oracle(a: &OracleArgs) -> u8 {
    let params = a.params.params();
    let report = match check_feasibility(&params) {
        Ok(r) => r,
        Err(e) => return param_error(&e),
    };
    let budget = SearchBudget {
        time_limit: Duration::try_from_secs_f64(a.time_limit).unwrap_or(Duration::MAX),
        ..SearchBudget::default()
    };
    let outcome = match brute_force_factorize(&params, true, budget) {
        Ok(o) => o,
        Err(e) => return param_error(&e),
    };
    let found: Option<&Factorization> = match &outcome {
        OracleOutcome::Found(f) => Some(f),
        OracleOutcome::None => None,
        OracleOutcome::Unknown(Unknown::TooLarge) => {
            eprintln!("error: instance too large for oracle");
            return EXIT_TOO_LARGE;
        }
        OracleOutcome::Unknown(Unknown::BudgetExhausted) => {
            eprintln!("error: oracle inconclusive, search budget exhausted");
            return EXIT_FAILED;
        }
    };
    let found_valid = found.is_some_and(|f| verify_factorization(f).overall);
    let agree = found.is_some() == report.ok && (found.is_none() || found_valid);

    let say = |b: bool| if b { "exists" } else { "none" };
    match a.format {
        Format::Json => {
            let doc = json!({
                "params": params,
                "feasible": report.ok,
                "oracle": say(found.is_some()),
                "agree": agree,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap_or_default());
        }
        Format::Text => {
            println!("conditions: {}", say(report.ok));
            println!("search:     {}", say(found.is_some()));
            if found.is_some() && !found_valid {
                println!("search result fails verification");
            }
            println!("{}", if agree { "agreement" } else { "DISAGREEMENT" });
        }
    }
    if let (Some(path), Some(f)) = (&a.output, found) {
        if let Err(e) = write_file(path, &to_json(f)) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_IO;
        }
    }
    if agree {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}
