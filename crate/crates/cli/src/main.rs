use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use partlin::closure::verify_bridge;
use partlin::matrix::t_matrix;
use partlin::{closure, FClosure, FLinComb, Membership, Mode, Sign, Suite, SuiteReport};
use partlin_cli::{eval_str, report};
use serde_json::Value;

/// Exact computations with partition linear combinations over Q(√N).
///
/// Enumeration and matrix sizes are capped by PARTLIN_ENUM_CAP and
/// PARTLIN_MATRIX_CAP.
#[derive(Parser)]
#[command(name = "partlin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression and print the resulting combination.
    Eval {
        expr: String,
        #[command(flatten)]
        out: Output,
    },
    /// Print the matrix T of an expression.
    Matrix {
        expr: String,
        #[command(flatten)]
        out: Output,
    },
    /// Close a set of generators and report per-grade dimensions.
    Closure(ClosureArgs),
    /// Decide membership of an expression in a closure, up to the bound.
    Member {
        expr: String,
        #[command(flatten)]
        closure: ClosureArgs,
    },
    /// Closure plus an easiness verdict for every grade.
    Easy(ClosureArgs),
    /// Compare the cut image of a reduced closure with the closure of the images.
    Bridge {
        #[arg(long, value_enum, default_value_t = SignArg::Plus)]
        sign: SignArg,
        #[command(flatten)]
        closure: ClosureArgs,
    },
    /// Run built-in verification suites.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Run at this dimension only instead of the suite's defaults.
        #[arg(long)]
        dim: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Output {
    #[arg(long, default_value_t = 4)]
    dim: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClosureArgs {
    /// File with one expression per line; `#` starts a comment.
    #[arg(long = "gen")]
    generators: Option<PathBuf>,
    /// Maximum total number of points k+l.
    #[arg(long, default_value_t = 6)]
    bound: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Ordinary)]
    mode: ModeArg,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ordinary,
    Reduced,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

enum Failure {
    /// Bad input: exit status 2.
    Usage(String),
    /// Computation error or negative result: exit status 1.
    Run(String),
}

impl From<partlin::Error> for Failure {
    fn from(e: partlin::Error) -> Self {
        Failure::Run(format!("error: {e}"))
    }
}

fn parse_expr(src: &str, dim: u64) -> Result<FLinComb, Failure> {
    eval_str(src, dim).map_err(|e| Failure::Usage(e.render(src)))
}

fn read_generators(path: Option<&Path>, dim: u64) -> Result<Vec<FLinComb>, Failure> {
    let Some(path) = path else {
        return Ok(Vec::new());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("error: {}: {e}", path.display())))?;
    let mut gens = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let src = line.split('#').next().unwrap_or("").trim();
        if src.is_empty() {
            continue;
        }
        let g = eval_str(src, dim).map_err(|e| {
            Failure::Usage(format!("{}:{}: {}", path.display(), i + 1, e.render(src)))
        })?;
        gens.push(g);
    }
    Ok(gens)
}

fn run_closure(args: &ClosureArgs) -> Result<FClosure, Failure> {
    let gens = read_generators(args.generators.as_deref(), args.out.dim)?;
    let mode = match args.mode {
        ModeArg::Ordinary => Mode::Ordinary,
        ModeArg::Reduced => Mode::Reduced,
    };
    Ok(closure(&gens, args.out.dim, args.bound, mode)?)
}

fn emit(json: bool, value: impl FnOnce() -> Value, text: impl FnOnce() -> String) {
    let body = if json {
        serde_json::to_string_pretty(&value()).unwrap() + "\n"
    } else {
        text()
    };
    // a closed pipe downstream is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(body.as_bytes());
}

/// Runs a command; `Ok(false)` means a negative verdict.
fn run(command: Command) -> Result<bool, Failure> {
    match command {
        Command::Eval { expr, out } => {
            let x = parse_expr(&expr, out.dim)?;
            emit(out.json, || report::comb_json(&x), || format!("{x}\n"));
            Ok(true)
        }
        Command::Matrix { expr, out } => {
            let x = parse_expr(&expr, out.dim)?;
            let m = t_matrix(&x, x.dim())?;
            emit(
                out.json,
                || report::matrix_json(&m),
                || report::matrix_text(&m),
            );
            Ok(true)
        }
        Command::Closure(args) => {
            let res = run_closure(&args)?;
            emit(
                args.out.json,
                || report::closure_json(&res, None),
                || report::closure_text(&res, None),
            );
            Ok(true)
        }
        Command::Member { expr, closure } => {
            let x = parse_expr(&expr, closure.out.dim)?;
            let res = run_closure(&closure)?;
            let m = res.member(&x)?;
            emit(
                closure.out.json,
                || report::membership_json(m, &x, &res),
                || report::membership_text(m, &res),
            );
            Ok(m == Membership::Yes)
        }
        Command::Easy(args) => {
            let res = run_closure(&args)?;
            let easy = res.easiness_report()?;
            emit(
                args.out.json,
                || report::closure_json(&res, Some(&easy)),
                || report::closure_text(&res, Some(&easy)),
            );
            Ok(easy.easy_at_bound())
        }
        Command::Bridge { sign, closure } => {
            let n = closure.out.dim;
            let gens = read_generators(closure.generators.as_deref(), n)?;
            let sign = match sign {
                SignArg::Plus => Sign::Plus,
                SignArg::Minus => Sign::Minus,
            };
            let r = verify_bridge(&gens, n, sign, closure.bound, n)?;
            emit(
                closure.out.json,
                || report::bridge_json(&r),
                || report::bridge_text(&r),
            );
            Ok(r.all_equal())
        }
        Command::Verify { suite, dim, json } => {
            let suites = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse::<Suite>().map_err(|_| {
                    let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                    Failure::Usage(format!(
                        "error: unknown suite `{suite}`; expected all, {}",
                        names.join(", ")
                    ))
                })?]
            };
            let reports: Vec<SuiteReport> = suites
                .into_iter()
                .map(|s| partlin::run_suite(s, dim))
                .collect::<Result<_, _>>()?;
            let passed = reports.iter().all(|r| r.passed);
            emit(
                json,
                || serde_json::json!({ "passed": passed, "suites": reports }),
                || reports.iter().map(report::suite_text).collect(),
            );
            Ok(passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Run(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
