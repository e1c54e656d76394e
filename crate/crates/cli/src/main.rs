//! `dickson`: command-line front end for dickson-core.
//!
//! Exit codes: 0 success, 1 verification mismatch or internal error,
//! 2 usage/range error, 3 evaluator mismatch under `--check`, 4 overflow,
//! 5 brute-force cap exceeded.

mod commands;
mod output;

use std::io::{self, BufRead, BufReader};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::{CliError, CliResult, Evaluator, OrderMethodArg, PermMethodArg};
use dickson_core::congruence::Congruence;
use dickson_core::criteria::BRUTE_FORCE_CAP;
use dickson_core::oracle::ORACLE_CAP;
use output::emit;

#[derive(Parser, Debug)]
#[command(name = "dickson", version, about = "Dickson permutation polynomials over Z_n")]
struct Cli {
    /// Emit one JSON object per result.
    #[arg(long, global = true)]
    json: bool,
    /// Upper bound on n for brute-force and oracle computations
    /// (defaults: 5000 for is-perm, 2000 for order/verify).
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate D_k(u, a) mod n.
    Eval {
        k: u64,
        #[arg(allow_hyphen_values = true)]
        a: i64,
        n: u64,
        u: u64,
        #[arg(long, conflicts_with = "recurrence")]
        fast: bool,
        #[arg(long)]
        recurrence: bool,
        /// Run both evaluators and fail (exit 3) if they disagree.
        #[arg(long)]
        check: bool,
    },
    /// Decide whether D_k(x, a) permutes Z_n.
    IsPerm {
        k: u64,
        n: u64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, value_enum, default_value_t = PermMethodArg::All)]
        method: PermMethodArg,
    },
    /// Print l_0, l_i, w(n) and v(n).
    Profile {
        #[arg(required_unless_present = "input")]
        n: Option<u64>,
        /// Read one n per line; emits one JSON record per line.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Solve a system of congruences given as residue:modulus pairs.
    Solve {
        #[arg(required = true, value_parser = commands::parse_congruence, allow_hyphen_values = true)]
        congruences: Vec<Congruence>,
    },
    /// Enumerate the kernel K_n.
    Kernel {
        #[arg(required_unless_present = "input")]
        n: Option<u64>,
        /// Show the congruence tuple solved by each element.
        #[arg(long)]
        witnesses: bool,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Compute |G_n|.
    Order {
        #[arg(required_unless_present = "input")]
        n: Option<u64>,
        #[arg(long, value_enum, default_value_t = OrderMethodArg::Auto)]
        method: OrderMethodArg,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Closed-form |G_{p^e}| next to kernel enumeration for prime powers.
    Table {
        #[arg(long, default_value_t = 100)]
        max: u64,
    },
    /// Check kernel enumeration and |G_n| against the oracle for 2 <= n <= N.
    Verify {
        #[arg(long, default_value_t = 100)]
        max_n: u64,
    },
}

fn run_one(json: bool, f: impl FnOnce() -> CliResult) -> Result<(), CliError> {
    let start = Instant::now();
    let out = f()?;
    let (record, text) = out.into_record(start.elapsed().as_secs_f64() * 1e3);
    emit(&mut io::stdout().lock(), &record, &text, json);
    Ok(())
}

// Batch mode: every line is one n; errors are reported per line and the
// first error's code becomes the exit code.
fn run_batch(path: &PathBuf, f: impl Fn(u64) -> CliResult) -> Result<(), CliError> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::usage(format!("cannot open {}: {e}", path.display())))?;
    let mut first_err = None;
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| CliError::usage(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let res = line
            .parse::<u64>()
            .map_err(|e| CliError::usage(format!("line {}: {line:?}: {e}", lineno + 1)))
            .and_then(|n| run_one(true, || f(n)));
        if let Err(e) = res {
            println!("{}", serde_json::json!({ "line": (lineno + 1).to_string(), "error": e.message }));
            first_err.get_or_insert(e);
        }
    }
    first_err.map_or(Ok(()), Err)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let json = cli.json;
    match cli.command {
        Command::Eval {
            k,
            a,
            n,
            u,
            fast: _,
            recurrence,
            check,
        } => {
            let evaluator = if recurrence { Evaluator::Recurrence } else { Evaluator::Fast };
            run_one(json, || commands::eval(k, a, n, u, evaluator, check))
        }
        Command::IsPerm { k, n, a, method } => {
            let cap = cli.cap.unwrap_or(BRUTE_FORCE_CAP);
            run_one(json, || commands::is_perm(k, a, n, method, cap))
        }
        Command::Profile { n, input } => match input {
            Some(path) => run_batch(&path, commands::profile_cmd),
            None => run_one(json, || commands::profile_cmd(n.expect("required by clap"))),
        },
        Command::Solve { congruences } => run_one(json, || commands::solve(&congruences)),
        Command::Kernel { n, witnesses, input } => match input {
            Some(path) => run_batch(&path, |n| commands::kernel(n, witnesses)),
            None => run_one(json, || commands::kernel(n.expect("required by clap"), witnesses)),
        },
        Command::Order { n, method, input } => {
            let cap = cli.cap.unwrap_or(ORACLE_CAP);
            match input {
                Some(path) => run_batch(&path, |n| commands::order(n, method, cap)),
                None => run_one(json, || commands::order(n.expect("required by clap"), method, cap)),
            }
        }
        Command::Table { max } => run_one(json, || commands::table(max)),
        Command::Verify { max_n } => {
            let cap = cli.cap.unwrap_or(ORACLE_CAP);
            let start = Instant::now();
            let (out, passed) = commands::verify(max_n, cap, cli.seed)?;
            let (record, text) = out.into_record(start.elapsed().as_secs_f64() * 1e3);
            emit(&mut io::stdout().lock(), &record, &text, json);
            if passed {
                Ok(())
            } else {
                Err(CliError {
                    code: 1,
                    message: "verification failed".into(),
                })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
