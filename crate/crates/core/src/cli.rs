//! The `prenex` command line.
//!
//! Exit codes: 0 accept/true, 1 reject/false, 2 usage, parse or I/O error,
//! 3 instance over the size cap. Data goes to `out`, diagnostics to `err`.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::bench::{self, BenchConfig, Workload};
use crate::census::{self, GraphFormat, CLASS_CAP, PAIR_CAP};
use crate::decider::{implies, RejectCase, Verdict};
use crate::oracle::{Direction, Oracle, OracleError, DEFAULT_MAX_N};
use crate::prefix::{parse_prefix_pair, Prefix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "prenex", version, about = "Implication between prenex quantifier prefixes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether LHS implies RHS with the linear-time decider.
    Check {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long)]
        json: bool,
    },
    /// Decide every {"lhs": ..., "rhs": ...} line of a JSONL file.
    Batch { path: PathBuf },
    /// Decide implication by brute-force search over moves.
    OracleCheck {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Print the canonical representative of a prefix.
    Canon { prefix: String },
    /// Test whether two prefixes are equivalent.
    Equiv {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// List every class implied by a prefix (or, with --reverse, implying it).
    Closure {
        prefix: String,
        #[arg(long)]
        reverse: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Export the class implication graph for n variables.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Dot)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = CLASS_CAP)]
        max_n: usize,
    },
    /// Class count, edge count and exact implication probability for n variables.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = PAIR_CAP)]
        max_n: usize,
    },
    /// Time the decider on seeded random inputs of increasing size.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [100_000usize, 200_000, 400_000, 800_000, 1_600_000])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, value_enum, default_value_t = Workload::Uniform)]
        workload: Workload,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Dot,
    Json,
}

/// JSON form of a verdict. Variable names are resolved against `rhs`.
pub fn verdict_json(verdict: &Verdict, rhs: &Prefix) -> Value {
    match verdict {
        Verdict::Accept => json!({"verdict": "accept", "witness": null}),
        Verdict::Reject(w) => json!({
            "verdict": "reject",
            "witness": {
                "case": w.case.id(),
                "s2_position": w.s2_position,
                "variable": rhs.name(w.variable),
                "variable_index": w.variable,
                "blocking_f": w.blocking_f,
            },
        }),
    }
}

fn verdict_text(verdict: &Verdict, rhs: &Prefix) -> String {
    match verdict {
        Verdict::Accept => "accept".to_string(),
        Verdict::Reject(w) => {
            let var = rhs.name(w.variable);
            match w.case {
                RejectCase::ExistsToForall => format!(
                    "reject (case 5: {var} is existential on the left but universal at rhs position {})",
                    w.s2_position
                ),
                RejectCase::BlockedUniversal => format!(
                    "reject (case 4: universal {var} at rhs position {} is followed on the left by unmatched existential at position {})",
                    w.s2_position,
                    w.blocking_f.expect("case 4 carries F"),
                ),
            }
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: EXIT_ERROR,
            message: message.to_string(),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = match e {
            OracleError::InstanceTooLarge(_) => EXIT_CAP,
            OracleError::VariableSetMismatch => EXIT_ERROR,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<crate::InstanceTooLarge> for Failure {
    fn from(e: crate::InstanceTooLarge) -> Self {
        Failure {
            code: EXIT_CAP,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e)
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Check { lhs, rhs, json } => {
            let (a, b) = parse_prefix_pair(&lhs, &rhs).map_err(Failure::usage)?;
            let verdict = implies(&a, &b).map_err(Failure::usage)?;
            if json {
                writeln!(out, "{}", verdict_json(&verdict, &b))?;
            } else {
                writeln!(out, "{}", verdict_text(&verdict, &b))?;
            }
            Ok(if verdict.is_accepted() { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Batch { path } => {
            let text = fs::read_to_string(&path)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            let mut all_accepted = true;
            for line in text.lines() {
                let record = decide_record(line);
                if record.get("verdict").and_then(Value::as_str) != Some("accept") {
                    all_accepted = false;
                }
                writeln!(out, "{record}")?;
            }
            Ok(if all_accepted { EXIT_OK } else { EXIT_FALSE })
        }
        Command::OracleCheck { lhs, rhs, json, max_n } => {
            let (a, b) = parse_prefix_pair(&lhs, &rhs).map_err(Failure::usage)?;
            let holds = Oracle::new(max_n).implies(&a, &b)?;
            if json {
                writeln!(out, "{}", json!({ "implies": holds }))?;
            } else {
                writeln!(out, "{holds}")?;
            }
            Ok(if holds { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Canon { prefix } => {
            let p = Prefix::parse(&prefix).map_err(Failure::usage)?;
            writeln!(out, "{}", p.canonicalize())?;
            Ok(EXIT_OK)
        }
        Command::Equiv { lhs, rhs } => {
            let (a, b) = parse_prefix_pair(&lhs, &rhs).map_err(Failure::usage)?;
            let same = a.equivalent(&b).map_err(Failure::usage)?;
            writeln!(out, "{same}")?;
            Ok(if same { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Closure { prefix, reverse, max_n } => {
            let p = Prefix::parse(&prefix).map_err(Failure::usage)?;
            let direction = if reverse { Direction::Backward } else { Direction::Forward };
            for class in Oracle::new(max_n).closure(&p, direction)? {
                writeln!(out, "{class}")?;
            }
            Ok(EXIT_OK)
        }
        Command::Graph { n, format, out: path, max_n } => {
            let graph = census::build_graph_capped(n, max_n)?;
            let format = match format {
                FormatArg::Dot => GraphFormat::Dot,
                FormatArg::Json => GraphFormat::Json,
            };
            let bytes = census::export_graph(&graph, format);
            match path {
                Some(path) => fs::write(&path, bytes)
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
                None => out.write_all(&bytes)?,
            }
            Ok(EXIT_OK)
        }
        Command::Census { n, json, max_n } => {
            let report = census::count_pairs_capped(n, max_n)?;
            let text = if json { report.to_json() } else { report.to_text() };
            out.write_all(text.as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Bench { sizes, seed, reps, workload, json } => {
            let cfg = BenchConfig {
                sizes,
                seed,
                repetitions: reps,
                workload,
            };
            cfg.validate().map_err(Failure::usage)?;
            let rows = bench::run(&cfg);
            if json {
                for row in &rows {
                    writeln!(out, "{}", serde_json::to_string(row).expect("row serializes"))?;
                }
            } else {
                writeln!(
                    out,
                    "{:>10} {:>8} {:>12} {:>10} {:>12} {:>10} {:>12} {:>8}  input_sha256",
                    "n", "verdict", "median_ns", "ns/elem", "iterations", "rescans", "ops/elem", "reps"
                )?;
                for row in &rows {
                    writeln!(
                        out,
                        "{:>10} {:>8} {:>12} {:>10.2} {:>12} {:>10} {:>12.3} {:>8}  {}",
                        row.n,
                        if row.accepted { "accept" } else { "reject" },
                        row.timing.median_ns,
                        row.timing.median_ns as f64 / row.n as f64,
                        row.stats.iterations,
                        row.stats.rescan_steps,
                        row.ops_per_element,
                        row.timing.repetitions,
                        row.input_sha256,
                    )?;
                }
            }
            let _ = err;
            Ok(EXIT_OK)
        }
    }
}

#[derive(Deserialize)]
struct BatchRecord {
    lhs: String,
    rhs: String,
}

fn decide_record(line: &str) -> Value {
    let record: BatchRecord = match serde_json::from_str(line) {
        Ok(r) => r,
        Err(e) => return json!({ "error": format!("invalid record: {e}") }),
    };
    let (a, b) = match parse_prefix_pair(&record.lhs, &record.rhs) {
        Ok(pair) => pair,
        Err(e) => return json!({ "error": e.to_string() }),
    };
    match implies(&a, &b) {
        Ok(verdict) => verdict_json(&verdict, &b),
        Err(e) => json!({ "error": e.to_string() }),
    }
}
