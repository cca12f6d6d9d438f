//! Command-line front end.
//!
//! Exit codes: 0 success, 1 parse or runtime error, 2 `verify` found an
//! invalid system, 3 `search` ran out of time, 64 usage error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use sperner::bounds::{bounds, BoundResult, Provenance};
use sperner::format::{parse, serialize_json, serialize_text};
use sperner::plan::{construct, Method};
use sperner::search::{search, SearchConfig, SearchOptions};
use sperner::{fixtures, verify_sperner, Error, PartitionSystem};

const EXIT_PARSE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "sperner",
    version,
    about = "Sperner k-partition systems: construct, verify, bound, search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Build a verified system for (n, k).
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// auto | k2 | dev-2k1 | dev-2k2 | dev-3k1 | latin-lift | extend
        #[arg(long, default_value = "auto")]
        method: Method,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check a system file; exit 2 when it is not Sperner.
    Verify {
        file: PathBuf,
        /// List every violation.
        #[arg(long)]
        report: bool,
    },
    /// Print lower and upper bounds on SP(n, k).
    Bounds {
        #[arg(long, required_unless_present = "table")]
        n: Option<usize>,
        #[arg(long, required_unless_present = "table")]
        k: Option<usize>,
        /// Emit every (n, k) with k <= n <= max-n.
        #[arg(long, requires = "max_n")]
        table: bool,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Maximum-clique search over all candidate partitions.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        min_class_size: usize,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Stop once a system of this size is found (ignored with --exact).
        #[arg(long)]
        target: Option<usize>,
        /// Search until optimality is proven.
        #[arg(long)]
        exact: bool,
        /// Fix the first partition to one representative per class-size shape.
        #[arg(long)]
        symmetry: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List or export the embedded fixture systems.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Subcommand)]
enum FixtureAction {
    List,
    Emit {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        // the reader went away (e.g. `| head`); nothing left to report
        Err((_, msg)) if msg.is_empty() => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

type CliResult = Result<ExitCode, (u8, String)>;

fn usage(e: impl ToString) -> (u8, String) {
    (EXIT_USAGE, e.to_string())
}

fn failure(e: impl ToString) -> (u8, String) {
    (EXIT_PARSE, e.to_string())
}

fn write_failure(e: io::Error) -> (u8, String) {
    match e.kind() {
        io::ErrorKind::BrokenPipe => (EXIT_PARSE, String::new()),
        _ => failure(e),
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Construct {
            n,
            k,
            method,
            output,
            format,
        } => {
            let (system, trail) = construct(n, k, method).map_err(|e| match e {
                Error::InvalidParameters(_) | Error::NoPartition { .. } => usage(e),
                other => failure(other),
            })?;
            for step in trail {
                eprintln!("{step}");
            }
            eprintln!(
                "constructed {} partitions on {} elements, verified",
                system.len(),
                system.n()
            );
            emit(&system, format, output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file, report } => {
            let text = fs::read_to_string(&file)
                .map_err(|e| failure(format!("{}: {e}", file.display())))?;
            let system = parse(&text).map_err(|e| failure(format!("{}: {e}", file.display())))?;
            let result = verify_sperner(&system);
            let mut out = io::stdout().lock();
            if result.valid {
                writeln!(
                    out,
                    "valid: {} partitions, n = {}, k = {}",
                    system.len(),
                    system.n(),
                    system.k()
                )
                .map_err(write_failure)?;
                return Ok(ExitCode::SUCCESS);
            }
            writeln!(
                out,
                "invalid: {} violations, {} well-formedness errors",
                result.violations.len(),
                result.wellformed_errors.len()
            )
            .map_err(write_failure)?;
            if report {
                for line in result.describe(&system) {
                    writeln!(out, "  {line}").map_err(write_failure)?;
                }
            }
            Ok(ExitCode::from(EXIT_INVALID))
        }
        Command::Bounds { n, k, table, max_n } => {
            let mut out = io::stdout().lock();
            if table {
                let max_n = max_n.expect("clap enforces --max-n");
                writeln!(out, "n\tk\tlower\tupper\texact").map_err(write_failure)?;
                for n in 1..=max_n {
                    for k in 1..=n {
                        let b = bounds(n, k).map_err(usage)?;
                        writeln!(out, "{n}\t{k}\t{}\t{}\t{}", b.lower, b.upper, b.exact)
                            .map_err(write_failure)?;
                    }
                }
            } else {
                let (n, k) = (n.expect("clap enforces --n"), k.expect("clap enforces --k"));
                let b = bounds(n, k).map_err(usage)?;
                writeln!(out, "{}", describe_bounds(&b)).map_err(write_failure)?;
                for p in &b.lower_provenance {
                    writeln!(out, "  lower <- {p} [{}]", p.rule.citation())
                        .map_err(write_failure)?;
                }
                for p in &b.upper_provenance {
                    writeln!(out, "  upper <- {p} [{}]", p.rule.citation())
                        .map_err(write_failure)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Search {
            n,
            k,
            min_class_size,
            time_limit,
            target,
            exact,
            symmetry,
            output,
        } => {
            let time_budget = match time_limit {
                Some(s) if s.is_finite() && s >= 0.0 => Some(Duration::from_secs_f64(s)),
                Some(s) => return Err(usage(format!("invalid time limit {s}"))),
                None => None,
            };
            let config = SearchConfig {
                min_class_size,
                symmetry,
                options: SearchOptions {
                    time_budget,
                    target: if exact { None } else { target },
                },
            };
            let outcome = search(n, k, &config).map_err(|e| match e {
                Error::NoCandidates { .. } | Error::InvalidParameters(_) => usage(e),
                other => failure(other),
            })?;
            let mut out = io::stdout().lock();
            writeln!(
                out,
                "search ({n},{k}) min-class-size {}: {} candidates, {} compatible pairs",
                min_class_size.max(1),
                outcome.candidates,
                outcome.edges
            )
            .map_err(write_failure)?;
            let status = if outcome.proven_optimal {
                "proven"
            } else {
                "not proven optimal"
            };
            writeln!(out, "size {} {status}", outcome.size).map_err(write_failure)?;
            drop(out);
            eprintln!(
                "nodes {}, elapsed {:.3}s",
                outcome.nodes_explored,
                outcome.elapsed.as_secs_f64()
            );
            if let Some(path) = output {
                emit(&outcome.best, Format::Json, Some(&path))?;
            }
            let met_target = target.is_some_and(|t| outcome.size >= t);
            Ok(if outcome.proven_optimal || met_target {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_BUDGET)
            })
        }
        Command::Fixtures { action } => match action {
            FixtureAction::List => {
                let mut out = io::stdout().lock();
                for f in fixtures::FIXTURES {
                    writeln!(
                        out,
                        "{}\tn={}\tk={}\t{} partitions\t{}",
                        f.name, f.n, f.k, f.size, f.caption
                    )
                    .map_err(write_failure)?;
                }
                Ok(ExitCode::SUCCESS)
            }
            FixtureAction::Emit {
                name,
                output,
                format,
            } => {
                let system = fixtures::system(&name).map_err(usage)?;
                emit(&system, format, output.as_deref())?;
                Ok(ExitCode::SUCCESS)
            }
        },
    }
}

fn describe_bounds(b: &BoundResult) -> String {
    let rules = |ps: &[Provenance]| {
        let mut names: Vec<String> = ps.iter().map(|p| p.rule.name()).collect();
        names.dedup();
        names.join(", ")
    };
    format!(
        "SP({},{}): lower {} ({}), upper {} ({}){}",
        b.n,
        b.k,
        b.lower,
        rules(&b.lower_provenance),
        b.upper,
        rules(&b.upper_provenance),
        if b.exact { ", exact" } else { "" }
    )
}

fn emit(system: &PartitionSystem, format: Format, path: Option<&Path>) -> Result<(), (u8, String)> {
    let text = match format {
        Format::Json => serialize_json(system),
        Format::Text => serialize_text(system),
    };
    match path {
        Some(p) => fs::write(p, text).map_err(|e| failure(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(write_failure),
    }
}
