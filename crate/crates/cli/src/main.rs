//! `gc`: count graph compositions from construction programs, standard
//! families and edge-list files.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use graphcomp::dsl::{self, EvalOptions, Format, Verdict};
use graphcomp::etree::{self, Shape};
use graphcomp::formulas::{self, ClosedFamily, TreeFamily};
use graphcomp::oracle::{Oracle, DEFAULT_VERTEX_LIMIT};
use graphcomp::LabeledGraph;

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "gc", version, about = "Exact counting of graph compositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a construction program.
    Run {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        #[arg(long, env = "GC_MAX_ORACLE_VERTICES")]
        max_oracle_vertices: Option<usize>,
        /// Report every elapsed time as zero (byte-stable output).
        #[arg(long)]
        no_timing: bool,
    },
    /// Closed-form count of a standard family (`tree` takes the edge count).
    Count {
        #[arg(long, value_enum)]
        family: CountFamily,
        n: usize,
    },
    /// Counts of the first M copies of a chain or book of K_N or C_N.
    Sequence {
        #[arg(long, value_enum)]
        family: SequenceFamily,
        #[arg(long, value_enum)]
        shape: SequenceShape,
        n: usize,
        m: usize,
    },
    /// Brute-force count of a graph in edge-list format.
    Oracle {
        file: PathBuf,
        #[arg(long, env = "GC_MAX_ORACLE_VERTICES")]
        max_oracle_vertices: Option<usize>,
    },
    /// The N-th Bell number.
    Bell { n: usize },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum CountFamily {
    Complete,
    Cycle,
    Tree,
}

#[derive(Clone, Copy, ValueEnum)]
enum SequenceFamily {
    Complete,
    Cycle,
}

#[derive(Clone, Copy, ValueEnum)]
enum SequenceShape {
    Chain,
    Book,
}

fn oracle_limit(flag: Option<usize>) -> usize {
    let limit = flag.unwrap_or(DEFAULT_VERTEX_LIMIT);
    if limit > DEFAULT_VERTEX_LIMIT {
        eprintln!(
            "warning: oracle limit raised to {limit} vertices; enumeration grows like the Bell numbers"
        );
    }
    limit
}

fn usage_error(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_USAGE)
}

fn read(path: &PathBuf) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| usage_error(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    match cli.command {
        Command::Run {
            file,
            format,
            max_oracle_vertices,
            no_timing,
        } => {
            let text = read(&file)?;
            let plan =
                dsl::parse(&text).map_err(|e| usage_error(format!("{}: {e}", file.display())))?;
            let options = EvalOptions {
                max_oracle_vertices: oracle_limit(max_oracle_vertices),
                timing: !no_timing,
            };
            let reports = dsl::evaluate(&plan, &options).map_err(usage_error)?;
            let format = match format {
                OutputFormat::Text => Format::Text,
                OutputFormat::Json => Format::Json,
                OutputFormat::Csv => Format::Csv,
            };
            print!("{}", dsl::format_report(&reports, format));
            if reports.iter().any(|r| r.verdict == Some(Verdict::Mismatch)) {
                return Ok(ExitCode::from(EXIT_MISMATCH));
            }
        }
        Command::Count { family, n } => {
            let family = match family {
                CountFamily::Complete => ClosedFamily::Complete,
                CountFamily::Cycle => ClosedFamily::Cycle,
                CountFamily::Tree => ClosedFamily::Tree,
            };
            println!(
                "{}",
                formulas::closed_count(family, n).map_err(usage_error)?
            );
        }
        Command::Sequence {
            family,
            shape,
            n,
            m,
        } => {
            let family = match family {
                SequenceFamily::Complete => TreeFamily::Complete,
                SequenceFamily::Cycle => TreeFamily::Cycle,
            };
            let shape = match shape {
                SequenceShape::Chain => Shape::Chain,
                SequenceShape::Book => Shape::Book,
            };
            for c in etree::family_sequence(family, n, shape, m).map_err(usage_error)? {
                println!("{c}");
            }
        }
        Command::Oracle {
            file,
            max_oracle_vertices,
        } => {
            let text = read(&file)?;
            let g = LabeledGraph::from_edge_list(&text)
                .map_err(|e| usage_error(format!("{}: {e}", file.display())))?;
            let oracle = Oracle::with_limit(oracle_limit(max_oracle_vertices));
            println!("{}", oracle.count_compositions(&g).map_err(usage_error)?);
        }
        Command::Bell { n } => println!("{}", formulas::bell(n)),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    run(Cli::parse()).unwrap_or_else(|code| code)
}
