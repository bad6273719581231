//! `quadfree`: construct, verify, bound and search C4-free graphs.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{Failure, RunReport};

#[derive(Parser, Debug)]
#[command(
    name = "quadfree",
    version,
    about = "C4-free graphs from orthogonal polarities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ReportArgs {
    /// Print the run report as JSON on stdout instead of a summary.
    #[arg(long)]
    pub json: bool,
    /// Also write the run report to this file.
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe GF(q) and optionally dump its tables as CSV.
    Field {
        #[arg(long)]
        q: u64,
        /// Print the addition and multiplication tables.
        #[arg(long)]
        dump_tables: bool,
        #[command(flatten)]
        out: ReportArgs,
    },
    /// Describe PG(2,q) and its orthogonal polarity.
    Plane {
        #[arg(long)]
        q: u64,
        /// List the absolute points.
        #[arg(long)]
        list_absolute: bool,
        #[command(flatten)]
        out: ReportArgs,
    },
    /// Build the polarity graph ER_q, optionally minus a minimum-degree vertex.
    Construct {
        #[arg(long)]
        q: u64,
        /// Delete the lowest-indexed vertex of minimum degree.
        #[arg(long)]
        delete_min: bool,
        /// Where to write the graph6 encoding.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Check that a graph6 file holds a C4-free graph.
    Verify {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Reference order for the degree census and the 2-path budget.
        #[arg(long)]
        q: Option<u64>,
        #[command(flatten)]
        out: ReportArgs,
    },
    /// Evaluate the exact extremal inequalities, or the Reiman bound.
    Bounds {
        #[arg(long, required_unless_present = "reiman")]
        q: Option<u64>,
        #[arg(long, value_enum, default_value = "all")]
        lemma: LemmaChoice,
        /// Degree for the maximum-degree check (default: q+1, q+2, q+3).
        #[arg(long)]
        d: Option<u64>,
        /// Number of degree-(q+2) vertices for the root bounds (default: 1..=q+3).
        #[arg(long)]
        xq2: Option<u64>,
        /// Use the denominator exactly as printed, 8q^2 + 8 - 16.
        #[arg(long)]
        printed_denominator: bool,
        /// Print the Reiman bound for --n instead.
        #[arg(long, requires = "n", conflicts_with = "q")]
        reiman: bool,
        #[arg(long)]
        n: Option<u64>,
        #[command(flatten)]
        out: ReportArgs,
    },
    /// Compute ex(n, C4) exactly by exhaustive search.
    Search {
        #[arg(long)]
        n: usize,
        /// Also list every extremal graph up to isomorphism.
        #[arg(long)]
        all_extremal: bool,
        /// Time budget in seconds.
        #[arg(long, env = "QUADFREE_BUDGET_SECS")]
        budget: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// A known C4-free graph on n vertices to start from.
        #[arg(long, value_name = "FILE")]
        seed_witness: Option<PathBuf>,
        /// Directory for result.json and the graph6 files.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaChoice {
    All,
    #[value(name = "1")]
    MaxDegree,
    #[value(name = "4")]
    LowDegreeAdjacency,
    #[value(name = "5")]
    TwoPathBudget,
    #[value(name = "6")]
    MinDegree,
    #[value(name = "7")]
    SharedNeighbor,
    #[value(name = "8")]
    SharedNeighborDegree,
    Final,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (name, out, result) = match cli.command {
        Command::Field {
            q,
            dump_tables,
            out,
        } => ("field", out, commands::field(q, dump_tables)),
        Command::Plane {
            q,
            list_absolute,
            out,
        } => ("plane", out, commands::plane(q, list_absolute)),
        Command::Construct {
            q,
            delete_min,
            out,
            report,
        } => (
            "construct",
            report,
            commands::construct(q, delete_min, &out),
        ),
        Command::Verify { input, q, out } => ("verify", out, commands::verify(&input, q)),
        Command::Bounds {
            q,
            lemma,
            d,
            xq2,
            printed_denominator,
            reiman,
            n,
            out,
        } => {
            let result = if reiman {
                commands::reiman(n.expect("clap requires n"))
            } else {
                let q = q.expect("clap requires q");
                commands::bounds(q, lemma, d, xq2, printed_denominator)
            };
            ("bounds", out, result)
        }
        Command::Search {
            n,
            all_extremal,
            budget,
            workers,
            seed_witness,
            out,
            report,
        } => {
            let opts = commands::SearchOptions {
                n,
                all_extremal,
                budget,
                workers,
                seed_witness,
                out,
            };
            ("search", report, commands::search(&opts))
        }
    };
    match result {
        Ok(outcome) => {
            let report = RunReport::new(name, &outcome, start.elapsed());
            if let Err(f) = report.emit(&out, &outcome) {
                return f.exit();
            }
            if outcome.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => f.exit(),
    }
}

impl Failure {
    fn exit(self) -> ExitCode {
        eprintln!("error: {}", self.0);
        ExitCode::from(2)
    }
}
