use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use report::{CliError, Format};

#[derive(Parser, Debug)]
#[command(name = "lpa", version, about = "Exact computations in Leavitt path algebras of finite graphs")]
struct Cli {
    /// Output as human-readable text or one JSON object per line.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
    /// Run every internal loop sequentially.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemChoice {
    Interval,
    Rotation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Syntactic,
    Semantic,
    Both,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Check a graph file and summarize it.
    ValidateGraph {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Extreme-vertex level decomposition, components and P-simplicity.
    Levels {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Whether every closed simple path has an exit.
    ConditionL {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Construct and validate a branching system.
    BuildSystem {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "rotation")]
        system: SystemChoice,
        /// Print every region and affine branch.
        #[arg(long)]
        dump: bool,
    },
    /// Reduced form of an element.
    NormalForm {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        elem: String,
    },
    /// Decide whether an element is zero.
    ZeroTest {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        elem: String,
        #[arg(long, value_enum, default_value = "both")]
        oracle: Oracle,
        #[arg(long, value_enum, default_value = "rotation")]
        system: SystemChoice,
        /// Closed-path length used to certify the system.
        #[arg(long, default_value_t = 4)]
        maxlen: usize,
    },
    /// A path `p` with `x·p ≠ 0`.
    SeparatingPath {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        elem: String,
        #[arg(long, default_value_t = 4)]
        maxlen: usize,
    },
    /// Look for a rational point moved by every closed path.
    CheckHypothesis {
        #[arg(long)]
        graph: PathBuf,
        /// Defaults to every vertex.
        #[arg(long)]
        vertex: Option<String>,
        #[arg(long, default_value_t = 4)]
        maxlen: usize,
        #[arg(long, value_enum, default_value = "rotation")]
        system: SystemChoice,
    },
    /// Apply an element to the point mass at `z`.
    Apply {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        elem: String,
        /// A point of ℚ(√2), e.g. `1/3` or `-1 + 1 r2`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, value_enum, default_value = "rotation")]
        system: SystemChoice,
    },
    /// Subspaces, basis and intertwiner of a matrix representation.
    AnalyzeRep {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        rep: PathBuf,
    },
}

fn run(cli: Cli) -> Result<report::Report, CliError> {
    let exec = if cli.sequential { lpa_core::par::Exec::Sequential } else { lpa_core::par::Exec::default() };
    match cli.verb {
        Verb::ValidateGraph { graph } => commands::validate_graph(&graph),
        Verb::Levels { graph } => commands::levels(&graph),
        Verb::ConditionL { graph } => commands::condition_l(&graph),
        Verb::BuildSystem { graph, system, dump } => commands::build_system(&graph, system, dump, exec),
        Verb::NormalForm { graph, elem } => commands::reduce(&graph, &elem),
        Verb::ZeroTest { graph, elem, oracle, system, maxlen } => {
            commands::zero_test(&graph, &elem, oracle, system, maxlen, exec)
        }
        Verb::SeparatingPath { graph, elem, maxlen } => commands::separating_path(&graph, &elem, maxlen),
        Verb::CheckHypothesis { graph, vertex, maxlen, system } => {
            commands::check_hypothesis(&graph, vertex.as_deref(), maxlen, system, exec)
        }
        Verb::Apply { graph, elem, point, system } => commands::apply(&graph, &elem, &point, system),
        Verb::AnalyzeRep { graph, rep } => commands::analyze_rep(&graph, &rep),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(report) => {
            print!("{}", report.render(format));
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
