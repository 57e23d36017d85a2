mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "oalearn", version, about = "Learn sparse Or-of-Ands rule sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mine frequent conjunctions and print them as `count<TAB>literals`
    Mine(MineArgs),
    /// Train a model and print it with a training report
    Train(TrainArgs),
    /// Print one prediction per row
    Predict(PredictArgs),
    /// Print accuracy and confusion counts on labeled data
    Evaluate(PredictArgs),
    /// Nested cross-validation over a C1 x C2 grid
    Cv(CvArgs),
    /// Convert a decision tree or forest into an equivalent model
    Convert(ConvertArgs),
    /// VC dimension of the models built from a pattern set on {0,1}^J
    Vcdim(VcdimArgs),
}

#[derive(Args, Debug)]
struct DataArgs {
    /// Training CSV with a header row
    input: PathBuf,
    /// Schema file; inferred from the CSV when absent
    #[arg(long)]
    schema: Option<PathBuf>,
    /// Label column when inferring the schema (default: last column)
    #[arg(long)]
    label: Option<String>,
    /// Positive label when inferring the schema
    #[arg(long)]
    positive: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Ooax,
    Ooa,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScopeArg {
    Positives,
    All,
}

#[derive(Args, Debug)]
struct MiningArgs {
    #[arg(long, default_value_t = 0.05)]
    min_support: f64,
    #[arg(long, default_value_t = 3)]
    max_len: usize,
    /// Cut points per numeric attribute
    #[arg(long, default_value_t = 4)]
    bins: usize,
    #[arg(long, value_enum, default_value_t = ScopeArg::Positives)]
    scope: ScopeArg,
}

#[derive(Args, Debug)]
struct SolverArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Ooax)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Candidates kept after screening
    #[arg(long, default_value_t = 2000)]
    topk: usize,
    #[arg(long, default_value_t = 5)]
    max_patterns: usize,
    /// Solver time limit in seconds
    #[arg(long)]
    time_limit: Option<f64>,
}

#[derive(Args, Debug)]
struct MineArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    mining: MiningArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    mining: MiningArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value_t = 0.001)]
    c1: f64,
    #[arg(long, default_value_t = 0.001)]
    c2: f64,
    /// Write the model (with its schema) as JSON
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PredictArgs {
    /// Model file written by `train --out` or `convert --out`
    model: PathBuf,
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CvArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    mining: MiningArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Comma-separated C1 grid
    #[arg(long, value_delimiter = ',', default_values_t = oalearn::pipeline::DEFAULT_GRID)]
    c1: Vec<f64>,
    /// Comma-separated C2 grid
    #[arg(long, value_delimiter = ',', default_values_t = oalearn::pipeline::DEFAULT_GRID)]
    c2: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report as JSON
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    /// Tree file; several trees separated by `---` form a forest
    input: PathBuf,
    /// Schema the tree tests refer to
    #[arg(long, required_unless_present = "dims", conflicts_with = "dims")]
    schema: Option<PathBuf>,
    /// Use the binary domain x1..xJ instead of a schema file
    #[arg(long)]
    dims: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VcdimArgs {
    /// Patterns in the text model format over attributes x1..xJ
    patterns: PathBuf,
    /// Number of binary attributes J
    #[arg(long)]
    dims: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", commands::describe(&e));
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
