mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "rigibound", version, about = "Embedding bounds for minimally rigid graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Maxwell/Laman check and clique listing.
    Check(CheckArgs),
    /// Orientation counts and every bound for one graph.
    Bound(BoundArgs),
    /// Power bases of the closed-form bounds.
    Table1(TableArgs),
    /// Generate a minimally rigid graph by vertex additions.
    Gen(GenArgs),
    /// Run `bound` with the best clique on every graph in a directory.
    Compare(CompareArgs),
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Edge-list file, `-` for stdin, or an inline graph with `;` between lines.
    pub input: String,
    #[arg(long = "dim", short = 'd', default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    pub dim: u32,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    pub input: String,
    #[arg(long = "dim", short = 'd', default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    pub dim: u32,
    /// `all`, `best`, or a comma-separated vertex list.
    #[arg(long, default_value = "best")]
    pub clique: String,
    /// Seconds allowed for each counting method.
    #[arg(long = "time-limit", value_parser = parse_seconds)]
    pub time_limit: Option<f64>,
    /// Run even when the rigidity check fails.
    #[arg(long)]
    pub force: bool,
    /// Include elimination steps in the output.
    #[arg(long)]
    pub trace: bool,
    #[arg(long)]
    pub no_backtracking: bool,
    #[arg(long)]
    pub no_permanent: bool,
    #[arg(long)]
    pub no_elimination: bool,
    #[arg(long)]
    pub no_formulas: bool,
    /// Accepted for reproducibility of batch runs; counting is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long = "max-d", default_value_t = 9, value_parser = clap::value_parser!(u32).range(2..=256))]
    pub max_d: u32,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(long = "dim", short = 'd', default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    pub dim: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    pub dir: PathBuf,
    #[arg(long = "dim", short = 'd', default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    pub dim: u32,
    #[arg(long = "time-limit", value_parser = parse_seconds)]
    pub time_limit: Option<f64>,
}

fn parse_seconds(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("'{s}' is not a positive number of seconds")),
    }
}

/// Exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 2;
    pub const RIGIDITY: u8 = 3;
    pub const TIMEOUT: u8 = 4;
}

fn configure_threads() {
    if let Some(n) = std::env::var("RIGIBOUND_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let result = match &cli.command {
        Command::Check(a) => commands::check(a, cli.format),
        Command::Bound(a) => commands::bound(a, cli.format),
        Command::Table1(a) => commands::table1(a, cli.format),
        Command::Gen(a) => commands::gen(a),
        Command::Compare(a) => commands::compare(a),
    };
    match result {
        Ok(out) => {
            if let Err(e) = commands::emit(&out.text, cli.out.as_deref()) {
                eprintln!("error: {e:#}");
                return ExitCode::from(exit::USAGE);
            }
            for line in &out.info {
                eprintln!("{line}");
            }
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::USAGE)
        }
    }
}
