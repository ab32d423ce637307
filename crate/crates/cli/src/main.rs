//! Batch front end: `multiwit solve | member | decompose | trace | sample | info`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod points;

#[derive(Parser, Debug)]
#[command(
    name = "multiwit",
    version,
    about = "Witness sets of multiprojective varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Seed for every random draw of the run.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Corrector tolerance along paths.
    #[arg(long)]
    tol_track: Option<f64>,
    /// Residual tolerance at path endpoints.
    #[arg(long)]
    tol_final: Option<f64>,
    /// Worker threads for path tracking (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum OrderArg {
    Input,
    Degree,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum CarryArg {
    Auto,
    All,
    Isolated,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ReportArg {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a witness set collection of a `.msys` system.
    Solve {
        system: PathBuf,
        /// Output archive (default: the input path with extension `.mwit`).
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
        /// Replace the input by generic combinations of its polynomials.
        #[arg(long)]
        randomize: bool,
        /// Solve a perturbed system and track back, clustering the endpoints.
        #[arg(long)]
        perturb: bool,
        #[arg(long, value_enum, default_value_t = OrderArg::Input)]
        order: OrderArg,
        /// Only compute slice types dominating this one, e.g. `--e 1,0`. Repeatable.
        #[arg(long = "e", value_name = "VECTOR")]
        restrict: Vec<String>,
        #[arg(long, value_enum, default_value_t = CarryArg::Auto)]
        carry: CarryArg,
        #[arg(long, value_enum, default_value_t = ReportArg::Table)]
        report: ReportArg,
    },
    /// Test whether a point lies on the variety of an archive.
    Member {
        archive: PathBuf,
        /// Homogeneous coordinates, comma separated; entries like `2`, `-1.5i` or `0.5-2i`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "witness")]
        point: Option<String>,
        /// A witness point of the archive, as `TYPE:INDEX`, e.g. `1,0:0`.
        #[arg(long)]
        witness: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Split every dimension of an archive into irreducible components.
    Decompose {
        archive: PathBuf,
        /// Directory for the per-component archives.
        #[arg(short, long)]
        output_dir: Option<PathBuf>,
        /// Monodromy loops per slice type.
        #[arg(long, default_value_t = 10)]
        loops: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run the trace test on a subset of the points over one base slice type.
    Trace {
        archive: PathBuf,
        /// Base slice type; its sum must be one less than the dimension (default: the first).
        #[arg(long)]
        e0: Option<String>,
        /// Indices into the listed points, comma separated (default: all).
        #[arg(long)]
        subset: Option<String>,
        /// Write the trace samples as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Move one witness set to random slices of its type and print the new points as CSV.
    Sample {
        archive: PathBuf,
        #[arg(long = "e", value_name = "VECTOR")]
        e: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Write to this file instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Summarize an archive.
    Info { archive: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        // a closed stdout (e.g. piping into `head`) is not an error of the run
        Err(e)
            if e.downcast_ref::<std::io::Error>()
                .is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
