use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use polyevidence_cli::config::{parse_degrees, parse_scale, parse_sizes};
use polyevidence_cli::{run, BasisKind, Mode, RunConfig, Schema};

/// Bayesian selection of polynomial basis sets by exact model evidence.
#[derive(Debug, Parser)]
#[command(name = "polyevidence", version)]
struct Args {
    #[arg(long, value_enum, default_value = "scan")]
    mode: Mode,

    /// CSV file with x,y (1d) or x1,x2,y (2d) rows; simulated data if omitted.
    #[arg(long)]
    input: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "1d")]
    schema: Schema,

    #[arg(long, value_enum, default_value = "monomial")]
    basis: BasisKind,

    /// Degree range A..B for scans; for subset search the full set has total degree B.
    /// Defaults: 0..9 (1d scan), 0..6 (2d scan), 5 (subset search).
    #[arg(long)]
    degrees: Option<String>,

    /// Subset sizes for subset search, e.g. 14,15,16 or 14..16.
    #[arg(long, default_value = "14,15,16")]
    subset_sizes: String,

    /// Remove the mean of y before fitting.
    #[arg(long, value_parser = ["on", "off"], default_value = "on")]
    center: String,

    /// auto, none, or explicit offset:scale per axis (e.g. 300:50,0:1).
    #[arg(long, default_value = "none")]
    scale: String,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Number of simulated points.
    #[arg(long, default_value_t = 50)]
    n: usize,

    /// Standard deviation of simulated noise.
    #[arg(long, default_value_t = 0.4)]
    sigma: f64,

    /// Simulation coefficients, comma-separated, in basis order.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coefficients: Option<Vec<f64>>,

    /// Rows kept in a subset-search table.
    #[arg(long, default_value_t = 400)]
    top_k: usize,

    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    parallelism: usize,

    #[arg(long, default_value = "polyevidence-out")]
    out_dir: PathBuf,

    /// Also write every evaluated subset to all_subsets.tsv.
    #[arg(long)]
    dump_all: bool,
}

fn config_from(args: Args) -> polyevidence_cli::Result<RunConfig> {
    let default_degrees = match (args.mode, args.schema) {
        (Mode::SubsetSearch, _) => "5",
        (_, Schema::TwoD) => "0..6",
        _ => "0..9",
    };
    Ok(RunConfig {
        mode: args.mode,
        input: args.input,
        schema: args.schema,
        basis: args.basis,
        degrees: parse_degrees(args.degrees.as_deref().unwrap_or(default_degrees))?,
        subset_sizes: parse_sizes(&args.subset_sizes)?,
        center: args.center == "on",
        scale: parse_scale(&args.scale)?,
        seed: args.seed,
        n: args.n,
        sigma: args.sigma,
        coefficients: args.coefficients,
        top_k: args.top_k,
        parallelism: args.parallelism,
        out_dir: args.out_dir,
        dump_all: args.dump_all,
    })
}

fn main() -> ExitCode {
    let outcome = config_from(Args::parse()).and_then(|config| run(&config));
    match outcome {
        Ok(summary) => {
            println!("{}", summary.headline);
            for f in &summary.files {
                println!("  wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
