use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use infocredit::cli::{self, CliError, RunOptions};

/// Information-based credit pricing: run one command described by a JSON
/// config and write results into an output directory.
#[derive(Parser)]
#[command(name = "infocredit", version, about)]
struct Args {
    /// Command to run; must match the config's command block
    /// (density, bond, hazard, simulate, option, implied-sigma, basket).
    command: String,

    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,

    /// Output directory for results.csv and run_meta.json.
    #[arg(long)]
    out: PathBuf,

    /// Also write plot.svg where the command has a primary series.
    #[arg(long)]
    plot: bool,

    /// Override the config's RNG seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Override the config's Monte Carlo path count.
    #[arg(long)]
    paths: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();

    if let Ok(threads) = std::env::var("INFOCREDIT_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }

    let opts = RunOptions {
        out_dir: args.out.clone(),
        plot: args.plot,
        seed: args.seed,
        n_paths: args.paths,
    };

    let result: Result<(), CliError> = cli::load_config(&args.config, &args.command)
        .and_then(|cfg| cli::run(&cfg, &opts));

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            cli::write_error_record(&args.out, &e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
