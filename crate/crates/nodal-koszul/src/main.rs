//! Thin batch-run CLI: loads a JSON config, applies flag overrides, runs it
//! and exits 0 on success, 2 on an inconclusive (sampling-budget) outcome,
//! 1 on a fatal invariant violation, 64 on usage/config errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use nodal_koszul::error::Error;
use nodal_koszul::runner::{run, Outcome, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "nodal-koszul", version, about = "Exact Koszul cohomology certification runs")]
struct Cli {
    /// JSON run configuration
    #[arg(long)]
    config: PathBuf,

    /// Override the config's seed
    #[arg(long)]
    seed: Option<u64>,

    /// Override the config's output path
    #[arg(long)]
    output: Option<PathBuf>,

    /// Override the cache directory (flag > CACHE_DIR env > config)
    #[arg(long)]
    cache: Option<PathBuf>,

    /// Worker threads for independent cells
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    return ExitCode::SUCCESS;
                }
                _ => 64,
            };
            eprint!("{e}");
            return ExitCode::from(code);
        }
    };

    match execute(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Inconclusive) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Parse(_) => ExitCode::from(64),
                Error::Degenerate(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn execute(cli: Cli) -> Result<Outcome, Error> {
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", cli.config.display())))?;
    let mut config = RunConfig::from_json(&text)?;

    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(output) = cli.output {
        config.output = Some(output);
    }
    if let Some(cache) = cli.cache {
        config.cache_dir = Some(cache);
    } else if config.cache_dir.is_none() {
        if let Ok(dir) = std::env::var("CACHE_DIR") {
            if !dir.is_empty() {
                config.cache_dir = Some(PathBuf::from(dir));
            }
        }
    }

    // timing is telemetry only; artifacts stay byte-deterministic
    let started = std::time::Instant::now();
    let result = run(&config, cli.jobs)?;
    eprintln!("[timing] {:?} completed in {} ms", config.command, started.elapsed().as_millis());
    if config.output.is_none() {
        print!("{}", result.artifact);
    } else if let Some(path) = &result.output_path {
        eprintln!("wrote {}", path.display());
        for extra in &result.extra_paths {
            eprintln!("wrote {}", extra.display());
        }
    }
    Ok(result.outcome)
}
