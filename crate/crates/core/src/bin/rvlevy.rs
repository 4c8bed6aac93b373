use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rvlevy::cli::{self, ExperimentConfig, RunOptions};
use rvlevy::Error;

#[derive(Parser)]
#[command(name = "rvlevy", version, about = "Tail experiments for stochastic integrals driven by heavy-tailed Lévy processes")]
struct Args {
    #[command(subcommand)]
    command: Command,

    /// RNG seed (overrides RVLEVY_SEED and the config).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run { config: PathBuf },
    /// Check a config file without running it.
    Validate { config: PathBuf },
    /// Write sample trajectories of X, Y and the integral.
    Paths { config: PathBuf },
}

fn load(path: &PathBuf) -> Result<ExperimentConfig, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    cli::validate(&text)
}

fn execute(args: Args) -> Result<(), Error> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Validation(vec![format!("cannot start {n} threads: {e}")]))?;
    }
    let env_seed = std::env::var(cli::SEED_ENV).ok();
    let (path, dump) = match &args.command {
        Command::Validate { config } => {
            load(config)?;
            println!("{}: ok", config.display());
            return Ok(());
        }
        Command::Run { config } => (config, false),
        Command::Paths { config } => (config, true),
    };
    let cfg = load(path)?;
    let opts = RunOptions {
        seed: Some(cli::resolve_seed(args.seed, env_seed.as_deref(), cfg.seed)?),
        out_dir: args.out_dir.clone(),
    };
    let manifest = if dump {
        cli::dump_paths(&cfg, &opts)?
    } else {
        cli::run(&cfg, &opts)?
    };
    println!("{}", serde_json::to_string_pretty(&manifest).expect("manifest serializes"));
    Ok(())
}

fn main() -> ExitCode {
    match execute(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
