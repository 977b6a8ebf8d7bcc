use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use warpcone_cli::{execute, CliError, Command, LoadedConfig};

#[derive(Parser)]
#[command(name = "warpcone", version, about = "Warped-cone experiments: nets, warped metrics, coarse paths, spectra")]
struct Cli {
    /// Experiment config (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Artifact directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Omit timestamps and timings so reruns are byte-identical.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Worker threads; 0 picks automatically.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Build and serialize an epsilon-net.
    Net,
    /// Build the warped graph and query distances.
    Warped,
    /// Spectral gap across levels.
    Profile,
    /// Validate paths, compute Q, canonical forms and winding.
    Coarse,
    /// Stable norms of words and automorphism constants.
    Stablenorm,
    /// Run the seeded invariant suites.
    Check,
    /// Convert a graph or profile artifact.
    Export,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Command {
        match c {
            Cmd::Net => Command::Net,
            Cmd::Warped => Command::Warped,
            Cmd::Profile => Command::Profile,
            Cmd::Coarse => Command::Coarse,
            Cmd::Stablenorm => Command::Stablenorm,
            Cmd::Check => Command::Check,
            Cmd::Export => Command::Export,
        }
    }
}

fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let path = cli.config.as_ref().ok_or_else(|| CliError::Config("--config is required".into()))?;
    let cfg = LoadedConfig::load(path)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    pool.install(|| execute(cli.command.into(), &cfg, &cli.out, cli.deterministic))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let record = serde_json::to_string(&e.record()).expect("record serializes");
            eprintln!("{record}");
            ExitCode::FAILURE
        }
    }
}
