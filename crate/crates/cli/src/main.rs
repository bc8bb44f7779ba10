use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use covar_medium_cli::{parse_config, run, CliError, Command, ConfigError, RunOptions, EXIT_OK, EXIT_VERIFY_FAILED};

#[derive(Parser, Debug)]
#[command(name = "covar-medium", version, about = "Susceptibility, dispersion and noise checks for moving media")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Run configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides [output] dir)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Commutator tolerance for `verify` (overrides [output] tolerance)
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Worker threads
    #[arg(long, global = true, env = "COVAR_MEDIUM_THREADS")]
    threads: Option<usize>,
    /// Seed of the randomized `verify` suites
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Susceptibility components over the frequency sweep
    Chi,
    /// Refractive-index roots per direction and frequency
    Dispersion,
    /// Green-function kernel tables
    Green,
    /// Commutator, completeness, causality, boost and gauge checks
    Verify,
    /// Refractive index against medium speed
    BoostScan,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Chi => Command::Chi,
            Cmd::Dispersion => Command::Dispersion,
            Cmd::Green => Command::Green,
            Cmd::Verify => Command::Verify,
            Cmd::BoostScan => Command::BoostScan,
        }
    }
}

fn execute(cli: &Cli) -> Result<u8, CliError> {
    let path = cli.config.as_ref().ok_or_else(|| ConfigError { line: None, message: "--config is required".into() })?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError { line: None, message: format!("{}: {e}", path.display()) })?;
    let mut cfg = parse_config(&text)?;
    if let Some(out) = &cli.out {
        cfg.output.dir = out.to_string_lossy().into_owned();
    }
    if let Some(tol) = cli.tolerance {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(ConfigError { line: None, message: format!("--tolerance must be > 0, got {tol}") }.into());
        }
        cfg.output.tolerance = tol;
    }
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    }
    let outcome = run(cli.command.into(), &cfg, &RunOptions { seed: cli.seed })?;
    for (file, rows) in &outcome.files {
        println!("wrote {} ({rows} rows)", file.display());
    }
    if outcome.failures.is_empty() {
        Ok(EXIT_OK)
    } else {
        eprintln!("verification failed: {}", outcome.failures.join(", "));
        Ok(EXIT_VERIFY_FAILED)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
