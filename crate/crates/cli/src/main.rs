use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "globus", version, about = "Building stock turnover scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a config and its input tables.
    Validate { config: PathBuf },
    /// Run every configured scenario.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Average annual drop in new construction per renovation-rate increase.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated rate increases, fraction/yr.
        #[arg(long, value_delimiter = ',', required = true)]
        deltas: Vec<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut diag = std::io::stderr().lock();
    let code = match cli.command {
        Command::Validate { config } => globus_cli::cmd_validate(&config, &mut diag),
        Command::Run { config, out } => globus_cli::cmd_run(&config, &out, &mut diag),
        Command::Sweep { config, out, deltas } => {
            globus_cli::cmd_sweep(&config, &out, &deltas, &mut diag)
        }
    };
    ExitCode::from(code as u8)
}
