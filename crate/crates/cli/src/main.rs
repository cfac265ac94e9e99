use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use isoflow::catalog::Catalog;
use isoflow::render::{render_catalog, render_report};
use isoflow::{exit_for, run_config, CliError, Exit};

#[derive(Parser)]
#[command(name = "isoflow", version, about = "Runs verification scenarios for pairs of isometric semigroups")]
struct Cli {
    /// Absolute residual tolerance, overriding every scenario.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every scenario of a configuration file.
    Run { config: PathBuf },
    /// Print the construction catalog with parameter schemas.
    List,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(cli: &Cli) -> Result<Exit, CliError> {
    let catalog = Catalog::standard();
    match &cli.command {
        Command::List => {
            emit(&render_catalog(&catalog), cli.out.as_ref())?;
            Ok(Exit::Pass)
        }
        Command::Run { config } => {
            let text = std::fs::read_to_string(config).map_err(|source| CliError::Io {
                path: config.display().to_string(),
                source,
            })?;
            let outcomes = run_config(&catalog, &text, cli.tol)?;
            emit(&render_report(&outcomes), cli.out.as_ref())?;
            Ok(exit_for(&outcomes))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Exit::Usage as u8 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(exit) => ExitCode::from(exit as u8),
        Err(e) => {
            eprintln!("isoflow: {e}");
            ExitCode::from(Exit::Usage as u8)
        }
    }
}
