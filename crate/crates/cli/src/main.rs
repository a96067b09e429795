use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "chaingeom",
    version,
    about = "Exhaustive checks of chain geometries over small rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tasks of a scenario config and write a JSON report.
    Run {
        config: PathBuf,
        /// Output directory for the report and DOT files.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Worker threads for task-internal parallelism.
        #[arg(long)]
        parallel: Option<usize>,
        /// Also export the distant graph as DOT.
        #[arg(long)]
        dot: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run {
        config,
        out,
        parallel,
        dot,
    } = cli.command;
    match chaingeom_cli::run_to_dir(&config, &out, dot, parallel) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("chaingeom: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
