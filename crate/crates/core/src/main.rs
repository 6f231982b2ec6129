use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rydberg_lattice::io::{config::ExperimentConfig, presets, run, RunError};

#[derive(Parser)]
#[command(
    name = "rydberg-lattice",
    version,
    about = "Rydberg lattice excitation spectra and C6 extraction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a config file or a shipped preset.
    Run {
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        /// Output directory; overrides `[output] dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for grid points.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Shipped presets.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
    /// Print a preset's TOML.
    Show {
        name: String,
    },
}

fn execute(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Run {
            config,
            preset,
            out,
            threads,
        } => {
            let config = match (config, preset) {
                (Some(path), _) => ExperimentConfig::from_path(&path)?,
                (None, Some(name)) => presets::load(&name)?,
                (None, None) => unreachable!("clap enforces one of --config/--preset"),
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.unwrap_or(0))
                .build()
                .map_err(|e| RunError::Config(format!("--threads: {e}")))?;
            let summary = pool.install(|| run(&config, out.as_deref()))?;
            for file in &summary.files {
                println!("wrote {}", file.display());
            }
            if let Some(report) = &summary.report {
                println!("c6_absolute = {}", report.c6_absolute);
                if let Some(c6) = report.c6_relative {
                    println!("c6_relative = {c6}");
                }
            }
            Ok(())
        }
        Command::Presets {
            action: PresetAction::List,
        } => {
            for p in presets::PRESETS {
                println!("{:<22} {}", p.name, p.description);
            }
            Ok(())
        }
        Command::Presets {
            action: PresetAction::Show { name },
        } => {
            let preset = presets::find(&name).ok_or_else(|| RunError::Config(format!("unknown preset `{name}`")))?;
            print!("{}", preset.toml);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
