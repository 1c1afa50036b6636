use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rule110_cli::commands::{self, Experiment};
use rule110_cli::config::LoadedConfig;
use rule110_cli::render::Format;
use rule110_cli::{CliError, EXIT_OK};
use rule110_core::search::{DEFAULT_MAX_PERIOD, DEFAULT_MAX_WIDTH};
use rule110_core::Catalog;

#[derive(Parser)]
#[command(name = "rule110", version, about = "Rule 110 ether, gliders and single-flip error experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render pure ether.
    Ether {
        #[arg(long, default_value_t = 56)]
        width: usize,
        #[arg(long, default_value_t = 56)]
        steps: usize,
        #[arg(long, default_value_t = Format::Pbm)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inspect the glider catalog.
    Gliders {
        /// Catalog file to use instead of the built-in one.
        #[arg(long, global = true)]
        catalog: Option<PathBuf>,
        #[command(subcommand)]
        action: GliderAction,
    },
    /// Render the configured initial row, optionally with one flip.
    Render {
        #[arg(long)]
        config: PathBuf,
        /// 1-based flip site; omit for the unperturbed run.
        #[arg(long)]
        site: Option<u64>,
        /// Mark cells that differ from the unperturbed run.
        #[arg(long)]
        highlight: bool,
        #[arg(long, default_value_t = Format::Pbm)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every error event and write the outcome table.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Directory for one highlighted diagram per flip.
        #[arg(long)]
        diagrams: Option<PathBuf>,
        #[arg(long, default_value_t = Format::Pbm)]
        format: Format,
    },
    /// Apply the configured weight rule to the sweep.
    Reweight {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Draw error events from the reweighted law.
    Sample {
        #[arg(long)]
        config: PathBuf,
        #[arg(short, long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

#[derive(Subcommand)]
enum GliderAction {
    /// One line per glider.
    List,
    /// Render one glider travelling through ether.
    Show {
        id: String,
        #[arg(long, default_value_t = 120)]
        steps: usize,
        #[arg(long, default_value_t = Format::Pbm)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the catalog in its text format.
    Export {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for gliders from scratch and write the result.
    Derive {
        #[arg(long, default_value_t = DEFAULT_MAX_WIDTH)]
        max_width: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_PERIOD)]
        max_period: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_catalog(path: Option<&Path>) -> Result<Catalog, CliError> {
    match path {
        None => Ok(Catalog::builtin().clone()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            Ok(Catalog::parse(&text)?)
        }
    }
}

fn experiment(config: &Path) -> Result<(LoadedConfig, Experiment), CliError> {
    let loaded = LoadedConfig::load(config)?;
    let exp = Experiment::prepare(&loaded)?;
    Ok((loaded, exp))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Ether {
            width,
            steps,
            format,
            out,
        } => emit(out.as_deref(), &commands::cmd_ether(width, steps, format)?),
        Command::Gliders { catalog, action } => {
            let catalog = load_catalog(catalog.as_deref())?;
            match action {
                GliderAction::List => emit(None, &commands::cmd_gliders_list(&catalog)),
                GliderAction::Show {
                    id,
                    steps,
                    format,
                    out,
                } => emit(
                    out.as_deref(),
                    &commands::cmd_gliders_show(&catalog, &id, steps, format)?,
                ),
                GliderAction::Export { out } => {
                    emit(out.as_deref(), &commands::cmd_gliders_export(&catalog))
                }
                GliderAction::Derive {
                    max_width,
                    max_period,
                    out,
                } => emit(
                    out.as_deref(),
                    &commands::cmd_gliders_derive(max_width, max_period)?,
                ),
            }
        }
        Command::Render {
            config,
            site,
            highlight,
            format,
            out,
        } => {
            let (_, exp) = experiment(&config)?;
            emit(
                out.as_deref(),
                &commands::cmd_render(&exp, site, highlight, format)?,
            )
        }
        Command::Sweep {
            config,
            out,
            jobs,
            diagrams,
            format,
        } => {
            let (loaded, exp) = experiment(&config)?;
            let (table, csv) = commands::cmd_sweep(&exp, jobs)?;
            let out = out.or_else(|| loaded.config.output.outcomes.as_deref().map(|p| loaded.resolve(p)));
            emit(out.as_deref(), &csv)?;
            let dir = diagrams.or_else(|| loaded.config.output.diagrams.as_deref().map(|p| loaded.resolve(p)));
            if let Some(dir) = dir {
                std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
                for (name, text) in commands::sweep_diagrams(&exp, &table, format)? {
                    let path = dir.join(name);
                    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
                }
            }
            Ok(())
        }
        Command::Reweight { config, out, jobs } => {
            let (loaded, exp) = experiment(&config)?;
            let (csv, divergence) = commands::cmd_reweight(&exp, jobs)?;
            let out = out.or_else(|| loaded.config.output.modified.as_deref().map(|p| loaded.resolve(p)));
            emit(out.as_deref(), &csv)?;
            eprintln!("relative entropy vs base law: {divergence:.12}");
            Ok(())
        }
        Command::Sample {
            config,
            n,
            seed,
            out,
            jobs,
        } => {
            let (loaded, exp) = experiment(&config)?;
            let text = commands::cmd_sample(
                &exp,
                n.unwrap_or(exp.samples),
                seed.unwrap_or(exp.seed),
                jobs,
            )?;
            let out = out.or_else(|| loaded.config.output.samples.as_deref().map(|p| loaded.resolve(p)));
            emit(out.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::from(EXIT_OK as u8),
        Err(e) => {
            eprintln!("rule110: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
