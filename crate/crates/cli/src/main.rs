use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fgbeam::assembly::ElementKind;
use fgbeam::recovery::write_profiles_csv;
use fgbeam::{FgError, Result};
use fgbeam_cli::runs::{self, with_pool};
use fgbeam_cli::tables::{run_table, TABLE_IDS};
use fgbeam_cli::AnalysisConfig;

#[derive(Parser)]
#[command(name = "fgbeam", version, about = "Static analysis of functionally graded and sandwich beams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one configuration and print or write its summary.
    Analyze {
        config: PathBuf,
        /// Directory for summary.json, profiles.csv and the effective config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-section constants as JSON.
    SectionReport {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate a reference table (1-10, or "all").
    Tables {
        id: String,
        /// Directory receiving table_<id>.csv; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monitor-point deflection over a mesh ladder.
    Convergence {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        meshes: Vec<usize>,
        /// Element kinds to run; the configured one when omitted.
        #[arg(long, value_delimiter = ',')]
        elements: Vec<ElementKind>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stress profiles through the thickness at the given sections.
    Profile {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            Box::new(std::fs::File::create(p)?)
        }
        None => Box::new(std::io::stdout().lock()),
    })
}

fn write_json<T: serde::Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut w = output(path)?;
    writeln!(w, "{}", serde_json::to_string_pretty(value).expect("report serializes"))?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze { config, out } => {
            let config = AnalysisConfig::load(&config)?;
            let result = with_pool(|| runs::run_analyze(&config))??;
            match out {
                Some(dir) => runs::write_analysis(&config, &result, &dir),
                None => write_json(&result.summary, None),
            }
        }
        Command::SectionReport { config, out } => {
            let config = AnalysisConfig::load(&config)?;
            write_json(&runs::section_report(&config)?, out.as_deref())
        }
        Command::Tables { id, out } => {
            let ids: Vec<u8> = if id == "all" {
                TABLE_IDS.to_vec()
            } else {
                vec![id.parse().map_err(|_| FgError::Config(format!("table id must be 1-10 or \"all\", got {id:?}")))?]
            };
            for id in ids {
                let table = with_pool(|| run_table(id))??;
                let path = out.as_ref().map(|d| d.join(format!("table_{id}.csv")));
                table.write_csv(output(path.as_deref())?)?;
            }
            Ok(())
        }
        Command::Convergence { config, meshes, elements, out } => {
            let config = AnalysisConfig::load(&config)?;
            let kinds = if elements.is_empty() { vec![config.analysis.element] } else { elements };
            let rows = with_pool(|| runs::run_convergence(&config, &meshes, &kinds))??;
            runs::write_convergence_csv(&rows, output(out.as_deref())?)
        }
        Command::Profile { config, x, out } => {
            let config = AnalysisConfig::load(&config)?;
            let result = with_pool(|| runs::run_with_profiles(&config, &x))??;
            write_profiles_csv(&result.profiles, output(out.as_deref())?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
