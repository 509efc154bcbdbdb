//! `landuse`: classify land use from geo-tagged short-text posts.
//!
//! Exit codes: 0 success, 2 input/resource error, 3 configuration or
//! training error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Overrides, RunConfig};

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: String) -> Self {
        CliError { code: 2, message }
    }

    pub fn config(message: String) -> Self {
        CliError { code: 3, message }
    }
}

impl From<landuse::ingest::IngestError> for CliError {
    fn from(e: landuse::ingest::IngestError) -> Self {
        use landuse::ingest::IngestError::*;
        match e {
            // Problems with the data itself.
            Io { .. } | MalformedLine { .. } | UnknownClass(_) => CliError::input(e.to_string()),
            // Problems with how the run is set up.
            LabelMismatch { .. }
            | MissingSubcategory(_)
            | NonClassifiedTrainingLabel(_)
            | InvalidFraction(_)
            | SubcategoryTooSmall { .. } => CliError::config(e.to_string()),
        }
    }
}

impl From<landuse::textprep::TextError> for CliError {
    fn from(e: landuse::textprep::TextError) -> Self {
        use landuse::textprep::TextError::*;
        match e {
            InvalidThreshold(_) => CliError::config(e.to_string()),
            _ => CliError::input(e.to_string()),
        }
    }
}

impl From<landuse::geo::GeoError> for CliError {
    fn from(e: landuse::geo::GeoError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<landuse::features::FeatureError> for CliError {
    fn from(e: landuse::features::FeatureError) -> Self {
        CliError::config(e.to_string())
    }
}

impl From<landuse::classifier::ClassifierError> for CliError {
    fn from(e: landuse::classifier::ClassifierError) -> Self {
        use landuse::classifier::ClassifierError::*;
        match e {
            Io { .. } | CorruptModel(_) | VersionMismatch { .. } => {
                CliError::input(e.to_string())
            }
            _ => CliError::config(e.to_string()),
        }
    }
}

impl From<landuse::eval::EvalError> for CliError {
    fn from(e: landuse::eval::EvalError) -> Self {
        CliError::config(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "landuse",
    version,
    about = "Identify land-use categories from geo-tagged short-text posts"
)]
struct Cli {
    /// Configuration file with `section.key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed for the train/test split (overrides split.seed).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Suppress progress output.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(flatten)]
    overrides: Overrides,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load, validate and deduplicate raw posts.
    Ingest,
    /// Run the text pipeline over ingested posts.
    Preprocess,
    /// Keep posts inside the region and assign them to blocks.
    Geofilter,
    /// Split the labeled corpus, train the classifier, evaluate it.
    Train {
        #[command(flatten)]
        options: TrainFlags,
    },
    /// Classify geofiltered posts with a trained model.
    Classify,
    /// Export labeled posts and block summaries as GeoJSON.
    ExportGeojson,
    /// The whole pipeline: ingest through export-geojson.
    Run {
        #[command(flatten)]
        options: TrainFlags,
    },
}

#[derive(Debug, Clone, Copy, clap::Args)]
struct TrainFlags {
    /// Evaluate every feature combination and write a report table.
    #[arg(long)]
    sweep: bool,
    /// Report metrics at subcategory level instead of parent level.
    #[arg(long)]
    report_subcategories: bool,
    /// Include the NonClassified column in the macro averages.
    #[arg(long)]
    include_nonclassified: bool,
}

impl From<TrainFlags> for commands::TrainOptions {
    fn from(flags: TrainFlags) -> Self {
        commands::TrainOptions {
            sweep: flags.sweep,
            by_subcategory: flags.report_subcategories,
            include_non_classified: flags.include_nonclassified,
        }
    }
}

fn build_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    cli.overrides.apply(&mut config);
    if let Some(seed) = cli.seed {
        config.split.seed = Some(seed);
    }
    Ok(config)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let config = build_config(cli)?;
    let quiet = cli.quiet;
    match &cli.command {
        Command::Ingest => commands::cmd_ingest(&config, quiet),
        Command::Preprocess => commands::cmd_preprocess(&config, quiet),
        Command::Geofilter => commands::cmd_geofilter(&config, quiet),
        Command::Train { options } => commands::cmd_train(&config, (*options).into(), quiet),
        Command::Classify => commands::cmd_classify(&config, quiet),
        Command::ExportGeojson => commands::cmd_export_geojson(&config, quiet),
        Command::Run { options } => commands::cmd_run(&config, (*options).into(), quiet),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
