mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::SeedSetting;

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub const CONFIG: u8 = 1;
    pub const PARTIAL: u8 = 2;

    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: Self::CONFIG,
            message: message.into(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "wilddistort", version, about = "Seeded image degradation, robust/clean ROC AUC evaluation and ensemble score fusion")]
struct Cli {
    /// TOML config file; defaults to $WILDDISTORT_CONFIG when set.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Split a listing into clean/robust tracks and distort the robust one.
    Distort(DistortArgs),
    /// Score predictions against a manifest (clean, robust and combined AUC).
    Evaluate(EvaluateArgs),
    /// Fuse per-model score columns into one score per image.
    Fuse(FuseArgs),
    /// Re-render manifest records and check them against the recorded outputs.
    Replay(ReplayArgs),
    /// Print or check severity tables.
    SeverityTable {
        #[command(subcommand)]
        action: TableAction,
    },
}

#[derive(Args, Debug)]
pub struct DistortArgs {
    /// CSV listing with header `image_id,path,label`.
    #[arg(long)]
    pub input: PathBuf,
    /// Output directory for images/ and manifest.jsonl.
    #[arg(long)]
    pub output: PathBuf,
    /// Built-in scheme: challenge, ant_mild, ant_moderate, ant_heavy, teleai, intsig_light, vincentlc.
    #[arg(long, conflicts_with = "scheme_file")]
    pub scheme: Option<String>,
    /// Custom scheme as JSON or TOML.
    #[arg(long)]
    pub scheme_file: Option<PathBuf>,
    /// Fraction of images sent to the robust track, per label [default: 0.5].
    #[arg(long)]
    pub robust_fraction: Option<f64>,
    /// Unsigned integer, or `random` for a fresh seed [default: fixed constant].
    #[arg(long)]
    pub seed: Option<SeedSetting>,
    /// Worker threads [default: available cores].
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Severity table overrides (TOML or JSON).
    #[arg(long)]
    pub severity_table: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// CSV with header `image_id,score`.
    #[arg(long)]
    pub predictions: PathBuf,
    /// Report format [default: json].
    #[arg(long, value_enum)]
    pub format: Option<ReportFormat>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Args, Debug)]
pub struct FuseArgs {
    /// CSV with header `image_id,<columns...>`.
    #[arg(long)]
    pub scores: PathBuf,
    /// average (all columns), rapid or intsig with role-named columns.
    #[arg(long, conflicts_with = "scheme_config")]
    pub scheme: Option<String>,
    /// JSON scheme config with explicit column mapping.
    #[arg(long)]
    pub scheme_config: Option<PathBuf>,
    /// Gating for the intsig scheme [default: on].
    #[arg(long, value_enum)]
    pub gates: Option<Switch>,
    /// Output CSV `image_id,score`; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Root for relative source paths [default: the run's input root].
    #[arg(long)]
    pub source_root: Option<PathBuf>,
    /// Only this image id.
    #[arg(long)]
    pub id: Option<String>,
    /// Also write the replayed images here as PNG.
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum TableAction {
    /// Print the effective table.
    Show {
        /// Built-in level count when no file is given.
        #[arg(long, default_value_t = 5)]
        levels: u8,
        /// Table overrides to merge over the built-in one.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TableFormatArg::Toml)]
        format: TableFormatArg,
    },
    /// Load and check a table file.
    Validate { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormatArg {
    Toml,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { CliError::CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = config::ConfigFile::load(cli.config.as_deref()).and_then(|cfg| match cli.command {
        Command::Distort(a) => commands::distort(&a, &cfg),
        Command::Evaluate(a) => commands::evaluate(&a, &cfg),
        Command::Fuse(a) => commands::fuse(&a, &cfg),
        Command::Replay(a) => commands::replay(&a),
        Command::SeverityTable { action } => commands::severity_table(&action),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
