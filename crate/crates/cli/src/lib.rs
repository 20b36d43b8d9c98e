//! Command line driver: argument parsing, instance files and reports.

pub mod input;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use parshin_core::exec::Exec;
use serde::Serialize;

pub use input::{instances_document, parse_instances, read_instances, Instance};
pub use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("{0}")]
    Core(#[from] parshin_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Every error stops the run before a report exists.
    pub fn exit_code(&self) -> u8 {
        2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Tame symbols and the product formula on the projective line.
    Tate,
    /// Parshin symbols on a curve of P1 x P1 and their product.
    Parshin,
    /// Refined symbols and their product.
    Refined,
    /// Logarithmic symbols, exponential relations and lattice reciprocity.
    Log,
    /// Every exact reciprocity check the instance admits.
    Verify,
    /// Seeded random instances through the exact and logarithmic checks.
    Fuzz,
    /// The bundled family of worked instances against their closed forms.
    Example54,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sequential,
    #[default]
    Parallel,
}

#[derive(Debug, Parser)]
#[command(name = "parshin", version, about = "Tame, Parshin and logarithmic symbol calculator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Instance file (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Torus radius for the limit checks of `log`.
    #[arg(long, global = true, default_value_t = 1e-2)]
    pub epsilon: f64,
    #[arg(long = "tol", global = true, default_value_t = 1e-6)]
    pub tolerance: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    pub count: usize,
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Where `fuzz` writes failing instances.
    #[arg(long, global = true, default_value = "fuzz-failures")]
    pub dump_dir: PathBuf,
    /// `example54`: also write the corpus as an instance file.
    #[arg(long, global = true)]
    pub write_corpus: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Parallel)]
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<String>,
    pub epsilon: f64,
    pub tolerance: f64,
    pub seed: u64,
    pub count: usize,
}

impl Cli {
    pub fn config(&self) -> Result<RunConfig, CliError> {
        if !(self.epsilon > 0.0) {
            return Err(CliError::Input("--epsilon must be positive".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(CliError::Input("--tol must be positive".into()));
        }
        if self.count == 0 {
            return Err(CliError::Input("--count must be at least 1".into()));
        }
        Ok(RunConfig {
            command: self.command,
            input: self.input.as_ref().map(|p| p.display().to_string()),
            epsilon: self.epsilon,
            tolerance: self.tolerance,
            seed: self.seed,
            count: self.count,
        })
    }

    pub fn exec(&self) -> Exec {
        match self.mode {
            Mode::Sequential => Exec::Sequential,
            Mode::Parallel => Exec::Parallel,
        }
    }
}

fn need_input(cli: &Cli) -> Result<Vec<Instance>, CliError> {
    match &cli.input {
        Some(p) => read_instances(p),
        None => Err(CliError::Input(format!("{:?} needs --input", cli.command).to_lowercase())),
    }
}

/// Runs one command; `Ok` carries the report whether or not checks passed.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let config = cli.config()?;
    match cli.command {
        Command::Fuzz => Ok(report::fuzz(config, cli.exec(), &cli.dump_dir)?),
        Command::Example54 => {
            let r = report::example54(config)?;
            if let Some(p) = &cli.write_corpus {
                std::fs::write(p, instances_document(&report::example54_corpus()))?;
            }
            Ok(r)
        }
        cmd => {
            let instances = need_input(cli)?;
            report::for_instances(config, cmd, &instances)
        }
    }
}

/// Text or JSON rendering plus the exit status.
pub fn render(report: &Report, json: bool) -> (String, u8) {
    let text = if json {
        serde_json::to_string_pretty(report).expect("serializable") + "\n"
    } else {
        report.human()
    };
    (text, if report.pass { 0 } else { 1 })
}
