use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use reflectwalk_cli::commands::{self, MAX_MOMENT_ORDER};
use reflectwalk_cli::{CliError, Options, Precision, Report, RunConfig};

#[derive(Parser)]
#[command(name = "reflectwalk", version, about = "Expected position of a reflected random walk with jumps from the origin")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Asymptotic terms against the exact expectation for each n
    Table(Common),
    /// Roots of phi, their spectral images and classes
    Spectrum(Common),
    /// Cross-check every route; exits 1 if a check fails
    Verify(Common),
    /// Monte Carlo estimates next to the exact values
    Simulate(Common),
    /// Exact moments of the jump law
    Moments {
        #[command(flatten)]
        common: Common,
        /// Highest moment to print
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=MAX_MOMENT_ORDER as i64))]
        max_order: u32,
    },
}

#[derive(Args)]
struct Common {
    /// JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// Write here instead of the config's `output` or standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// Decimal places, or `full`
    #[arg(long, default_value_t = Precision::default())]
    precision: Precision,
    #[arg(long)]
    paths: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Machine-readable report
    #[arg(long)]
    json: bool,
}

impl Common {
    fn load(&self) -> Result<(RunConfig, Options, Option<PathBuf>), CliError> {
        let mut config = RunConfig::load(&self.config)?;
        if self.paths.is_some() {
            config.paths = self.paths;
        }
        if self.seed.is_some() {
            config.seed = self.seed;
        }
        let output = self.output.clone().or_else(|| config.output.as_ref().map(PathBuf::from));
        let opts = Options {
            precision: self.precision,
            json: self.json,
        };
        Ok((config, opts, output))
    }
}

fn run(cli: &Cli) -> Result<(Report, Option<PathBuf>), CliError> {
    let (common, max_order) = match &cli.command {
        Command::Table(c) | Command::Spectrum(c) | Command::Verify(c) | Command::Simulate(c) => (c, 0),
        Command::Moments { common, max_order } => (common, *max_order),
    };
    let (config, opts, output) = common.load()?;
    let report = match &cli.command {
        Command::Table(_) => commands::table(&config, &opts)?,
        Command::Spectrum(_) => commands::spectrum(&config, &opts)?,
        Command::Verify(_) => commands::verify(&config, &opts)?,
        Command::Simulate(_) => commands::simulate(&config, &opts)?,
        Command::Moments { .. } => commands::moments(&config, &opts, max_order)?,
    };
    Ok((report, output))
}

fn emit(report: &Report, output: Option<PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(&path, &report.body).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
        None => std::io::stdout()
            .write_all(report.body.as_bytes())
            .map_err(|e| CliError::Io {
                path: "<stdout>".into(),
                message: e.to_string(),
            }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|(report, output)| {
        emit(&report, output)?;
        Ok(report.ok)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
