//! Command-line front end: argument parsing, data ingestion, configuration
//! and result serialization on top of the `robustge` library.

pub mod commands;
pub mod config;
pub mod dataset;
pub mod error;
pub mod grid;
pub mod synth;

use clap::{Parser, Subcommand, ValueEnum};
use error::{CliError, CliResult};
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "robustge", version, about = "Robust and classical generalized exponential fitting")]
pub struct Cli {
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "ROBUSTGE_THREADS")]
    pub threads: Option<usize>,
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,
    /// Write the machine output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit one estimator and report estimates, K-S distance and Wald errors.
    Fit {
        #[arg(long)]
        data: PathBuf,
        /// ML, MM, PT, LS, WLS, LM or MDPDE.
        #[arg(long, default_value = "ML")]
        method: String,
        /// MDPDE tuning parameter, or `opt` for leave-one-out CVM selection.
        #[arg(long)]
        alpha: Option<String>,
        /// Grid searched when `--alpha opt`.
        #[arg(long, default_value = "0:0.02:1")]
        grid: String,
        /// Drop adjusted-boxplot outliers before fitting.
        #[arg(long)]
        remove_outliers: bool,
    },
    /// Leave-one-out CVM distance over an α grid, as CSV.
    TuneAlpha {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "0:0.02:1")]
        grid: String,
    },
    /// Contamination study driven by a TOML config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Plot-ready series.
    Curves {
        #[arg(long, value_enum)]
        kind: CurveKind,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 1.5)]
        nu: f64,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Grid over α (are), x (influence, density) or ν (sigma, moments).
        #[arg(long)]
        grid: Option<String>,
    },
    /// Trend test, lag-1 ACF/PACF, outlier flags and bootstrap K-S test.
    Diagnose {
        #[arg(long)]
        data: PathBuf,
        /// Estimator for the K-S test, e.g. `ML` or `MDPDE(0.37)`.
        #[arg(long, default_value = "ML")]
        method: String,
        #[arg(long, default_value_t = robustge::diagnostics::DEFAULT_BOOTSTRAP_B)]
        bootstrap: usize,
        /// Run the K-S test on the sample with flagged outliers removed.
        #[arg(long)]
        remove_outliers: bool,
    },
    /// Emit a bundled synthetic dataset.
    Synth {
        #[arg(long)]
        kind: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    Are,
    Influence,
    Sigma,
    Density,
    Moments,
}

/// Machine output of a command and whether every computation converged.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub body: String,
    /// Human-oriented notes for stderr.
    pub notes: Vec<String>,
    pub converged: bool,
}

impl Output {
    pub fn ok(body: String) -> Self {
        Output {
            body,
            notes: Vec::new(),
            converged: true,
        }
    }
}

/// Runs a parsed command, inside a dedicated pool when `--threads` is set.
pub fn run(cli: &Cli) -> CliResult<Output> {
    let go = || commands::dispatch(cli);
    match cli.threads {
        None => go(),
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?
            .install(go),
    }
}

/// Full process behaviour minus `exit`: parses `args`, runs, writes output and
/// returns the exit code.
pub fn execute<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let result = run(&cli).and_then(|out| {
        match &cli.out {
            Some(path) => std::fs::write(path, &out.body)?,
            None => stdout.write_all(out.body.as_bytes())?,
        }
        Ok(out)
    });
    match result {
        Ok(out) => {
            for note in &out.notes {
                let _ = writeln!(stderr, "{note}");
            }
            if out.converged {
                0
            } else {
                let _ = writeln!(stderr, "error: at least one computation did not converge");
                3
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
