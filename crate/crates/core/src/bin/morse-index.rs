use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use morse_index::error::Error;
use morse_index::harness::{self, Backend, Campaign, FuzzConfig, ProblemFile, RunOptions, RunReport};

/// Constrained Morse index and nullity: problem files and seeded campaigns.
#[derive(Parser)]
#[command(name = "morse-index", version)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Relative width of the zero band (floating backend).
    #[arg(long, global = true)]
    tol_null: Option<f64>,
    /// Relative residual accepted by dual solves (floating backend).
    #[arg(long, global = true)]
    tol_residual: Option<f64>,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze an abstract problem file.
    Analyze { file: PathBuf },
    /// Analyze a boundary-value problem file.
    Pde { file: PathBuf },
    /// Run a seeded randomized campaign.
    Fuzz {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        dim_max: usize,
        #[arg(long, default_value = "exact", value_parser = parse_backend)]
        backend: Backend,
        #[arg(long, default_value = "single", value_parser = parse_campaign)]
        campaign: Campaign,
    },
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse()
}

fn parse_campaign(s: &str) -> Result<Campaign, String> {
    s.parse()
}

fn load(path: &PathBuf, expected: &str) -> Result<ProblemFile, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let problem = harness::parse_problem(&text)?;
    let kind = match problem {
        ProblemFile::Abstract(_) => "abstract",
        ProblemFile::Pde(_) => "pde",
    };
    if kind != expected {
        return Err(Error::Validation {
            field: "kind".into(),
            message: format!("expected a {expected} problem, got {kind}"),
        });
    }
    Ok(problem)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = RunOptions { timing: cli.timing };
    let override_tol = |tol: &mut morse_index::linalg::Tolerances| {
        if let Some(x) = cli.tol_null {
            tol.null_rel = x;
        }
        if let Some(x) = cli.tol_residual {
            tol.residual = x;
        }
    };

    let report: RunReport = match &cli.command {
        Command::Analyze { file } | Command::Pde { file } => {
            let expected = if matches!(cli.command, Command::Analyze { .. }) {
                "abstract"
            } else {
                "pde"
            };
            match load(file, expected) {
                Ok(mut problem) => {
                    override_tol(problem.tolerances_mut());
                    harness::run(&problem, opts)
                }
                Err(e) => {
                    eprintln!("morse-index: {e}");
                    return ExitCode::from(2);
                }
            }
        }
        Command::Fuzz {
            seed,
            trials,
            dim_max,
            backend,
            campaign,
        } => {
            let mut config = FuzzConfig::new(*seed, *trials, *dim_max, *backend, *campaign);
            override_tol(&mut config.tolerances);
            if let Err(e) = config.validate() {
                eprintln!("morse-index: {e}");
                return ExitCode::from(2);
            }
            harness::run_fuzz(&config, opts)
        }
    };

    let out = match cli.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    // a closed pipe is not a failure of the run
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
