use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use sqz_cli::emit;
use sqz_cli::report::Status;
use sqz_cli::suites::{self, Suite, VerifyConfig, DEFAULT_CUTOFF, DEFAULT_SAMPLES, DEFAULT_SEED};
use sqz_core::error::Result;
use sqz_core::table::{CurveParam, CurveTable, GridSpec, ParamCurveTable, PsiCompareTable, Spacing};

#[derive(Parser)]
#[command(name = "sqz", version, about = "Two-mode squeezed states: entanglement curves and identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Param {
    Tau,
    Chi,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy, energy and the entropy gap against ln χ, as CSV.
    Fig1 {
        #[arg(long, default_value_t = 1.0)]
        chi_min: f64,
        #[arg(long, default_value_t = 50.0)]
        chi_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, default_value_t = Spacing::Linear)]
        spacing: Spacing,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entropy and energy in the τ and χ parametrizations, as CSV.
    Curves {
        #[arg(long, value_enum, default_value_t = Param::Chi)]
        param: Param,
        #[arg(long)]
        min: Option<f64>,
        #[arg(long)]
        max: Option<f64>,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, default_value_t = Spacing::Linear)]
        spacing: Spacing,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entropy of |ψ_N⟩ against the squeezed state of equal energy, as CSV.
    PsiCompare {
        #[arg(long, default_value_t = 100)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the identity checks; exits 1 if any check fails.
    Verify {
        #[arg(long, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, env = "SQZ_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Fock cutoff of the dense squeezing routes.
        #[arg(long, env = "SQZ_DEFAULT_CUTOFF", default_value_t = DEFAULT_CUTOFF)]
        cutoff: usize,
        /// Also write `name, status, residual, tolerance` as TSV here.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

fn verify(suite: Suite, config: VerifyConfig, summary: Option<PathBuf>) -> Result<bool> {
    info!("running suite {suite} with {config:?}");
    let report = suites::run(suite, &config);
    let mut out = io::stdout().lock();
    report.write_text(&mut out)?;
    out.flush()?;
    if let Some(path) = summary {
        let mut f = BufWriter::new(File::create(path)?);
        report.write_tsv(&mut f)?;
        f.flush()?;
    }
    Ok(report.status() != Status::Fail)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Fig1 { chi_min, chi_max, points, spacing, out } => {
            let table = CurveTable::from_grid(GridSpec::new(chi_min, chi_max, points, spacing, 1.0)?)?;
            emit(out.as_deref(), |w| table.write_csv(w))?;
        }
        Command::Curves { param, min, max, points, spacing, out } => {
            let (param, lower, min, max) = match param {
                Param::Tau => (CurveParam::Tau, f64::MIN_POSITIVE, min.unwrap_or(0.05), max.unwrap_or(5.0)),
                Param::Chi => (CurveParam::Chi, 1.0, min.unwrap_or(1.0), max.unwrap_or(50.0)),
            };
            let table = ParamCurveTable::from_grid(param, GridSpec::new(min, max, points, spacing, lower)?)?;
            emit(out.as_deref(), |w| table.write_csv(w))?;
        }
        Command::PsiCompare { n_max, out } => {
            let table = PsiCompareTable::new(n_max)?;
            emit(out.as_deref(), |w| table.write_csv(w))?;
        }
        Command::Verify { suite, seed, samples, cutoff, summary } => {
            let config = VerifyConfig { seed, samples, cutoff, ..VerifyConfig::default() };
            return verify(suite, config, summary);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("sqz: {e}");
            ExitCode::from(2)
        }
    }
}
