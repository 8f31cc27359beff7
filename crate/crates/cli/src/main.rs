use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "kzfox", version, about = "KZ holonomies, Fox pairings and their brackets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the KZ associator and compare its depth-one coefficients with zeta values.
    Associator(Options),
    /// Run one of the verification campaigns.
    Verify {
        #[arg(value_enum)]
        which: Check,
        #[command(flatten)]
        options: Options,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Coaction,
    Pentagon,
    Goldman,
    Poisson,
    Algebra,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Rational,
    Complex,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Truncation degree.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Accuracy target for the numerical holonomies.
    #[arg(long, default_value_t = 1e-9)]
    pub accuracy: f64,
    /// Path file (JSON).
    #[arg(long)]
    pub path: Option<std::path::PathBuf>,
    /// Two loop files (JSON) based at a common tangential point.
    #[arg(long, num_args = 2, value_names = ["LOOP1", "LOOP2"])]
    pub loops: Option<Vec<std::path::PathBuf>>,
    /// Puncture positions as `x,y;x,y;...`; replaces those of the path files.
    #[arg(long)]
    pub punctures: Option<String>,
    /// Matrix size for the representation space.
    #[arg(long = "N", default_value_t = 2)]
    pub size: usize,
    /// Bound on the Frobenius norm of the random matrices.
    #[arg(long, default_value_t = 0.1)]
    pub radius: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Randomized cases per identity in the algebra suite.
    #[arg(long, default_value_t = 20)]
    pub cases: usize,
    #[arg(long, value_enum)]
    pub backend: Option<Backend>,
    /// Output file. For `associator` this receives the series; otherwise a copy of the reports.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("KZFOX_THREADS") else {
        return Ok(());
    };
    let k: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| anyhow::anyhow!("KZFOX_THREADS: expected a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(k).build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    let result = match cli.command {
        Command::Associator(opts) => commands::associator(&opts),
        Command::Verify { which, options } => commands::verify(which, &options),
    };
    match result {
        Ok(outcome) => {
            eprintln!("{}", outcome.summary);
            ExitCode::from(if outcome.pass { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let accuracy = matches!(e.downcast_ref::<kzfox_core::Error>(), Some(kzfox_core::Error::Accuracy(_)));
            ExitCode::from(if accuracy { 2 } else { 1 })
        }
    }
}
