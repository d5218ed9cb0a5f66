use clap::{Args, Parser, Subcommand};
use flexbar::cli::{self, Analysis, CliError, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "flexbar",
    version,
    about = "Eigenvalues and stability of a damped bar with boundary feedback"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Conservative, asymptotic and numerical eigenvalues of the first modes.
    Spectrum(Common),
    /// Boundary frequency and critical feedback over the feedback grid.
    Stability(Common),
    /// Numerical eigenvalues of selected modes along the feedback grid.
    Sweep(Common),
    /// Normalized displacement profile of one mode.
    Modeshape(Common),
    /// Runs the analysis named by `analysis` in the config's [run] section.
    Run(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output CSV path (overrides `output` in the config; stdout when neither is set).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Exit with status 3 when any eigenvalue search fails to converge.
    #[arg(long)]
    strict: bool,
}

fn run(analysis: Option<Analysis>, args: &Common) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)?;
    let cfg: RunConfig = text.parse()?;
    let analysis = match analysis.or(cfg.run.analysis) {
        Some(a) => a,
        None => {
            return Err(CliError::Config(cli::ConfigError {
                line: 0,
                message: "`run` needs `analysis` in the [run] section".into(),
            }))
        }
    };
    let report = cli::execute(analysis, &cfg, args.strict)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if report.unconverged > 0 {
        eprintln!(
            "warning: {} eigenvalue search(es) did not converge",
            report.unconverged
        );
    }
    match args.out.as_ref().or(cfg.run.output.as_ref()) {
        Some(path) => std::fs::write(path, report.csv)?,
        None => print!("{}", report.csv),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (analysis, args) = match &cli.command {
        Command::Spectrum(a) => (Some(Analysis::Spectrum), a),
        Command::Stability(a) => (Some(Analysis::Stability), a),
        Command::Sweep(a) => (Some(Analysis::Sweep), a),
        Command::Modeshape(a) => (Some(Analysis::Modeshape), a),
        Command::Run(a) => (None, a),
    };
    match run(analysis, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
