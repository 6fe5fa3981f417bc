use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use cvgauss::factory::StateSpec;
use cvgauss::gaussian::{CovarianceJson, DEFAULT_PPT_TOL};
use cvgauss_cli::sweep::{self, SweepSpec};
use cvgauss_cli::verify::{self, Grid};
use cvgauss_cli::{read_input, report, write_output, CliError, CliResult, Evaluator, Precision};

/// Covariance-matrix entanglement analysis of multimode Gaussian states.
#[derive(Parser, Debug)]
#[command(name = "cvgauss", version)]
struct Cli {
    /// Working precision of the state construction and spectra.
    #[arg(long, global = true, value_enum, default_value_t = Precision::Dd)]
    precision: Precision,

    /// Flip the sign of the first squeeze parameter (self-test hook).
    #[arg(long, global = true, hide = true)]
    inject_fault: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a state from a JSON spec and print its covariance matrix.
    State {
        /// State spec JSON file, or `-` for stdin.
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// PPT spectra, negativities and variance bounds per bipartition.
    Report {
        spec: PathBuf,
        /// Partition label such as `{1,3}`, or `all`.
        #[arg(long, default_value = "all")]
        partition: String,
        /// Sub-unity threshold for the PPT test.
        #[arg(long, default_value_t = DEFAULT_PPT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a two-dimensional parameter grid and write CSV.
    Sweep {
        /// Sweep spec JSON file, or `-` for stdin.
        spec: PathBuf,
        /// Only evaluate this partition (overrides the spec).
        #[arg(long)]
        partition: Option<String>,
        #[arg(long, default_value_t = DEFAULT_PPT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the cross-checks over a grid of all three families.
    Verify {
        #[arg(long, value_enum, default_value_t = Grid::Coarse)]
        grid: Grid,
        /// Tolerance for closed-form vs. numeric spectra.
        #[arg(long, default_value_t = verify::SPECTRUM_TOL)]
        tol: f64,
    },
}

fn evaluator(cli: &Cli, ppt_tol: f64) -> CliResult<Evaluator> {
    if !(0.0..1.0).contains(&ppt_tol) {
        return Err(CliError::Usage(format!("--tol must lie in [0, 1), got {ppt_tol}")));
    }
    Ok(Evaluator {
        precision: cli.precision,
        ppt_tol,
        inject_fault: cli.inject_fault,
    })
}

fn json_line(value: &impl serde::Serialize) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(value).expect("plain data serialises");
    s.push(b'\n');
    s
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::State { spec, out } => {
            let spec = StateSpec::from_json_str(&read_input(spec)?)?;
            let v = evaluator(cli, DEFAULT_PPT_TOL)?.state(&spec)?;
            write_output(out.as_deref(), &json_line(&CovarianceJson::from_matrix(&v)))
        }
        Command::Report {
            spec,
            partition,
            tol,
            out,
        } => {
            let spec = StateSpec::from_json_str(&read_input(spec)?)?;
            let r = report::report(&spec, partition, &evaluator(cli, *tol)?)?;
            write_output(out.as_deref(), &json_line(&r))
        }
        Command::Sweep {
            spec,
            partition,
            tol,
            out,
        } => {
            let mut s = SweepSpec::from_json_str(&read_input(spec)?)?;
            if let Some(p) = partition {
                s.partitions = sweep::PartitionSelection::Keyword(p.clone());
            }
            let t0 = Instant::now();
            let rows = sweep::run(&s, &evaluator(cli, *tol)?)?;
            log::info!("{} rows in {:.2?}", rows.len(), t0.elapsed());
            write_output(out.as_deref(), sweep::to_csv_string(&s, &rows).as_bytes())
        }
        Command::Verify { grid, tol } => {
            let t0 = Instant::now();
            let summary = verify::verify(*grid, *tol, &evaluator(cli, DEFAULT_PPT_TOL)?)?;
            print!("{summary}");
            println!("elapsed {:.2?}", t0.elapsed());
            if summary.passed() {
                println!("PASS");
                Ok(())
            } else {
                Err(CliError::VerifyFailed(summary.failed_checks().join(", ")))
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if cli.inject_fault {
        log::warn!("fault injection active: flipping the squeeze sign of mode 0");
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
