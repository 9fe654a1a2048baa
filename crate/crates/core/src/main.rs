use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kramers::cli::{self, GridSpec, ScanSpec, EXIT_INPUT};
use kramers::evolution::time_grid;
use kramers::matrix_file::read_matrix;
use kramers::report::analyze;
use kramers::{Error, ModelParams, SpectralConfig, DEFAULT_COND_CEILING, DEFAULT_TOL};

#[derive(Parser)]
#[command(
    name = "kramers",
    version,
    about = "Pseudohermiticity and Kramers-degeneracy analysis"
)]
struct Cli {
    /// Relative tolerance for clustering, realness, pairing and residuals.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Largest admissible eigenvector condition number.
    #[arg(long, global = true, default_value_t = DEFAULT_COND_CEILING)]
    cond_ceiling: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a matrix file and print a JSON report.
    Analyze { input: PathBuf },

    /// Evaluate the two-level helicity model and print summary plus CSV curves.
    #[command(allow_negative_numbers = true)]
    Model {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0.0)]
        t_start: f64,
        #[arg(long, default_value_t = 10.0)]
        t_stop: f64,
        #[arg(long, default_value_t = 101)]
        t_count: usize,
    },

    /// Scan k1, k2 and muB grids (`value` or `start:stop:count`) and print CSV.
    #[command(allow_negative_numbers = true)]
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        k1: GridSpec,
        #[arg(long, allow_hyphen_values = true)]
        k2: GridSpec,
        #[arg(long = "muB", allow_hyphen_values = true)]
        mu_b: GridSpec,
        #[arg(long, default_value_t = 1.0)]
        omega2: f64,
        #[arg(long = "E", default_value_t = 1.0)]
        energy: f64,
        #[arg(long, default_value_t = 10.0)]
        t_stop: f64,
        #[arg(long, default_value_t = 101)]
        t_count: usize,
    },
}

#[derive(clap::Args)]
struct ParamArgs {
    #[arg(long = "E", default_value_t = 1.0)]
    energy: f64,
    #[arg(long = "muB", default_value_t = 0.0)]
    mu_b: f64,
    #[arg(long, default_value_t = 1.0)]
    omega2: f64,
    #[arg(long)]
    k1: f64,
    #[arg(long)]
    k2: f64,
}

fn fail(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(cli::exit_code(err) as u8)
}

fn check_times(start: f64, stop: f64, count: usize) -> Result<(), Error> {
    if !(start.is_finite() && stop.is_finite()) || start > stop || count == 0 {
        return Err(Error::Parse(
            "time grid needs finite start <= stop and count >= 1".into(),
        ));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<String, Error> {
    let cfg = SpectralConfig {
        tol: cli.tol,
        cond_ceiling: cli.cond_ceiling,
    };
    if !(cfg.tol.is_finite() && cfg.tol > 0.0) {
        return Err(Error::InvalidTolerance(cfg.tol));
    }
    match cli.command {
        Command::Analyze { input } => {
            let h = read_matrix(&input)?;
            Ok(analyze(&h, &cfg)?.to_json() + "\n")
        }
        Command::Model {
            params,
            t_start,
            t_stop,
            t_count,
        } => {
            check_times(t_start, t_stop, t_count)?;
            let p = ModelParams::new(
                params.energy,
                params.mu_b,
                params.omega2,
                params.k1,
                params.k2,
            );
            let times = time_grid(t_start, t_stop, t_count);
            Ok(cli::run_model(&p, &times, &cfg)?.render())
        }
        Command::Scan {
            k1,
            k2,
            mu_b,
            omega2,
            energy,
            t_stop,
            t_count,
        } => {
            check_times(0.0, t_stop, t_count)?;
            if !(omega2.is_finite() && energy.is_finite()) {
                return Err(Error::Parse("omega2 and E must be finite".into()));
            }
            let spec = ScanSpec {
                k1,
                k2,
                mu_b,
                omega2,
                energy,
                times: time_grid(0.0, t_stop, t_count),
            };
            Ok(cli::render_scan(&cli::scan(&spec, &cfg)))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
