use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qubalance::discrepancy::{build_augmented, Assignment, CovariateSet};
use qubalance::experiment::{self, ExperimentConfig, GaussianMixtureSpec};
use qubalance::{io, reference, Error, IsingHamiltonian, Method, RunResult};

#[derive(Parser)]
#[command(
    name = "qubalance",
    version,
    about = "Covariate balancing via Ising ground states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a Gaussian-mixture covariate CSV.
    Gen {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 12)]
        m: usize,
        #[arg(long, default_value = "-3,3;3,3", allow_hyphen_values = true)]
        means: String,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run one assignment method and write the result JSON.
    Run {
        #[command(flatten)]
        opts: RunOpts,
        #[arg(long, default_value = "exhaustive")]
        method: Method,
        /// Covariate CSV; the bundled reference dataset when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print d_X, i_X and the sqrt(phi m) bound for one assignment.
    Evaluate {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        phi: f64,
        /// Comma-separated signs, e.g. "1,-1,1".
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
    },
    /// Scatter-plot a 2-D covariate set, optionally coloured by a result JSON.
    Plot {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        result: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Export H_B as an `i,j,coefficient` CSV with an offset footer.
    Hamiltonian {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        phi: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-run the bundled reference study and print a pass/fail table.
    Repro {
        #[command(flatten)]
        opts: RunOpts,
    },
}

#[derive(Args)]
struct RunOpts {
    #[arg(long, default_value_t = 0.5)]
    phi: f64,
    #[arg(long, default_value_t = 65_536)]
    shots: u64,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 8)]
    p: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    max_evals: usize,
    /// Draws for random/gsw; the best is kept.
    #[arg(long, default_value_t = 1)]
    samples: usize,
    #[arg(long)]
    equal_split: bool,
    /// Estimate <H> from this many shots while optimizing.
    #[arg(long)]
    shots_during_opt: Option<u64>,
}

impl RunOpts {
    fn config(&self, method: Method) -> ExperimentConfig {
        ExperimentConfig {
            method,
            phi: self.phi,
            shots: self.shots,
            reps: self.reps,
            p: self.p,
            seed: self.seed,
            restarts: self.restarts,
            max_evals: self.max_evals,
            samples: self.samples,
            equal_split: self.equal_split,
            shots_during_opt: self.shots_during_opt,
        }
    }
}

enum Failure {
    Usage(Error),
    Compute(Error),
    Repro,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidPhi(_)
            | Error::UnknownMethod(_)
            | Error::Parse(_)
            | Error::InvalidAssignment(_)
            | Error::InvalidCovariates(_)
            | Error::DimensionMismatch { .. }
            | Error::UnsupportedDimension(_)
            | Error::OddEqualSplit(_)
            | Error::Io { .. }
            | Error::Csv { .. }
            | Error::Json(_) => Failure::Usage(e),
            _ => Failure::Compute(e),
        }
    }
}

fn load(input: Option<&Path>) -> Result<CovariateSet, Error> {
    match input {
        Some(path) => io::read_covariates(path),
        None => Ok(reference::covariates()),
    }
}

fn execute(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Gen {
            out,
            m,
            means,
            sigma,
            seed,
        } => {
            let spec = GaussianMixtureSpec {
                m,
                means: experiment::parse_means(&means)?,
                std_dev: sigma,
                seed,
            };
            let x = spec.generate()?;
            let mut buf = Vec::new();
            io::write_covariates_to(&x, &mut buf).map_err(|source| Error::Csv {
                path: out.clone(),
                source,
            })?;
            experiment::write_atomically(&out, &String::from_utf8_lossy(&buf))?;
        }
        Command::Run {
            opts,
            method,
            input,
            out,
        } => {
            let x = load(input.as_deref())?;
            let result = experiment::run(&opts.config(method), &x)?;
            experiment::write_atomically(&out, &result.to_json()?)?;
            println!(
                "{method}: i_X = {:.4}, omega = {}",
                result.imbalance, result.omega
            );
        }
        Command::Evaluate { input, phi, omega } => {
            let x = load(input.as_deref())?;
            let omega: Assignment = omega.parse()?;
            println!("{}", experiment::evaluate(&x, phi, &omega)?);
        }
        Command::Plot { input, result, out } => {
            let x = load(input.as_deref())?;
            let run = match result {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::Io { path, source: e })?;
                    Some(RunResult::from_json(&text)?)
                }
                None => None,
            };
            let svg = experiment::render_svg(&x, run.as_ref())?;
            experiment::write_atomically(&out, &svg)?;
        }
        Command::Hamiltonian { input, phi, out } => {
            let x = load(input.as_deref())?;
            let h = IsingHamiltonian::from_quso(&build_augmented(&x, phi)?.gram());
            let mut buf = Vec::new();
            h.write_csv(&mut buf).map_err(|e| Error::io(&out, e))?;
            experiment::write_atomically(&out, &String::from_utf8_lossy(&buf))?;
        }
        Command::Repro { opts } => {
            let checks = experiment::reproduce(&opts.config(Method::Exhaustive))?;
            print!("{}", experiment::format_checks(&checks));
            if checks.iter().any(|c| !c.passed) {
                return Err(Failure::Repro);
            }
        }
    }
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
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Repro) => ExitCode::from(2),
    }
}
