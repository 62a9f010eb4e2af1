//! The command-line surface: job files, subcommands and exit statuses.
//!
//! Exit statuses: 0 success, 1 input error, 2 infeasible calibration,
//! 3 verification failure. Tables go to standard output (or `--out`),
//! diagnostics to standard error.

mod commands;
mod job;
mod table;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{
    cmd_calibrate, cmd_expected_max, cmd_schedule, cmd_simulate, cmd_verify, MaxMethodArg,
    SimulateMode, EXPECTED_MAX_STREAM, MINIMAL_EFFORT_STREAM_BASE, PARADOX_ACCEPTANCE,
    PARADOX_STREAM_BASE, VERIFY_STREAM_BASE,
};
pub use job::JobSpec;
pub use table::{fmt_num, parse_schedule};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_infeasible() {
            CliError::Infeasible(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

impl Output {
    pub(crate) fn ok(stdout: String) -> Self {
        Output {
            stdout,
            stderr: String::new(),
            exit_code: EXIT_OK,
        }
    }

    pub(crate) fn note(mut self, line: impl AsRef<str>) -> Self {
        self.stderr.push_str(line.as_ref());
        self.stderr.push('\n');
        self
    }

    fn error(err: &CliError) -> Self {
        Output {
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
            exit_code: err.exit_code(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "overmeasure",
    version,
    about = "Calibrate measurement-count-dependent safety test thresholds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct JobArgs {
    /// Job file (TOML). Without it the demo job (q0 = 1, defaults elsewhere) is used.
    #[arg(long)]
    job: Option<PathBuf>,
    /// Overrides the job's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the job's Monte Carlo trial count.
    #[arg(long)]
    trials: Option<u64>,
    /// Write the table here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl JobArgs {
    fn load(&self) -> Result<JobSpec, CliError> {
        let mut job = match &self.job {
            Some(path) => JobSpec::from_path(path)?,
            None => JobSpec::demo(),
        };
        if let Some(seed) = self.seed {
            job.seed = seed;
        }
        if let Some(trials) = self.trials {
            if trials == 0 {
                return Err(CliError::Input("--trials must be >= 1".into()));
            }
            job.trials = trials;
        }
        Ok(job)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    MinimalEffort,
    Paradox,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Calibrated test threshold for the job's required count n.
    Calibrate {
        #[command(flatten)]
        job: JobArgs,
    },
    /// Threshold schedule t(n') over the job's n_list.
    Schedule {
        #[command(flatten)]
        job: JobArgs,
    },
    /// Monte Carlo check of a schedule table against p0.
    Verify {
        #[command(flatten)]
        job: JobArgs,
        /// Schedule table as written by `schedule`.
        #[arg(long)]
        schedule: PathBuf,
    },
    /// Minimal-effort designer or paradox-curve simulation.
    Simulate {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// True scale for the paradox curve. Defaults to the scale at which the
        /// fixed rule accepts with probability 0.9 at n.
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// Expected maximum of n Gaussian draws.
    ExpectedMax {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, value_enum, default_value_t = MaxMethodArg::All)]
        method: MaxMethodArg,
        #[arg(long, default_value_t = job::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = job::DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn dispatch(command: Command) -> Result<(Output, Option<PathBuf>), CliError> {
    Ok(match command {
        Command::Calibrate { job } => (cmd_calibrate(&job.load()?)?, job.out),
        Command::Schedule { job } => (cmd_schedule(&job.load()?)?, job.out),
        Command::Verify { job, schedule } => {
            let text = std::fs::read_to_string(&schedule).map_err(|e| {
                CliError::Input(format!("cannot read schedule {}: {e}", schedule.display()))
            })?;
            (cmd_verify(&job.load()?, &text)?, job.out)
        }
        Command::Simulate { job, mode, sigma } => {
            let mode = match mode {
                ModeArg::MinimalEffort => SimulateMode::MinimalEffort,
                ModeArg::Paradox => SimulateMode::Paradox { sigma_true: sigma },
            };
            (cmd_simulate(&job.load()?, mode)?, job.out)
        }
        Command::ExpectedMax {
            n,
            sigma,
            method,
            seed,
            trials,
            out,
        } => (cmd_expected_max(n, sigma, method, trials, seed)?, out),
    })
}

/// Parses `args` (including the program name) and runs the command. `--out`
/// is honored here; everything else is returned to the caller to print.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Output::ok(text)
            } else {
                Output {
                    stdout: String::new(),
                    stderr: text,
                    exit_code: code,
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((mut output, Some(path))) => {
            if let Err(e) = std::fs::write(&path, &output.stdout) {
                return Output::error(&CliError::Input(format!(
                    "cannot write {}: {e}",
                    path.display()
                )));
            }
            output.stdout.clear();
            output
        }
        Ok((output, None)) => output,
        Err(e) => Output::error(&e),
    }
}
