use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thomas_core::exec::Execution;
use thomas_core::scenario::{output_dir, run_scenario, Overrides};
use thomas_core::selftest::run_selftest;

/// Special-relativity kinematics from scenario files.
///
/// Exit codes: 0 success, 1 I/O, 2 parse or schema error, 3 constraint
/// violation, 4 numerical drift.
#[derive(Parser)]
#[command(name = "thomas", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its report or CSV.
    Run {
        scenario: PathBuf,
        /// Output directory (default: $THOMAS_OUT_DIR, else the current directory).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Integrator step in proper time.
        #[arg(long)]
        step: Option<f64>,
        /// Drift tolerance of the numerical transport.
        #[arg(long)]
        tol: Option<f64>,
        /// Evaluate sequentially even when built with the parallel feature.
        #[arg(long)]
        sequential: bool,
    },
    /// Run the built-in invariant suite.
    Selftest {
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.command {
        Command::Run {
            scenario,
            out,
            step,
            tol,
            sequential,
        } => {
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            let ov = Overrides { step, drift_tol: tol };
            match run_scenario(&scenario, &output_dir(out.as_deref()), &ov, exec) {
                Ok(path) => {
                    println!("{}", path.display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{}", e.machine_line());
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
        Command::Selftest { seed } => {
            let checks = run_selftest(seed);
            for c in &checks {
                let tag = if c.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{tag} {:<36} residual {:.3e} (tol {:.1e})",
                    c.name, c.residual, c.tolerance
                );
            }
            if checks.iter().all(|c| c.passed()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
