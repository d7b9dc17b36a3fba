use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use lab::{run_experiment, tools, ExperimentConfig, LabError, LabResult, RunOptions, CACHE_ENV};

/// Torsion growth, Mahler measure and determinant experiments.
#[derive(Parser)]
#[command(name = "lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Worker threads for independent steps.
        #[arg(long)]
        jobs: Option<usize>,
        /// Cache directory; overrides the LAB_CACHE_DIR environment variable.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Built-in knot and link fixtures.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
    /// Logarithmic Mahler measure of a Laurent polynomial.
    Mahler {
        poly: String,
        /// auto, jensen_roots, riemann_cyclic, torus_grid, boyd_lawton,
        /// gpm_sequence or fibered_jensen.
        #[arg(long, default_value = "auto")]
        method: String,
        /// Grid size, root-of-unity order, or largest G_{p,M} modulus.
        #[arg(long)]
        n: Option<u64>,
        /// Prime for boyd_lawton and gpm_sequence.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Smith normal form of an integer matrix in a JSON file.
    Snf { matrix: PathBuf },
}

#[derive(Subcommand)]
enum FixtureAction {
    List,
    Show { name: String },
}

fn read(path: &Path) -> LabResult<String> {
    std::fs::read_to_string(path).map_err(|e| LabError::Input(format!("{}: {e}", path.display())))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn execute(command: Command) -> LabResult<i32> {
    match command {
        Command::Run { config, jobs, cache } => {
            let cfg = ExperimentConfig::load(&config)?;
            let base = config.parent().map(Path::to_path_buf).unwrap_or_default();
            let cache_dir = cache.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
            let outcome = run_experiment(&cfg, &base, &RunOptions { jobs, cache_dir })?;
            print!("{}", outcome.summary.to_json());
            eprintln!(
                "{} steps ({} cached, {} computed); wrote {} and {}",
                outcome.summary.steps,
                outcome.cached_steps,
                outcome.computed_steps,
                outcome.csv_path.display(),
                outcome.summary_path.display()
            );
            for f in &outcome.summary.failed_steps {
                eprintln!("step {} failed: {}", f.param, f.error);
            }
            Ok(outcome.exit_code())
        }
        Command::Fixtures { action: FixtureAction::List } => {
            print!("{}", tools::fixtures_list());
            Ok(0)
        }
        Command::Fixtures { action: FixtureAction::Show { name } } => {
            print!("{}", tools::fixture_json(&name)?);
            Ok(0)
        }
        Command::Mahler { poly, method, n, p } => {
            print_json(&tools::mahler_command(&poly, &method, n, p)?);
            Ok(0)
        }
        Command::Snf { matrix } => {
            print_json(&tools::snf_command(&read(&matrix)?)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
