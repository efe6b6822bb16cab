use std::env;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use gsynth_core::{default_backend, ExternalSolver, SatBackend, SearchOptions};
use serde::Deserialize;

use crate::exit::{CliError, EX_CONFIG, EX_USAGE};

pub const SOLVER_ENV: &str = "GSYNTH_SOLVER";

/// Optional TOML file. Command-line flags override every field.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub solver: Option<PathBuf>,
    #[serde(default)]
    pub solver_args: Vec<String>,
    pub per_solve_secs: Option<f64>,
    pub budget_secs: Option<f64>,
    pub depth_cap: Option<usize>,
    pub plain_encoding: Option<bool>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::new(EX_CONFIG, format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::new(EX_CONFIG, format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone)]
pub enum SolverChoice {
    InProcess,
    External { program: PathBuf, args: Vec<String> },
}

/// Flag, then environment, then config file, then the built-in solver.
pub fn choose_solver(
    flag: Option<&Path>,
    flag_args: &[String],
    force_in_process: bool,
    file: &FileConfig,
) -> SolverChoice {
    if force_in_process {
        return SolverChoice::InProcess;
    }
    let program = flag
        .map(Path::to_path_buf)
        .or_else(|| env::var_os(SOLVER_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .or_else(|| file.solver.clone());
    match program {
        Some(program) => {
            let args = if flag_args.is_empty() {
                file.solver_args.clone()
            } else {
                flag_args.to_vec()
            };
            SolverChoice::External { program, args }
        }
        None => SolverChoice::InProcess,
    }
}

pub fn build_backend(choice: &SolverChoice) -> Result<Box<dyn SatBackend>, CliError> {
    match choice {
        SolverChoice::External { program, args } => {
            Ok(Box::new(ExternalSolver::new(program).with_args(args.iter().cloned())))
        }
        SolverChoice::InProcess => default_backend(None).map_err(|e| CliError::new(EX_USAGE, e.to_string())),
    }
}

fn seconds(flag: &str, v: f64) -> Result<Duration, CliError> {
    Duration::try_from_secs_f64(v)
        .ok()
        .filter(|d| !d.is_zero())
        .ok_or_else(|| CliError::new(EX_USAGE, format!("{flag} must be a positive number of seconds")))
}

pub fn search_options(
    per_solve: Option<f64>,
    budget: Option<f64>,
    depth_cap: Option<usize>,
    plain_encoding: bool,
    file: &FileConfig,
) -> Result<SearchOptions, CliError> {
    Ok(SearchOptions {
        per_solve: per_solve
            .or(file.per_solve_secs)
            .map(|v| seconds("--per-solve", v))
            .transpose()?,
        total: budget.or(file.budget_secs).map(|v| seconds("--budget", v)).transpose()?,
        depth_cap: depth_cap.or(file.depth_cap),
        plain_encoding: plain_encoding || file.plain_encoding.unwrap_or(false),
    })
}
