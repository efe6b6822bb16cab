//! SAT solver backends.
//!
//! Every call to [`SatBackend::solve`] starts from a fresh solver, so no
//! learned state carries over between formulas.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::Duration;

use log::debug;
use wait_timeout::ChildExt;

use crate::cnf::{parse_model, Assignment, CnfFormula, SolveResult};
use crate::error::{Error, Result};

pub trait SatBackend: Send + Sync {
    /// Short human-readable name, used in reports.
    fn name(&self) -> String;

    /// Decides `formula`, giving up after `time_limit` if one is set.
    fn solve(&self, formula: &CnfFormula, time_limit: Option<Duration>) -> Result<SolveResult>;
}

/// Any solver binary that reads a DIMACS file given as its last argument and
/// prints `s ...`/`v ...` lines on stdout. The exit status is ignored.
#[derive(Clone, Debug)]
pub struct ExternalSolver {
    program: PathBuf,
    args: Vec<String>,
}

impl ExternalSolver {
    pub fn new(program: impl Into<PathBuf>) -> Self {
        ExternalSolver {
            program: program.into(),
            args: Vec::new(),
        }
    }

    /// Extra arguments placed before the DIMACS path.
    pub fn with_args<I, S>(mut self, args: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.args = args.into_iter().map(Into::into).collect();
        self
    }

    pub fn program(&self) -> &Path {
        &self.program
    }
}

impl SatBackend for ExternalSolver {
    fn name(&self) -> String {
        self.program
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| self.program.display().to_string())
    }

    fn solve(&self, formula: &CnfFormula, time_limit: Option<Duration>) -> Result<SolveResult> {
        let dir = tempfile::tempdir()?;
        let cnf_path = dir.path().join("formula.cnf");
        let out_path = dir.path().join("solver.out");
        {
            let mut w = BufWriter::new(File::create(&cnf_path)?);
            formula.write_dimacs(&mut w)?;
            w.flush()?;
        }
        let stdout = File::create(&out_path)?;
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .arg(&cnf_path)
            .stdin(Stdio::null())
            .stdout(stdout)
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| Error::Solver(format!("cannot start {}: {e}", self.program.display())))?;

        let status = match time_limit {
            Some(limit) => child.wait_timeout(limit)?,
            None => Some(child.wait()?),
        };
        if status.is_none() {
            let _ = child.kill();
            let _ = child.wait();
            return Ok(SolveResult::Unknown(format!(
                "time limit of {:.1}s exceeded",
                time_limit.unwrap_or_default().as_secs_f64()
            )));
        }
        debug!("{} exited with {:?}", self.name(), status);

        let output = fs::read_to_string(&out_path)?;
        finish(formula, parse_model(&output))
    }
}

/// Completes a model over the declared variables and rejects models that do
/// not satisfy the formula.
fn finish(formula: &CnfFormula, result: SolveResult) -> Result<SolveResult> {
    match result {
        SolveResult::Sat(mut a) => {
            a.fill_unset(formula.num_vars());
            if !formula.is_satisfied_by(&a) {
                return Err(Error::Solver("solver model violates the formula".into()));
            }
            Ok(SolveResult::Sat(a))
        }
        other => Ok(other),
    }
}

/// CaDiCaL linked into the process.
#[cfg(feature = "cadical")]
#[derive(Clone, Copy, Debug, Default)]
pub struct InProcessSolver;

#[cfg(feature = "cadical")]
impl SatBackend for InProcessSolver {
    fn name(&self) -> String {
        "cadical (in-process)".into()
    }

    fn solve(&self, formula: &CnfFormula, time_limit: Option<Duration>) -> Result<SolveResult> {
        let mut solver: cadical::Solver = cadical::Solver::new();
        if let Some(limit) = time_limit {
            solver.set_callbacks(Some(cadical::Timeout::new(limit.as_secs_f32())));
        }
        for clause in formula.clauses() {
            solver.add_clause(clause.iter().map(|l| l.to_dimacs()));
        }
        let result = match solver.solve() {
            Some(true) => {
                let max = solver.max_variable().max(0) as u32;
                let mut a = Assignment::new();
                for v in 1..=formula.num_vars() {
                    let value = if v <= max {
                        solver.value(v as i32).unwrap_or(false)
                    } else {
                        false
                    };
                    a.set(v, value);
                }
                SolveResult::Sat(a)
            }
            Some(false) => SolveResult::Unsat,
            None => SolveResult::Unknown("solver stopped before an answer (time limit)".into()),
        };
        finish(formula, result)
    }
}

/// Backend chosen from configuration: an external binary when a path is
/// given, otherwise the in-process solver.
pub fn default_backend(external: Option<&Path>) -> Result<Box<dyn SatBackend>> {
    if let Some(path) = external {
        return Ok(Box::new(ExternalSolver::new(path)));
    }
    #[cfg(feature = "cadical")]
    {
        Ok(Box::new(InProcessSolver))
    }
    #[cfg(not(feature = "cadical"))]
    {
        Err(Error::Solver(
            "no solver configured: pass an external solver path".into(),
        ))
    }
}
