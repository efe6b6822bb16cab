//! CNF formulas, DIMACS output and SAT-competition answer parsing.

use std::fmt;
use std::io::{self, Write};
use std::ops::Not;

use crate::error::{Error, Result};

/// A signed propositional variable. Variables are numbered from 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(i32);

impl Lit {
    pub fn new(var: u32, positive: bool) -> Result<Lit> {
        if var == 0 {
            return Err(Error::ZeroVariable);
        }
        let v = i32::try_from(var).map_err(|_| Error::Solver(format!("variable {var} too large")))?;
        Ok(Lit(if positive { v } else { -v }))
    }

    /// Positive literal of `var`. Panics on 0.
    #[inline]
    pub fn pos(var: u32) -> Lit {
        assert!(var != 0, "variable ids start at 1");
        Lit(var as i32)
    }

    /// Negative literal of `var`. Panics on 0.
    #[inline]
    pub fn neg(var: u32) -> Lit {
        assert!(var != 0, "variable ids start at 1");
        Lit(-(var as i32))
    }

    /// From a DIMACS integer. Fails on 0.
    pub fn from_dimacs(x: i32) -> Result<Lit> {
        if x == 0 {
            Err(Error::ZeroVariable)
        } else {
            Ok(Lit(x))
        }
    }

    #[inline]
    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    #[inline]
    pub fn to_dimacs(self) -> i32 {
        self.0
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type Clause = Vec<Lit>;

/// Variable count plus an ordered clause list. Clauses are kept verbatim in
/// insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new() -> Self {
        Self::default()
    }

    /// Empty formula that already declares `num_vars` variables.
    pub fn with_vars(num_vars: u32) -> Self {
        CnfFormula {
            num_vars,
            clauses: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Appends a clause; grows `num_vars` to the largest variable seen.
    pub fn add_clause<I: IntoIterator<Item = Lit>>(&mut self, lits: I) {
        let clause: Clause = lits.into_iter().collect();
        if let Some(max) = clause.iter().map(|l| l.var()).max() {
            self.num_vars = self.num_vars.max(max);
        }
        self.clauses.push(clause);
    }

    /// Appends a clause given as DIMACS integers.
    pub fn add_dimacs_clause(&mut self, lits: &[i32]) -> Result<()> {
        let clause = lits
            .iter()
            .map(|&x| Lit::from_dimacs(x))
            .collect::<Result<Clause>>()?;
        self.add_clause(clause);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = Clause>>(&mut self, clauses: I) {
        for c in clauses {
            self.add_clause(c);
        }
    }

    pub fn write_dimacs<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len())?;
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{} ", lit.0)?;
            }
            out.write_all(b"0\n")?;
        }
        Ok(())
    }

    pub fn to_dimacs(&self) -> String {
        let mut buf = Vec::new();
        self.write_dimacs(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("DIMACS output is ASCII")
    }

    /// Whether every clause has a true literal under `assignment`. A literal
    /// over an unassigned variable is never true.
    pub fn is_satisfied_by(&self, assignment: &Assignment) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| assignment.lit_value(l) == Some(true)))
    }
}

/// Variable id to truth value.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    // index 0 unused
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every variable in `1..=num_vars` set from `f(var)`.
    pub fn from_fn(num_vars: u32, mut f: impl FnMut(u32) -> bool) -> Self {
        let mut a = Assignment::new();
        for v in 1..=num_vars {
            a.set(v, f(v));
        }
        a
    }

    pub fn set(&mut self, var: u32, value: bool) {
        let idx = var as usize;
        if self.values.len() <= idx {
            self.values.resize(idx + 1, None);
        }
        self.values[idx] = Some(value);
    }

    pub fn value(&self, var: u32) -> Option<bool> {
        self.values.get(var as usize).copied().flatten()
    }

    pub fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.value(lit.var()).map(|v| v == lit.is_positive())
    }

    /// Whether every variable in `1..=num_vars` has a value.
    pub fn is_total(&self, num_vars: u32) -> bool {
        (1..=num_vars).all(|v| self.value(v).is_some())
    }

    /// First variable in `1..=num_vars` without a value.
    pub fn first_missing(&self, num_vars: u32) -> Option<u32> {
        (1..=num_vars).find(|&v| self.value(v).is_none())
    }

    /// Assigns `false` to every unset variable up to `num_vars`.
    pub fn fill_unset(&mut self, num_vars: u32) {
        for v in 1..=num_vars {
            if self.value(v).is_none() {
                self.set(v, false);
            }
        }
    }
}

/// Outcome of one satisfiability check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Sat(Assignment),
    Unsat,
    /// Timeout, resource exhaustion, or unreadable solver output.
    Unknown(String),
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }
}

/// Reads SAT-competition style solver output: an `s` status line plus `v`
/// value lines terminated by `0`. Comment lines and anything else are ignored.
pub fn parse_model(output: &str) -> SolveResult {
    let mut status: Option<&str> = None;
    let mut assignment = Assignment::new();
    let mut terminated = false;
    let mut saw_values = false;

    for (lno, line) in output.lines().enumerate() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            let rest = rest.trim();
            if status.is_some_and(|s| s != rest) {
                return SolveResult::Unknown(format!("conflicting status lines at line {}", lno + 1));
            }
            status = Some(rest);
        } else if line == "v" || line.starts_with("v ") {
            saw_values = true;
            for tok in line[1..].split_whitespace() {
                if terminated {
                    return SolveResult::Unknown(format!("values after terminating 0 at line {}", lno + 1));
                }
                let x: i32 = match tok.parse() {
                    Ok(x) => x,
                    Err(_) => {
                        return SolveResult::Unknown(format!("bad literal `{tok}` at line {}", lno + 1))
                    }
                };
                if x == 0 {
                    terminated = true;
                    continue;
                }
                let lit = Lit(x);
                if assignment.value(lit.var()).is_some_and(|v| v != lit.is_positive()) {
                    return SolveResult::Unknown(format!("variable {} assigned twice", lit.var()));
                }
                assignment.set(lit.var(), lit.is_positive());
            }
        }
    }

    match status {
        Some("SATISFIABLE") => {
            if !saw_values {
                SolveResult::Unknown("SATISFIABLE without a model".into())
            } else if !terminated {
                SolveResult::Unknown("model not terminated by 0 (truncated output?)".into())
            } else {
                SolveResult::Sat(assignment)
            }
        }
        Some("UNSATISFIABLE") => SolveResult::Unsat,
        Some(other) => SolveResult::Unknown(format!("solver reported `{other}`")),
        None => SolveResult::Unknown("no status line in solver output".into()),
    }
}
