//! CNF machinery: formulas, encodings, solving with budgets, miters and
//! combinational equivalence checking.

mod encode;
mod equiv;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use cdcl::{Budget, Lit, SolveResult, Solver, Var};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use encode::{tseitin_encode, ClauseSink, Encoder, Signal};
pub use equiv::{
    build_miter, check_equivalence, check_equivalence_with, Counterexample, Equivalence,
    KeyBinding, Miter,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatError {
    #[error("interface mismatch: {0}")]
    Interface(String),
    #[error("solver model violates clause {0}")]
    ModelViolation(usize),
    #[error("counterexample failed simulation confirmation")]
    UnconfirmedCounterexample,
    #[error("key vector has {got} bits, netlist has {expected} key inputs")]
    KeyWidth { expected: usize, got: usize },
}

/// A clause list with a net-name ↔ variable map.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
    pub net_vars: Vec<(String, Var)>,
}

impl CnfFormula {
    pub fn var_of(&self, net: &str) -> Option<Var> {
        self.net_vars.iter().find(|(n, _)| n == net).map(|&(_, v)| v)
    }

    pub fn to_dimacs(&self) -> String {
        cdcl::write_dimacs(&cdcl::Cnf {
            num_vars: self.num_vars,
            clauses: self.clauses.clone(),
        })
    }

    /// Sidecar text: one `name variable` line per mapped net (1-based variables).
    pub fn var_map_text(&self) -> String {
        let mut s = String::new();
        for (name, v) in &self.net_vars {
            writeln!(s, "{name} {}", v.index() + 1).unwrap();
        }
        s
    }

    pub fn satisfied_by(&self, model: &[bool]) -> Result<(), usize> {
        check_clauses(&self.clauses, model)
    }
}

fn check_clauses(clauses: &[Vec<Lit>], model: &[bool]) -> Result<(), usize> {
    let value = |l: Lit| model.get(l.var().index()).copied().unwrap_or(false) != l.is_negative();
    match clauses.iter().position(|c| !c.iter().any(|&l| value(l))) {
        Some(i) => Err(i),
        None => Ok(()),
    }
}

/// Wall-time and conflict limits; whichever runs out first stops the search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveBudget {
    pub conflicts: Option<u64>,
    pub time: Option<Duration>,
}

impl SolveBudget {
    pub fn unlimited() -> SolveBudget {
        SolveBudget::default()
    }

    pub fn conflicts(n: u64) -> SolveBudget {
        SolveBudget {
            conflicts: Some(n),
            time: None,
        }
    }

    pub fn with_time(self, time: Duration) -> SolveBudget {
        SolveBudget {
            time: Some(time),
            ..self
        }
    }

    /// The part of the budget left after spending `conflicts` since `start`.
    pub fn remaining(&self, start: Instant, conflicts: u64) -> Option<Budget> {
        let left = match self.conflicts {
            Some(c) if conflicts >= c => return None,
            Some(c) => Some(c - conflicts),
            None => None,
        };
        let deadline = match self.time {
            Some(t) => {
                let d = start + t;
                if Instant::now() >= d {
                    return None;
                }
                Some(d)
            }
            None => None,
        };
        Some(Budget {
            conflicts: left,
            deadline,
            interrupt: None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Satisfiable,
    Unsatisfiable,
    ResourceLimit,
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Indexed by variable; present exactly when satisfiable.
    pub model: Option<Vec<bool>>,
    pub conflicts: u64,
    pub wall_time: Duration,
}

/// Solves a standalone formula. Models are checked against every clause.
pub fn solve(
    formula: &CnfFormula,
    assumptions: &[Lit],
    budget: &SolveBudget,
) -> Result<SolveOutcome, SatError> {
    let start = Instant::now();
    let mut s = CheckedSolver::new();
    s.reserve(formula.num_vars);
    for c in &formula.clauses {
        s.add_clause(c);
    }
    let status = s.solve(assumptions, budget, start)?;
    Ok(SolveOutcome {
        status,
        model: (status == SolveStatus::Satisfiable).then(|| s.model()),
        conflicts: s.conflicts(),
        wall_time: start.elapsed(),
    })
}

/// An incremental solver that keeps its clauses so every model can be
/// checked before it is reported.
pub struct CheckedSolver {
    solver: Solver,
    clauses: Vec<Vec<Lit>>,
}

impl Default for CheckedSolver {
    fn default() -> CheckedSolver {
        CheckedSolver::new()
    }
}

impl CheckedSolver {
    pub fn new() -> CheckedSolver {
        CheckedSolver {
            solver: Solver::new(),
            clauses: Vec::new(),
        }
    }

    pub fn reserve(&mut self, n: usize) {
        self.solver.reserve_vars(n);
    }

    pub fn conflicts(&self) -> u64 {
        self.solver.stats().conflicts
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Solves under assumptions with the budget measured from `start` and the
    /// solver's own conflict counter at the time of the call.
    pub fn solve_from(
        &mut self,
        assumptions: &[Lit],
        budget: Option<Budget>,
    ) -> Result<SolveStatus, SatError> {
        let Some(budget) = budget else {
            return Ok(SolveStatus::ResourceLimit);
        };
        let status = match self.solver.solve_with(assumptions, &budget) {
            SolveResult::Sat => SolveStatus::Satisfiable,
            SolveResult::Unsat => SolveStatus::Unsatisfiable,
            SolveResult::Unknown => SolveStatus::ResourceLimit,
        };
        if status == SolveStatus::Satisfiable {
            check_clauses(&self.clauses, self.solver.model()).map_err(SatError::ModelViolation)?;
            for &a in assumptions {
                if !self.solver.model_value(a) {
                    return Err(SatError::ModelViolation(usize::MAX));
                }
            }
        }
        Ok(status)
    }

    pub fn solve(
        &mut self,
        assumptions: &[Lit],
        budget: &SolveBudget,
        start: Instant,
    ) -> Result<SolveStatus, SatError> {
        let b = budget.remaining(start, 0);
        self.solve_from(assumptions, b)
    }

    pub fn value(&self, lit: Lit) -> bool {
        self.solver.model_value(lit)
    }

    pub fn signal_value(&self, s: Signal) -> bool {
        match s {
            Signal::Const(b) => b,
            Signal::Lit(l) => self.value(l),
        }
    }

    pub fn model(&self) -> Vec<bool> {
        self.solver.model().to_vec()
    }
}

impl ClauseSink for CheckedSolver {
    fn new_var(&mut self) -> Var {
        self.solver.new_var()
    }

    fn add_clause(&mut self, clause: &[Lit]) {
        self.clauses.push(clause.to_vec());
        self.solver.add_clause(clause);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contradiction_is_unsatisfiable() {
        let mut f = CnfFormula::default();
        let x = f.new_var().positive();
        f.add_clause(&[x]);
        f.add_clause(&[!x]);
        let o = solve(&f, &[], &SolveBudget::unlimited()).unwrap();
        assert_eq!(o.status, SolveStatus::Unsatisfiable);
        assert!(o.model.is_none());
    }

    #[test]
    fn exhausted_budget_is_resource_limit() {
        let b = SolveBudget::conflicts(5);
        assert!(b.remaining(Instant::now(), 5).is_none());
        assert_eq!(b.remaining(Instant::now(), 2).unwrap().conflicts, Some(3));
    }
}
