//! A small incremental CDCL SAT solver.
//!
//! ```
//! use cdcl::{Lit, Solver, SolveResult};
//!
//! let mut s = Solver::new();
//! s.add_clause(&[Lit::from_dimacs(1), Lit::from_dimacs(2)]);
//! s.add_clause(&[Lit::from_dimacs(-1)]);
//! assert_eq!(s.solve(), SolveResult::Sat);
//! assert!(s.model_value(Lit::from_dimacs(2)));
//! ```

mod dimacs;
mod heap;
mod lit;
mod solver;

pub use dimacs::{parse_dimacs, write_dimacs, Cnf, DimacsError};
pub use lit::{Lit, Var};
pub use solver::{Budget, SolveResult, Solver, Stats};
