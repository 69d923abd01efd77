//! DIMACS CNF reading and writing.

use std::fmt::Write as _;

use thiserror::Error;

use crate::lit::Lit;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: missing or malformed `p cnf` header")]
    Header { line: usize },
    #[error("line {line}: invalid literal `{token}`")]
    Literal { line: usize, token: String },
    #[error("line {line}: literal {lit} exceeds declared variable count {vars}")]
    VarOutOfRange { line: usize, lit: i32, vars: usize },
    #[error("declared {declared} clauses but found {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("last clause is not terminated by 0")]
    Unterminated,
}

/// A plain clause list, as read from or written to a DIMACS file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

pub fn parse_dimacs(text: &str) -> Result<Cnf, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(DimacsError::Header { line: line_no });
            }
            let vars = parts[2].parse().map_err(|_| DimacsError::Header { line: line_no })?;
            let count = parts[3].parse().map_err(|_| DimacsError::Header { line: line_no })?;
            header = Some((vars, count));
            continue;
        }
        let (vars, _) = header.ok_or(DimacsError::Header { line: line_no })?;
        for tok in line.split_whitespace() {
            let v: i32 = tok.parse().map_err(|_| DimacsError::Literal {
                line: line_no,
                token: tok.to_string(),
            })?;
            if v == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                if v.unsigned_abs() as usize > vars {
                    return Err(DimacsError::VarOutOfRange {
                        line: line_no,
                        lit: v,
                        vars,
                    });
                }
                current.push(Lit::from_dimacs(v));
            }
        }
    }
    let (num_vars, declared) = header.ok_or(DimacsError::Header { line: 0 })?;
    if !current.is_empty() {
        return Err(DimacsError::Unterminated);
    }
    if declared != clauses.len() {
        return Err(DimacsError::ClauseCount {
            declared,
            found: clauses.len(),
        });
    }
    Ok(Cnf { num_vars, clauses })
}

/// Standard DIMACS text: `p cnf V C` header, one zero-terminated clause per line.
pub fn write_dimacs(cnf: &Cnf) -> String {
    let mut out = String::new();
    writeln!(out, "p cnf {} {}", cnf.num_vars, cnf.clauses.len()).unwrap();
    for clause in &cnf.clauses {
        for lit in clause {
            write!(out, "{} ", lit.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}
