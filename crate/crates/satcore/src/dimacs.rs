//! DIMACS CNF reading and writing. Variable `n` in the file is `Var(n-1)`.

use logic_form::Lit;
use std::fmt::Write;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("line {0}: missing or malformed 'p cnf' header")]
    Header(usize),
    #[error("line {0}: invalid literal")]
    Literal(usize),
    #[error("line {0}: variable exceeds header count")]
    VarRange(usize),
    #[error("clause count {found} does not match header {expected}")]
    ClauseCount { expected: usize, found: usize },
    #[error("last clause is not terminated by 0")]
    Unterminated,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

/// Upper bound on the variable count accepted from a header.
pub const MAX_DIMACS_VARS: usize = 1 << 26;

impl Cnf {
    pub fn parse(text: &str) -> Result<Cnf, DimacsError> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut cur = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if line.starts_with('p') {
                let f: Vec<&str> = line.split_whitespace().collect();
                let parsed = match f.as_slice() {
                    ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                    _ => None,
                };
                match parsed {
                    Some((v, c)) if header.is_none() && v <= MAX_DIMACS_VARS => {
                        header = Some((v, c))
                    }
                    _ => return Err(DimacsError::Header(line_no)),
                }
                continue;
            }
            let (nv, _) = header.ok_or(DimacsError::Header(line_no))?;
            for tok in line.split_whitespace() {
                let n: i64 = tok.parse().map_err(|_| DimacsError::Literal(line_no))?;
                if n == 0 {
                    clauses.push(std::mem::take(&mut cur));
                    continue;
                }
                if n.unsigned_abs() > nv as u64 {
                    return Err(DimacsError::VarRange(line_no));
                }
                let lit = Lit::from_dimacs(n).ok_or(DimacsError::Literal(line_no))?;
                cur.push(lit);
            }
        }
        let (num_vars, nc) = header.ok_or(DimacsError::Header(0))?;
        if !cur.is_empty() {
            return Err(DimacsError::Unterminated);
        }
        if clauses.len() != nc {
            return Err(DimacsError::ClauseCount { expected: nc, found: clauses.len() });
        }
        Ok(Cnf { num_vars, clauses })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len()).unwrap();
        for c in &self.clauses {
            for l in c {
                write!(out, "{} ", l.to_dimacs()).unwrap();
            }
            out.push_str("0\n");
        }
        out
    }
}
