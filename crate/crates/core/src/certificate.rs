//! Independent checking of verdicts and the certificate file format.
//!
//! ```text
//! inv 2 3        number of clauses, number of latches
//! -1 2 0         literal i in 1..=L is latch i-1; i > L is AIG variable i-L
//! 3 0
//! ```
//!
//! A k-induction certificate is the single line `kind <k> <L>`, or
//! `kind <k> <L> simple` when the inductive step assumes a simple path
//! over its first [`SIMPLE_PATH_FRAMES`] states.

use crate::transys::{unroll, TranSys};
use crate::verdict::Certificate;
use aig::{Aig, WitnessError, WitnessTrace};
use logic_form::{Clause, Lit, Var};
use satcore::{SolveResult, Solver};
use std::fmt::Write;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("invariant mentions variable {0} outside the state space")]
    Malformed(usize),
    #[error("an initial state violates invariant clause {clause:?}")]
    Initiation { clause: Option<usize>, state: Vec<Option<bool>> },
    #[error("invariant is not inductive: clause {clause:?} fails after a step")]
    Consecution { clause: Option<usize>, state: Vec<Option<bool>> },
    #[error("invariant does not exclude the bad states")]
    Safety,
    #[error("bad state reachable at depth {0}")]
    KindBase(usize),
    #[error("property is not {0}-inductive")]
    KindStep(usize),
}

fn latch_values(s: &Solver, lits: &[Lit]) -> Vec<Option<bool>> {
    lits.iter().map(|l| s.model_value(*l)).collect()
}

fn solver_with(clauses: &[Vec<Lit>]) -> Solver {
    let mut s = Solver::new();
    for c in clauses {
        s.add_clause(c);
    }
    s
}

/// Check a safety certificate on fresh solvers. The counter-model in an
/// error holds the latch values of the violating state.
pub fn verify_certificate(ts: &TranSys, cert: &Certificate) -> Result<(), CertificateError> {
    match cert {
        Certificate::Invariant(inv) => verify_invariant(ts, inv),
        Certificate::KInduction { k, simple_path } => verify_kinduction(ts, *k, *simple_path),
    }
}

fn verify_invariant(ts: &TranSys, inv: &[Clause]) -> Result<(), CertificateError> {
    let state_var = |v: Var| v.index() < ts.num_vars && !ts.primes.contains(&v);
    for c in inv {
        if let Some(l) = c.iter().find(|l| !state_var(l.var())) {
            return Err(CertificateError::Malformed(l.var().index()));
        }
    }
    // violations of Inv at a frame: each clause, and the bad literal
    let violations = |u: &crate::transys::UnrolledSys, k: usize| {
        let mut v: Vec<(Option<usize>, Vec<Lit>)> = inv
            .iter()
            .enumerate()
            .map(|(i, c)| (Some(i), c.iter().map(|l| !u.lit(*l, k)).collect()))
            .collect();
        v.push((None, vec![u.lit(ts.bad, k)]));
        v
    };

    // initiation
    let (u0, clauses) = unroll(ts, 0, true);
    let mut s = solver_with(&clauses);
    for (clause, assumption) in violations(&u0, 0) {
        if s.solve(&assumption) == SolveResult::Sat {
            return Err(CertificateError::Initiation {
                clause,
                state: latch_values(&s, &u0.latch_lits(ts, 0)),
            });
        }
    }

    // safety: Inv excludes bad by construction; still check it
    let mut s = solver_with(&clauses[u0.init_clauses(ts).len()..]);
    for c in inv {
        s.add_clause(c);
    }
    s.add_clause(&[!ts.bad]);
    if s.solve(&[ts.bad]) == SolveResult::Sat {
        return Err(CertificateError::Safety);
    }

    // consecution
    let (u1, clauses) = unroll(ts, 1, false);
    let mut s = solver_with(&clauses);
    for c in inv {
        let lits: Vec<Lit> = c.iter().map(|l| u1.lit(*l, 0)).collect();
        s.add_clause(&lits);
    }
    s.add_clause(&[!u1.lit(ts.bad, 0)]);
    for (clause, assumption) in violations(&u1, 1) {
        if s.solve(&assumption) == SolveResult::Sat {
            return Err(CertificateError::Consecution {
                clause,
                state: latch_values(&s, &u1.latch_lits(ts, 0)),
            });
        }
    }
    Ok(())
}

fn verify_kinduction(ts: &TranSys, k: usize, simple_path: bool) -> Result<(), CertificateError> {
    // one unrolling per depth: constraints must only hold up to the bad step
    for d in 0..=k {
        let (u, clauses) = unroll(ts, d, true);
        let mut s = solver_with(&clauses);
        if s.solve(&[u.lit(ts.bad, d)]) == SolveResult::Sat {
            return Err(CertificateError::KindBase(d));
        }
    }
    let (u, clauses) = unroll(ts, k, false);
    let mut s = solver_with(&clauses);
    s.reserve_var(Var::new(u.num_vars - 1));
    for d in 0..k {
        s.add_clause(&[!u.lit(ts.bad, d)]);
    }
    if simple_path {
        let last = k.min(SIMPLE_PATH_FRAMES - 1);
        for j in 1..=last {
            for i in 0..j {
                // some latch differs between frames i and j
                let mut some = Vec::new();
                for l in &ts.latches {
                    let (a, b) = (u.lit(l.lit(), i), u.lit(l.lit(), j));
                    let d = s.new_var().lit();
                    s.add_clause(&[!d, a, b]);
                    s.add_clause(&[!d, !a, !b]);
                    some.push(d);
                }
                s.add_clause(&some);
            }
        }
    }
    if s.solve(&[u.lit(ts.bad, k)]) == SolveResult::Sat {
        return Err(CertificateError::KindStep(k));
    }
    Ok(())
}

/// Replay a counterexample on the source graph.
pub fn verify_witness(aig: &Aig, trace: &WitnessTrace) -> Result<(), WitnessError> {
    trace.verify(aig)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertificateParseError {
    #[error("line {0}: malformed header")]
    Header(usize),
    #[error("line {0}: invalid literal")]
    Literal(usize),
    #[error("clause count {found} does not match header {expected}")]
    ClauseCount { expected: usize, found: usize },
    #[error("latch count {found} does not match the model ({expected})")]
    LatchCount { expected: usize, found: usize },
    #[error("literal {0} does not name a model variable")]
    Range(i64),
    #[error("clause with both polarities of a variable")]
    Tautology,
}

/// Certificate file contents before resolution against a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateFile {
    Invariant { num_latches: usize, clauses: Vec<Vec<i64>> },
    KInduction { k: usize, num_latches: usize, simple_path: bool },
}

/// Number of leading states of the inductive step that a simple-path
/// k-induction proof requires to be pairwise distinct.
pub const SIMPLE_PATH_FRAMES: usize = 11;

/// Upper bound on header counts, keeping allocations bounded on bad input.
const MAX_COUNT: usize = 1 << 26;

impl CertificateFile {
    pub fn parse(text: &str) -> Result<CertificateFile, CertificateParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(CertificateParseError::Header(0))?;
        let f: Vec<&str> = header.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().ok().filter(|&n| n <= MAX_COUNT);
        match f.as_slice() {
            ["kind", k, l, rest @ ..] => {
                let (k, num_latches) =
                    num(k).zip(num(l)).ok_or(CertificateParseError::Header(hl))?;
                let simple_path = match rest {
                    [] => false,
                    ["simple"] => true,
                    _ => return Err(CertificateParseError::Header(hl)),
                };
                if lines.next().is_some() {
                    return Err(CertificateParseError::Header(hl));
                }
                Ok(CertificateFile::KInduction { k, num_latches, simple_path })
            }
            ["inv", n, l] => {
                let (n, num_latches) =
                    num(n).zip(num(l)).ok_or(CertificateParseError::Header(hl))?;
                let mut clauses = Vec::new();
                let mut cur = Vec::new();
                for (ln, line) in lines {
                    for tok in line.split_whitespace() {
                        let v: i64 = tok.parse().map_err(|_| CertificateParseError::Literal(ln))?;
                        if v == 0 {
                            clauses.push(std::mem::take(&mut cur));
                        } else {
                            cur.push(v);
                        }
                    }
                }
                if !cur.is_empty() || clauses.len() != n {
                    return Err(CertificateParseError::ClauseCount {
                        expected: n,
                        found: clauses.len() + usize::from(!cur.is_empty()),
                    });
                }
                Ok(CertificateFile::Invariant { num_latches, clauses })
            }
            _ => Err(CertificateParseError::Header(hl)),
        }
    }

    /// Map file literals onto `ts` variables.
    pub fn resolve(&self, ts: &TranSys) -> Result<Certificate, CertificateParseError> {
        let nl = ts.real_latches;
        let check = |found: usize| {
            if found != nl {
                Err(CertificateParseError::LatchCount { expected: nl, found })
            } else {
                Ok(())
            }
        };
        match self {
            CertificateFile::KInduction { k, num_latches, simple_path } => {
                check(*num_latches)?;
                Ok(Certificate::KInduction { k: *k, simple_path: *simple_path })
            }
            CertificateFile::Invariant { num_latches, clauses } => {
                check(*num_latches)?;
                let max_var = ts.source.max_var as u64;
                let mut inv = Vec::new();
                for c in clauses {
                    let mut lits = Vec::new();
                    for &v in c {
                        let a = v.unsigned_abs();
                        let var = if a <= nl as u64 {
                            ts.latches[a as usize - 1]
                        } else if a - (nl as u64) <= max_var {
                            Var::new((a - nl as u64) as usize)
                        } else {
                            return Err(CertificateParseError::Range(v));
                        };
                        lits.push(Lit::new(var, v < 0));
                    }
                    inv.push(Clause::canonicalize(lits).map_err(|_| CertificateParseError::Tautology)?);
                }
                Ok(Certificate::Invariant(inv))
            }
        }
    }

    pub fn from_certificate(ts: &TranSys, cert: &Certificate) -> CertificateFile {
        let nl = ts.real_latches;
        match cert {
            Certificate::KInduction { k, simple_path } => {
                CertificateFile::KInduction { k: *k, num_latches: nl, simple_path: *simple_path }
            }
            Certificate::Invariant(inv) => CertificateFile::Invariant {
                num_latches: nl,
                clauses: inv
                    .iter()
                    .map(|c| {
                        c.iter()
                            .map(|l| {
                                let idx = match ts.latch_index(l.var()) {
                                    Some(j) if j < nl => j as i64 + 1,
                                    _ => (nl + l.var().index()) as i64,
                                };
                                if l.is_negated() {
                                    -idx
                                } else {
                                    idx
                                }
                            })
                            .collect()
                    })
                    .collect(),
            },
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            CertificateFile::KInduction { k, num_latches, simple_path } => {
                let tail = if *simple_path { " simple" } else { "" };
                writeln!(out, "kind {k} {num_latches}{tail}").unwrap();
            }
            CertificateFile::Invariant { num_latches, clauses } => {
                writeln!(out, "inv {} {}", clauses.len(), num_latches).unwrap();
                for c in clauses {
                    for l in c {
                        write!(out, "{l} ").unwrap();
                    }
                    out.push_str("0\n");
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use aig::parse_aiger;

    const SAFE1: &str = "aag 1 0 1 0 0 1\n2 2\n2\n";
    const UNSAFE1: &str = "aag 1 0 1 0 0 1\n2 3\n2\n";

    fn ts(text: &str) -> TranSys {
        TranSys::encode(&parse_aiger(text.as_bytes()).unwrap(), 0).unwrap()
    }

    #[test]
    fn safe1_invariants() {
        let t = ts(SAFE1);
        let l = t.latches[0].lit();
        let inv = Certificate::Invariant(vec![Clause::canonicalize([!l]).unwrap()]);
        assert_eq!(verify_certificate(&t, &inv), Ok(()));
        assert_eq!(verify_certificate(&t, &Certificate::Invariant(vec![])), Ok(()));
        assert_eq!(verify_certificate(&t, &Certificate::KInduction { k: 1, simple_path: false }), Ok(()));
    }

    #[test]
    fn unsafe1_rejected() {
        let t = ts(UNSAFE1);
        assert!(matches!(
            verify_certificate(&t, &Certificate::Invariant(vec![])),
            Err(CertificateError::Consecution { clause: None, .. })
        ));
        assert_eq!(
            verify_certificate(&t, &Certificate::KInduction { k: 1, simple_path: false }),
            Err(CertificateError::KindBase(1))
        );
    }

    #[test]
    fn wrong_initiation() {
        let t = ts(SAFE1);
        let l = t.latches[0].lit();
        let inv = Certificate::Invariant(vec![Clause::canonicalize([l]).unwrap()]);
        assert!(matches!(
            verify_certificate(&t, &inv),
            Err(CertificateError::Initiation { clause: Some(0), .. })
        ));
    }

    #[test]
    fn file_round_trip() {
        let t = ts(SAFE1);
        let l = t.latches[0].lit();
        let cert = Certificate::Invariant(vec![Clause::canonicalize([!l]).unwrap()]);
        let f = CertificateFile::from_certificate(&t, &cert);
        let text = f.to_text();
        assert_eq!(text, "inv 1 1\n-1 0\n");
        let back = CertificateFile::parse(&text).unwrap();
        assert_eq!(back.resolve(&t).unwrap(), cert);
        let k = CertificateFile::parse("kind 3 1\n").unwrap();
        assert_eq!(k.resolve(&t).unwrap(), Certificate::KInduction { k: 3, simple_path: false });
    }

    #[test]
    fn file_errors() {
        let t = ts(SAFE1);
        assert_eq!(CertificateFile::parse(""), Err(CertificateParseError::Header(0)));
        assert_eq!(CertificateFile::parse("inv x 1"), Err(CertificateParseError::Header(1)));
        assert!(matches!(
            CertificateFile::parse("inv 2 1\n1 0\n"),
            Err(CertificateParseError::ClauseCount { expected: 2, found: 1 })
        ));
        let f = CertificateFile::parse("inv 1 2\n1 0\n").unwrap();
        assert!(matches!(f.resolve(&t), Err(CertificateParseError::LatchCount { .. })));
        let f = CertificateFile::parse("inv 1 1\n9 0\n").unwrap();
        assert_eq!(f.resolve(&t), Err(CertificateParseError::Range(9)));
        let f = CertificateFile::parse("inv 1 1\n1 -1 0\n").unwrap();
        assert_eq!(f.resolve(&t), Err(CertificateParseError::Tautology));
    }
}
