//! Incremental CDCL solver tuned for many small, related queries: bucketed
//! variable activity, per-query temporary clauses and restriction of
//! decisions to a variable domain.

mod clause;
mod dimacs;
mod solver;
mod vsids;

pub use dimacs::{Cnf, DimacsError, MAX_DIMACS_VARS};
pub use solver::{SolveResult, Solver, Stats};
pub use vsids::{BucketVsids, BUCKETS};
