//! Propositional building blocks shared by the model checker: variables,
//! literals, and canonical cubes/clauses.
//!
//! Variable 0 is reserved for the constant: `x0` is true and `¬x0` is false,
//! which lines up with AIGER literals 1 and 0.

mod cube;
mod lit;

pub use cube::{Clause, Cube, TautologyError};
pub use lit::{Lit, Var, VarMap};
