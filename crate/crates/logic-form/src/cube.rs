use crate::{Lit, Var, VarMap};
use std::fmt;
use std::ops::{Deref, Not};
use thiserror::Error;

/// Both polarities of a variable were present; the caller must drop the
/// clause (tautology) or the cube (contradiction).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("both polarities of {0} present")]
pub struct TautologyError(pub Var);

fn canonical(mut lits: Vec<Lit>) -> Result<Vec<Lit>, TautologyError> {
    lits.sort_unstable();
    lits.dedup();
    for w in lits.windows(2) {
        if w[0].var() == w[1].var() {
            return Err(TautologyError(w[0].var()));
        }
    }
    Ok(lits)
}

fn subset(a: &[Lit], b: &[Lit]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut j = 0;
    for &l in a {
        while j < b.len() && b[j] < l {
            j += 1;
        }
        if j == b.len() || b[j] != l {
            return false;
        }
        j += 1;
    }
    true
}

macro_rules! lit_set {
    ($name:ident, $join:literal) => {
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
        pub struct $name(Vec<Lit>);

        impl $name {
            pub fn new() -> Self {
                Self(Vec::new())
            }

            /// Sort and deduplicate.
            pub fn canonicalize(lits: impl IntoIterator<Item = Lit>) -> Result<Self, TautologyError> {
                canonical(lits.into_iter().collect()).map(Self)
            }

            /// Caller guarantees the literals are sorted and duplicate free.
            pub fn from_sorted(lits: Vec<Lit>) -> Self {
                debug_assert!(lits.windows(2).all(|w| w[0].var() < w[1].var()));
                Self(lits)
            }

            pub fn lits(&self) -> &[Lit] {
                &self.0
            }

            pub fn into_lits(self) -> Vec<Lit> {
                self.0
            }

            /// `true` iff every literal of `self` is in `other`.
            pub fn subsumes(&self, other: &Self) -> bool {
                subset(&self.0, &other.0)
            }

            pub fn contains(&self, lit: Lit) -> bool {
                self.0.binary_search(&lit).is_ok()
            }

            /// The literal over `var`, if any.
            pub fn lit_of(&self, var: Var) -> Option<Lit> {
                let i = self.0.partition_point(|l| l.var() < var);
                self.0.get(i).copied().filter(|l| l.var() == var)
            }

            /// Relabel every variable. Fails only if the relabeling merges
            /// two variables with opposite polarity.
            pub fn map(&self, map: &VarMap) -> Result<Self, TautologyError> {
                Self::canonicalize(self.0.iter().map(|l| l.map(map)))
            }

            pub fn filter(&self, mut keep: impl FnMut(Lit) -> bool) -> Self {
                Self(self.0.iter().copied().filter(|&l| keep(l)).collect())
            }

            pub fn without(&self, lit: Lit) -> Self {
                self.filter(|l| l != lit)
            }

            /// Space separated DIMACS integers, without the terminating 0.
            pub fn to_dimacs(&self) -> String {
                let v: Vec<String> = self.0.iter().map(|l| l.to_dimacs().to_string()).collect();
                v.join(" ")
            }
        }

        impl Deref for $name {
            type Target = [Lit];

            fn deref(&self) -> &[Lit] {
                &self.0
            }
        }

        impl<'a> IntoIterator for &'a $name {
            type Item = &'a Lit;
            type IntoIter = std::slice::Iter<'a, Lit>;

            fn into_iter(self) -> Self::IntoIter {
                self.0.iter()
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Display::fmt(self, f)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "(")?;
                for (i, l) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, $join)?;
                    }
                    write!(f, "{l}")?;
                }
                write!(f, ")")
            }
        }
    };
}

lit_set!(Cube, " ∧ ");
lit_set!(Clause, " ∨ ");

impl Not for &Cube {
    type Output = Clause;

    fn not(self) -> Clause {
        // negation flips the low bit only, so the order is preserved
        Clause(self.0.iter().map(|&l| !l).collect())
    }
}

impl Not for Cube {
    type Output = Clause;

    fn not(self) -> Clause {
        !&self
    }
}

impl Not for &Clause {
    type Output = Cube;

    fn not(self) -> Cube {
        Cube(self.0.iter().map(|&l| !l).collect())
    }
}

impl Not for Clause {
    type Output = Cube;

    fn not(self) -> Cube {
        !&self
    }
}
