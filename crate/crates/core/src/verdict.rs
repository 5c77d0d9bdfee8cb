use aig::WitnessTrace;
use logic_form::Clause;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

/// Evidence for a safe verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Clauses over state variables whose conjunction with the negated bad
    /// literal is an inductive invariant.
    Invariant(Vec<Clause>),
    /// The property is `k`-inductive and no bad state is reachable within
    /// `k` steps. With `simple_path` the inductive step only considers
    /// paths whose leading states are pairwise distinct.
    KInduction { k: usize, simple_path: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Safe(Certificate),
    Unsafe(WitnessTrace),
    Unknown(String),
}

impl Verdict {
    pub fn is_definitive(&self) -> bool {
        !matches!(self, Verdict::Unknown(_))
    }

    /// HWMCC-style status digit.
    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Safe(_) => "0",
            Verdict::Unsafe(_) => "1",
            Verdict::Unknown(_) => "2",
        }
    }

    /// Process exit code: 20 safe, 10 unsafe, 0 unknown.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Safe(_) => 20,
            Verdict::Unsafe(_) => 10,
            Verdict::Unknown(_) => 0,
        }
    }
}

/// Cooperative cancellation flag shared between an engine and its owner.
#[derive(Clone, Debug, Default)]
pub struct Cancel(Arc<AtomicBool>);

impl Cancel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    #[inline]
    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}
