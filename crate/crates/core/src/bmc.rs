//! Bounded model checking on one incremental solver.
//!
//! Depths are checked in windows of `step`. Constraints of frames inside
//! the current window are tied to the candidate bad step, so a trace that
//! reaches the bad state early in the window is not lost when it cannot be
//! extended to the end of the window.

use crate::transys::{TranSys, UnrolledSys};
use crate::verdict::{Cancel, Verdict};
use logic_form::Lit;
use satcore::{SolveResult, Solver};

/// Incremental unrolling with reset states at frame 0 and the transition
/// relation asserted at every frame; constraints are the caller's business.
pub(crate) struct Unrolling<'a> {
    pub ts: &'a TranSys,
    pub u: UnrolledSys,
    pub solver: Solver,
}

impl<'a> Unrolling<'a> {
    pub fn new(ts: &'a TranSys, with_init: bool) -> Self {
        let u = UnrolledSys::new(ts);
        let mut solver = Solver::new();
        solver.reserve_var(logic_form::Var::new(u.num_vars - 1));
        if with_init {
            for c in u.init_clauses(ts) {
                solver.add_clause(&c);
            }
        }
        for c in u.trans_clauses(ts, 0) {
            solver.add_clause(&c);
        }
        Unrolling { ts, u, solver }
    }

    /// Make frames up to `frame` exist.
    pub fn reach(&mut self, frame: usize) {
        while self.u.depth() < frame {
            self.u.extend(self.ts);
            self.solver.reserve_var(logic_form::Var::new(self.u.num_vars - 1));
            for c in self.u.trans_clauses(self.ts, self.u.depth()) {
                self.solver.add_clause(&c);
            }
        }
    }

    pub fn assert_constraints(&mut self, frame: usize) {
        for c in self.u.constraint_lits(self.ts, frame) {
            self.solver.add_clause(&[c]);
        }
    }

    pub fn bad(&self, frame: usize) -> Lit {
        self.u.lit(self.ts.bad, frame)
    }

    pub fn fresh(&mut self) -> Lit {
        let v = self.solver.new_var();
        self.u.num_vars = self.u.num_vars.max(v.index() + 1);
        v.lit()
    }

    /// A literal implying the bad state at `frame` together with the
    /// constraints of frames `from..=frame`.
    pub fn guarded_bad(&mut self, from: usize, frame: usize) -> Lit {
        let g = self.fresh();
        let b = self.bad(frame);
        self.solver.add_clause(&[!g, b]);
        for k in from..=frame {
            for c in self.u.constraint_lits(self.ts, k) {
                self.solver.add_clause(&[!g, c]);
            }
        }
        g
    }
}

/// Search for a counterexample of length at most `max_depth`, checking
/// `step` depths per solver call.
pub fn bmc(ts: &TranSys, max_depth: usize, step: usize, cancel: &Cancel) -> Verdict {
    let step = step.max(1);
    let mut un = Unrolling::new(ts, true);
    let mut next = 0;
    while next <= max_depth {
        if cancel.is_cancelled() {
            return Verdict::Unknown(format!("cancelled; no counterexample up to depth {}", next as i64 - 1));
        }
        let hi = (next + step - 1).min(max_depth);
        un.reach(hi);
        let guards: Vec<Lit> = (next..=hi).map(|d| un.guarded_bad(next, d)).collect();
        let sel = un.fresh();
        let mut window = vec![!sel];
        window.extend(&guards);
        un.solver.add_clause(&window);
        log::debug!("bmc: depths {next}..={hi}");
        match un.solver.solve(&[sel]) {
            SolveResult::Sat => {
                let d = next
                    + guards
                        .iter()
                        .position(|g| un.solver.model_value(*g) == Some(true))
                        .expect("window clause is satisfied");
                let trace = un.u.trace(ts, d, |l| un.solver.model_value(l));
                return Verdict::Unsafe(trace);
            }
            SolveResult::Unsat => {
                un.solver.add_clause(&[!sel]);
                // any longer trace satisfies the constraints of this window
                for k in next..=hi {
                    un.assert_constraints(k);
                }
                next = hi + 1;
            }
        }
    }
    Verdict::Unknown(format!("no counterexample up to depth {max_depth}"))
}
