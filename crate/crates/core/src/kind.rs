//! k-induction with optional simple-path constraints.

use crate::bmc::Unrolling;
use crate::certificate::SIMPLE_PATH_FRAMES;
use crate::transys::TranSys;
use crate::verdict::{Cancel, Certificate, Verdict};
use satcore::SolveResult;

/// Prove the property `k`-inductive for some `k <= max_k`, or find a
/// counterexample of length at most `max_k`. With `simple_path`, the
/// inductive step requires the first [`SIMPLE_PATH_FRAMES`] states of its
/// path to be pairwise distinct.
pub fn kind(ts: &TranSys, max_k: usize, simple_path: bool, cancel: &Cancel) -> Verdict {
    let mut base = Unrolling::new(ts, true);
    let mut step = Unrolling::new(ts, false);
    step.assert_constraints(0);
    for k in 0..=max_k {
        if cancel.is_cancelled() {
            return Verdict::Unknown(format!("cancelled at k = {k}"));
        }
        // base: a counterexample of length exactly k
        base.reach(k);
        let g = base.guarded_bad(k, k);
        if base.solver.solve(&[g]) == SolveResult::Sat {
            return Verdict::Unsafe(base.u.trace(ts, k, |l| base.solver.model_value(l)));
        }
        base.solver.add_clause(&[!g]);
        base.assert_constraints(k);
        if k == 0 {
            continue;
        }
        // step: k good states followed by a bad one
        step.reach(k);
        step.assert_constraints(k);
        let prev_bad = step.bad(k - 1);
        step.solver.add_clause(&[!prev_bad]);
        if simple_path && k < SIMPLE_PATH_FRAMES {
            for i in 0..k {
                let mut some = Vec::new();
                for l in &ts.latches {
                    let (a, b) = (step.u.lit(l.lit(), i), step.u.lit(l.lit(), k));
                    let d = step.fresh();
                    step.solver.add_clause(&[!d, a, b]);
                    step.solver.add_clause(&[!d, !a, !b]);
                    some.push(d);
                }
                step.solver.add_clause(&some);
            }
        }
        log::debug!("kind: k = {k}");
        let bad = step.bad(k);
        if step.solver.solve(&[bad]) == SolveResult::Unsat {
            return Verdict::Safe(Certificate::KInduction { k, simple_path });
        }
    }
    Verdict::Unknown(format!("not {max_k}-inductive and no counterexample up to depth {max_k}"))
}
