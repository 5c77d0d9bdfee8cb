//! Inductive generalization: literal dropping, optionally handling
//! counterexamples to generalization (CTGs) and, recursively, their
//! predecessors.

use super::Ic3;
use logic_form::{Cube, Lit};
use satcore::SolveResult;
use serde::Serialize;

/// A concrete state and a bound on its distance from the reset states.
pub(super) type Reached = (Vec<bool>, usize);

/// Bound on the remembered reachable states.
const REACHED_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MicKind {
    Standard,
    Ctg,
    ExCtg,
}

/// Strategy for a cube that failed to be blocked `failures` times.
/// Monotone in `failures`.
pub fn select_strategy(failures: u32, t1: u32, t2: u32) -> MicKind {
    if failures >= t2 {
        MicKind::ExCtg
    } else if failures >= t1 {
        MicKind::Ctg
    } else {
        MicKind::Standard
    }
}

impl Ic3 {
    /// Shrink `cube`, relatively inductive at `level`, to a smaller cube
    /// that is still relatively inductive and excludes the reset states.
    pub(super) fn mic(&mut self, level: usize, mut cube: Cube, kind: MicKind, depth: usize) -> Cube {
        match kind {
            MicKind::Standard => self.stats.mic_standard += 1,
            MicKind::Ctg => self.stats.mic_ctg += 1,
            MicKind::ExCtg => self.stats.mic_exctg += 1,
        }
        let mut order: Vec<Lit> = cube.lits().to_vec();
        order.sort_by(|a, b| {
            self.activity[a.var().index()]
                .partial_cmp(&self.activity[b.var().index()])
                .unwrap()
                .then(a.var().cmp(&b.var()))
        });
        let mut budget = self.opts.exctg_budget;
        for lit in order {
            if cube.len() <= 1 {
                break;
            }
            if !cube.contains(lit) {
                continue;
            }
            let cand = cube.without(lit);
            if self.init_intersects(&cand) {
                continue;
            }
            if self.reached_in(&cand, level).is_some() {
                self.stats.reach_skips += 1;
                continue;
            }
            let reduced = match kind {
                MicKind::Standard => self.inductive(level - 1, &cand, true).then(|| self.inductive_core(&cand)),
                MicKind::Ctg | MicKind::ExCtg => self.down(level, cand, kind, depth, &mut budget),
            };
            if let Some(c) = reduced {
                cube = c;
            }
        }
        cube
    }

    /// Try to make `cube` relatively inductive at `level` by blocking the
    /// predecessors that prevent it, or else by widening it to contain them.
    fn down(&mut self, level: usize, mut cube: Cube, kind: MicKind, depth: usize, budget: &mut usize) -> Option<Cube> {
        let mut ctgs = 0;
        loop {
            if self.init_intersects(&cube) {
                return None;
            }
            if self.reached_in(&cube, level).is_some() {
                self.stats.reach_skips += 1;
                return None;
            }
            if self.inductive(level - 1, &cube, true) {
                return Some(self.inductive_core(&cube));
            }
            let full = self.model_state();
            if level == 1 {
                self.note_reset_successor(&cube);
            }
            if depth < self.opts.ctg_depth && ctgs < self.opts.ctg_max && level >= 2 {
                let (ctg, _) = self.lift(Some(&cube));
                if !self.init_intersects(&ctg) && self.block_ctg(level - 1, ctg, kind == MicKind::ExCtg, depth, budget).is_ok() {
                    ctgs += 1;
                    continue;
                }
            }
            ctgs = 0;
            let joined = cube.filter(|l| full.contains(&l));
            if joined.len() == cube.len() {
                return None;
            }
            cube = joined;
        }
    }

    /// Try to block the state cube `s` at `level`. The recursive variant
    /// also blocks predecessors of `s` one level lower, spending one unit
    /// of `budget` per predecessor. A failure may come with a concrete
    /// state of `s` that is reachable within `level` steps.
    fn block_ctg(&mut self, level: usize, s: Cube, recursive: bool, depth: usize, budget: &mut usize) -> Result<(), Option<Reached>> {
        if level == 0 || self.init_intersects(&s) {
            return Err(self.reset_state_in(&s).map(|st| (st, 0)));
        }
        if let Some(r) = self.reached_in(&s, level) {
            self.stats.reach_skips += 1;
            return Err(Some(r));
        }
        loop {
            self.stats.ctg_attempts += 1;
            if self.inductive(level - 1, &s, true) {
                let core = self.inductive_core(&s);
                let g = self.mic(level, core, MicKind::Standard, depth + 1);
                let (l, g) = self.push_lemma(level, g);
                self.add_lemma(l, g);
                return Ok(());
            }
            if level == 1 {
                return Err(self.note_reset_successor(&s));
            }
            if !recursive || *budget == 0 {
                return Err(None);
            }
            *budget -= 1;
            let (pred, inputs) = self.lift(Some(&s));
            match self.block_ctg(level - 1, pred, true, depth, budget) {
                Ok(()) => {}
                Err(Some((st, d))) => {
                    // every state of the lifted predecessor steps into `s`
                    let next = self.successor(&st, &inputs).filter(|n| self.state_in(&s, n));
                    return Err(next.map(|n| {
                        self.note_reached(n.clone(), d + 1);
                        (n, d + 1)
                    }));
                }
                Err(None) => return Err(None),
            }
        }
    }

    fn state_in(&self, cube: &Cube, state: &[bool]) -> bool {
        cube.iter().all(|l| state[self.ts.latch_index(l.var()).unwrap()] != l.is_negated())
    }

    /// A known reachable state of `cube` at distance at most `level`.
    fn reached_in(&self, cube: &Cube, level: usize) -> Option<Reached> {
        self.reached.iter().find(|(st, d)| *d <= level && self.state_in(cube, st)).cloned()
    }

    fn note_reached(&mut self, state: Vec<bool>, dist: usize) {
        if let Some(e) = self.reached.iter_mut().find(|(st, _)| *st == state) {
            e.1 = e.1.min(dist);
        } else if self.reached.len() < REACHED_CAP {
            self.reached.push((state, dist));
        }
    }

    /// A reset state inside `cube`, when reset values are per latch.
    fn reset_state_in(&self, cube: &Cube) -> Option<Vec<bool>> {
        if self.init_solver.is_some() {
            return None;
        }
        let ts = &self.ts;
        let state: Vec<bool> = ts
            .latches
            .iter()
            .zip(&ts.init)
            .map(|(l, i)| cube.lit_of(*l).map(|l| !l.is_negated()).or(*i).unwrap_or(false))
            .collect();
        ts.init.iter().zip(&state).all(|(i, b)| i.iter().all(|i| i == b)).then_some(state)
    }

    /// Concrete successor of `state` under `inputs` (unknown inputs low).
    fn successor(&mut self, state: &[bool], inputs: &[Option<bool>]) -> Option<Vec<bool>> {
        let ts = self.ts.clone();
        let mut assumptions: Vec<Lit> = ts.latches.iter().zip(state).map(|(l, b)| Lit::new(*l, !b)).collect();
        assumptions.extend(ts.inputs.iter().zip(inputs).map(|(v, b)| Lit::new(*v, !b.unwrap_or(false))));
        if self.sim.solve(&assumptions) != SolveResult::Sat {
            return None;
        }
        ts.primes.iter().map(|p| self.sim.model_value(p.lit())).collect()
    }

    /// After a failed query relative to the reset states: record the
    /// model's successor, which lies in `cube`, as reachable in one step.
    fn note_reset_successor(&mut self, cube: &Cube) -> Option<Reached> {
        let state: Option<Vec<bool>> = self.ts.latches.iter().map(|l| self.solver.model_value(l.lit())).collect();
        let inputs = self.model_inputs();
        let next = self.successor(&state?, &inputs).filter(|n| self.state_in(cube, n))?;
        self.note_reached(next.clone(), 1);
        Some((next, 1))
    }
}
