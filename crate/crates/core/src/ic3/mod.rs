//! IC3 with delta-encoded frames on a single incremental solver.
//!
//! Frame `i` has an activation variable `act_i` with `act_i → act_{i+1}`;
//! a lemma blocked at level `i` is the clause `¬cube ∨ ¬act_i`, so assuming
//! `act_i` enables exactly the lemmas of `F_i`. Frame 0 is the reset state,
//! encoded as `init ∨ ¬act_0`.

mod mic;
mod obligation;

pub use mic::{select_strategy, MicKind};

use crate::transys::TranSys;
use crate::verdict::{Cancel, Certificate, Verdict};
use aig::WitnessTrace;
use log::{debug, info};
use logic_form::{Clause, Cube, Lit, Var};
use obligation::{ObligationQueue, Obligations};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use satcore::{SolveResult, Solver};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::Arc;

/// How blocked cubes are generalized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Generalization {
    Static(MicKind),
    /// Escalate per cube with the number of failed block attempts.
    Dynamic,
}

#[derive(Clone, Debug)]
pub struct Ic3Options {
    pub generalization: Generalization,
    /// Maximal nesting of counterexample-to-generalization handling.
    pub ctg_depth: usize,
    /// Blocked CTGs per literal drop.
    pub ctg_max: usize,
    /// Block attempts per generalization call in the recursive variant.
    pub exctg_budget: usize,
    /// Failed attempts before escalating to Ctg, resp. ExCtg.
    pub dynamic_t1: u32,
    pub dynamic_t2: u32,
    /// Re-enqueue a blocked obligation one frame higher.
    pub push_forward: bool,
    pub seed: u64,
    /// Re-solve every restricted query without the restriction.
    pub check_domain: bool,
    /// Verify the frame invariants after each blocking phase.
    pub check_frames: bool,
    /// Keep strategy decisions and side-by-side generalization probes.
    pub record: bool,
}

impl Default for Ic3Options {
    fn default() -> Self {
        Ic3Options {
            generalization: Generalization::Dynamic,
            ctg_depth: 1,
            ctg_max: 3,
            exctg_budget: 200,
            dynamic_t1: 1,
            dynamic_t2: 3,
            push_forward: true,
            seed: 0,
            check_domain: false,
            check_frames: false,
            record: false,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Ic3Stats {
    pub frames: usize,
    pub lemmas: usize,
    pub obligations: usize,
    /// Relative induction queries on proof obligations.
    pub block_attempts: usize,
    pub failed_blocks: usize,
    pub mic_standard: usize,
    pub mic_ctg: usize,
    pub mic_exctg: usize,
    pub ctg_attempts: usize,
    pub sat_calls: usize,
    pub lift_calls: usize,
    pub domain_checks: u64,
    pub domain_mismatches: u64,
    /// Generalization candidates rejected by a known reachable state.
    pub reach_skips: usize,
}

/// Generalization of one cube by every strategy, each on its own copy of
/// the engine, together with the frame each output must be inductive
/// relative to.
#[derive(Clone, Debug)]
pub struct MicProbe {
    pub level: usize,
    pub input: Cube,
    pub outputs: Vec<ProbeOutput>,
}

#[derive(Clone, Debug)]
pub struct ProbeOutput {
    pub kind: MicKind,
    pub cube: Cube,
    /// Lemmas of `F_{level-1}` after the call (empty with `init_frame`).
    pub frame: Vec<Cube>,
    /// `F_{level-1}` is the reset frame.
    pub init_frame: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Records {
    /// Strategy chosen for each blocked obligation cube, in order.
    pub strategies: Vec<(Cube, MicKind)>,
    pub probes: Vec<MicProbe>,
}

#[derive(Clone)]
pub struct Ic3 {
    ts: Arc<TranSys>,
    opts: Ic3Options,
    solver: Solver,
    lift: Solver,
    /// Reset states with the combinational logic, for cubes over internal
    /// signals where the syntactic check is incomplete.
    init_solver: Option<Solver>,
    /// Transition relation and constraints alone, for concrete successors.
    sim: Solver,
    /// Concrete states known reachable, with an upper bound on their
    /// distance from the reset states. A cube containing one of them at
    /// distance `d` cannot become a lemma at any level `>= d`.
    reached: Vec<(Vec<bool>, usize)>,
    acts: Vec<Var>,
    frames: Vec<Vec<Cube>>,
    inf: Vec<Cube>,
    init_of: Vec<Option<bool>>,
    activity: Vec<f64>,
    act_inc: f64,
    failures: HashMap<Cube, u32>,
    base_domain: Vec<Var>,
    prime_cones: Vec<Vec<Var>>,
    bad_domain: Vec<Var>,
    lift_base: Vec<Var>,
    lift_bad: Vec<Var>,
    obligations: Obligations,
    queue: ObligationQueue,
    cancel: Cancel,
    pub stats: Ic3Stats,
    pub records: Records,
}

impl Ic3 {
    pub fn new(ts: Arc<TranSys>, opts: Ic3Options, cancel: Cancel) -> Self {
        let mut solver = Solver::new();
        solver.set_check_domain(opts.check_domain);
        let mut lift = Solver::new();
        let mut sim = Solver::new();
        for s in [&mut solver, &mut lift, &mut sim] {
            s.reserve_var(Var::new(ts.num_vars - 1));
            for c in &ts.trans {
                s.add_clause(c);
            }
        }
        for c in &ts.constraints {
            solver.add_clause(&[*c]);
            sim.add_clause(&[*c]);
        }
        let init_solver = (ts.latches.len() > ts.real_latches).then(|| {
            let mut s = Solver::new();
            s.reserve_var(Var::new(ts.num_vars - 1));
            for c in &ts.trans {
                s.add_clause(c);
            }
            for l in ts.init_cube().iter() {
                s.add_clause(&[*l]);
            }
            s
        });
        let mut init_of = vec![None; ts.num_vars];
        for (l, i) in ts.latches.iter().zip(&ts.init) {
            init_of[l.index()] = *i;
        }
        let mut rng = StdRng::seed_from_u64(opts.seed);
        let activity = (0..ts.num_vars)
            .map(|_| if opts.seed == 0 { 0.0 } else { rng.gen_range(0.0..1e-3) })
            .collect();
        let cons: Vec<Var> = ts.constraints.iter().map(|c| c.var()).collect();
        let base_domain = ts.cone(ts.latches.iter().chain(&cons).copied());
        let prime_cones = ts.primes.iter().map(|p| ts.cone([*p])).collect();
        let bad_domain = ts.cone([ts.bad.var()]);
        let lift_base = ts.cone(cons.iter().copied());
        let lift_bad = ts.cone(cons.iter().copied().chain([ts.bad.var()]));
        Ic3 {
            ts,
            opts,
            solver,
            lift,
            init_solver,
            sim,
            reached: Vec::new(),
            acts: Vec::new(),
            frames: Vec::new(),
            inf: Vec::new(),
            init_of,
            activity,
            act_inc: 1.0,
            failures: HashMap::new(),
            base_domain,
            prime_cones,
            bad_domain,
            lift_base,
            lift_bad,
            obligations: Obligations::default(),
            queue: ObligationQueue::default(),
            cancel,
            stats: Ic3Stats::default(),
            records: Records::default(),
        }
    }

    #[inline]
    pub fn level(&self) -> usize {
        self.frames.len() - 1
    }

    fn extend(&mut self) {
        let act = self.solver.new_var();
        if let Some(&prev) = self.acts.last() {
            self.solver.add_clause(&[!prev.lit(), act.lit()]);
        } else {
            for l in self.ts.init_cube().iter() {
                self.solver.add_clause(&[*l, !act.lit()]);
            }
        }
        self.acts.push(act);
        self.frames.push(Vec::new());
        self.stats.frames = self.frames.len();
    }

    /// Lemmas of `F_level` (all lemmas at `level` or above).
    pub fn frame_lemmas(&self, level: usize) -> Vec<Cube> {
        let lo = level.max(1);
        self.frames[lo.min(self.frames.len())..]
            .iter()
            .flatten()
            .chain(&self.inf)
            .cloned()
            .collect()
    }

    /// Is `cube` syntactically blocked in `F_level`?
    fn blocked(&self, level: usize, cube: &Cube) -> bool {
        self.frames[level..].iter().flatten().chain(&self.inf).any(|c| c.subsumes(cube))
    }

    fn add_lemma(&mut self, level: usize, cube: Cube) {
        if self.blocked(level, &cube) {
            return;
        }
        for f in &mut self.frames[1..=level] {
            f.retain(|c| !cube.subsumes(c));
        }
        let mut clause: Vec<Lit> = cube.iter().map(|l| !*l).collect();
        clause.push(!self.acts[level].lit());
        self.solver.add_clause(&clause);
        for l in cube.iter() {
            self.activity[l.var().index()] += self.act_inc;
        }
        self.act_inc *= 1.02;
        if self.act_inc > 1e100 {
            self.activity.iter_mut().for_each(|a| *a *= 1e-100);
            self.act_inc *= 1e-100;
        }
        self.frames[level].push(cube);
        self.stats.lemmas += 1;
    }

    /// Does `cube` contain a reset state?
    fn init_intersects(&mut self, cube: &Cube) -> bool {
        if cube.iter().any(|l| self.init_of[l.var().index()] == Some(l.is_negated())) {
            return false;
        }
        match &mut self.init_solver {
            None => true,
            Some(s) => s.solve(cube.lits()) == SolveResult::Sat,
        }
    }

    /// Keep a core cube outside the reset states by restoring literals of
    /// the original cube.
    fn fix_init(&mut self, core: Cube, orig: &Cube) -> Cube {
        if !self.init_intersects(&core) {
            return core;
        }
        if self.init_solver.is_none() {
            let l = orig
                .iter()
                .find(|l| self.init_of[l.var().index()] == Some(l.is_negated()))
                .copied()
                .expect("cube excludes the reset states");
            let mut lits = core.into_lits();
            lits.push(l);
            Cube::canonicalize(lits).expect("sub-cube of a consistent cube")
        } else {
            orig.clone()
        }
    }

    fn set_domain(&mut self, primed: &[Lit], with_bad: bool) {
        let ts = &self.ts;
        let mut vars = self.base_domain.clone();
        for l in primed {
            let j = ts.latch_index(ts.unprime(*l).var()).unwrap();
            vars.extend_from_slice(&self.prime_cones[j]);
        }
        if with_bad {
            vars.extend_from_slice(&self.bad_domain);
        }
        self.solver.set_domain(vars);
    }

    /// `F_level ∧ ¬cube ∧ T ∧ cube'` unsatisfiable?
    fn inductive(&mut self, level: usize, cube: &Cube, strengthen: bool) -> bool {
        self.stats.sat_calls += 1;
        if strengthen {
            let clause: Vec<Lit> = cube.iter().map(|l| !*l).collect();
            self.solver.add_temp_clause(&clause);
        }
        let mut assumptions = vec![self.acts[level].lit()];
        assumptions.extend(cube.iter().map(|l| self.ts.prime(*l)));
        self.set_domain(&assumptions[1..], false);
        let res = self.solver.solve(&assumptions);
        self.stats.domain_checks = self.solver.stats().domain_checks;
        self.stats.domain_mismatches = self.solver.stats().domain_mismatches;
        res == SolveResult::Unsat
    }

    /// The part of `cube` used by the last unsatisfiable `inductive` query,
    /// still excluding the reset states.
    fn inductive_core(&mut self, cube: &Cube) -> Cube {
        let core: Vec<Lit> = self.solver.core().iter().filter_map(|l| self.ts.try_unprime(*l)).collect();
        let g = cube.filter(|l| core.contains(&l));
        self.fix_init(g, cube)
    }

    fn model_state(&self) -> Vec<Lit> {
        self.ts
            .latches
            .iter()
            .filter_map(|l| self.solver.model_value(l.lit()).map(|b| Lit::new(*l, !b)))
            .collect()
    }

    fn model_inputs(&self) -> Vec<Option<bool>> {
        self.ts.inputs.iter().map(|i| Some(self.solver.model_value(i.lit()).unwrap_or(false))).collect()
    }

    /// Shrink the model's state to a cube all of whose states reach
    /// `target'` (or the bad literal) with the model's inputs.
    fn lift(&mut self, target: Option<&Cube>) -> (Cube, Vec<Option<bool>>) {
        self.stats.lift_calls += 1;
        let inputs = self.model_inputs();
        let state = self.model_state();
        let ts = self.ts.clone();
        let mut clause: Vec<Lit> = ts.constraints.iter().map(|c| !*c).collect();
        let mut domain;
        match target {
            Some(cube) => {
                domain = self.lift_base.clone();
                for l in cube.iter() {
                    let p = ts.prime(*l);
                    clause.push(!p);
                    domain.extend_from_slice(&self.prime_cones[ts.latch_index(l.var()).unwrap()]);
                }
            }
            None => {
                clause.push(!ts.bad);
                domain = self.lift_bad.clone();
            }
        }
        self.lift.add_temp_clause(&clause);
        self.lift.set_domain(domain);
        let mut assumptions: Vec<Lit> = ts
            .inputs
            .iter()
            .zip(&inputs)
            .filter_map(|(v, b)| b.map(|b| Lit::new(*v, !b)))
            .collect();
        let ni = assumptions.len();
        let mut state_sorted = state.clone();
        state_sorted.sort_by(|a, b| {
            self.activity[b.var().index()]
                .partial_cmp(&self.activity[a.var().index()])
                .unwrap()
                .then(a.cmp(b))
        });
        assumptions.extend(state_sorted);
        let res = self.lift.solve(&assumptions);
        assert_eq!(res, SolveResult::Unsat, "lifting query must be unsatisfiable");
        let core = self.lift.core().to_vec();
        let cube = Cube::canonicalize(assumptions[ni..].iter().copied().filter(|l| core.contains(l)))
            .expect("model state is consistent");
        (cube, inputs)
    }

    fn witness(&self, init: Vec<Option<bool>>, mut inputs: Vec<Vec<Option<bool>>>, mut next: Option<usize>) -> WitnessTrace {
        while let Some(id) = next {
            let ob = &self.obligations.nodes[id];
            inputs.push(ob.inputs.clone());
            next = ob.next;
        }
        WitnessTrace { bad_index: self.ts.bad_index, init, inputs }
    }

    fn model_init(&self) -> Vec<Option<bool>> {
        self.ts.latches[..self.ts.real_latches]
            .iter()
            .map(|l| Some(self.solver.model_value(l.lit()).unwrap_or(false)))
            .collect()
    }

    /// Highest level up to which `cube` stays relatively inductive, with
    /// the cube shrunk by the cores found on the way.
    fn push_lemma(&mut self, level: usize, mut cube: Cube) -> (usize, Cube) {
        for j in level..self.level() {
            if self.inductive(j, &cube, true) {
                cube = self.inductive_core(&cube);
            } else {
                return (j, cube);
            }
        }
        (self.level(), cube)
    }

    fn strategy_for(&self, cube: &Cube) -> MicKind {
        match self.opts.generalization {
            Generalization::Static(k) => k,
            Generalization::Dynamic => select_strategy(
                self.failures.get(cube).copied().unwrap_or(0),
                self.opts.dynamic_t1,
                self.opts.dynamic_t2,
            ),
        }
    }

    fn probe_mic(&mut self, level: usize, cube: &Cube) {
        let mut base = self.clone();
        base.opts.record = false;
        base.records = Records::default();
        let outputs = [MicKind::Standard, MicKind::Ctg, MicKind::ExCtg]
            .into_iter()
            .map(|kind| {
                let mut e = base.clone();
                let out = e.mic(level, cube.clone(), kind, 0);
                ProbeOutput {
                    kind,
                    cube: out,
                    frame: if level > 1 { e.frame_lemmas(level - 1) } else { Vec::new() },
                    init_frame: level == 1,
                }
            })
            .collect();
        self.records.probes.push(MicProbe { level, input: cube.clone(), outputs });
    }

    /// Block obligations until the queue is empty. Returns a witness if an
    /// obligation reaches the reset states.
    fn rec_block(&mut self) -> Result<Option<WitnessTrace>, ()> {
        while let Some((level, id)) = self.queue.pop(&self.obligations) {
            if self.cancel.is_cancelled() {
                return Err(());
            }
            if level > self.level() {
                continue;
            }
            let cube = self.obligations.nodes[id].cube.clone();
            if self.blocked(level, &cube) {
                if self.opts.push_forward && level < self.level() {
                    self.queue.push(level + 1, id, &self.obligations);
                }
                continue;
            }
            self.stats.block_attempts += 1;
            if self.inductive(level - 1, &cube, true) {
                let core = self.inductive_core(&cube);
                let kind = self.strategy_for(&cube);
                if self.opts.record {
                    self.records.strategies.push((cube.clone(), kind));
                    self.probe_mic(level, &core);
                }
                let g = self.mic(level, core, kind, 0);
                let (l2, g) = self.push_lemma(level, g);
                self.add_lemma(l2, g);
                if self.opts.push_forward && l2 < self.level() {
                    self.queue.push(l2 + 1, id, &self.obligations);
                }
            } else {
                self.stats.failed_blocks += 1;
                *self.failures.entry(cube.clone()).or_default() += 1;
                if level == 1 {
                    let init = self.model_init();
                    let inputs = vec![self.model_inputs()];
                    return Ok(Some(self.witness(init, inputs, Some(id))));
                }
                let (pred, inputs) = self.lift(Some(&cube));
                let depth = self.obligations.nodes[id].depth + 1;
                let pid = self.obligations.add(pred, inputs, Some(id), depth);
                self.stats.obligations += 1;
                self.queue.push(level, id, &self.obligations);
                self.queue.push(level - 1, pid, &self.obligations);
            }
        }
        Ok(None)
    }

    /// A bad state in `F_level`, as a lifted cube.
    fn get_bad(&mut self, level: usize) -> Option<(Cube, Vec<Option<bool>>)> {
        self.stats.sat_calls += 1;
        let assumptions = [self.acts[level].lit(), self.ts.bad];
        self.set_domain(&[], true);
        if self.solver.solve(&assumptions) == SolveResult::Sat {
            Some(self.lift(None))
        } else {
            None
        }
    }

    /// Move lemmas forward. Returns the invariant at a fixpoint.
    fn propagate(&mut self) -> Option<Vec<Cube>> {
        for i in 1..self.level() {
            let mut lemmas = self.frames[i].clone();
            lemmas.sort_by_key(|c| c.len());
            for c in lemmas {
                if !self.frames[i].contains(&c) {
                    continue;
                }
                if self.inductive(i, &c, false) {
                    let core = self.inductive_core(&c);
                    self.add_lemma(i + 1, core);
                    // the weaker original stays only if the core did not subsume it
                    self.frames[i].retain(|x| x != &c);
                }
            }
            if self.frames[i].is_empty() {
                return Some(self.frame_lemmas(i + 1));
            }
        }
        None
    }

    /// Verify the frame invariants on fresh solvers: every lemma excludes
    /// the reset states, every lemma at level `i` is inductive relative to
    /// `F_{i-1}`, and `F_i` excludes the bad states below the top level.
    pub fn check_frames(&self) -> Result<(), String> {
        let ts = &self.ts;
        let frame_solver = |level: usize| {
            let mut s = Solver::new();
            for c in &ts.trans {
                s.add_clause(c);
            }
            for c in &ts.constraints {
                s.add_clause(&[*c]);
            }
            if level == 0 {
                for l in ts.init_cube().iter() {
                    s.add_clause(&[*l]);
                }
            } else {
                for c in self.frame_lemmas(level) {
                    s.add_clause(&c.iter().map(|l| !*l).collect::<Vec<_>>());
                }
            }
            s
        };
        let mut init = frame_solver(0);
        for (i, f) in self.frames.iter().enumerate().skip(1) {
            for c in f {
                if init.solve(c.lits()) == SolveResult::Sat {
                    return Err(format!("lemma {c} at level {i} contains a reset state"));
                }
            }
        }
        for i in 1..=self.level() {
            let mut s = frame_solver(i - 1);
            for c in self.frames[i..].iter().flatten() {
                s.add_temp_clause(&c.iter().map(|l| !*l).collect::<Vec<_>>());
                let a: Vec<Lit> = c.iter().map(|l| ts.prime(*l)).collect();
                if s.solve(&a) == SolveResult::Sat {
                    return Err(format!("lemma {c} at level ≥ {i} is not relatively inductive"));
                }
            }
            if i < self.level() && frame_solver(i).solve(&[ts.bad]) == SolveResult::Sat {
                return Err(format!("frame {i} intersects the bad states"));
            }
        }
        Ok(())
    }

    pub fn check(&mut self) -> Verdict {
        self.extend();
        self.stats.sat_calls += 1;
        self.solver.clear_domain();
        if self.solver.solve(&[self.acts[0].lit(), self.ts.bad]) == SolveResult::Sat {
            let init = self.model_init();
            let inputs = vec![self.model_inputs()];
            return Verdict::Unsafe(self.witness(init, inputs, None));
        }
        self.extend();
        loop {
            loop {
                if self.cancel.is_cancelled() {
                    return Verdict::Unknown("cancelled".into());
                }
                let level = self.level();
                let Some((cube, inputs)) = self.get_bad(level) else {
                    break;
                };
                let id = self.obligations.add(cube, inputs, None, 0);
                self.stats.obligations += 1;
                self.queue.clear();
                self.queue.push(level, id, &self.obligations);
                match self.rec_block() {
                    Err(()) => return Verdict::Unknown("cancelled".into()),
                    Ok(Some(w)) => {
                        info!("ic3: counterexample of depth {}", w.depth());
                        return Verdict::Unsafe(w);
                    }
                    Ok(None) => {}
                }
            }
            if self.opts.check_frames {
                if let Err(e) = self.check_frames() {
                    panic!("frame invariant violated: {e}");
                }
            }
            self.extend();
            debug!("ic3: level {} lemmas {:?}", self.level(), self.frames.iter().map(Vec::len).collect::<Vec<_>>());
            if let Some(inv) = self.propagate() {
                info!("ic3: fixpoint at level {} with {} lemmas", self.level(), inv.len());
                let clauses = inv.iter().map(|c| !c).collect::<Vec<Clause>>();
                return Verdict::Safe(Certificate::Invariant(clauses));
            }
        }
    }
}

/// Run IC3 with all constraints abstracted away, adding back the first
/// constraint violated by each spurious counterexample.
pub fn constraint_abstraction(ts: Arc<TranSys>, opts: Ic3Options, cancel: Cancel) -> (Verdict, usize) {
    let mut active: Vec<usize> = Vec::new();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let abs = Arc::new(ts.with_constraints(&active));
        let verdict = Ic3::new(abs, opts.clone(), cancel.clone()).check();
        let Verdict::Unsafe(w) = &verdict else {
            return (verdict, rounds);
        };
        let sim = ts.source.simulate(Some(&w.init), &w.inputs).expect("witness sized to the model");
        let violated = sim.constraints.iter().find_map(|step| {
            (0..step.len()).find(|&i| !step[i] && !active.contains(&i))
        });
        match violated {
            None => return (verdict, rounds),
            Some(i) => {
                debug!("ic3: constraint {i} refined after round {rounds}");
                active.push(i);
                active.sort_unstable();
            }
        }
    }
}
