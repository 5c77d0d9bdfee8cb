use crate::clause::{CRef, ClauseDb, Kind, Watcher, CREF_NONE};
use crate::vsids::BucketVsids;
use logic_form::{Lit, Var};

const UNDEF: u8 = 0;
const TRUE: u8 = 1;
const FALSE: u8 = 2;

const DECAY_INTERVAL: u64 = 256;
const RESTART_UNIT: u64 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Sat,
    Unsat,
}

impl SolveResult {
    pub fn is_sat(self) -> bool {
        self == SolveResult::Sat
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub solves: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub restarts: u64,
    /// Restricted solves re-checked against a full solve.
    pub domain_checks: u64,
    /// Re-checks whose full solve gave a different answer.
    pub domain_mismatches: u64,
}

#[inline]
fn lit_value(assigns: &[u8], l: Lit) -> u8 {
    match assigns[l.var().index()] {
        UNDEF => UNDEF,
        a => {
            if (a == TRUE) != l.is_negated() {
                TRUE
            } else {
                FALSE
            }
        }
    }
}

/// Finite Luby sequence 1 1 2 1 1 2 4 ...
fn luby(mut x: u64) -> u64 {
    let (mut size, mut seq) = (1u64, 0u32);
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1 << seq
}

/// Incremental CDCL solver.
///
/// Besides permanent clauses it accepts temporary clauses that only live
/// until the end of the next `solve`, and a decision domain: when set,
/// branching is restricted to the domain while propagation still runs over
/// every clause. A restricted answer equals the unrestricted one whenever
/// every clause outside the domain can be satisfied by extending the
/// assignment, which holds for a domain closed under the cone of influence
/// of the query.
#[derive(Clone, Debug)]
pub struct Solver {
    assigns: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<CRef>,
    phase: Vec<bool>,
    seen: Vec<bool>,
    decision_var: Vec<bool>,
    watches: Vec<Vec<Watcher>>,
    db: ClauseDb,
    learnts: Vec<CRef>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    vsids: BucketVsids,

    domain_stamp: Vec<u32>,
    generation: u32,
    full_domain: bool,
    refill: bool,

    ok: bool,
    assumptions: Vec<Lit>,
    core: Vec<Lit>,
    temp_lit: Option<Lit>,
    temp_pool: Vec<Var>,
    temp_clauses: Vec<CRef>,
    /// A query finished and its trail/temporaries are still in place.
    dirty: bool,

    cla_inc: f32,
    max_learnts: f64,
    conflicts_since_decay: u64,
    check_domain: bool,
    stats: Stats,
}

impl Default for Solver {
    fn default() -> Self {
        Self::new()
    }
}

impl Solver {
    pub fn new() -> Self {
        Solver {
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            phase: Vec::new(),
            seen: Vec::new(),
            decision_var: Vec::new(),
            watches: Vec::new(),
            db: ClauseDb::default(),
            learnts: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            vsids: BucketVsids::new(),
            domain_stamp: Vec::new(),
            generation: 1,
            full_domain: true,
            refill: false,
            ok: true,
            assumptions: Vec::new(),
            core: Vec::new(),
            temp_lit: None,
            temp_pool: Vec::new(),
            temp_clauses: Vec::new(),
            dirty: false,
            cla_inc: 1.0,
            max_learnts: 2000.0,
            conflicts_since_decay: 0,
            check_domain: false,
            stats: Stats::default(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    pub fn new_var(&mut self) -> Var {
        let v = Var::new(self.assigns.len());
        self.assigns.push(UNDEF);
        self.level.push(0);
        self.reason.push(CREF_NONE);
        self.phase.push(false);
        self.seen.push(false);
        self.decision_var.push(true);
        self.domain_stamp.push(0);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.vsids.reserve(self.assigns.len());
        if self.full_domain {
            self.vsids.insert(v);
        }
        v
    }

    /// Make sure `var` exists.
    pub fn reserve_var(&mut self, var: Var) {
        while self.num_vars() <= var.index() {
            self.new_var();
        }
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    /// `false` once the permanent clauses are known to be unsatisfiable.
    pub fn is_ok(&self) -> bool {
        self.ok
    }

    /// Re-solve every domain-restricted query without the restriction on a
    /// copy of the solver, counting disagreements in the statistics.
    pub fn set_check_domain(&mut self, check: bool) {
        self.check_domain = check;
    }

    #[inline]
    fn value(&self, l: Lit) -> u8 {
        lit_value(&self.assigns, l)
    }

    /// Model value after a satisfiable `solve`. Variables outside a
    /// restricted domain may be unassigned.
    pub fn model_value(&self, l: Lit) -> Option<bool> {
        match self.assigns.get(l.var().index()).map(|_| self.value(l)) {
            Some(TRUE) => Some(true),
            Some(FALSE) => Some(false),
            _ => None,
        }
    }

    /// Value fixed at decision level 0, if any.
    pub fn fixed_value(&self, l: Lit) -> Option<bool> {
        if l.var().index() >= self.num_vars() || self.level[l.var().index()] != 0 {
            return None;
        }
        self.model_value(l)
    }

    /// Failed assumptions of the last unsatisfiable `solve`.
    pub fn core(&self) -> &[Lit] {
        &self.core
    }

    fn reset(&mut self) {
        if !self.dirty {
            return;
        }
        self.dirty = false;
        self.cancel_until(0);
        self.purge_temporaries();
    }

    fn purge_temporaries(&mut self) {
        let Some(t) = self.temp_lit.take() else {
            return;
        };
        for c in std::mem::take(&mut self.temp_clauses) {
            if !self.db.get(c).deleted {
                self.detach(c);
                self.db.free(c);
            }
        }
        let db = &self.db;
        self.learnts.retain(|&c| !db.get(c).deleted);
        let v = t.var().index();
        if self.assigns[v] != UNDEF {
            // only ¬t can have been fixed, and nothing is implied by it
            let pos = self.trail.iter().position(|l| l.var() == t.var()).unwrap();
            self.trail.remove(pos);
            if self.qhead > pos {
                self.qhead -= 1;
            }
            self.assigns[v] = UNDEF;
            self.reason[v] = CREF_NONE;
        }
        self.temp_pool.push(t.var());
    }

    fn normalize(&mut self, lits: &[Lit]) -> Option<Vec<Lit>> {
        let mut c: Vec<Lit> = lits.to_vec();
        c.sort_unstable();
        c.dedup();
        for l in &c {
            self.reserve_var(l.var());
        }
        if c.windows(2).any(|w| w[0] == !w[1]) {
            return None;
        }
        if c.iter().any(|&l| self.fixed_value(l) == Some(true)) {
            return None;
        }
        c.retain(|&l| self.fixed_value(l) != Some(false));
        Some(c)
    }

    /// Add a permanent clause. Returns `false` if the solver became
    /// unsatisfiable at level 0.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        self.reset();
        if !self.ok {
            return false;
        }
        let Some(c) = self.normalize(lits) else {
            return true;
        };
        match c.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(c[0], CREF_NONE);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                let cref = self.db.alloc(c, Kind::Problem, false);
                self.attach(cref);
            }
        }
        self.ok
    }

    /// Add a clause that is dropped when the next `solve` completes.
    pub fn add_temp_clause(&mut self, lits: &[Lit]) {
        self.reset();
        if !self.ok {
            return;
        }
        let t = match self.temp_lit {
            Some(t) => t,
            None => {
                let v = match self.temp_pool.pop() {
                    Some(v) => v,
                    None => {
                        let v = self.new_var();
                        self.decision_var[v.index()] = false;
                        v
                    }
                };
                self.temp_lit = Some(v.lit());
                v.lit()
            }
        };
        let mut with_guard = lits.to_vec();
        with_guard.push(!t);
        let Some(c) = self.normalize(&with_guard) else {
            return;
        };
        if c.len() == 1 {
            // every literal is false at level 0: the query is unsatisfiable
            if self.value(c[0]) == UNDEF {
                self.enqueue(c[0], CREF_NONE);
            }
            return;
        }
        let cref = self.db.alloc(c, Kind::Problem, true);
        self.attach(cref);
        self.temp_clauses.push(cref);
    }

    /// Restrict decisions to `vars` for subsequent solves.
    pub fn set_domain(&mut self, vars: impl IntoIterator<Item = Var>) {
        self.reset();
        self.generation = self.generation.wrapping_add(1);
        self.full_domain = false;
        for v in vars {
            self.reserve_var(v);
            self.domain_stamp[v.index()] = self.generation;
            if self.assigns[v.index()] == UNDEF && self.decision_var[v.index()] {
                self.vsids.insert(v);
            }
        }
    }

    pub fn clear_domain(&mut self) {
        self.reset();
        if !self.full_domain {
            self.full_domain = true;
            self.generation = self.generation.wrapping_add(1);
            self.refill = true;
        }
    }

    #[inline]
    fn in_domain(&self, v: Var) -> bool {
        self.full_domain || self.domain_stamp[v.index()] == self.generation
    }

    fn attach(&mut self, c: CRef) {
        let lits = &self.db.get(c).lits;
        let (a, b) = (lits[0], lits[1]);
        self.watches[a.code()].push(Watcher { cref: c, blocker: b });
        self.watches[b.code()].push(Watcher { cref: c, blocker: a });
    }

    fn detach(&mut self, c: CRef) {
        let lits = &self.db.get(c).lits;
        let (a, b) = (lits[0], lits[1]);
        self.watches[a.code()].retain(|w| w.cref != c);
        self.watches[b.code()].retain(|w| w.cref != c);
    }

    #[inline]
    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    #[inline]
    fn enqueue(&mut self, l: Lit, reason: CRef) {
        let v = l.var().index();
        debug_assert_eq!(self.assigns[v], UNDEF);
        self.assigns[v] = if l.is_negated() { FALSE } else { TRUE };
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn cancel_until(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level];
        for i in (lim..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var();
            self.assigns[v.index()] = UNDEF;
            self.reason[v.index()] = CREF_NONE;
            self.phase[v.index()] = !l.is_negated();
            if self.decision_var[v.index()] && self.in_domain(v) {
                self.vsids.insert(v);
            }
        }
        self.trail.truncate(lim);
        self.qhead = lim;
        self.trail_lim.truncate(level);
    }

    /// Unit propagation; returns a conflicting clause.
    fn propagate(&mut self) -> Option<CRef> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let (mut i, mut j) = (0, 0);
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if lit_value(&self.assigns, w.blocker) == TRUE {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let c = &mut self.db.clauses[w.cref as usize];
                if c.lits[0] == false_lit {
                    c.lits.swap(0, 1);
                }
                let first = c.lits[0];
                let nw = Watcher { cref: w.cref, blocker: first };
                if first != w.blocker && lit_value(&self.assigns, first) == TRUE {
                    ws[j] = nw;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..c.lits.len() {
                    if lit_value(&self.assigns, c.lits[k]) != FALSE {
                        c.lits.swap(1, k);
                        self.watches[c.lits[1].code()].push(nw);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = nw;
                j += 1;
                if lit_value(&self.assigns, first) == FALSE {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                    self.qhead = self.trail.len();
                } else {
                    self.enqueue(first, w.cref);
                }
            }
            ws.truncate(j);
            self.watches[false_lit.code()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_clause(&mut self, c: CRef) {
        let cl = self.db.get_mut(c);
        if cl.kind != Kind::Learnt {
            return;
        }
        cl.activity += self.cla_inc;
        if cl.activity > 1e20 {
            for &l in &self.learnts {
                self.db.clauses[l as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, mut confl: CRef) -> (Vec<Lit>, usize) {
        let mut learnt = vec![Lit::TRUE];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let dl = self.decision_level() as u32;
        loop {
            self.bump_clause(confl);
            let start = usize::from(p.is_some());
            let n = self.db.get(confl).lits.len();
            for k in start..n {
                let q = self.db.get(confl).lits[k];
                let v = q.var().index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.vsids.bump(q.var());
                    if self.level[v] >= dl {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().index()] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            confl = self.reason[lit.var().index()];
            self.seen[lit.var().index()] = false;
            path -= 1;
            if path == 0 {
                break;
            }
        }
        learnt[0] = !p.unwrap();

        // drop literals whose reason is already covered
        let mut kept = vec![learnt[0]];
        for &l in &learnt[1..] {
            let r = self.reason[l.var().index()];
            let redundant = r != CREF_NONE
                && self.db.get(r).lits[1..].iter().all(|q| {
                    self.seen[q.var().index()] || self.level[q.var().index()] == 0
                });
            if !redundant {
                kept.push(l);
            }
        }
        for &l in &learnt[1..] {
            self.seen[l.var().index()] = false;
        }
        let mut learnt = kept;

        let mut bt = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for k in 2..learnt.len() {
                if self.level[learnt[k].var().index()] > self.level[learnt[max_i].var().index()] {
                    max_i = k;
                }
            }
            learnt.swap(1, max_i);
            bt = self.level[learnt[1].var().index()] as usize;
        }
        (learnt, bt)
    }

    /// Collect the assumptions responsible for `p` being false.
    fn analyze_final(&mut self, p: Lit) {
        self.core.clear();
        self.core.push(p);
        if self.decision_level() == 0 {
            return;
        }
        self.seen[p.var().index()] = true;
        for i in (self.trail_lim[0]..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var().index();
            if !self.seen[v] {
                continue;
            }
            let r = self.reason[v];
            if r == CREF_NONE {
                self.core.push(l);
            } else {
                for k in 1..self.db.get(r).lits.len() {
                    let q = self.db.get(r).lits[k];
                    if self.level[q.var().index()] > 0 {
                        self.seen[q.var().index()] = true;
                    }
                }
            }
            self.seen[v] = false;
        }
        self.seen[p.var().index()] = false;
    }

    fn locked(&self, c: CRef) -> bool {
        let l0 = self.db.get(c).lits[0];
        self.reason[l0.var().index()] == c && self.value(l0) == TRUE
    }

    fn reduce_db(&mut self) {
        let mut ls = std::mem::take(&mut self.learnts);
        ls.sort_by(|&a, &b| {
            self.db
                .get(a)
                .activity
                .partial_cmp(&self.db.get(b).activity)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let half = ls.len() / 2;
        let mut kept = Vec::with_capacity(ls.len());
        for (i, c) in ls.into_iter().enumerate() {
            let cl = self.db.get(c);
            if i < half && cl.lits.len() > 2 && !cl.temp && !self.locked(c) {
                self.detach(c);
                self.db.free(c);
            } else {
                kept.push(c);
            }
        }
        self.learnts = kept;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.vsids.pop() {
            let i = v.index();
            if self.assigns[i] == UNDEF && self.decision_var[i] && self.in_domain(v) {
                return Some(Lit::new(v, !self.phase[i]));
            }
        }
        None
    }

    fn search(&mut self, budget: u64) -> Option<SolveResult> {
        let mut conflicts = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Some(SolveResult::Unsat);
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                let temp = self.temp_lit.is_some_and(|t| learnt.contains(&!t));
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], CREF_NONE);
                } else {
                    let first = learnt[0];
                    let cref = self.db.alloc(learnt, Kind::Learnt, temp);
                    self.attach(cref);
                    self.learnts.push(cref);
                    if temp {
                        self.temp_clauses.push(cref);
                    }
                    self.bump_clause(cref);
                    self.enqueue(first, cref);
                }
                self.cla_inc /= 0.999;
                self.conflicts_since_decay += 1;
                if self.conflicts_since_decay >= DECAY_INTERVAL {
                    self.conflicts_since_decay = 0;
                    self.vsids.decay();
                }
                continue;
            }
            if conflicts >= budget {
                self.cancel_until(0);
                return None;
            }
            if self.learnts.len() as f64 >= self.max_learnts + self.trail.len() as f64 {
                self.reduce_db();
                self.max_learnts *= 1.1;
            }
            let mut next = None;
            while self.decision_level() < self.assumptions.len() {
                let a = self.assumptions[self.decision_level()];
                match self.value(a) {
                    TRUE => self.trail_lim.push(self.trail.len()),
                    FALSE => {
                        self.analyze_final(a);
                        return Some(SolveResult::Unsat);
                    }
                    _ => {
                        next = Some(a);
                        break;
                    }
                }
            }
            let next = match next {
                Some(a) => a,
                None => match self.pick_branch() {
                    Some(l) => {
                        self.stats.decisions += 1;
                        l
                    }
                    None => return Some(SolveResult::Sat),
                },
            };
            self.trail_lim.push(self.trail.len());
            self.enqueue(next, CREF_NONE);
        }
    }

    fn solve_inner(&mut self) -> SolveResult {
        self.core.clear();
        if !self.ok {
            return SolveResult::Unsat;
        }
        if self.full_domain && self.refill {
            self.refill = false;
            for v in 0..self.num_vars() {
                if self.assigns[v] == UNDEF && self.decision_var[v] {
                    self.vsids.insert(Var::new(v));
                }
            }
        }
        let mut restart = 0;
        loop {
            let budget = luby(restart) * RESTART_UNIT;
            if let Some(r) = self.search(budget) {
                return r;
            }
            restart += 1;
            self.stats.restarts += 1;
        }
    }

    /// Solve under `assumptions`. Temporary clauses added since the last
    /// query take part and are dropped afterwards.
    pub fn solve(&mut self, assumptions: &[Lit]) -> SolveResult {
        self.reset();
        self.stats.solves += 1;
        for a in assumptions {
            self.reserve_var(a.var());
        }
        self.assumptions.clear();
        self.assumptions.extend(self.temp_lit);
        self.assumptions.extend_from_slice(assumptions);
        let res = self.solve_inner();
        if let Some(t) = self.temp_lit {
            self.core.retain(|&l| l != t);
        }
        if self.check_domain && !self.full_domain {
            let mut shadow = self.clone();
            shadow.check_domain = false;
            shadow.cancel_until(0);
            shadow.full_domain = true;
            shadow.refill = true;
            if shadow.solve_inner() != res {
                self.stats.domain_mismatches += 1;
            }
            self.stats.domain_checks += 1;
        }
        self.dirty = true;
        res
    }

    /// Failed-literal test: does propagating `lit` alone yield a conflict?
    pub fn probe(&mut self, lit: Lit) -> bool {
        self.reset();
        if !self.ok {
            return true;
        }
        self.reserve_var(lit.var());
        match self.value(lit) {
            TRUE => return false,
            FALSE => return true,
            _ => {}
        }
        self.trail_lim.push(self.trail.len());
        self.enqueue(lit, CREF_NONE);
        let failed = self.propagate().is_some();
        self.cancel_until(0);
        failed
    }

    /// Permanent problem clauses plus the current temporary clauses.
    pub fn problem_clauses(&self) -> Vec<Vec<Lit>> {
        self.db
            .clauses
            .iter()
            .filter(|c| !c.deleted && c.kind == Kind::Problem)
            .map(|c| c.lits.clone())
            .collect()
    }

    pub fn learnt_clauses(&self) -> Vec<Vec<Lit>> {
        self.learnts
            .iter()
            .map(|&c| self.db.get(c))
            .filter(|c| !c.deleted)
            .map(|c| c.lits.clone())
            .collect()
    }

    /// Literals fixed at level 0.
    pub fn units(&self) -> Vec<Lit> {
        let end = self.trail_lim.first().copied().unwrap_or(self.trail.len());
        self.trail[..end]
            .iter()
            .copied()
            .filter(|l| Some(l.var()) != self.temp_lit.map(|t| t.var()))
            .collect()
    }
}
