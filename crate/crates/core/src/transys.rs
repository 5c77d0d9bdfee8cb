//! Transition systems in CNF.
//!
//! Variable `i` of a [`TranSys`] built by [`TranSys::encode`] is AIG variable
//! `i`; the primed copy of latch `j` is a fresh variable after all AIG
//! variables. Var 0 is the constant: `x0` is true.

use aig::{Aig, AigRef, NodeKind};
use logic_form::{Clause, Cube, Lit, Var, VarMap};
use satcore::{Cnf, Solver};
use std::collections::BTreeSet;
use std::fmt::Write;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("property index {index} out of range ({count} properties)")]
    NoSuchBad { index: usize, count: usize },
}

/// AIGER literal to solver literal. AIGER raw 0 is false while `x0` is true,
/// so the constant flips polarity; every other variable keeps its index.
#[inline]
pub fn aig_lit(r: AigRef) -> Lit {
    let l = Lit::new(Var::new(r.var() as usize), r.is_complemented());
    if r.var() == 0 {
        !l
    } else {
        l
    }
}

#[derive(Clone, Debug)]
pub struct TranSys {
    pub num_vars: usize,
    pub inputs: Vec<Var>,
    /// State variables. The first `real_latches` are the AIG latches in file
    /// order; any further ones are internal signals promoted to state.
    pub latches: Vec<Var>,
    pub real_latches: usize,
    /// `primes[j]` is the next-state copy of `latches[j]`.
    pub primes: Vec<Var>,
    /// Reset value per latch; `None` is a free initial value.
    pub init: Vec<Option<bool>>,
    pub bad: Lit,
    pub bad_index: usize,
    pub constraints: Vec<Lit>,
    pub trans: Vec<Clause>,
    /// Direct support of each variable: gate operands, and for a primed
    /// variable the variable of its next-state function.
    pub deps: Vec<Vec<Var>>,
    prime_map: VarMap,
    unprime_map: VarMap,
    latch_index: Vec<Option<u32>>,
    pub source: Arc<Aig>,
}

impl TranSys {
    pub fn encode(aig: &Aig, bad_index: usize) -> Result<TranSys, EncodeError> {
        Self::encode_shared(Arc::new(aig.clone()), bad_index)
    }

    pub fn encode_shared(aig: Arc<Aig>, bad_index: usize) -> Result<TranSys, EncodeError> {
        let props = aig.properties();
        let bad = *props.get(bad_index).ok_or(EncodeError::NoSuchBad {
            index: bad_index,
            count: props.len(),
        })?;
        let base = aig.max_var as usize + 1;
        let num_vars = base + aig.latches.len();
        let mut trans = vec![Clause::from_sorted(vec![Lit::TRUE])];
        let mut deps = vec![Vec::new(); num_vars];
        for g in &aig.ands {
            let (o, a, b) = (aig_lit(AigRef::new(g.lhs, false)), aig_lit(g.rhs0), aig_lit(g.rhs1));
            push_and(&mut trans, o, a, b);
            deps[g.lhs as usize] = vec![a.var(), b.var()];
        }
        let mut latches = Vec::new();
        let mut primes = Vec::new();
        let mut init = Vec::new();
        for (j, l) in aig.latches.iter().enumerate() {
            let (v, p) = (Var::new(l.var as usize), Var::new(base + j));
            let n = aig_lit(l.next);
            push_eq(&mut trans, p.lit(), n);
            deps[p.index()] = vec![n.var()];
            latches.push(v);
            primes.push(p);
            init.push(l.init.value());
        }
        let mut ts = TranSys {
            num_vars,
            inputs: aig.inputs.iter().map(|&i| Var::new(i as usize)).collect(),
            real_latches: latches.len(),
            latches,
            primes,
            init,
            bad: aig_lit(bad),
            bad_index,
            constraints: aig.constraints.iter().map(|&c| aig_lit(c)).collect(),
            trans,
            deps,
            prime_map: VarMap::new(),
            unprime_map: VarMap::new(),
            latch_index: Vec::new(),
            source: aig,
        };
        ts.rebuild_maps();
        Ok(ts)
    }

    fn rebuild_maps(&mut self) {
        self.prime_map = self.latches.iter().copied().zip(self.primes.iter().copied()).collect();
        self.unprime_map = self.prime_map.inverse();
        self.latch_index = vec![None; self.num_vars];
        for (j, l) in self.latches.iter().enumerate() {
            self.latch_index[l.index()] = Some(j as u32);
        }
    }

    fn new_var(&mut self) -> Var {
        let v = Var::new(self.num_vars);
        self.num_vars += 1;
        self.deps.push(Vec::new());
        self.latch_index.push(None);
        v
    }

    #[inline]
    pub fn latch_index(&self, v: Var) -> Option<usize> {
        self.latch_index.get(v.index()).copied().flatten().map(|j| j as usize)
    }

    #[inline]
    pub fn is_latch(&self, v: Var) -> bool {
        self.latch_index(v).is_some()
    }

    /// Next-state copy of a latch literal.
    #[inline]
    pub fn prime(&self, l: Lit) -> Lit {
        l.map(&self.prime_map)
    }

    #[inline]
    pub fn unprime(&self, l: Lit) -> Lit {
        l.map(&self.unprime_map)
    }

    #[inline]
    pub fn try_unprime(&self, l: Lit) -> Option<Lit> {
        self.unprime_map.try_get(l.var()).map(|v| Lit::new(v, l.is_negated()))
    }

    /// Conjunction of the reset values.
    pub fn init_cube(&self) -> Cube {
        Cube::from_sorted(
            self.latches
                .iter()
                .zip(&self.init)
                .filter_map(|(l, i)| i.map(|b| Lit::new(*l, !b)))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
        )
    }

    /// Cone of influence of `roots` over `deps`, roots included.
    pub fn cone(&self, roots: impl IntoIterator<Item = Var>) -> Vec<Var> {
        let mut seen = vec![false; self.num_vars];
        let mut stack: Vec<Var> = Vec::new();
        let mut out = Vec::new();
        for r in roots {
            if !seen[r.index()] {
                seen[r.index()] = true;
                stack.push(r);
            }
        }
        while let Some(v) = stack.pop() {
            out.push(v);
            for &d in &self.deps[v.index()] {
                if !seen[d.index()] {
                    seen[d.index()] = true;
                    stack.push(d);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Variables that simplification and engines address directly.
    pub fn frozen(&self) -> Vec<bool> {
        let mut f = vec![false; self.num_vars];
        f[0] = true;
        for v in self.inputs.iter().chain(&self.latches).chain(&self.primes) {
            f[v.index()] = true;
        }
        for l in self.constraints.iter().chain([&self.bad]) {
            f[l.var().index()] = true;
        }
        f
    }

    /// A copy with only the constraints selected by `keep`.
    pub fn with_constraints(&self, keep: &[usize]) -> TranSys {
        let mut ts = self.clone();
        ts.constraints = keep.iter().map(|&i| self.constraints[i]).collect();
        ts
    }

    /// Conservative CNF simplification: constants found by failed-literal
    /// probing on unfrozen variables and by unit propagation are fixed,
    /// satisfied clauses removed and false literals dropped. Units on
    /// frozen variables are kept so semantics over frozen variables are
    /// unchanged.
    pub fn simplify_cnf(&self) -> TranSys {
        let frozen = self.frozen();
        let mut solver = Solver::new();
        solver.reserve_var(Var::new(self.num_vars - 1));
        for c in &self.trans {
            solver.add_clause(c);
        }
        let mut used = vec![false; self.num_vars];
        for c in &self.trans {
            for l in c.iter() {
                used[l.var().index()] = true;
            }
        }
        for v in (1..self.num_vars).filter(|&v| used[v] && !frozen[v]) {
            let x = Var::new(v).lit();
            for l in [x, !x] {
                if solver.fixed_value(l).is_none() && solver.probe(l) {
                    solver.add_clause(&[!l]);
                }
            }
        }
        let mut ts = self.clone();
        if !solver.is_ok() {
            // the transition relation has no solutions at all
            ts.trans = vec![Clause::from_sorted(vec![Lit::TRUE]), Clause::new()];
            return ts;
        }
        let mut units: Vec<Lit> = solver.units();
        units.sort_unstable();
        let fixed = |l: Lit| solver.fixed_value(l);
        let mut trans = Vec::new();
        for c in &self.trans {
            if c.iter().any(|&l| fixed(l) == Some(true)) {
                continue;
            }
            let lits: Vec<Lit> = c.iter().copied().filter(|&l| fixed(l).is_none()).collect();
            trans.push(Clause::from_sorted(lits));
        }
        for u in units {
            if frozen[u.var().index()] {
                trans.push(Clause::from_sorted(vec![u]));
            }
        }
        ts.trans = trans;
        ts
    }

    /// Promote the selected AND gates to state variables. Each gets a primed
    /// copy defined by the gate's function over the primed latches. Gates
    /// whose cone reaches an input are skipped since their next value is not
    /// a function of the next state.
    pub fn extend_with_internal_signals(&self, policy: &SignalPolicy) -> TranSys {
        let aig = &self.source;
        let kinds = aig.node_kinds();
        let fanout = aig.fanouts();
        let mut input_free = vec![true; aig.max_var as usize + 1];
        for v in 1..=aig.max_var as usize {
            input_free[v] = match kinds[v] {
                NodeKind::Input(_) => false,
                NodeKind::And(i) => {
                    let g = &aig.ands[i];
                    input_free[g.rhs0.var() as usize] && input_free[g.rhs1.var() as usize]
                }
                _ => true,
            };
        }
        let candidates: Vec<u32> = match policy {
            SignalPolicy::None => Vec::new(),
            SignalPolicy::Explicit(vars) => vars.clone(),
            SignalPolicy::Fanout { min_fanout, max_fraction } => {
                let cap = (aig.ands.len() as f64 * max_fraction).floor() as usize;
                let mut c: Vec<u32> = aig
                    .ands
                    .iter()
                    .map(|g| g.lhs)
                    .filter(|&g| fanout[g as usize] >= *min_fanout)
                    .collect();
                c.sort_by_key(|&g| std::cmp::Reverse(fanout[g as usize]));
                c.truncate(cap);
                c
            }
        };
        let selected: Vec<u32> = candidates
            .into_iter()
            .filter(|&g| {
                (g as usize) < kinds.len()
                    && matches!(kinds[g as usize], NodeKind::And(_))
                    && input_free[g as usize]
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .filter(|&g| !self.is_latch(Var::new(g as usize)))
            .collect();
        let mut ts = self.clone();
        if selected.is_empty() {
            return ts;
        }
        // next-time copies of gates, shared between selected signals
        let mut next_of: Vec<Option<Lit>> = vec![None; aig.max_var as usize + 1];
        next_of[0] = Some(Lit::TRUE);
        for j in 0..self.real_latches {
            next_of[self.latches[j].index()] = Some(self.primes[j].lit());
        }
        for &g in &selected {
            let mut stack = vec![g as usize];
            while let Some(&v) = stack.last() {
                if next_of[v].is_some() {
                    stack.pop();
                    continue;
                }
                let NodeKind::And(i) = kinds[v] else {
                    unreachable!("input-free cone holds only gates, latches and constants")
                };
                let gate = aig.ands[i];
                let (a, b) = (gate.rhs0.var() as usize, gate.rhs1.var() as usize);
                if next_of[a].is_none() {
                    stack.push(a);
                    continue;
                }
                if next_of[b].is_none() {
                    stack.push(b);
                    continue;
                }
                stack.pop();
                let nv = ts.new_var();
                let na = next_of[a].unwrap().xor(gate.rhs0.is_complemented());
                let nb = next_of[b].unwrap().xor(gate.rhs1.is_complemented());
                push_and(&mut ts.trans, nv.lit(), na, nb);
                ts.deps[nv.index()] = vec![na.var(), nb.var()];
                next_of[v] = Some(nv.lit());
            }
            let p = next_of[g as usize].unwrap().var();
            ts.latches.push(Var::new(g as usize));
            ts.primes.push(p);
            ts.init.push(None);
        }
        ts.rebuild_maps();
        ts
    }

    /// DIMACS dump of the transition relation with a comment header naming
    /// the interface variables (DIMACS index = var + 1).
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        let d = |v: &Var| v.index() + 1;
        let list = |vs: &[Var]| vs.iter().map(|v| d(v).to_string()).collect::<Vec<_>>().join(" ");
        writeln!(out, "c inputs {}", list(&self.inputs)).unwrap();
        for (l, p) in self.latches.iter().zip(&self.primes) {
            writeln!(out, "c latch {} next {}", d(l), d(p)).unwrap();
        }
        writeln!(out, "c bad {}", self.bad.to_dimacs()).unwrap();
        for c in &self.constraints {
            writeln!(out, "c constraint {}", c.to_dimacs()).unwrap();
        }
        let cnf = Cnf {
            num_vars: self.num_vars,
            clauses: self.trans.iter().map(|c| c.lits().to_vec()).collect(),
        };
        out.push_str(&cnf.to_text());
        out
    }
}

fn push_and(trans: &mut Vec<Clause>, o: Lit, a: Lit, b: Lit) {
    for c in [vec![!o, a], vec![!o, b], vec![o, !a, !b]] {
        if let Ok(c) = Clause::canonicalize(c) {
            trans.push(c);
        }
    }
}

fn push_eq(trans: &mut Vec<Clause>, a: Lit, b: Lit) {
    for c in [vec![!a, b], vec![a, !b]] {
        if let Ok(c) = Clause::canonicalize(c) {
            trans.push(c);
        }
    }
}

/// Which internal signals become state variables.
#[derive(Clone, Debug, PartialEq)]
pub enum SignalPolicy {
    None,
    /// Gates with at least `min_fanout` fanouts, the highest fanout first,
    /// at most `max_fraction` of all gates.
    Fanout { min_fanout: u32, max_fraction: f64 },
    /// Explicit AIG gate variables.
    Explicit(Vec<u32>),
}

impl Default for SignalPolicy {
    fn default() -> Self {
        SignalPolicy::Fanout { min_fanout: 3, max_fraction: 0.1 }
    }
}

/// Time-expanded copies of a transition system. Frame 0 uses the system's
/// own variables; the primed variables of frame `k` are the latches of
/// frame `k + 1`.
#[derive(Clone, Debug)]
pub struct UnrolledSys {
    pub num_vars: usize,
    pub frame_maps: Vec<VarMap>,
}

impl UnrolledSys {
    /// Frame 0 only; no clauses are emitted yet.
    pub fn new(ts: &TranSys) -> Self {
        let map: VarMap = (0..ts.num_vars).map(|v| (Var::new(v), Var::new(v))).collect();
        UnrolledSys { num_vars: ts.num_vars, frame_maps: vec![map] }
    }

    pub fn depth(&self) -> usize {
        self.frame_maps.len() - 1
    }

    #[inline]
    pub fn lit(&self, l: Lit, frame: usize) -> Lit {
        l.map(&self.frame_maps[frame])
    }

    pub fn latch_lits(&self, ts: &TranSys, frame: usize) -> Vec<Lit> {
        ts.latches.iter().map(|l| self.lit(l.lit(), frame)).collect()
    }

    /// Add frame `depth + 1`.
    pub fn extend(&mut self, ts: &TranSys) {
        let prev = self.frame_maps.last().unwrap();
        let mut map = VarMap::new();
        map.insert(Var::CONST, Var::CONST);
        for (l, p) in ts.latches.iter().zip(&ts.primes) {
            map.insert(*l, prev.get(*p));
        }
        for v in 1..ts.num_vars {
            let v = Var::new(v);
            if !map.contains(v) {
                map.insert(v, Var::new(self.num_vars));
                self.num_vars += 1;
            }
        }
        // primes of the new frame become the next frame's latches once it
        // exists; until then they are private to this frame
        self.frame_maps.push(map);
    }

    /// The transition relation instantiated at `frame`.
    pub fn trans_clauses(&self, ts: &TranSys, frame: usize) -> Vec<Vec<Lit>> {
        let m = &self.frame_maps[frame];
        ts.trans.iter().map(|c| c.iter().map(|l| l.map(m)).collect()).collect()
    }

    pub fn constraint_lits(&self, ts: &TranSys, frame: usize) -> Vec<Lit> {
        ts.constraints.iter().map(|c| self.lit(*c, frame)).collect()
    }

    /// The transition relation and constraints instantiated at `frame`.
    pub fn frame_clauses(&self, ts: &TranSys, frame: usize) -> Vec<Vec<Lit>> {
        let mut out = self.trans_clauses(ts, frame);
        out.extend(self.constraint_lits(ts, frame).into_iter().map(|c| vec![c]));
        out
    }

    /// Values of the real latches at frame 0 and of the inputs at frames
    /// `0..=depth` in a model, unassigned bits as 0.
    pub fn trace(&self, ts: &TranSys, depth: usize, value: impl Fn(Lit) -> Option<bool>) -> aig::WitnessTrace {
        let bit = |l: Lit| Some(value(l).unwrap_or(false));
        aig::WitnessTrace {
            bad_index: ts.bad_index,
            init: ts.latches[..ts.real_latches].iter().map(|l| bit(self.lit(l.lit(), 0))).collect(),
            inputs: (0..=depth)
                .map(|k| ts.inputs.iter().map(|i| bit(self.lit(i.lit(), k))).collect())
                .collect(),
        }
    }

    /// Reset values at frame 0.
    pub fn init_clauses(&self, ts: &TranSys) -> Vec<Vec<Lit>> {
        ts.init_cube().iter().map(|l| vec![self.lit(*l, 0)]).collect()
    }
}

/// `depth + 1` frames with their clauses; init at frame 0 if requested.
pub fn unroll(ts: &TranSys, depth: usize, with_init: bool) -> (UnrolledSys, Vec<Vec<Lit>>) {
    let mut u = UnrolledSys::new(ts);
    for _ in 0..depth {
        u.extend(ts);
    }
    let mut clauses = Vec::new();
    if with_init {
        clauses.extend(u.init_clauses(ts));
    }
    for k in 0..=depth {
        clauses.extend(u.frame_clauses(ts, k));
    }
    (u, clauses)
}
