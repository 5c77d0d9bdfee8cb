//! Acceptance checks. Each criterion prints one PASS or FAIL line with the
//! measured figures; the test fails if any criterion does.
//!
//! Run with `cargo test -p mcheck --test acceptance -- --nocapture` to see
//! the report.

mod common;

use aig::families::{reset_counter_pair, wrap_counter};
use aig::random::{random_aig, RandomParams};
use aig::{parse_aiger, Aig, Init, WitnessTrace};
use common::*;
use logic_form::{Cube, Lit, Var};
use mcheck::bmc::bmc;
use mcheck::ic3::{Generalization, Ic3, Ic3Options, MicKind};
use mcheck::portfolio::{run_engine, run_portfolio, verify_verdict, EngineConfig, PortfolioOptions};
use mcheck::{Cancel, TranSys, Verdict};
use rand::Rng;
use satcore::{BucketVsids, SolveResult, Solver, BUCKETS};
use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

const GENERALIZATIONS: [Generalization; 4] = [
    Generalization::Static(MicKind::Standard),
    Generalization::Static(MicKind::Ctg),
    Generalization::Static(MicKind::ExCtg),
    Generalization::Dynamic,
];

fn fixture_models() -> Vec<(String, Aig)> {
    let dir = fixture("");
    let mut names: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "aag"))
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, parse_aiger(&std::fs::read(&p).unwrap()).unwrap())
        })
        .collect()
}

// ---------------------------------------------------------------- 1 and 2

/// Random designs within the oracle's reach: a third with a constraint,
/// half with a conjunctive bad that tends to make them deep or safe.
fn oracle_designs(n: usize) -> Vec<Aig> {
    let mut rng = rng(2026);
    (0..n)
        .map(|i| {
            let latches = if i % 4 == 3 { rng.gen_range(8..=14) } else { rng.gen_range(1..=8) };
            let p = RandomParams {
                inputs: rng.gen_range(0..=3),
                latches,
                gates: rng.gen_range(latches..=8 * latches).min(170),
                bads: 1,
                constraints: usize::from(i % 3 == 0),
                one_init: 0.2,
                free_init: if i % 5 == 4 { 0.2 } else { 0.0 },
            };
            let aig = random_aig(&mut rng, &p);
            if i % 2 == 1 {
                with_conjunctive_bad(aig, &mut rng)
            } else {
                aig
            }
        })
        .collect()
}

fn all_ic3_configs() -> Vec<EngineConfig> {
    let mut v = Vec::new();
    for generalization in GENERALIZATIONS {
        for inn in [false, true] {
            for abs_cst in [false, true] {
                v.push(EngineConfig::Ic3 { generalization, inn, abs_cst, seed: 0 });
            }
        }
    }
    v
}

#[derive(Default)]
struct OracleTally {
    designs: usize,
    safe: usize,
    unsafe_: usize,
    constrained: usize,
    runs: usize,
    definitive: usize,
    disagreements: Vec<String>,
    safe_checked: usize,
    unsafe_checked: usize,
    evidence_failures: Vec<String>,
}

fn agrees(expected: Option<usize>, v: &Verdict) -> bool {
    match v {
        Verdict::Safe(_) => expected.is_none(),
        Verdict::Unsafe(_) => expected.is_some(),
        Verdict::Unknown(_) => true,
    }
}

fn oracle_tally() -> OracleTally {
    let mut t = OracleTally::default();
    let configs = all_ic3_configs();
    let portfolio = EngineConfig::default_portfolio(4, 30, 12);
    let popts = PortfolioOptions { workers: 4, ..Default::default() };
    for (case, aig) in oracle_designs(240).into_iter().enumerate() {
        assert!(aig.latches.len() <= 16 && aig.ands.len() <= 200, "design {case} too large");
        let expected = shortest_cex(&aig, 0);
        t.designs += 1;
        t.constrained += usize::from(!aig.constraints.is_empty());
        match expected {
            Some(_) => t.unsafe_ += 1,
            None => t.safe += 1,
        }
        let ts = Arc::new(TranSys::encode(&aig, 0).unwrap());
        let mut verdicts: Vec<(String, Verdict)> = Vec::new();
        for c in &configs {
            verdicts.push((c.to_string(), run_engine(&ts, c, &Cancel::new()).0));
        }
        let bmc_cfg = EngineConfig::Bmc { step: 1, max_depth: 30 };
        verdicts.push((bmc_cfg.to_string(), run_engine(&ts, &bmc_cfg, &Cancel::new()).0));
        let kind_cfg = EngineConfig::Kind { max_k: 12, simple_path: true };
        verdicts.push((kind_cfg.to_string(), run_engine(&ts, &kind_cfg, &Cancel::new()).0));
        let out = run_portfolio(ts.clone(), &portfolio, &popts);
        if out.contradictory {
            t.disagreements.push(format!("design {case}: portfolio engines contradict each other"));
        }
        verdicts.push(("portfolio".into(), out.verdict));
        for (name, v) in verdicts {
            t.runs += 1;
            t.definitive += usize::from(v.is_definitive());
            if !agrees(expected, &v) {
                t.disagreements.push(format!("design {case} {name}: {} vs oracle {expected:?}", v.status()));
            }
            if let Verdict::Unsafe(w) = &v {
                if let Some(d) = expected {
                    if name == "bmc-step1" && w.depth() != d {
                        t.disagreements.push(format!("design {case} bmc depth {} vs {d}", w.depth()));
                    }
                }
            }
            match &v {
                Verdict::Safe(_) => t.safe_checked += 1,
                Verdict::Unsafe(_) => t.unsafe_checked += 1,
                Verdict::Unknown(_) => continue,
            }
            if let Err(e) = verify_verdict(&ts, &v) {
                t.evidence_failures.push(format!("design {case} {name}: {e}"));
            }
        }
    }
    t
}

fn criterion1(t: &OracleTally) -> Outcome {
    let summary = format!(
        "{} designs ({} safe, {} unsafe, {} constrained), {} runs, {} definitive, {} disagreements",
        t.designs,
        t.safe,
        t.unsafe_,
        t.constrained,
        t.runs,
        t.definitive,
        t.disagreements.len()
    );
    if t.designs < 200 || t.safe == 0 || t.unsafe_ == 0 || t.constrained == 0 {
        return Err(format!("sample does not meet the requirements: {summary}"));
    }
    match t.disagreements.first() {
        None => Ok(summary),
        Some(d) => Err(format!("{summary}; first: {d}")),
    }
}

fn criterion2(t: &OracleTally) -> Outcome {
    let summary = format!(
        "{} safe and {} unsafe verdicts checked, {} rejected",
        t.safe_checked,
        t.unsafe_checked,
        t.evidence_failures.len()
    );
    match t.evidence_failures.first() {
        None if t.safe_checked > 0 && t.unsafe_checked > 0 => Ok(summary),
        None => Err(format!("{summary}; nothing to check")),
        Some(e) => Err(format!("{summary}; first: {e}")),
    }
}

// ---------------------------------------------------------------------- 3

fn truth_table_sat(vars: usize, clauses: &[(u32, u32)]) -> Option<u32> {
    (0..1u32 << vars).find(|&a| clauses.iter().all(|&(pos, neg)| a & pos != 0 || !a & neg != 0))
}

fn criterion3(fixtures: &[(String, Aig)]) -> Outcome {
    let mut rng = rng(33);
    let (mut sat, mut unsat) = (0, 0);
    for case in 0..500 {
        let vars = rng.gen_range(1..=20);
        let n = rng.gen_range(0..=(4 * vars).min(90));
        let mut masks = Vec::new();
        let mut clauses = Vec::new();
        for _ in 0..n {
            let len = rng.gen_range(1..=3);
            let (mut pos, mut neg) = (0u32, 0u32);
            let mut c = Vec::new();
            for _ in 0..len {
                let v = rng.gen_range(0..vars);
                let negated: bool = rng.gen();
                if negated {
                    neg |= 1 << v;
                } else {
                    pos |= 1 << v;
                }
                c.push(Lit::new(Var::new(v), negated));
            }
            masks.push((pos, neg));
            clauses.push(c);
        }
        let mut s = Solver::new();
        s.reserve_var(Var::new(vars - 1));
        for c in &clauses {
            s.add_clause(c);
        }
        let expect = truth_table_sat(vars, &masks);
        let got = s.solve(&[]);
        if got.is_sat() != expect.is_some() {
            return Err(format!("cnf {case}: solver {got:?}, truth table {expect:?}"));
        }
        if got.is_sat() {
            let m = (0..vars).fold(0u32, |a, v| a | u32::from(s.model_value(Var::new(v).lit()) == Some(true)) << v);
            if !masks.iter().all(|&(pos, neg)| m & pos != 0 || !m & neg != 0) {
                return Err(format!("cnf {case}: model violates a clause"));
            }
            sat += 1;
        } else {
            unsat += 1;
        }
    }
    let (mut checks, mut mismatches) = (0, 0);
    for (_, aig) in fixtures {
        let ts = Arc::new(TranSys::encode(aig, 0).unwrap());
        for g in [Generalization::Static(MicKind::Ctg), Generalization::Dynamic] {
            let opts = Ic3Options { generalization: g, check_domain: true, ..Default::default() };
            let mut e = Ic3::new(ts.clone(), opts, Cancel::new());
            e.check();
            checks += e.stats.domain_checks;
            mismatches += e.stats.domain_mismatches;
        }
    }
    let summary =
        format!("500 CNFs ({sat} sat, {unsat} unsat) match truth tables; {checks} IC3 queries re-solved, {mismatches} mismatches");
    if checks >= 500 && mismatches == 0 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

// ---------------------------------------------------------------------- 4

fn criterion4() -> Outcome {
    let mut rng = rng(44);
    let (mut events, mut picks, mut violations) = (0usize, 0usize, 0usize);
    while events < 100_000 {
        let vars = rng.gen_range(1..=48);
        let mut h = BucketVsids::new();
        h.reserve(vars);
        // reference: exact scores relative to a decay origin
        let mut score = vec![0u64; vars];
        let mut origin = 0u64;
        let mut queued = BTreeSet::new();
        let bucket = |score: &[u64], origin: u64, v: usize| score[v].saturating_sub(origin).min(BUCKETS as u64 - 1) as usize;
        for _ in 0..rng.gen_range(100..2000) {
            events += 1;
            let v = rng.gen_range(0..vars);
            match rng.gen_range(0..12) {
                0..=2 => {
                    h.insert(Var::new(v));
                    queued.insert(v);
                }
                3 => {
                    h.remove(Var::new(v));
                    queued.remove(&v);
                }
                4..=7 => {
                    h.bump(Var::new(v));
                    score[v] = (score[v].max(origin) + 1).min(origin + BUCKETS as u64 - 1);
                }
                8 => {
                    h.decay();
                    origin += 1;
                }
                _ => {
                    picks += 1;
                    let best = queued.iter().map(|&v| bucket(&score, origin, v)).max();
                    match h.pop() {
                        Some(p) => {
                            let ok = queued.remove(&p.index()) && Some(bucket(&score, origin, p.index())) == best;
                            violations += usize::from(!ok);
                        }
                        None => violations += usize::from(best.is_some()),
                    }
                }
            }
        }
    }
    let summary = format!("{events} events, {picks} picks, {violations} violations");
    if violations == 0 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

// ---------------------------------------------------------------------- 5

/// `cube` is inductive relative to `frame` (or the reset states), judged
/// by a fresh solver.
fn relatively_inductive(ts: &TranSys, frame: &[Cube], init_frame: bool, cube: &Cube) -> bool {
    let mut s = Solver::new();
    s.reserve_var(Var::new(ts.num_vars - 1));
    for c in &ts.trans {
        s.add_clause(c);
    }
    for c in &ts.constraints {
        s.add_clause(&[*c]);
    }
    if init_frame {
        for l in ts.init_cube().iter() {
            s.add_clause(&[*l]);
        }
    } else {
        for l in frame {
            s.add_clause(&l.iter().map(|l| !*l).collect::<Vec<_>>());
        }
    }
    s.add_clause(&cube.iter().map(|l| !*l).collect::<Vec<_>>());
    let primed: Vec<Lit> = cube.iter().map(|l| ts.prime(*l)).collect();
    s.solve(&primed) == SolveResult::Unsat
}

fn excludes_init(ts: &TranSys, cube: &Cube) -> bool {
    cube.iter().any(|l| {
        let j = ts.latch_index(l.var()).unwrap();
        ts.init[j] == Some(l.is_negated())
    })
}

fn criterion5(fixtures: &[(String, Aig)]) -> Outcome {
    let mut sizes: HashMap<MicKind, (usize, usize)> = HashMap::new();
    let mut failures = Vec::new();
    for (name, aig) in fixtures {
        let ts = Arc::new(TranSys::encode(aig, 0).unwrap());
        let opts = Ic3Options { record: true, ..Default::default() };
        let mut e = Ic3::new(ts.clone(), opts, Cancel::new());
        e.check();
        for p in &e.records.probes {
            for o in &p.outputs {
                let entry = sizes.entry(o.kind).or_default();
                entry.0 += 1;
                entry.1 += o.cube.len();
                if !o.cube.subsumes(&p.input) {
                    failures.push(format!("{name}: {:?} output {} is not a sub-cube of {}", o.kind, o.cube, p.input));
                } else if !excludes_init(&ts, &o.cube) {
                    failures.push(format!("{name}: {:?} output {} meets the reset states", o.kind, o.cube));
                } else if !relatively_inductive(&ts, &o.frame, o.init_frame, &o.cube) {
                    failures.push(format!("{name}: {:?} output {} is not relatively inductive", o.kind, o.cube));
                }
            }
        }
    }
    let mean = |k: MicKind| {
        let (n, total) = sizes.get(&k).copied().unwrap_or_default();
        (n, total as f64 / n.max(1) as f64)
    };
    let (n, standard) = mean(MicKind::Standard);
    let (_, ctg) = mean(MicKind::Ctg);
    let (_, exctg) = mean(MicKind::ExCtg);
    let summary = format!(
        "{n} probes; mean size standard {standard:.3}, ctg {ctg:.3}, exctg {exctg:.3}; {} outputs failed re-verification",
        failures.len()
    );
    if let Some(f) = failures.first() {
        return Err(format!("{summary}; first: {f}"));
    }
    if n >= 500 && exctg <= ctg && ctg <= standard {
        Ok(summary)
    } else {
        Err(summary)
    }
}

// ---------------------------------------------------------------------- 6

fn criterion6(fixtures: &[(String, Aig)]) -> Outcome {
    let mut regressions = Vec::new();
    let mut decisions = 0;
    for (name, aig) in fixtures {
        let ts = Arc::new(TranSys::encode(aig, 0).unwrap());
        let opts = Ic3Options { record: true, ..Default::default() };
        let mut e = Ic3::new(ts, opts, Cancel::new());
        e.check();
        let mut last: HashMap<&Cube, MicKind> = HashMap::new();
        for (cube, kind) in &e.records.strategies {
            decisions += 1;
            if let Some(prev) = last.insert(cube, *kind) {
                if prev > *kind {
                    regressions.push(format!("{name}: {cube} went from {prev:?} to {kind:?}"));
                }
            }
        }
    }
    if let Some(r) = regressions.first() {
        return Err(format!("{decisions} strategy decisions, {} regressions; first: {r}", regressions.len()));
    }
    let family: Vec<&(String, Aig)> = fixtures.iter().filter(|(n, _)| n.starts_with("mod")).collect();
    if family.is_empty() {
        return Err("hard-to-block family missing from the fixture corpus".into());
    }
    let mut totals = Vec::new();
    for g in GENERALIZATIONS {
        let mut attempts = 0;
        for (name, aig) in &family {
            let ts = Arc::new(TranSys::encode(aig, 0).unwrap().simplify_cnf());
            let mut e = Ic3::new(ts, Ic3Options { generalization: g, ..Default::default() }, Cancel::new());
            if !matches!(e.check(), Verdict::Safe(_)) {
                return Err(format!("{name} not proved by {g:?}"));
            }
            attempts += e.stats.block_attempts;
        }
        totals.push(attempts);
    }
    let best = totals[..3].iter().copied().min().unwrap();
    let dynamic = totals[3];
    let ratio = dynamic as f64 / best as f64;
    let summary = format!(
        "{decisions} strategy decisions monotone; block attempts on {} family designs: standard {}, ctg {}, exctg {}, dynamic {} ({ratio:.2}x best static)",
        family.len(),
        totals[0],
        totals[1],
        totals[2],
        dynamic
    );
    if ratio <= 1.1 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

// ---------------------------------------------------------------------- 7

fn suite_time(fixtures: &[(String, Aig)], g: Generalization) -> Result<Duration, String> {
    let cfg = EngineConfig::ic3(g);
    let mut total = Duration::ZERO;
    for (name, aig) in fixtures {
        let ts = TranSys::encode(aig, 0).unwrap();
        let start = Instant::now();
        let (v, _) = run_engine(&ts, &cfg, &Cancel::new());
        total += start.elapsed();
        if !v.is_definitive() {
            return Err(format!("{name} unsolved by {cfg}"));
        }
    }
    Ok(total)
}

fn criterion7(fixtures: &[(String, Aig)]) -> Outcome {
    let limit = Duration::from_secs(60);
    let start = Instant::now();
    let ts = Arc::new(TranSys::encode(&reset_counter_pair(32), 0).unwrap());
    let v = run_engine(&ts, &EngineConfig::ic3(Generalization::Dynamic), &Cancel::new()).0;
    let ic3_time = start.elapsed();
    if !matches!(v, Verdict::Safe(_)) || verify_verdict(&ts, &v).is_err() {
        return Err(format!("32-bit counter pair: {} in {ic3_time:.2?}", v.status()));
    }
    let start = Instant::now();
    let ts = TranSys::encode(&wrap_counter(8), 0).unwrap();
    let v = bmc(&ts, 300, 1, &Cancel::new());
    let bmc_time = start.elapsed();
    match &v {
        Verdict::Unsafe(w) if w.depth() == 256 && w.verify(&ts.source).is_ok() => {}
        _ => return Err(format!("8-bit wrap counter: {} in {bmc_time:.2?}", v.status())),
    }
    // three rounds each, interleaved, keeping the fastest
    let mut ctg = Duration::MAX;
    let mut dynamic = Duration::MAX;
    for _ in 0..3 {
        ctg = ctg.min(suite_time(fixtures, Generalization::Static(MicKind::Ctg))?);
        dynamic = dynamic.min(suite_time(fixtures, Generalization::Dynamic)?);
    }
    let ratio = dynamic.as_secs_f64() / ctg.as_secs_f64();
    let summary = format!(
        "ic3 32-bit counter pair {ic3_time:.2?}, bmc depth 256 {bmc_time:.2?}; fixture suite ({} models) dynamic {dynamic:.2?} vs ctg {ctg:.2?} ({ratio:.2}x)",
        fixtures.len()
    );
    if ic3_time <= limit && bmc_time <= limit && ratio <= 1.2 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

// ---------------------------------------------------------------------- 8

/// Independent replay: reset values (free bits from the trace), inputs per
/// step, constraints at every step and the bad at the last one.
fn replays(aig: &Aig, w: &WitnessTrace) -> bool {
    let mut state = 0u64;
    for (i, l) in aig.latches.iter().enumerate() {
        let bit = match l.init {
            Init::Zero => false,
            Init::One => true,
            Init::Free => w.init.get(i).copied().flatten().unwrap_or(false),
        };
        state |= u64::from(bit) << i;
    }
    for (k, frame) in w.inputs.iter().enumerate() {
        let input = frame.iter().enumerate().fold(0u64, |a, (i, b)| a | u64::from(b.unwrap_or(false)) << i);
        let (ok, bad, next) = step(aig, w.bad_index, state, input);
        if !ok {
            return false;
        }
        if k + 1 == w.inputs.len() {
            return bad;
        }
        state = next;
    }
    false
}

fn criterion8(fixtures: &[(String, Aig)]) -> Outcome {
    let mut files = 0;
    let mut witnesses = 0;
    for (name, aig) in fixtures {
        let ascii = std::fs::read(fixture(&format!("{name}.aag"))).unwrap();
        let binary = std::fs::read(fixture(&format!("{name}.aig"))).unwrap();
        let from_binary = parse_aiger(&binary).map_err(|e| format!("{name}.aig: {e}"))?;
        if aig.to_aiger(true) != ascii || from_binary.to_aiger(false) != binary {
            return Err(format!("{name}: rewriting does not reproduce the file"));
        }
        let strip = |a: &Aig| Aig { trailer: Vec::new(), ..a.clone() };
        if strip(aig).to_aiger(false) != strip(&from_binary).to_aiger(false)
            || strip(&from_binary).to_aiger(true) != strip(aig).to_aiger(true)
        {
            return Err(format!("{name}: ASCII and binary forms differ beyond symbols and comments"));
        }
        files += 2;
        for bad in 0..aig.properties().len() {
            if shortest_cex(aig, bad).is_none() {
                continue;
            }
            let ts = TranSys::encode(aig, bad).unwrap();
            let Verdict::Unsafe(w) = bmc(&ts, 64, 1, &Cancel::new()) else {
                return Err(format!("{name} b{bad}: no counterexample found"));
            };
            let text = w.to_text();
            let back = WitnessTrace::parse(&text).map_err(|e| format!("{name} b{bad}: {e}"))?;
            if back != w || back.to_text() != text || back.verify(aig).is_err() || !replays(aig, &back) {
                return Err(format!("{name} b{bad}: witness does not round-trip and replay"));
            }
            witnesses += 1;
        }
    }
    Ok(format!("{files} files round-trip byte-identically; {witnesses} witnesses re-parse and replay"))
}

// ------------------------------------------------------------------------

fn run(n: usize, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(s) => {
            println!("PASS criterion {n}: {s} [{secs:.1}s]");
            true
        }
        Err(s) => {
            println!("FAIL criterion {n}: {s} [{secs:.1}s]");
            false
        }
    }
}

#[test]
fn acceptance() {
    let fixtures = fixture_models();
    let mut tally = None;
    let c1 = run(1, || {
        let t = oracle_tally();
        let r = criterion1(&t);
        tally = Some(t);
        r
    });
    let c2 = run(2, || criterion2(tally.as_ref().ok_or("criterion 1 did not complete")?));
    let results = [
        c1,
        c2,
        run(3, || criterion3(&fixtures)),
        run(4, criterion4),
        run(5, || criterion5(&fixtures)),
        run(6, || criterion6(&fixtures)),
        run(7, || criterion7(&fixtures)),
        run(8, || criterion8(&fixtures)),
    ];
    let failed: Vec<usize> = (1..=8).filter(|&i| !results[i - 1]).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
