//! Shared helpers: an explicit-state reachability oracle and generators.
#![allow(dead_code)]

use aig::random::{random_aig, RandomParams};
use aig::{Aig, AigBuilder, AigRef, Init};
use std::path::{Path, PathBuf};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::HashSet;

fn value(vals: &[bool], r: AigRef) -> bool {
    vals[r.var() as usize] ^ r.is_complemented()
}

/// One evaluated step: constraints hold, bad value, next state.
pub fn step(aig: &Aig, bad_index: usize, state: u64, input: u64) -> (bool, bool, u64) {
    let mut vals = vec![false; aig.max_var as usize + 1];
    for (i, &v) in aig.inputs.iter().enumerate() {
        vals[v as usize] = input >> i & 1 == 1;
    }
    for (i, l) in aig.latches.iter().enumerate() {
        vals[l.var as usize] = state >> i & 1 == 1;
    }
    for g in &aig.ands {
        vals[g.lhs as usize] = value(&vals, g.rhs0) && value(&vals, g.rhs1);
    }
    let ok = aig.constraints.iter().all(|&c| value(&vals, c));
    let bad = value(&vals, aig.properties()[bad_index]);
    let mut next = 0u64;
    for (i, l) in aig.latches.iter().enumerate() {
        if value(&vals, l.next) {
            next |= 1 << i;
        }
    }
    (ok, bad, next)
}

/// Initial states: every completion of the reset values.
pub fn initial_states(aig: &Aig) -> Vec<u64> {
    let mut states = vec![0u64];
    for (i, l) in aig.latches.iter().enumerate() {
        states = match l.init {
            Init::Zero => states,
            Init::One => states.into_iter().map(|s| s | 1 << i).collect(),
            Init::Free => states.into_iter().flat_map(|s| [s, s | 1 << i]).collect(),
        };
    }
    states
}

/// Length of the shortest counterexample, by breadth-first search over
/// concrete states. A counterexample of length `d` visits `d + 1` states
/// with the constraints holding at each and the bad holding at the last.
pub fn shortest_cex(aig: &Aig, bad_index: usize) -> Option<usize> {
    assert!(aig.latches.len() <= 20 && aig.inputs.len() <= 12, "oracle is for small designs");
    let mut seen: HashSet<u64> = HashSet::new();
    let mut frontier = initial_states(aig);
    frontier.retain(|s| seen.insert(*s));
    let mut depth = 0;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &s in &frontier {
            for input in 0..1u64 << aig.inputs.len() {
                let (ok, bad, n) = step(aig, bad_index, s, input);
                if !ok {
                    continue;
                }
                if bad {
                    return Some(depth);
                }
                if seen.insert(n) {
                    next.push(n);
                }
            }
        }
        frontier = next;
        depth += 1;
    }
    None
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Small random design, sized for the oracle.
pub fn small_aig(rng: &mut StdRng) -> Aig {
    let p = RandomParams {
        inputs: rng.gen_range(0..=3),
        latches: rng.gen_range(1..=7),
        gates: rng.gen_range(3..=30),
        bads: 1,
        constraints: if rng.gen_bool(0.2) { 1 } else { 0 },
        one_init: 0.2,
        free_init: if rng.gen_bool(0.2) { 0.2 } else { 0.0 },
    };
    random_aig(rng, &p)
}

/// Larger designs, still within reach of the oracle.
pub fn medium_aig(rng: &mut StdRng) -> Aig {
    let p = RandomParams {
        inputs: rng.gen_range(1..=3),
        latches: rng.gen_range(8..=12),
        gates: rng.gen_range(40..=90),
        bads: 1,
        constraints: if rng.gen_bool(0.15) { 1 } else { 0 },
        one_init: 0.2,
        free_init: 0.0,
    };
    let aig = random_aig(rng, &p);
    with_conjunctive_bad(aig, rng)
}

/// Random designs skewed towards interesting verdicts: the bad literal is
/// a conjunction of several state bits, so it tends to be reachable only
/// after a few steps or not at all.
pub fn deep_aig(rng: &mut StdRng) -> Aig {
    let aig = small_aig(rng);
    with_conjunctive_bad(aig, rng)
}

pub fn with_conjunctive_bad(mut aig: Aig, rng: &mut StdRng) -> Aig {
    let nl = aig.latches.len() as u32;
    let mut b = AigBuilder::from_aig(&aig);
    let k = rng.gen_range(1..=nl.min(4));
    let mut lits = Vec::new();
    for _ in 0..k {
        let l = aig.latches[rng.gen_range(0..nl) as usize].var;
        lits.push(AigRef::new(l, rng.gen_bool(0.5)));
    }
    let old = aig.bads[0];
    let conj = b.and_all(&lits);
    let bad = if rng.gen_bool(0.5) { b.and(conj, old) } else { conj };
    aig = b.build();
    aig.bads[0] = bad;
    aig
}

/// Path of a file in the shared fixture corpus.
pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn load_fixture(name: &str) -> Aig {
    aig::parse_aiger(&std::fs::read(fixture(name)).unwrap()).unwrap()
}
