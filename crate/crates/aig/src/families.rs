//! Small parameterized designs with known behaviour, shared by tests,
//! benchmarks and the fixture corpus.

use crate::{Aig, AigBuilder, AigRef, Init};

/// One latch stuck at 0; bad is the latch.
pub const SAFE1: &str = "aag 1 0 1 0 0 1\n2 2\n2\n";
/// One latch set to 1 after the first step; bad is the latch.
pub const UNSAFE1: &str = "aag 1 0 1 0 0 1\n2 3\n2\n";
/// 2-bit counter: next l0 = ¬l0, next l1 = l1 ⊕ l0, bad = l0 ∧ l1.
pub const CNT2: &str = "aag 6 0 2 0 4 1\n2 3\n4 11\n12\n6 4 3\n8 5 2\n10 9 7\n12 4 2\n";

/// Increment `bits` when `en`; returns the next-state functions.
fn increment(b: &mut AigBuilder, bits: &[AigRef], en: AigRef) -> Vec<AigRef> {
    let mut carry = en;
    let mut next = Vec::new();
    for &q in bits {
        next.push(b.xor(q, carry));
        carry = b.and(q, carry);
    }
    next
}

fn equals(b: &mut AigBuilder, bits: &[AigRef], value: u64) -> AigRef {
    let lits: Vec<AigRef> = bits
        .iter()
        .enumerate()
        .map(|(i, &q)| if value >> i & 1 == 1 { q } else { !q })
        .collect();
    b.and_all(&lits)
}

/// `width`-bit counter from 0, incrementing every step or, with
/// `enable_input`, when an input is high. Bad when it equals `target`,
/// first reachable at step `target`.
pub fn counter(width: usize, target: u64, enable_input: bool) -> Aig {
    let mut b = AigBuilder::new();
    let en = if enable_input { b.input() } else { AigRef::TRUE };
    let bits: Vec<AigRef> = (0..width).map(|_| b.latch(Init::Zero)).collect();
    let next = increment(&mut b, &bits, en);
    for (&q, &n) in bits.iter().zip(&next) {
        b.set_next(q, n);
    }
    let bad = equals(&mut b, &bits, target);
    b.bad(bad);
    b.build()
}

/// Two `width`-bit counters driven by the same reset input; bad when they
/// differ. Safe, with the bitwise equalities as inductive invariant.
pub fn reset_counter_pair(width: usize) -> Aig {
    let mut b = AigBuilder::new();
    let reset = b.input();
    let x: Vec<AigRef> = (0..width).map(|_| b.latch(Init::Zero)).collect();
    let y: Vec<AigRef> = (0..width).map(|_| b.latch(Init::Zero)).collect();
    for bits in [&x, &y] {
        let inc = increment(&mut b, bits, AigRef::TRUE);
        for (&q, &n) in bits.iter().zip(&inc) {
            let n = b.and(n, !reset);
            b.set_next(q, n);
        }
    }
    let diffs: Vec<AigRef> = x.iter().zip(&y).map(|(&p, &q)| b.xor(p, q)).collect();
    let same = b.and_all(&diffs.iter().map(|&d| !d).collect::<Vec<_>>());
    b.bad(!same);
    b.build()
}

/// Free-running `width`-bit counter with a sticky flag set on wrap-around;
/// bad is the flag, first reachable at step `2^width`.
pub fn wrap_counter(width: usize) -> Aig {
    let mut b = AigBuilder::new();
    let bits: Vec<AigRef> = (0..width).map(|_| b.latch(Init::Zero)).collect();
    let flag = b.latch(Init::Zero);
    let next = increment(&mut b, &bits, AigRef::TRUE);
    for (&q, &n) in bits.iter().zip(&next) {
        b.set_next(q, n);
    }
    let full = b.and_all(&bits);
    let f = b.or(flag, full);
    b.set_next(flag, f);
    b.bad(flag);
    b.build()
}

/// Input `i` shifts through latches a, b; bad is b; the constraint keeps
/// `i` low. Safe only because of the constraint.
pub fn constrained_shift() -> Aig {
    let mut b = AigBuilder::new();
    let i = b.input();
    let l1 = b.latch(Init::Zero);
    let l2 = b.latch(Init::Zero);
    b.set_next(l1, i);
    b.set_next(l2, l1);
    b.constraint(!i);
    b.bad(l2);
    b.build()
}

/// `width`-bit counter that returns to 0 after `modulus - 1`; bad when all
/// bits are set. Safe for `modulus < 2^width`, and the unreachable values
/// above the modulus make blocking hard for literal dropping alone.
pub fn modular_counter(width: usize, modulus: u64, enable_input: bool) -> Aig {
    let mut b = AigBuilder::new();
    let en = if enable_input { b.input() } else { AigRef::TRUE };
    let bits: Vec<AigRef> = (0..width).map(|_| b.latch(Init::Zero)).collect();
    let inc = increment(&mut b, &bits, en);
    let last = equals(&mut b, &bits, modulus - 1);
    let wrap = b.and(last, en);
    for (&q, &n) in bits.iter().zip(&inc) {
        let n = b.and(n, !wrap);
        b.set_next(q, n);
    }
    let all = b.and_all(&bits);
    b.bad(all);
    b.build()
}

/// One-hot token ring of `n` stations; the token advances when an input
/// is high. Bad when stations 0 and `n / 2` both hold a token. Safe; the
/// invariant needs the pairwise exclusions that literal dropping alone
/// finds only slowly.
pub fn token_ring(n: usize) -> Aig {
    assert!(n >= 2);
    let mut b = AigBuilder::new();
    let step = b.input();
    let x: Vec<AigRef> = (0..n).map(|i| b.latch(if i == 0 { Init::One } else { Init::Zero })).collect();
    for i in 0..n {
        let prev = x[(i + n - 1) % n];
        let n_i = b.mux(step, prev, x[i]);
        b.set_next(x[i], n_i);
    }
    let bad = b.and(x[0], x[n / 2]);
    b.bad(bad);
    b.build()
}
