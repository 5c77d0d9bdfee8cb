//! Random AIG generation for differential testing.

use crate::{Aig, AigRef, AndGate, Init, Latch};
use rand::Rng;

#[derive(Clone, Debug)]
pub struct RandomParams {
    pub inputs: usize,
    pub latches: usize,
    pub gates: usize,
    pub bads: usize,
    pub constraints: usize,
    /// Probability that a latch resets to 1.
    pub one_init: f64,
    /// Probability that a latch is uninitialized.
    pub free_init: f64,
}

impl Default for RandomParams {
    fn default() -> Self {
        Self {
            inputs: 2,
            latches: 4,
            gates: 20,
            bads: 1,
            constraints: 0,
            one_init: 0.2,
            free_init: 0.05,
        }
    }
}

/// Canonically numbered random graph with exactly `gates` and-gates.
pub fn random_aig<R: Rng>(rng: &mut R, p: &RandomParams) -> Aig {
    let ni = p.inputs as u32;
    let nl = p.latches as u32;
    let mut aig = Aig {
        max_var: ni + nl + p.gates as u32,
        inputs: (1..=ni).collect(),
        ..Default::default()
    };
    let pick = |rng: &mut R, upto: u32| -> AigRef {
        // occasionally a constant, otherwise any earlier node
        if upto == 0 || rng.gen_bool(0.03) {
            return AigRef::from_raw(rng.gen_range(0..2));
        }
        AigRef::new(rng.gen_range(1..=upto), rng.gen_bool(0.5))
    };
    for k in 0..p.gates as u32 {
        let lhs = ni + nl + k + 1;
        // bias operands towards recent nodes to get deeper logic
        let lo = if rng.gen_bool(0.5) && lhs > 8 { lhs - 8 } else { 0 };
        let a = if lo > 0 {
            AigRef::new(rng.gen_range(lo..lhs), rng.gen_bool(0.5))
        } else {
            pick(rng, lhs - 1)
        };
        let b = pick(rng, lhs - 1);
        aig.ands.push(AndGate {
            lhs,
            rhs0: a.max(b),
            rhs1: a.min(b),
        });
    }
    for k in 0..nl {
        let var = ni + k + 1;
        let init = if rng.gen_bool(p.free_init) {
            Init::Free
        } else if rng.gen_bool(p.one_init) {
            Init::One
        } else {
            Init::Zero
        };
        let next = pick(rng, aig.max_var);
        aig.latches.push(Latch { var, next, init });
    }
    let top = |rng: &mut R, max: u32| {
        let from = (max * 3 / 4).max(1);
        if max == 0 {
            AigRef::from_raw(rng.gen_range(0..2))
        } else {
            AigRef::new(rng.gen_range(from..=max), rng.gen_bool(0.5))
        }
    };
    for _ in 0..p.bads {
        let b = top(rng, aig.max_var);
        aig.bads.push(b);
    }
    for _ in 0..p.constraints {
        let c = pick(rng, aig.max_var);
        aig.constraints.push(c);
    }
    aig
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{rngs::StdRng, SeedableRng};

    #[test]
    fn generated_graphs_are_canonical() {
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..50 {
            let p = RandomParams {
                inputs: rng.gen_range(0..4),
                latches: rng.gen_range(0..8),
                gates: rng.gen_range(0..40),
                ..Default::default()
            };
            let aig = random_aig(&mut rng, &p);
            assert!(aig.is_canonical());
            assert_eq!(aig.bads.len(), 1);
        }
    }
}
