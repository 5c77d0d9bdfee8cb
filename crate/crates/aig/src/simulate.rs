use crate::{Aig, AigRef};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("initial state has {got} bits, expected {expected}")]
    InitLength { expected: usize, got: usize },
    #[error("input frame {frame} has {got} bits, expected {expected}")]
    InputLength {
        frame: usize,
        expected: usize,
        got: usize,
    },
}

/// Per-step valuations produced by [`Aig::simulate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimTrace {
    /// `states[k]` are the latch values at step `k`.
    pub states: Vec<Vec<bool>>,
    /// `bads[k][i]` is property `i` at step `k`.
    pub bads: Vec<Vec<bool>>,
    /// `constraints[k][i]` is constraint `i` at step `k`.
    pub constraints: Vec<Vec<bool>>,
}

impl SimTrace {
    pub fn steps(&self) -> usize {
        self.bads.len()
    }

    /// First step at which property `index` holds.
    pub fn first_bad(&self, index: usize) -> Option<usize> {
        self.bads.iter().position(|b| b.get(index).copied().unwrap_or(false))
    }

    /// First step at which some constraint is violated.
    pub fn first_constraint_violation(&self) -> Option<usize> {
        self.constraints.iter().position(|c| c.iter().any(|&v| !v))
    }
}

impl Aig {
    /// Evaluate every gate given input and latch values already written to
    /// `values` (indexed by variable).
    pub fn eval_gates(&self, values: &mut [bool]) {
        for a in &self.ands {
            let v = lookup(values, a.rhs0) && lookup(values, a.rhs1);
            values[a.lhs as usize] = v;
        }
    }

    /// Simulate from an initial state. `init[i]` overrides latch `i`; `None`
    /// (an `x` bit) keeps the latch's own reset value, or 0 if it has none.
    /// Input `x` bits are 0. Frame `k` drives step `k`, so `n` frames give
    /// `n` evaluated steps.
    pub fn simulate(
        &self,
        init: Option<&[Option<bool>]>,
        frames: &[Vec<Option<bool>>],
    ) -> Result<SimTrace, SimError> {
        if let Some(init) = init {
            if init.len() != self.latches.len() {
                return Err(SimError::InitLength {
                    expected: self.latches.len(),
                    got: init.len(),
                });
            }
        }
        for (k, f) in frames.iter().enumerate() {
            if f.len() != self.inputs.len() {
                return Err(SimError::InputLength {
                    frame: k,
                    expected: self.inputs.len(),
                    got: f.len(),
                });
            }
        }
        let mut state: Vec<bool> = self
            .latches
            .iter()
            .enumerate()
            .map(|(i, l)| {
                init.and_then(|v| v[i])
                    .or(l.init.value())
                    .unwrap_or(false)
            })
            .collect();
        let mut values = vec![false; self.max_var as usize + 1];
        let mut trace = SimTrace::default();
        for frame in frames {
            for (&v, bit) in self.inputs.iter().zip(frame) {
                values[v as usize] = bit.unwrap_or(false);
            }
            for (l, &s) in self.latches.iter().zip(&state) {
                values[l.var as usize] = s;
            }
            self.eval_gates(&mut values);
            trace.states.push(state.clone());
            trace
                .bads
                .push(self.properties().iter().map(|&r| lookup(&values, r)).collect());
            trace
                .constraints
                .push(self.constraints.iter().map(|&r| lookup(&values, r)).collect());
            state = self.latches.iter().map(|l| lookup(&values, l.next)).collect();
        }
        Ok(trace)
    }
}

#[inline]
pub(crate) fn lookup(values: &[bool], r: AigRef) -> bool {
    values[r.var() as usize] ^ r.is_complemented()
}
