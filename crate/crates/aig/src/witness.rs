//! Counterexample traces and their text format.
//!
//! ```text
//! 1
//! b0
//! 0x1        latch reset bits
//! 01         one input vector per step
//! 11
//! .
//! ```
//!
//! Lines starting with `#` are ignored. A trace with `n` input vectors
//! reaches the bad state at step `n - 1`.

use crate::{Aig, SimError};
use std::fmt::Write;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WitnessTrace {
    pub bad_index: usize,
    /// Latch values at step 0; `None` is an `x` bit.
    pub init: Vec<Option<bool>>,
    pub inputs: Vec<Vec<Option<bool>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: &'static str },
    #[error(transparent)]
    Size(#[from] SimError),
    #[error("bad index {0} does not exist")]
    NoSuchBad(usize),
    #[error("initial value of latch {latch} contradicts its reset value")]
    InitMismatch { latch: usize },
    #[error("constraint violated at step {step}")]
    ConstraintViolated { step: usize },
    #[error("bad not reached at the final step {step}")]
    BadNotReached { step: usize },
    #[error("trace has no steps")]
    Empty,
}

fn bits(line: &str) -> Option<Vec<Option<bool>>> {
    line.chars()
        .map(|c| match c {
            '0' => Some(Some(false)),
            '1' => Some(Some(true)),
            'x' | 'X' => Some(None),
            _ => None,
        })
        .collect()
}

fn render(bits: &[Option<bool>], out: &mut String) {
    for b in bits {
        out.push(match b {
            Some(false) => '0',
            Some(true) => '1',
            None => 'x',
        });
    }
    out.push('\n');
}

impl WitnessTrace {
    /// Number of transitions; the bad holds at this step.
    pub fn depth(&self) -> usize {
        self.inputs.len().saturating_sub(1)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "1\nb{}", self.bad_index).unwrap();
        render(&self.init, &mut out);
        for f in &self.inputs {
            render(f, &mut out);
        }
        out.push_str(".\n");
        out
    }

    pub fn parse(text: &str) -> Result<WitnessTrace, WitnessError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
            .filter(|(_, l)| !l.starts_with('#'));
        let mut next = |msg| lines.next().ok_or(WitnessError::Syntax { line: 0, msg });
        let (line, status) = next("missing status line")?;
        if status.trim() != "1" {
            return Err(WitnessError::Syntax { line, msg: "expected status 1" });
        }
        let (line, prop) = next("missing property line")?;
        let bad_index = prop
            .trim()
            .strip_prefix('b')
            .and_then(|s| s.parse().ok())
            .ok_or(WitnessError::Syntax { line, msg: "expected b<index>" })?;
        let (line, init) = next("missing initial state")?;
        let init = bits(init).ok_or(WitnessError::Syntax { line, msg: "invalid bit" })?;
        let mut inputs = Vec::new();
        loop {
            let (line, l) = next("missing terminating '.'")?;
            if l.trim() == "." {
                break;
            }
            inputs.push(bits(l).ok_or(WitnessError::Syntax { line, msg: "invalid bit" })?);
        }
        Ok(WitnessTrace {
            bad_index,
            init,
            inputs,
        })
    }

    /// Replay on `aig`: the initial state must agree with the reset values,
    /// every constraint must hold at every step, and the bad must hold at
    /// the final step.
    pub fn verify(&self, aig: &Aig) -> Result<(), WitnessError> {
        if self.bad_index >= aig.properties().len() {
            return Err(WitnessError::NoSuchBad(self.bad_index));
        }
        if self.inputs.is_empty() {
            return Err(WitnessError::Empty);
        }
        let trace = aig.simulate(Some(&self.init), &self.inputs)?;
        for (i, (l, bit)) in aig.latches.iter().zip(&self.init).enumerate() {
            if let (Some(reset), Some(b)) = (l.init.value(), bit) {
                if reset != *b {
                    return Err(WitnessError::InitMismatch { latch: i });
                }
            }
        }
        if let Some(step) = trace.first_constraint_violation() {
            return Err(WitnessError::ConstraintViolated { step });
        }
        let last = trace.steps() - 1;
        if !trace.bads[last][self.bad_index] {
            return Err(WitnessError::BadNotReached { step: last });
        }
        Ok(())
    }
}
