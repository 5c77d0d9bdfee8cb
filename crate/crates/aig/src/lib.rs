//! And-inverter graphs and the AIGER 1.9 format.
//!
//! Node references follow AIGER literal encoding: `2 * var + complement`,
//! with raw 0 the constant false and raw 1 the constant true.

mod builder;
mod coi;
pub mod families;
mod parse;
pub mod random;
mod simplify;
mod simulate;
pub mod witness;
mod write;

pub use builder::AigBuilder;
pub use parse::{parse_aiger, ParseError, ParseErrorKind, Position};
pub use simulate::{SimError, SimTrace};
pub use witness::{WitnessError, WitnessTrace};

use std::fmt;
use std::ops::Not;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AigRef(u32);

impl AigRef {
    pub const FALSE: AigRef = AigRef(0);
    pub const TRUE: AigRef = AigRef(1);

    #[inline]
    pub const fn new(var: u32, complement: bool) -> Self {
        AigRef(var << 1 | complement as u32)
    }

    #[inline]
    pub const fn from_raw(raw: u32) -> Self {
        AigRef(raw)
    }

    #[inline]
    pub const fn raw(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn var(self) -> u32 {
        self.0 >> 1
    }

    #[inline]
    pub const fn is_complemented(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub const fn is_constant(self) -> bool {
        self.0 < 2
    }

    #[inline]
    pub const fn regular(self) -> AigRef {
        AigRef(self.0 & !1)
    }

    #[inline]
    pub const fn xor(self, c: bool) -> AigRef {
        AigRef(self.0 ^ c as u32)
    }
}

impl Not for AigRef {
    type Output = AigRef;

    #[inline]
    fn not(self) -> AigRef {
        AigRef(self.0 ^ 1)
    }
}

impl fmt::Debug for AigRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Latch reset value. `Free` latches start in either state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Init {
    Zero,
    One,
    Free,
}

impl Init {
    pub fn value(self) -> Option<bool> {
        match self {
            Init::Zero => Some(false),
            Init::One => Some(true),
            Init::Free => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Latch {
    pub var: u32,
    pub next: AigRef,
    pub init: Init,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AndGate {
    pub lhs: u32,
    pub rhs0: AigRef,
    pub rhs1: AigRef,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Const,
    Input(usize),
    Latch(usize),
    And(usize),
    Unused,
}

/// A sequential and-inverter graph. `ands` is kept in topological order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Aig {
    pub max_var: u32,
    pub inputs: Vec<u32>,
    pub latches: Vec<Latch>,
    pub outputs: Vec<AigRef>,
    pub bads: Vec<AigRef>,
    pub constraints: Vec<AigRef>,
    pub ands: Vec<AndGate>,
    /// Symbol table and comment section, kept verbatim.
    pub trailer: Vec<u8>,
}

impl Aig {
    /// Bad-state properties. Files without a `B` section use their outputs,
    /// following the pre-1.9 convention.
    pub fn properties(&self) -> &[AigRef] {
        if self.bads.is_empty() {
            &self.outputs
        } else {
            &self.bads
        }
    }

    pub fn node_kinds(&self) -> Vec<NodeKind> {
        let mut kinds = vec![NodeKind::Unused; self.max_var as usize + 1];
        kinds[0] = NodeKind::Const;
        for (i, &v) in self.inputs.iter().enumerate() {
            kinds[v as usize] = NodeKind::Input(i);
        }
        for (i, l) in self.latches.iter().enumerate() {
            kinds[l.var as usize] = NodeKind::Latch(i);
        }
        for (i, a) in self.ands.iter().enumerate() {
            kinds[a.lhs as usize] = NodeKind::And(i);
        }
        kinds
    }

    /// True when numbering follows the binary-format layout: inputs, then
    /// latches, then gates, each gate larger than its operands, with
    /// `rhs0 >= rhs1`.
    pub fn is_canonical(&self) -> bool {
        let ni = self.inputs.len() as u32;
        let nl = self.latches.len() as u32;
        self.max_var == ni + nl + self.ands.len() as u32
            && self.inputs.iter().enumerate().all(|(i, &v)| v == i as u32 + 1)
            && self.latches.iter().enumerate().all(|(i, l)| l.var == ni + i as u32 + 1)
            && self.ands.iter().enumerate().all(|(i, a)| {
                a.lhs == ni + nl + i as u32 + 1 && a.rhs0.raw() < 2 * a.lhs && a.rhs0 >= a.rhs1
            })
    }

    /// Renumber into canonical layout, dropping unused variable indices.
    pub fn reencode(&self) -> Aig {
        let mut map = vec![AigRef::FALSE; self.max_var as usize + 1];
        let mut next = 1u32;
        for &v in &self.inputs {
            map[v as usize] = AigRef::new(next, false);
            next += 1;
        }
        for l in &self.latches {
            map[l.var as usize] = AigRef::new(next, false);
            next += 1;
        }
        let tr = |map: &[AigRef], r: AigRef| map[r.var() as usize].xor(r.is_complemented());
        let mut ands = Vec::with_capacity(self.ands.len());
        for a in &self.ands {
            let lhs = next;
            next += 1;
            map[a.lhs as usize] = AigRef::new(lhs, false);
            let (x, y) = (tr(&map, a.rhs0), tr(&map, a.rhs1));
            ands.push(AndGate {
                lhs,
                rhs0: x.max(y),
                rhs1: x.min(y),
            });
        }
        Aig {
            max_var: next - 1,
            inputs: (1..=self.inputs.len() as u32).collect(),
            latches: self
                .latches
                .iter()
                .map(|l| Latch {
                    var: map[l.var as usize].var(),
                    next: tr(&map, l.next),
                    init: l.init,
                })
                .collect(),
            outputs: self.outputs.iter().map(|&r| tr(&map, r)).collect(),
            bads: self.bads.iter().map(|&r| tr(&map, r)).collect(),
            constraints: self.constraints.iter().map(|&r| tr(&map, r)).collect(),
            ands,
            trailer: self.trailer.clone(),
        }
    }

    /// Gate fanout counts indexed by variable (references from gates,
    /// latch next functions, and properties).
    pub fn fanouts(&self) -> Vec<u32> {
        let mut fo = vec![0u32; self.max_var as usize + 1];
        for a in &self.ands {
            fo[a.rhs0.var() as usize] += 1;
            fo[a.rhs1.var() as usize] += 1;
        }
        for l in &self.latches {
            fo[l.next.var() as usize] += 1;
        }
        for r in self.outputs.iter().chain(&self.bads).chain(&self.constraints) {
            fo[r.var() as usize] += 1;
        }
        fo
    }
}

#[cfg(test)]
pub(crate) use families as fixtures;
