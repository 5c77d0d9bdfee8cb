use crate::{Aig, AigRef, AndGate, Init, Latch};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Position {
    /// 1-based line in the ASCII part of the file.
    Line(usize),
    /// Byte offset into the binary gate section.
    Byte(usize),
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::Line(l) => write!(f, "line {l}"),
            Position::Byte(b) => write!(f, "byte {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed header")]
    InvalidHeader,
    #[error("unexpected end of file")]
    UnexpectedEof,
    #[error("expected an unsigned integer")]
    InvalidNumber,
    #[error("wrong number of fields")]
    FieldCount,
    #[error("literal {0} out of range")]
    LitOutOfRange(u64),
    #[error("literal {0} cannot be defined here")]
    InvalidDefinition(u32),
    #[error("variable {0} defined twice")]
    Redefined(u32),
    #[error("variable {0} used but never defined")]
    Undefined(u32),
    #[error("invalid latch reset value {0}")]
    InvalidInit(u32),
    #[error("binary gate deltas are not monotone")]
    NonMonotoneDelta,
    #[error("binary header requires M = I + L + A")]
    CountMismatch,
    #[error("justice and fairness properties are not supported")]
    JusticeFairness,
    #[error("combinational cycle through variable {0}")]
    Cycle(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {kind}")]
pub struct ParseError {
    pub pos: Position,
    pub kind: ParseErrorKind,
}

type Result<T> = std::result::Result<T, ParseError>;

/// Upper bound on the header's maximum variable index.
pub const MAX_VARS: u32 = 1 << 26;

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            pos: Position::Line(self.line),
            kind,
        }
    }

    fn next_line(&mut self) -> Result<&'a [u8]> {
        if self.pos >= self.data.len() {
            self.line += 1;
            return Err(self.err(ParseErrorKind::UnexpectedEof));
        }
        let rest = &self.data[self.pos..];
        let (line, adv) = match rest.iter().position(|&b| b == b'\n') {
            Some(i) => (&rest[..i], i + 1),
            None => (rest, rest.len()),
        };
        self.pos += adv;
        self.line += 1;
        Ok(line.strip_suffix(b"\r").unwrap_or(line))
    }

    fn numbers(&mut self, min: usize, max: usize) -> Result<Vec<u32>> {
        let line = self.next_line()?;
        let mut out = Vec::with_capacity(max);
        for field in line.split(|&b| b == b' ' || b == b'\t').filter(|f| !f.is_empty()) {
            out.push(number(field).ok_or_else(|| self.err(ParseErrorKind::InvalidNumber))?);
        }
        if out.len() < min || out.len() > max {
            return Err(self.err(ParseErrorKind::FieldCount));
        }
        Ok(out)
    }
}

fn number(field: &[u8]) -> Option<u32> {
    if field.is_empty() || !field.iter().all(u8::is_ascii_digit) {
        return None;
    }
    std::str::from_utf8(field).ok()?.parse().ok()
}

struct Header {
    binary: bool,
    m: u32,
    i: u32,
    l: u32,
    o: u32,
    a: u32,
    b: u32,
    c: u32,
}

fn header(cur: &mut Cursor) -> Result<Header> {
    let line = cur.next_line()?;
    let mut fields = line.split(|&b| b == b' ').filter(|f| !f.is_empty());
    let binary = match fields.next() {
        Some(b"aag") => false,
        Some(b"aig") => true,
        _ => return Err(cur.err(ParseErrorKind::InvalidHeader)),
    };
    let mut nums = Vec::new();
    for f in fields {
        nums.push(number(f).ok_or_else(|| cur.err(ParseErrorKind::InvalidHeader))?);
    }
    if nums.len() < 5 || nums.len() > 9 {
        return Err(cur.err(ParseErrorKind::InvalidHeader));
    }
    if nums.len() > 7 && nums[7..].iter().any(|&n| n != 0) {
        return Err(cur.err(ParseErrorKind::JusticeFairness));
    }
    nums.resize(9, 0);
    let h = Header {
        binary,
        m: nums[0],
        i: nums[1],
        l: nums[2],
        o: nums[3],
        a: nums[4],
        b: nums[5],
        c: nums[6],
    };
    if h.m > MAX_VARS {
        return Err(cur.err(ParseErrorKind::InvalidHeader));
    }
    if binary && h.m as u64 != h.i as u64 + h.l as u64 + h.a as u64 {
        return Err(cur.err(ParseErrorKind::CountMismatch));
    }
    // every count is bounded by the literal range, which also protects
    // the allocations below from absurd headers
    let limit = h.m as u64 + 1;
    if h.i as u64 + h.l as u64 + h.a as u64 > limit {
        return Err(cur.err(ParseErrorKind::InvalidHeader));
    }
    Ok(h)
}

struct Defs {
    defined: Vec<bool>,
}

impl Defs {
    fn define(&mut self, cur: &Cursor, lit: u32) -> Result<u32> {
        if lit < 2 || lit & 1 == 1 {
            return Err(cur.err(ParseErrorKind::InvalidDefinition(lit)));
        }
        let var = lit >> 1;
        if var as usize >= self.defined.len() {
            return Err(cur.err(ParseErrorKind::LitOutOfRange(lit as u64)));
        }
        if std::mem::replace(&mut self.defined[var as usize], true) {
            return Err(cur.err(ParseErrorKind::Redefined(var)));
        }
        Ok(var)
    }
}

fn check_lit(cur: &Cursor, m: u32, lit: u32) -> Result<AigRef> {
    if lit as u64 > 2 * m as u64 + 1 {
        return Err(cur.err(ParseErrorKind::LitOutOfRange(lit as u64)));
    }
    Ok(AigRef::from_raw(lit))
}

/// Parse an ASCII (`aag`) or binary (`aig`) AIGER file.
pub fn parse_aiger(data: &[u8]) -> Result<Aig> {
    let mut cur = Cursor {
        data,
        pos: 0,
        line: 0,
    };
    let h = header(&mut cur)?;
    let mut defs = Defs {
        defined: vec![false; h.m as usize + 1],
    };
    let mut aig = Aig {
        max_var: h.m,
        ..Default::default()
    };

    if h.binary {
        for k in 0..h.i {
            let var = k + 1;
            defs.defined[var as usize] = true;
            aig.inputs.push(var);
        }
    } else {
        for _ in 0..h.i {
            let n = cur.numbers(1, 1)?;
            aig.inputs.push(defs.define(&cur, n[0])?);
        }
    }

    for k in 0..h.l {
        let (var, next, init) = if h.binary {
            let n = cur.numbers(1, 2)?;
            let var = h.i + k + 1;
            defs.defined[var as usize] = true;
            (var, n[0], n.get(1).copied())
        } else {
            let n = cur.numbers(2, 3)?;
            (defs.define(&cur, n[0])?, n[1], n.get(2).copied())
        };
        let next = check_lit(&cur, h.m, next)?;
        let init = match init {
            None | Some(0) => Init::Zero,
            Some(1) => Init::One,
            Some(x) if x == 2 * var => Init::Free,
            Some(x) => return Err(cur.err(ParseErrorKind::InvalidInit(x))),
        };
        aig.latches.push(Latch { var, next, init });
    }

    for (count, dst) in [(h.o, 0), (h.b, 1), (h.c, 2)] {
        for _ in 0..count {
            let n = cur.numbers(1, 1)?;
            let r = check_lit(&cur, h.m, n[0])?;
            match dst {
                0 => aig.outputs.push(r),
                1 => aig.bads.push(r),
                _ => aig.constraints.push(r),
            }
        }
    }

    if h.binary {
        let first = h.i + h.l + 1;
        for k in 0..h.a {
            let lhs = first + k;
            let lit = 2 * lhs;
            let at = cur.pos;
            let d0 = leb128(&mut cur)?;
            let d1 = leb128(&mut cur)?;
            if d0 == 0 || d0 > lit || d1 > lit - d0 {
                return Err(ParseError {
                    pos: Position::Byte(at),
                    kind: ParseErrorKind::NonMonotoneDelta,
                });
            }
            let rhs0 = lit - d0;
            let rhs1 = rhs0 - d1;
            defs.defined[lhs as usize] = true;
            aig.ands.push(AndGate {
                lhs,
                rhs0: AigRef::from_raw(rhs0),
                rhs1: AigRef::from_raw(rhs1),
            });
        }
    } else {
        for _ in 0..h.a {
            let n = cur.numbers(3, 3)?;
            let lhs = defs.define(&cur, n[0])?;
            let rhs0 = check_lit(&cur, h.m, n[1])?;
            let rhs1 = check_lit(&cur, h.m, n[2])?;
            aig.ands.push(AndGate { lhs, rhs0, rhs1 });
        }
    }
    aig.trailer = data[cur.pos.min(data.len())..].to_vec();

    let undefined = |r: AigRef| r.var() != 0 && !defs.defined[r.var() as usize];
    let refs = aig
        .latches
        .iter()
        .map(|l| l.next)
        .chain(aig.ands.iter().flat_map(|a| [a.rhs0, a.rhs1]))
        .chain(aig.outputs.iter().copied())
        .chain(aig.bads.iter().copied())
        .chain(aig.constraints.iter().copied());
    for r in refs {
        if undefined(r) {
            return Err(cur.err(ParseErrorKind::Undefined(r.var())));
        }
    }
    if !h.binary {
        topo_sort(&mut aig).map_err(|v| cur.err(ParseErrorKind::Cycle(v)))?;
    }
    Ok(aig)
}

fn leb128(cur: &mut Cursor) -> Result<u32> {
    let mut x: u64 = 0;
    let mut shift = 0;
    loop {
        let Some(&b) = cur.data.get(cur.pos) else {
            return Err(ParseError {
                pos: Position::Byte(cur.pos),
                kind: ParseErrorKind::UnexpectedEof,
            });
        };
        cur.pos += 1;
        x |= ((b & 0x7f) as u64) << shift;
        if x > u32::MAX as u64 || shift > 28 {
            return Err(ParseError {
                pos: Position::Byte(cur.pos - 1),
                kind: ParseErrorKind::NonMonotoneDelta,
            });
        }
        if b & 0x80 == 0 {
            return Ok(x as u32);
        }
        shift += 7;
    }
}

/// Reorder gates so every gate follows its operands. Already ordered input
/// is left untouched. Returns the offending variable on a cycle.
fn topo_sort(aig: &mut Aig) -> std::result::Result<(), u32> {
    let mut gate_of = vec![usize::MAX; aig.max_var as usize + 1];
    for (i, a) in aig.ands.iter().enumerate() {
        gate_of[a.lhs as usize] = i;
    }
    let mut placed = vec![false; aig.max_var as usize + 1];
    let sorted = aig.ands.iter().all(|a| {
        let ok = [a.rhs0, a.rhs1]
            .iter()
            .all(|r| gate_of[r.var() as usize] == usize::MAX || placed[r.var() as usize]);
        placed[a.lhs as usize] = true;
        ok
    });
    if sorted {
        return Ok(());
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; aig.ands.len()];
    let mut order = Vec::with_capacity(aig.ands.len());
    for root in 0..aig.ands.len() {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        state[root] = 1;
        while let Some(&mut (g, ref mut child)) = stack.last_mut() {
            let a = aig.ands[g];
            if *child < 2 {
                let r = if *child == 0 { a.rhs0 } else { a.rhs1 };
                *child += 1;
                let c = gate_of[r.var() as usize];
                if c != usize::MAX {
                    match state[c] {
                        0 => {
                            state[c] = 1;
                            stack.push((c, 0));
                        }
                        1 => return Err(aig.ands[c].lhs),
                        _ => {}
                    }
                }
            } else {
                state[g] = 2;
                order.push(a);
                stack.pop();
            }
        }
    }
    aig.ands = order;
    Ok(())
}
