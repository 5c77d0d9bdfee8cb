use crate::{Aig, AigRef, Init};
use std::io::Write;

impl Aig {
    /// Serialize as AIGER. The binary form requires canonical numbering,
    /// so non-canonical graphs are re-encoded first.
    pub fn to_aiger(&self, ascii: bool) -> Vec<u8> {
        if ascii {
            self.write_ascii()
        } else if self.is_canonical() {
            self.write_binary()
        } else {
            self.reencode().write_binary()
        }
    }

    fn write_header(&self, out: &mut Vec<u8>, tag: &str) {
        write!(
            out,
            "{tag} {} {} {} {} {}",
            self.max_var,
            self.inputs.len(),
            self.latches.len(),
            self.outputs.len(),
            self.ands.len()
        )
        .unwrap();
        if !self.constraints.is_empty() {
            write!(out, " {} {}", self.bads.len(), self.constraints.len()).unwrap();
        } else if !self.bads.is_empty() {
            write!(out, " {}", self.bads.len()).unwrap();
        }
        out.push(b'\n');
    }

    fn write_latch_tail(&self, out: &mut Vec<u8>, var: u32, next: AigRef, init: Init) {
        write!(out, "{}", next.raw()).unwrap();
        match init {
            Init::Zero => {}
            Init::One => out.extend_from_slice(b" 1"),
            Init::Free => write!(out, " {}", 2 * var).unwrap(),
        }
        out.push(b'\n');
    }

    fn write_props(&self, out: &mut Vec<u8>) {
        for r in self.outputs.iter().chain(&self.bads).chain(&self.constraints) {
            writeln!(out, "{}", r.raw()).unwrap();
        }
    }

    fn write_ascii(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_header(&mut out, "aag");
        for &i in &self.inputs {
            writeln!(out, "{}", 2 * i).unwrap();
        }
        for l in &self.latches {
            write!(out, "{} ", 2 * l.var).unwrap();
            self.write_latch_tail(&mut out, l.var, l.next, l.init);
        }
        self.write_props(&mut out);
        for a in &self.ands {
            writeln!(out, "{} {} {}", 2 * a.lhs, a.rhs0.raw(), a.rhs1.raw()).unwrap();
        }
        out.extend_from_slice(&self.trailer);
        out
    }

    fn write_binary(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_header(&mut out, "aig");
        for l in &self.latches {
            self.write_latch_tail(&mut out, l.var, l.next, l.init);
        }
        self.write_props(&mut out);
        for a in &self.ands {
            let lhs = 2 * a.lhs;
            leb128(&mut out, lhs - a.rhs0.raw());
            leb128(&mut out, a.rhs0.raw() - a.rhs1.raw());
        }
        out.extend_from_slice(&self.trailer);
        out
    }
}

fn leb128(out: &mut Vec<u8>, mut x: u32) {
    while x & !0x7f != 0 {
        out.push((x & 0x7f) as u8 | 0x80);
        x >>= 7;
    }
    out.push(x as u8);
}
