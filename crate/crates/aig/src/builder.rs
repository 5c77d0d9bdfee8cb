use crate::{Aig, AigRef, AndGate, Init, Latch};

/// Incremental construction of an [`Aig`]. Variables are numbered in
/// creation order, so gates always follow their operands.
#[derive(Debug, Default)]
pub struct AigBuilder {
    aig: Aig,
}

impl AigBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Continue building on top of an existing graph.
    pub fn from_aig(aig: &Aig) -> Self {
        Self { aig: aig.clone() }
    }

    fn fresh(&mut self) -> u32 {
        self.aig.max_var += 1;
        self.aig.max_var
    }

    pub fn input(&mut self) -> AigRef {
        let v = self.fresh();
        self.aig.inputs.push(v);
        AigRef::new(v, false)
    }

    /// New latch whose next-state function defaults to itself.
    pub fn latch(&mut self, init: Init) -> AigRef {
        let var = self.fresh();
        self.aig.latches.push(Latch {
            var,
            next: AigRef::new(var, false),
            init,
        });
        AigRef::new(var, false)
    }

    pub fn set_next(&mut self, latch: AigRef, next: AigRef) {
        let l = self
            .aig
            .latches
            .iter_mut()
            .find(|l| l.var == latch.var())
            .expect("not a latch");
        l.next = next;
    }

    pub fn and(&mut self, a: AigRef, b: AigRef) -> AigRef {
        let lhs = self.fresh();
        self.aig.ands.push(AndGate {
            lhs,
            rhs0: a.max(b),
            rhs1: a.min(b),
        });
        AigRef::new(lhs, false)
    }

    pub fn or(&mut self, a: AigRef, b: AigRef) -> AigRef {
        !self.and(!a, !b)
    }

    pub fn xor(&mut self, a: AigRef, b: AigRef) -> AigRef {
        let x = self.and(a, !b);
        let y = self.and(!a, b);
        self.or(x, y)
    }

    /// `sel ? t : e`
    pub fn mux(&mut self, sel: AigRef, t: AigRef, e: AigRef) -> AigRef {
        let x = self.and(sel, t);
        let y = self.and(!sel, e);
        self.or(x, y)
    }

    pub fn and_all(&mut self, refs: &[AigRef]) -> AigRef {
        refs.iter().fold(AigRef::TRUE, |acc, &r| {
            if acc == AigRef::TRUE {
                r
            } else {
                self.and(acc, r)
            }
        })
    }

    pub fn output(&mut self, r: AigRef) {
        self.aig.outputs.push(r);
    }

    pub fn bad(&mut self, r: AigRef) {
        self.aig.bads.push(r);
    }

    pub fn constraint(&mut self, r: AigRef) {
        self.aig.constraints.push(r);
    }

    pub fn build(self) -> Aig {
        self.aig
    }
}
