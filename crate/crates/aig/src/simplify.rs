use crate::{Aig, AigRef, AndGate, Latch};
use std::collections::HashMap;

impl Aig {
    /// Constant propagation and structural hashing. Inputs and latches keep
    /// their positions; gates not feeding any latch or property are dropped.
    /// The result is canonically numbered.
    pub fn simplify(&self) -> Aig {
        let ni = self.inputs.len() as u32;
        let nl = self.latches.len() as u32;
        let mut map = vec![AigRef::FALSE; self.max_var as usize + 1];
        for (i, &v) in self.inputs.iter().enumerate() {
            map[v as usize] = AigRef::new(i as u32 + 1, false);
        }
        for (i, l) in self.latches.iter().enumerate() {
            map[l.var as usize] = AigRef::new(ni + i as u32 + 1, false);
        }
        let roots = self
            .latches
            .iter()
            .map(|l| l.next)
            .chain(self.outputs.iter().copied())
            .chain(self.bads.iter().copied())
            .chain(self.constraints.iter().copied());
        let needed = self.coi(roots, false);

        let mut out = Aig {
            max_var: ni + nl,
            inputs: (1..=ni).collect(),
            trailer: self.trailer.clone(),
            ..Default::default()
        };
        let mut strash: HashMap<(AigRef, AigRef), AigRef> = HashMap::new();
        let tr = |map: &[AigRef], r: AigRef| map[r.var() as usize].xor(r.is_complemented());
        for a in &self.ands {
            if !needed.contains(&a.lhs) {
                continue;
            }
            let x = tr(&map, a.rhs0);
            let y = tr(&map, a.rhs1);
            let (hi, lo) = (x.max(y), x.min(y));
            let r = if lo == AigRef::FALSE || hi == !lo {
                AigRef::FALSE
            } else if lo == AigRef::TRUE || hi == lo {
                hi
            } else {
                *strash.entry((hi, lo)).or_insert_with(|| {
                    out.max_var += 1;
                    out.ands.push(AndGate {
                        lhs: out.max_var,
                        rhs0: hi,
                        rhs1: lo,
                    });
                    AigRef::new(out.max_var, false)
                })
            };
            map[a.lhs as usize] = r;
        }
        out.latches = self
            .latches
            .iter()
            .enumerate()
            .map(|(i, l)| Latch {
                var: ni + i as u32 + 1,
                next: tr(&map, l.next),
                init: l.init,
            })
            .collect();
        out.outputs = self.outputs.iter().map(|&r| tr(&map, r)).collect();
        out.bads = self.bads.iter().map(|&r| tr(&map, r)).collect();
        out.constraints = self.constraints.iter().map(|&r| tr(&map, r)).collect();
        out
    }
}
