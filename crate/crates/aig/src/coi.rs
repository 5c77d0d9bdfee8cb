use crate::{Aig, AigRef, NodeKind};
use std::collections::BTreeSet;

impl Aig {
    /// Cone of influence of `roots`: the least set of (non-constant)
    /// variables containing the roots and closed under gate operands. With
    /// `through_latches`, a latch in the cone also pulls in the support of
    /// its next-state function.
    pub fn coi(&self, roots: impl IntoIterator<Item = AigRef>, through_latches: bool) -> BTreeSet<u32> {
        let kinds = self.node_kinds();
        let mut seen = vec![false; self.max_var as usize + 1];
        let mut stack: Vec<u32> = roots.into_iter().map(|r| r.var()).collect();
        let mut out = BTreeSet::new();
        while let Some(v) = stack.pop() {
            if v == 0 || std::mem::replace(&mut seen[v as usize], true) {
                continue;
            }
            out.insert(v);
            match kinds[v as usize] {
                NodeKind::And(i) => {
                    let a = self.ands[i];
                    stack.push(a.rhs0.var());
                    stack.push(a.rhs1.var());
                }
                NodeKind::Latch(i) if through_latches => stack.push(self.latches[i].next.var()),
                _ => {}
            }
        }
        out
    }
}
