use logic_form::Cube;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

#[derive(Clone, Debug)]
pub struct Node {
    pub cube: Cube,
    /// Inputs of the step leaving this cube towards `next` (or, for the
    /// last node, of the step where the bad literal holds).
    pub inputs: Vec<Option<bool>>,
    /// Successor towards the bad state.
    pub next: Option<usize>,
    /// Distance to the bad state.
    pub depth: usize,
}

/// Arena of proof obligations; links survive re-enqueueing.
#[derive(Clone, Debug, Default)]
pub struct Obligations {
    pub nodes: Vec<Node>,
}

impl Obligations {
    pub fn add(&mut self, cube: Cube, inputs: Vec<Option<bool>>, next: Option<usize>, depth: usize) -> usize {
        self.nodes.push(Node { cube, inputs, next, depth });
        self.nodes.len() - 1
    }
}

/// Lowest frame first, then the lexicographically smallest cube.
#[derive(Clone, Debug, Default)]
pub struct ObligationQueue {
    heap: BinaryHeap<Reverse<(usize, Cube, usize)>>,
}

impl ObligationQueue {
    pub fn push(&mut self, level: usize, id: usize, obs: &Obligations) {
        self.heap.push(Reverse((level, obs.nodes[id].cube.clone(), id)));
    }

    pub fn pop(&mut self, _obs: &Obligations) -> Option<(usize, usize)> {
        self.heap.pop().map(|Reverse((level, _, id))| (level, id))
    }

    pub fn clear(&mut self) {
        self.heap.clear();
    }
}
