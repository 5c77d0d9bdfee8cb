//! Bucketed activity heuristic.
//!
//! Each variable carries an integer score. Its bucket is `score - origin`
//! clamped to `0..BUCKETS`. Buckets form a ring of intrusive doubly linked
//! lists, so bump, decay and pick are all constant time: decay only moves
//! the origin and splices the old bottom list onto the new one.

use logic_form::Var;

pub const BUCKETS: usize = 16;
const NIL: u32 = u32::MAX;

#[derive(Clone, Debug, Default)]
pub struct BucketVsids {
    score: Vec<u64>,
    origin: u64,
    head: [u32; BUCKETS],
    tail: [u32; BUCKETS],
    next: Vec<u32>,
    prev: Vec<u32>,
    queued: Vec<bool>,
    /// Logical index at or above the highest nonempty bucket.
    top: usize,
}

impl BucketVsids {
    pub fn new() -> Self {
        Self {
            head: [NIL; BUCKETS],
            tail: [NIL; BUCKETS],
            ..Default::default()
        }
    }

    pub fn reserve(&mut self, num_vars: usize) {
        if self.score.len() < num_vars {
            self.score.resize(num_vars, self.origin);
            self.next.resize(num_vars, NIL);
            self.prev.resize(num_vars, NIL);
            self.queued.resize(num_vars, false);
        }
    }

    /// Logical bucket of `var`, 0 being the lowest.
    #[inline]
    pub fn bucket(&self, var: Var) -> usize {
        let s = self.score[var.index()];
        s.saturating_sub(self.origin).min(BUCKETS as u64 - 1) as usize
    }

    #[inline]
    fn physical(&self, logical: usize) -> usize {
        ((self.origin + logical as u64) % BUCKETS as u64) as usize
    }

    #[inline]
    pub fn contains(&self, var: Var) -> bool {
        self.queued.get(var.index()).copied().unwrap_or(false)
    }

    /// Queue `var` at the front of its bucket.
    pub fn insert(&mut self, var: Var) {
        let v = var.index();
        if self.queued[v] {
            return;
        }
        let l = self.bucket(var);
        let p = self.physical(l);
        self.queued[v] = true;
        self.prev[v] = NIL;
        self.next[v] = self.head[p];
        if self.head[p] != NIL {
            self.prev[self.head[p] as usize] = v as u32;
        } else {
            self.tail[p] = v as u32;
        }
        self.head[p] = v as u32;
        self.top = self.top.max(l);
    }

    pub fn remove(&mut self, var: Var) {
        let v = var.index();
        if !self.queued[v] {
            return;
        }
        let p = self.physical(self.bucket(var));
        let (pv, nx) = (self.prev[v], self.next[v]);
        if pv != NIL {
            self.next[pv as usize] = nx;
        } else {
            self.head[p] = nx;
        }
        if nx != NIL {
            self.prev[nx as usize] = pv;
        } else {
            self.tail[p] = pv;
        }
        self.queued[v] = false;
    }

    /// Move `var` up one bucket, saturating at the top.
    pub fn bump(&mut self, var: Var) {
        let v = var.index();
        let cap = self.origin + BUCKETS as u64 - 1;
        let new = (self.score[v].max(self.origin) + 1).min(cap);
        if new == self.score[v] {
            return;
        }
        let queued = self.queued[v];
        if queued {
            self.remove(var);
        }
        self.score[v] = new;
        if queued {
            self.insert(var);
        }
    }

    /// Shift every variable down one bucket. Variables already in bucket 0
    /// stay there.
    pub fn decay(&mut self) {
        let old = self.physical(0);
        self.origin += 1;
        let new = self.physical(0);
        if self.head[old] != NIL {
            if self.head[new] == NIL {
                self.head[new] = self.head[old];
            } else {
                self.next[self.tail[new] as usize] = self.head[old];
                self.prev[self.head[old] as usize] = self.tail[new];
            }
            self.tail[new] = self.tail[old];
            self.head[old] = NIL;
            self.tail[old] = NIL;
        }
        self.top = self.top.saturating_sub(1);
    }

    /// Dequeue the front variable of the highest nonempty bucket.
    pub fn pop(&mut self) -> Option<Var> {
        loop {
            let p = self.physical(self.top);
            if self.head[p] != NIL {
                let var = Var::new(self.head[p] as usize);
                self.remove(var);
                return Some(var);
            }
            if self.top == 0 {
                return None;
            }
            self.top -= 1;
        }
    }

    /// Highest nonempty logical bucket.
    pub fn max_bucket(&self) -> Option<usize> {
        (0..=self.top).rev().find(|&l| self.head[self.physical(l)] != NIL)
    }
}
