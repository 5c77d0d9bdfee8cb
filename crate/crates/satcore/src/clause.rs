use logic_form::Lit;

pub type CRef = u32;
pub const CREF_NONE: CRef = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Problem,
    Learnt,
}

#[derive(Clone, Debug)]
pub struct ClauseData {
    pub lits: Vec<Lit>,
    pub kind: Kind,
    /// Depends on the current query's temporary clauses.
    pub temp: bool,
    pub activity: f32,
    pub deleted: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct Watcher {
    pub cref: CRef,
    pub blocker: Lit,
}

/// Clause arena with slot reuse.
#[derive(Clone, Debug, Default)]
pub struct ClauseDb {
    pub clauses: Vec<ClauseData>,
    free: Vec<CRef>,
}

impl ClauseDb {
    pub fn alloc(&mut self, lits: Vec<Lit>, kind: Kind, temp: bool) -> CRef {
        let data = ClauseData {
            lits,
            kind,
            temp,
            activity: 0.0,
            deleted: false,
        };
        match self.free.pop() {
            Some(c) => {
                self.clauses[c as usize] = data;
                c
            }
            None => {
                self.clauses.push(data);
                (self.clauses.len() - 1) as CRef
            }
        }
    }

    pub fn free(&mut self, c: CRef) {
        let cl = &mut self.clauses[c as usize];
        cl.deleted = true;
        cl.lits = Vec::new();
        self.free.push(c);
    }

    #[inline]
    pub fn get(&self, c: CRef) -> &ClauseData {
        &self.clauses[c as usize]
    }

    #[inline]
    pub fn get_mut(&mut self, c: CRef) -> &mut ClauseData {
        &mut self.clauses[c as usize]
    }
}
