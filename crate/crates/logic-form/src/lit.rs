use std::fmt;
use std::ops::Not;

/// A propositional variable, densely indexed per context.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Var(u32);

impl Var {
    /// The constant variable. Its positive literal is `true`.
    pub const CONST: Var = Var(0);

    #[inline]
    pub const fn new(index: usize) -> Self {
        Var(index as u32)
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub const fn lit(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl From<usize> for Var {
    fn from(value: usize) -> Self {
        Var::new(value)
    }
}

/// A literal, encoded as `2 * var + negated`. The derived order is therefore
/// `(var, negated)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Lit(u32);

impl Lit {
    pub const TRUE: Lit = Lit(0);
    pub const FALSE: Lit = Lit(1);

    #[inline]
    pub const fn new(var: Var, negated: bool) -> Self {
        Lit(var.0 << 1 | negated as u32)
    }

    #[inline]
    pub const fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    #[inline]
    pub const fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    /// Dense code usable as an index into per-literal tables.
    #[inline]
    pub const fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub const fn from_code(code: usize) -> Self {
        Lit(code as u32)
    }

    #[inline]
    pub const fn is_constant(self) -> bool {
        self.0 >> 1 == 0
    }

    /// Flip polarity when `flip` is set.
    #[inline]
    pub const fn xor(self, flip: bool) -> Self {
        Lit(self.0 ^ flip as u32)
    }

    /// Relabel the variable, keeping polarity. Panics if the variable is
    /// not mapped.
    #[inline]
    pub fn map(self, map: &VarMap) -> Lit {
        Lit::new(map.get(self.var()), self.is_negated())
    }

    /// Signed DIMACS integer. DIMACS has no variable 0, so indices are
    /// shifted by one: `x0` is `1`, `¬x4` is `-5`.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var().index() as i64 + 1;
        if self.is_negated() {
            -v
        } else {
            v
        }
    }

    pub fn from_dimacs(value: i64) -> Option<Lit> {
        if value == 0 {
            return None;
        }
        let var = Var::new(value.unsigned_abs() as usize - 1);
        Some(Lit::new(var, value < 0))
    }
}

impl Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl From<Var> for Lit {
    fn from(var: Var) -> Self {
        var.lit()
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_negated() {
            write!(f, "¬{}", self.var())
        } else {
            write!(f, "{}", self.var())
        }
    }
}

/// A partial variable relabeling, e.g. current-state to next-state.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarMap {
    to: Vec<Option<Var>>,
}

impl VarMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, from: Var, to: Var) {
        if self.to.len() <= from.index() {
            self.to.resize(from.index() + 1, None);
        }
        self.to[from.index()] = Some(to);
    }

    #[inline]
    pub fn try_get(&self, from: Var) -> Option<Var> {
        self.to.get(from.index()).copied().flatten()
    }

    #[inline]
    pub fn get(&self, from: Var) -> Var {
        match self.try_get(from) {
            Some(v) => v,
            None => panic!("variable {from} is not mapped"),
        }
    }

    pub fn contains(&self, from: Var) -> bool {
        self.try_get(from).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, Var)> + '_ {
        self.to
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.map(|t| (Var::new(i), t)))
    }

    /// The inverse relabeling. Panics if the map is not injective.
    pub fn inverse(&self) -> VarMap {
        let mut inv = VarMap::new();
        for (from, to) in self.iter() {
            assert!(!inv.contains(to), "relabeling is not injective at {to}");
            inv.insert(to, from);
        }
        inv
    }
}

impl FromIterator<(Var, Var)> for VarMap {
    fn from_iter<T: IntoIterator<Item = (Var, Var)>>(iter: T) -> Self {
        let mut map = VarMap::new();
        for (f, t) in iter {
            map.insert(f, t);
        }
        map
    }
}
