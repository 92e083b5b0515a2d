//! Dense bit-level clauses over at most 64 variables.
//!
//! The search procedures rename `var(F)` to indices `0..n` and work on
//! [`Bc`] (clause) and [`Ba`] (partial assignment) values.

use std::collections::BTreeSet;

use crate::cnf::{Clause, ClauseSet, Literal, PartialAssignment};
use crate::error::{Error, Result};

/// A clause as a pair of positive / negative literal masks.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Bc {
    pub pos: u64,
    pub neg: u64,
}

impl Bc {
    pub const BOTTOM: Bc = Bc { pos: 0, neg: 0 };

    pub fn unit(i: usize, positive: bool) -> Bc {
        if positive {
            Bc { pos: 1 << i, neg: 0 }
        } else {
            Bc { pos: 0, neg: 1 << i }
        }
    }

    #[inline]
    pub fn len(self) -> u32 {
        (self.pos | self.neg).count_ones()
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.pos | self.neg == 0
    }

    #[inline]
    pub fn vars(self) -> u64 {
        self.pos | self.neg
    }

    /// `self ⊆ other`.
    #[inline]
    pub fn subsumes(self, other: Bc) -> bool {
        self.pos & !other.pos == 0 && self.neg & !other.neg == 0
    }

    #[inline]
    pub fn clash(self, other: Bc) -> u64 {
        (self.pos & other.neg) | (self.neg & other.pos)
    }

    #[inline]
    pub fn resolve(self, other: Bc) -> Option<Bc> {
        let c = self.clash(other);
        if c.count_ones() == 1 {
            Some(Bc {
                pos: (self.pos | other.pos) & !c,
                neg: (self.neg | other.neg) & !c,
            })
        } else {
            None
        }
    }

    pub fn union(self, other: Bc) -> Bc {
        Bc { pos: self.pos | other.pos, neg: self.neg | other.neg }
    }
}

/// A partial assignment: `set` marks bound indices, `val` their values.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Ba {
    pub set: u64,
    pub val: u64,
}

impl Ba {
    pub const EMPTY: Ba = Ba { set: 0, val: 0 };

    #[inline]
    pub fn bind(self, i: usize, value: bool) -> Ba {
        let b = 1u64 << i;
        Ba { set: self.set | b, val: if value { self.val | b } else { self.val & !b } }
    }

    #[inline]
    pub fn n(self) -> u32 {
        self.set.count_ones()
    }

    #[inline]
    pub fn falsifies(self, c: Bc) -> bool {
        let f = self.set & !self.val;
        let t = self.set & self.val;
        c.pos & !f == 0 && c.neg & !t == 0
    }

    #[inline]
    pub fn satisfies(self, c: Bc) -> bool {
        (c.pos & self.set & self.val) | (c.neg & self.set & !self.val) != 0
    }

    /// The assignment setting every literal of `c` to false.
    pub fn falsifying(c: Bc) -> Ba {
        Ba { set: c.pos | c.neg, val: c.neg }
    }

    #[inline]
    pub fn sub(self, other: Ba) -> bool {
        self.set & !other.set == 0 && (self.val ^ other.val) & self.set == 0
    }

    #[inline]
    pub fn compatible(self, other: Ba) -> bool {
        (self.val ^ other.val) & self.set & other.set == 0
    }

    pub fn union(self, other: Ba) -> Ba {
        Ba { set: self.set | other.set, val: (self.val & self.set) | (other.val & other.set) }
    }

    pub fn restrict(self, mask: u64) -> Ba {
        Ba { set: self.set & mask, val: self.val & self.set & mask }
    }
}

pub fn normalize(v: &mut Vec<Bc>) {
    v.sort_unstable();
    v.dedup();
}

#[inline]
pub fn has_bottom(cls: &[Bc]) -> bool {
    cls.iter().any(|c| c.is_empty())
}

pub fn var_mask(cls: &[Bc]) -> u64 {
    cls.iter().fold(0, |m, c| m | c.vars())
}

/// `a * F` in canonical order.
pub fn apply(a: Ba, cls: &[Bc]) -> Vec<Bc> {
    let mut out: Vec<Bc> = cls
        .iter()
        .filter(|c| !a.satisfies(**c))
        .map(|c| Bc { pos: c.pos & !a.set, neg: c.neg & !a.set })
        .collect();
    normalize(&mut out);
    out
}

/// Sets the literal on index `i` with polarity `value`.
pub fn assign(cls: &[Bc], i: usize, value: bool) -> Vec<Bc> {
    apply(Ba::EMPTY.bind(i, value), cls)
}

/// Exact satisfiability by splitting with unit propagation.
pub fn satisfiable(cls: &[Bc]) -> bool {
    let mut cur = cls.to_vec();
    normalize(&mut cur);
    loop {
        if cur.is_empty() {
            return true;
        }
        if has_bottom(&cur) {
            return false;
        }
        match cur.iter().find(|c| c.len() == 1) {
            Some(u) => {
                let i = u.vars().trailing_zeros() as usize;
                cur = assign(&cur, i, u.pos != 0);
            }
            None => break,
        }
    }
    let shortest = cur.iter().min_by_key(|c| c.len()).copied().unwrap();
    let i = shortest.vars().trailing_zeros() as usize;
    let first = shortest.pos & (1 << i) != 0;
    satisfiable(&assign(&cur, i, first)) || satisfiable(&assign(&cur, i, !first))
}

/// Removes subsumed clauses, keeping the ⊆-minimal ones.
pub fn subsumption_reduce(cls: &[Bc]) -> Vec<Bc> {
    let mut v = cls.to_vec();
    v.sort_unstable_by_key(|c| (c.len(), *c));
    v.dedup();
    let mut kept: Vec<Bc> = Vec::with_capacity(v.len());
    for c in v {
        if !kept.iter().any(|k| k.subsumes(c)) {
            kept.push(c);
        }
    }
    normalize(&mut kept);
    kept
}

/// All clauses over indices `0..n`, `3^n` of them.
pub fn all_clauses(n: usize) -> Vec<Bc> {
    let mut out = vec![Bc::BOTTOM];
    for i in 0..n {
        let b = 1u64 << i;
        let mut next = Vec::with_capacity(out.len() * 3);
        for c in &out {
            next.push(*c);
            next.push(Bc { pos: c.pos | b, neg: c.neg });
            next.push(Bc { pos: c.pos, neg: c.neg | b });
        }
        out = next;
    }
    out
}

/// All clauses whose variables lie inside `mask`.
pub fn clauses_within(mask: u64) -> Vec<Bc> {
    let mut out = vec![Bc::BOTTOM];
    let mut m = mask;
    while m != 0 {
        let b = m & m.wrapping_neg();
        m &= m - 1;
        let mut next = Vec::with_capacity(out.len() * 3);
        for c in &out {
            next.push(*c);
            next.push(Bc { pos: c.pos | b, neg: c.neg });
            next.push(Bc { pos: c.pos, neg: c.neg | b });
        }
        out = next;
    }
    out
}

/// All partial assignments over the variables in `mask`.
pub fn assignments_within(mask: u64) -> Vec<Ba> {
    clauses_within(mask).into_iter().map(|c| Ba { set: c.pos | c.neg, val: c.pos }).collect()
}

/// Renaming between external variable ids and dense indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dense {
    pub vars: Vec<u32>,
}

impl Dense {
    pub fn new(vars: impl IntoIterator<Item = u32>) -> Result<Dense> {
        let set: BTreeSet<u32> = vars.into_iter().collect();
        if set.len() > 64 {
            return Err(Error::CapExceeded { what: "bit representation", n: set.len(), cap: 64 });
        }
        Ok(Dense { vars: set.into_iter().collect() })
    }

    pub fn of(f: &ClauseSet) -> Result<Dense> {
        Dense::new(f.vars())
    }

    pub fn n(&self) -> usize {
        self.vars.len()
    }

    pub fn full_mask(&self) -> u64 {
        if self.vars.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.vars.len()) - 1
        }
    }

    pub fn index(&self, v: u32) -> Option<usize> {
        self.vars.binary_search(&v).ok()
    }

    pub fn clause(&self, c: &Clause) -> Result<Bc> {
        let mut b = Bc::BOTTOM;
        for l in c.literals() {
            let i = self
                .index(l.var())
                .ok_or_else(|| Error::Invalid(format!("variable {} outside the renaming", l.var())))?;
            if l.is_positive() {
                b.pos |= 1 << i;
            } else {
                b.neg |= 1 << i;
            }
        }
        Ok(b)
    }

    pub fn clauses(&self, f: &ClauseSet) -> Result<Vec<Bc>> {
        let mut v = f.iter().map(|c| self.clause(c)).collect::<Result<Vec<_>>>()?;
        normalize(&mut v);
        Ok(v)
    }

    pub fn assignment(&self, a: &PartialAssignment) -> Result<Ba> {
        let mut b = Ba::EMPTY;
        for (v, val) in a.iter() {
            let i = self
                .index(v)
                .ok_or_else(|| Error::Invalid(format!("variable {v} outside the renaming")))?;
            b = b.bind(i, val);
        }
        Ok(b)
    }

    pub fn to_clause(&self, b: Bc) -> Clause {
        let mut lits = Vec::with_capacity(b.len() as usize);
        for (i, v) in self.vars.iter().enumerate() {
            if b.pos >> i & 1 == 1 {
                lits.push(Literal::new(*v, true));
            } else if b.neg >> i & 1 == 1 {
                lits.push(Literal::new(*v, false));
            }
        }
        Clause::from_sorted_unchecked(lits)
    }

    pub fn to_clause_set(&self, cls: &[Bc]) -> ClauseSet {
        ClauseSet::from_clauses(cls.iter().map(|c| self.to_clause(*c)))
    }

    pub fn to_assignment(&self, a: Ba) -> PartialAssignment {
        let mut p = PartialAssignment::new();
        for (i, v) in self.vars.iter().enumerate() {
            if a.set >> i & 1 == 1 {
                p.insert(*v, a.val >> i & 1 == 1);
            }
        }
        p
    }

    pub fn var_set(&self, mask: u64) -> BTreeSet<u32> {
        self.vars.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| *v).collect()
    }
}

/// Set of total assignments over at most 8 indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Tt(pub [u64; 4]);

impl Tt {
    pub fn full(n: usize) -> Tt {
        let mut t = [0u64; 4];
        let total = 1usize << n;
        for (w, word) in t.iter_mut().enumerate() {
            let lo = w * 64;
            if total >= lo + 64 {
                *word = u64::MAX;
            } else if total > lo {
                *word = (1u64 << (total - lo)) - 1;
            }
        }
        Tt(t)
    }

    /// Total assignments over `0..n` falsifying `c`.
    pub fn falsifying(c: Bc, n: usize) -> Tt {
        let mut t = [0u64; 4];
        for a in 0..(1u64 << n) {
            if a & c.pos == 0 && a & c.neg == c.neg {
                t[(a >> 6) as usize] |= 1 << (a & 63);
            }
        }
        Tt(t)
    }

    #[inline]
    pub fn and(self, o: Tt) -> Tt {
        Tt([self.0[0] & o.0[0], self.0[1] & o.0[1], self.0[2] & o.0[2], self.0[3] & o.0[3]])
    }

    #[inline]
    pub fn andnot(self, o: Tt) -> Tt {
        Tt([self.0[0] & !o.0[0], self.0[1] & !o.0[1], self.0[2] & !o.0[2], self.0[3] & !o.0[3]])
    }

    #[inline]
    pub fn or(self, o: Tt) -> Tt {
        Tt([self.0[0] | o.0[0], self.0[1] | o.0[1], self.0[2] | o.0[2], self.0[3] | o.0[3]])
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == [0; 4]
    }

    #[inline]
    pub fn intersects(self, o: Tt) -> bool {
        !self.and(o).is_zero()
    }

    #[inline]
    pub fn subset(self, o: Tt) -> bool {
        self.andnot(o).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bc(xs: &[i64]) -> Bc {
        let mut c = Bc::BOTTOM;
        for x in xs {
            c = c.union(Bc::unit(x.unsigned_abs() as usize - 1, *x > 0));
        }
        c
    }

    #[test]
    fn resolution_needs_one_clash() {
        assert_eq!(bc(&[1, 2]).resolve(bc(&[-1, 3])), Some(bc(&[2, 3])));
        assert_eq!(bc(&[1, 2]).resolve(bc(&[-1, -2])), None);
        assert_eq!(bc(&[1]).resolve(bc(&[2])), None);
        assert!(bc(&[1]).subsumes(bc(&[1, 2])));
        assert_eq!(bc(&[1, -2, 3]).len(), 3);
    }

    #[test]
    fn assignments_and_satisfiability() {
        let a = Ba::EMPTY.bind(0, false).bind(1, true);
        assert!(a.falsifies(bc(&[1, -2])));
        assert!(a.satisfies(bc(&[2])));
        assert_eq!(Ba::falsifying(bc(&[1, -2])), a);
        assert!(!satisfiable(&[bc(&[1]), bc(&[-1])]));
        assert!(satisfiable(&[bc(&[1, 2]), bc(&[-1])]));
        assert_eq!(all_clauses(2).len(), 9);
        assert_eq!(assignments_within(0b11).len(), 9);
        assert_eq!(subsumption_reduce(&[bc(&[1]), bc(&[1, 2])]), vec![bc(&[1])]);
    }

    #[test]
    fn truth_tables() {
        let t = Tt::falsifying(bc(&[1]), 3);
        assert!(t.subset(Tt::full(3)));
        assert!(t.and(Tt::falsifying(bc(&[-1]), 3)).is_zero());
        assert!(t.or(Tt::falsifying(bc(&[-1]), 3)) == Tt::full(3));
    }
}
