//! Generalised unit-clause propagation `r_k`.

use std::collections::HashMap;

use serde::Serialize;

use crate::bits::{self, Ba, Bc, Dense};
use crate::cnf::{ClauseSet, PartialAssignment};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionResult {
    pub reduced: ClauseSet,
    pub forced: PartialAssignment,
    pub refuted: bool,
}

/// Unit propagation on dense clauses. Returns the forced assignment, or
/// `None` when ⊥ is reached.
pub(crate) fn propagate(cls: &[Bc]) -> (Vec<Bc>, Ba, bool) {
    let mut cur = cls.to_vec();
    let mut forced = Ba::EMPTY;
    loop {
        if bits::has_bottom(&cur) {
            return (vec![Bc::BOTTOM], forced, true);
        }
        let Some(u) = cur.iter().filter(|c| c.len() == 1).min().copied() else {
            return (cur, forced, false);
        };
        let i = u.vars().trailing_zeros() as usize;
        let v = u.pos != 0;
        forced = forced.bind(i, v);
        cur = bits::assign(&cur, i, v);
    }
}

/// Memo table for `r_k` refutation tests, private to one computation.
#[derive(Default)]
pub(crate) struct Rk {
    memo: HashMap<(Vec<Bc>, u32), bool>,
}

impl Rk {
    pub fn new() -> Rk {
        Rk::default()
    }

    /// Whether `r_k(F) = {⊥}`.
    pub fn refutes(&mut self, f: &[Bc], k: u32) -> bool {
        if bits::has_bottom(f) {
            return true;
        }
        if k == 0 || f.is_empty() {
            return false;
        }
        if k == 1 {
            return propagate(f).2;
        }
        if let Some(r) = self.memo.get(&(f.to_vec(), k)) {
            return *r;
        }
        let (_, _, r) = self.fixpoint(f, k);
        self.memo.insert((f.to_vec(), k), r);
        r
    }

    /// The `r_k` fixed point with the literals forced along the way.
    pub fn fixpoint(&mut self, f: &[Bc], k: u32) -> (Vec<Bc>, Ba, bool) {
        if bits::has_bottom(f) {
            return (vec![Bc::BOTTOM], Ba::EMPTY, true);
        }
        if k == 0 {
            return (f.to_vec(), Ba::EMPTY, false);
        }
        if k == 1 {
            return propagate(f);
        }
        let mut cur = f.to_vec();
        let mut forced = Ba::EMPTY;
        'outer: loop {
            if bits::has_bottom(&cur) {
                return (vec![Bc::BOTTOM], forced, true);
            }
            let mask = bits::var_mask(&cur);
            for i in 0..64 {
                if mask >> i & 1 == 0 {
                    continue;
                }
                // literals in sorted order: ¬v before v; probing x means x ← 0
                for x_positive in [false, true] {
                    let probe = bits::assign(&cur, i, !x_positive);
                    if self.refutes(&probe, k - 1) {
                        forced = forced.bind(i, x_positive);
                        cur = bits::assign(&cur, i, x_positive);
                        continue 'outer;
                    }
                }
            }
            return (cur, forced, false);
        }
    }

    /// min{k : r_k(F) = {⊥}} for unsatisfiable `F`.
    pub fn level(&mut self, f: &[Bc]) -> u32 {
        let mut k = 0;
        while !self.refutes(f, k) {
            k += 1;
        }
        k
    }
}

fn result(d: &Dense, (cls, forced, refuted): (Vec<Bc>, Ba, bool)) -> ReductionResult {
    ReductionResult { reduced: d.to_clause_set(&cls), forced: d.to_assignment(forced), refuted }
}

/// Unit propagation.
pub fn r1(f: &ClauseSet) -> Result<ReductionResult> {
    rk(f, 1)
}

/// `r_k(F)`.
pub fn rk(f: &ClauseSet, k: u32) -> Result<ReductionResult> {
    let d = Dense::of(f)?;
    let cls = d.clauses(f)?;
    Ok(result(&d, Rk::new().fixpoint(&cls, k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(v: &[&[i64]]) -> ClauseSet {
        ClauseSet::from_dimacs(v).unwrap()
    }

    #[test]
    fn unit_propagation() {
        let r = r1(&cs(&[&[1], &[-1, 2], &[-2, 3]])).unwrap();
        assert!(!r.refuted);
        assert!(r.reduced.is_top());
        assert_eq!(r.forced.n(), 3);
        assert!(r1(&cs(&[&[1], &[-1, 2], &[-1, -2]])).unwrap().refuted);
    }

    #[test]
    fn levels() {
        let a2 = cs(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        assert!(!rk(&a2, 1).unwrap().refuted);
        assert!(rk(&a2, 2).unwrap().refuted);
        assert!(rk(&cs(&[&[]]), 0).unwrap().refuted);
        assert!(!rk(&cs(&[&[1]]), 3).unwrap().refuted);
    }
}
