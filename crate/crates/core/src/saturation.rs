//! Resolution saturation over dense clauses.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use crate::bits::{self, Bc};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Any two clashing clauses.
    Unrestricted,
    /// At least one parent has length ≤ k.
    Asymmetric(u32),
    /// Axioms, parents and resolvents all have length ≤ k.
    Symmetric(u32),
}

impl Rule {
    #[inline]
    fn allows(self, a: Bc, b: Bc, r: Bc) -> bool {
        match self {
            Rule::Unrestricted => true,
            Rule::Asymmetric(k) => a.len() <= k || b.len() <= k,
            Rule::Symmetric(k) => r.len() <= k,
        }
    }

    fn admits_axiom(self, c: Bc) -> bool {
        match self {
            Rule::Symmetric(k) => c.len() <= k,
            _ => true,
        }
    }
}

/// Given-clause saturation with forward and backward subsumption.
///
/// Returns the subsumption-reduced closure; when `stop_at_bottom` is set the
/// loop ends as soon as ⊥ is derived.
fn run(cls: &[Bc], rule: Rule, stop_at_bottom: bool) -> Vec<Bc> {
    let mut passive: BinaryHeap<Reverse<(u32, Bc)>> = cls
        .iter()
        .filter(|c| rule.admits_axiom(**c))
        .map(|c| Reverse((c.len(), *c)))
        .collect();
    let mut active: Vec<Bc> = Vec::new();
    while let Some(Reverse((_, g))) = passive.pop() {
        if active.iter().any(|a| a.subsumes(g)) {
            continue;
        }
        if g.is_empty() {
            if stop_at_bottom {
                return vec![Bc::BOTTOM];
            }
            active.clear();
            active.push(g);
            continue;
        }
        active.retain(|a| !g.subsumes(*a));
        for a in &active {
            if let Some(r) = g.resolve(*a) {
                if rule.allows(g, *a, r) && !active.iter().any(|x| x.subsumes(r)) {
                    passive.push(Reverse((r.len(), r)));
                }
            }
        }
        active.push(g);
    }
    bits::normalize(&mut active);
    active
}

/// The subsumption-reduced closure of `cls` under `rule`.
pub fn saturate(cls: &[Bc], rule: Rule) -> Vec<Bc> {
    run(cls, rule, false)
}

/// Whether ⊥ is derivable under `rule`.
pub fn derives_bottom(cls: &[Bc], rule: Rule) -> bool {
    bits::has_bottom(&run(cls, rule, true))
}

/// The exact closure (no subsumption): every derivable clause, including the
/// admitted axioms.
pub fn closure(cls: &[Bc], rule: Rule) -> Vec<Bc> {
    let mut seen: HashSet<Bc> = HashSet::new();
    let mut list: Vec<Bc> = Vec::new();
    for c in cls {
        if rule.admits_axiom(*c) && seen.insert(*c) {
            list.push(*c);
        }
    }
    let mut i = 0;
    while i < list.len() {
        let g = list[i];
        for j in 0..i {
            let a = list[j];
            if let Some(r) = g.resolve(a) {
                if rule.allows(g, a, r) && seen.insert(r) {
                    list.push(r);
                }
            }
        }
        i += 1;
    }
    bits::normalize(&mut list);
    list
}

/// Clauses with a resolution tree of height ≤ `d`.
pub fn depth_closure(cls: &[Bc], d: u32) -> Vec<Bc> {
    let mut cur: Vec<Bc> = cls.to_vec();
    bits::normalize(&mut cur);
    for _ in 0..d {
        let mut next = cur.clone();
        for (i, a) in cur.iter().enumerate() {
            for b in &cur[..i] {
                if let Some(r) = a.resolve(*b) {
                    next.push(r);
                }
            }
        }
        bits::normalize(&mut next);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::Dense;
    use crate::cnf::ClauseSet;

    fn dense(cls: &[&[i64]]) -> Vec<Bc> {
        let f = ClauseSet::from_dimacs(cls).unwrap();
        Dense::of(&f).unwrap().clauses(&f).unwrap()
    }

    #[test]
    fn rules_restrict_parents() {
        let f = dense(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        assert!(derives_bottom(&f, Rule::Unrestricted));
        assert!(!derives_bottom(&f, Rule::Asymmetric(1)));
        assert!(derives_bottom(&f, Rule::Asymmetric(2)));
        assert!(!derives_bottom(&f, Rule::Symmetric(1)));
        assert!(derives_bottom(&f, Rule::Symmetric(2)));
    }

    #[test]
    fn depth_closure_grows_by_levels() {
        let f = dense(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        assert!(!has_bottom(&depth_closure(&f, 1)));
        assert!(has_bottom(&depth_closure(&f, 2)));
    }

    fn has_bottom(cls: &[Bc]) -> bool {
        crate::bits::has_bottom(cls)
    }
}
