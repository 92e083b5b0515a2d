//! Brute-force oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use hardness::cnf::{self, apply};
use hardness::{Clause, ClauseSet, Literal, PartialAssignment};
use proptest::prelude::*;

pub fn cs(cls: &[&[i64]]) -> ClauseSet {
    ClauseSet::from_dimacs(cls).unwrap()
}

/// Random clause-sets over variables 1..=n with at most `max_c` clauses.
pub fn clause_sets(n: i64, max_c: usize) -> impl Strategy<Value = ClauseSet> {
    let lit = (1..=n, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
    let clause = prop::collection::vec(lit, 0..=n as usize).prop_filter_map("tautology", |xs| Clause::from_dimacs(&xs).ok());
    prop::collection::vec(clause, 0..=max_c).prop_map(ClauseSet::from_clauses)
}

/// Random unsatisfiable clause-sets: a random set plus clauses forcing
/// unsatisfiability by blocking every model.
pub fn unsat_sets(n: i64, max_c: usize) -> impl Strategy<Value = ClauseSet> {
    clause_sets(n, max_c).prop_map(move |f| {
        let mut f = f;
        for m in models(&f, &(1..=n as u32).collect()) {
            let c = Clause::new(m.iter().map(|(v, b)| Literal::new(v, !b))).unwrap();
            f = f.with(c);
        }
        cnf::subsumption_reduce(&f)
    })
}

/// Every total assignment over `vars`.
pub fn totals(vars: &BTreeSet<u32>) -> Vec<PartialAssignment> {
    let vs: Vec<u32> = vars.iter().copied().collect();
    (0u64..1 << vs.len())
        .map(|bitsv| PartialAssignment::from_pairs(vs.iter().enumerate().map(|(i, v)| (*v, bitsv >> i & 1 == 1))).unwrap())
        .collect()
}

/// Every partial assignment over `vars`.
pub fn partials(vars: &BTreeSet<u32>) -> Vec<PartialAssignment> {
    let mut out = vec![PartialAssignment::new()];
    for v in vars {
        let mut next = Vec::new();
        for a in &out {
            next.push(a.clone());
            next.push(a.bind(*v, false));
            next.push(a.bind(*v, true));
        }
        out = next;
    }
    out
}

pub fn models(f: &ClauseSet, vars: &BTreeSet<u32>) -> Vec<PartialAssignment> {
    totals(vars).into_iter().filter(|a| f.iter().all(|c| a.satisfies(c))).collect()
}

pub fn brute_sat(f: &ClauseSet) -> bool {
    !models(f, &f.vars()).is_empty()
}

/// `r_k` by its recursive definition.
pub fn naive_rk(f: &ClauseSet, k: u32) -> ClauseSet {
    if f.has_bottom() {
        return ClauseSet::bottom();
    }
    if k == 0 {
        return f.clone();
    }
    let mut cur = f.clone();
    'outer: loop {
        if cur.has_bottom() {
            return ClauseSet::bottom();
        }
        for v in cur.vars() {
            for b in [false, true] {
                let probe = apply(&PartialAssignment::new().bind(v, b), &cur);
                if naive_rk(&probe, k - 1).has_bottom() {
                    cur = apply(&PartialAssignment::new().bind(v, !b), &cur);
                    continue 'outer;
                }
            }
        }
        return cur;
    }
}

pub fn naive_hd(f: &ClauseSet) -> u32 {
    (0..).find(|k| naive_rk(f, *k).has_bottom()).unwrap()
}

/// Minimal height of a decision tree refuting `f`.
pub fn naive_depth(f: &ClauseSet) -> u32 {
    if f.has_bottom() {
        return 0;
    }
    f.vars()
        .into_iter()
        .map(|v| {
            let a = naive_depth(&apply(&PartialAssignment::new().bind(v, false), f));
            let b = naive_depth(&apply(&PartialAssignment::new().bind(v, true), f));
            1 + a.max(b)
        })
        .min()
        .unwrap()
}

fn resolvents(a: &Clause, b: &Clause) -> Option<Clause> {
    let clash = a.clashes(b);
    if clash.len() != 1 {
        return None;
    }
    let x = clash[0];
    Clause::new(a.literals().iter().chain(b.literals()).copied().filter(|l| *l != x && *l != x.complement())).ok()
}

/// Saturation under a parent filter, by plain pairwise iteration.
pub fn naive_saturates_to_bottom(f: &ClauseSet, axiom: impl Fn(&Clause) -> bool, step: impl Fn(&Clause, &Clause, &Clause) -> bool) -> bool {
    let mut set: BTreeSet<Clause> = f.iter().filter(|c| axiom(c)).cloned().collect();
    loop {
        let cur: Vec<Clause> = set.iter().cloned().collect();
        let mut grew = false;
        for a in &cur {
            for b in &cur {
                if let Some(r) = resolvents(a, b) {
                    if step(a, b, &r) && set.insert(r) {
                        grew = true;
                    }
                }
            }
        }
        if set.contains(&Clause::bottom()) {
            return true;
        }
        if !grew {
            return false;
        }
    }
}

pub fn naive_whd(f: &ClauseSet) -> u32 {
    (0..).find(|k| naive_saturates_to_bottom(f, |_| true, |a, b, _| a.len() as u32 <= *k || b.len() as u32 <= *k)).unwrap()
}

pub fn naive_wid(f: &ClauseSet) -> u32 {
    (0..).find(|k| naive_saturates_to_bottom(f, |c| c.len() as u32 <= *k, |_, _, r| r.len() as u32 <= *k)).unwrap()
}

/// Lifted value: maximum of `base` over the unsatisfiable instantiations.
pub fn naive_lift(f: &ClauseSet, base: impl Fn(&ClauseSet) -> u32) -> u32 {
    partials(&f.vars())
        .into_iter()
        .map(|phi| apply(&phi, f))
        .filter(|g| !brute_sat(g))
        .map(|g| base(&g))
        .max()
        .unwrap_or(0)
}
