mod common;

use std::collections::BTreeSet;

use common::*;
use hardness::cnf::{self, apply};
use hardness::dimacs::{parse_dimacs, write_dimacs};
use hardness::{corpus, Clause, ClauseSet, Error, Literal, PartialAssignment};
use proptest::prelude::*;

/// Every non-tautological clause over `vars`.
fn all_clauses(vars: &BTreeSet<u32>) -> Vec<Clause> {
    let mut out = vec![Clause::bottom()];
    for v in vars {
        let mut next = Vec::new();
        for c in &out {
            next.push(c.clone());
            for b in [true, false] {
                next.push(Clause::new(c.literals().iter().copied().chain([Literal::new(*v, b)])).unwrap());
            }
        }
        out = next;
    }
    out
}

fn entails(f: &ClauseSet, c: &Clause) -> bool {
    models(f, &f.vars().union(&c.vars()).copied().collect()).iter().all(|m| m.satisfies(c))
}

#[test]
fn dimacs_parse_errors_carry_lines() {
    assert!(matches!(parse_dimacs(b"p cnf 2 1\n1 -1 0\n"), Err(Error::Tautology { line: 2 })));
    assert!(matches!(parse_dimacs(b"p cnf 2 1\n1 x 0\n"), Err(Error::Parse { line: 2, .. })));
    assert!(matches!(parse_dimacs(b"p dnf 2 1\n"), Err(Error::Parse { line: 1, .. })));
    let f = parse_dimacs(b"c comment\np cnf 3 2\n1 2 0\n-3\n0\n").unwrap();
    assert_eq!(f, cs(&[&[1, 2], &[-3]]));
}

#[test]
fn literal_and_clause_basics() {
    assert!(Literal::from_dimacs(0).is_err());
    assert_eq!(Literal::from_dimacs(-4).unwrap().complement(), Literal::pos(4));
    assert_eq!(Clause::from_dimacs(&[2, 1, 2]).unwrap().to_dimacs(), vec![1, 2]);
    assert!(PartialAssignment::from_pairs([(1, true), (1, false)]).is_err());
    assert!(PartialAssignment::falsifying(&Clause::from_dimacs(&[1, -2]).unwrap()).falsifies(&Clause::from_dimacs(&[1, -2]).unwrap()));
}

/// Canonical form of a clause-set over variables 1..=n under renaming and
/// flipping, by trying all signed permutations.
fn canonical(f: &ClauseSet, n: u32) -> Vec<Vec<i64>> {
    let mut perms: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..n {
        perms = perms
            .into_iter()
            .flat_map(|p| (1..=n).filter(|v| !p.contains(v)).map(|v| [p.clone(), vec![v]].concat()).collect::<Vec<_>>())
            .collect();
    }
    let mut best: Option<Vec<Vec<i64>>> = None;
    for p in &perms {
        for flip in 0u32..1 << n {
            let mut img: Vec<Vec<i64>> = f
                .iter()
                .map(|c| {
                    let mut xs: Vec<i64> = c
                        .literals()
                        .iter()
                        .map(|l| {
                            let v = p[l.var() as usize - 1] as i64;
                            let s = l.is_positive() ^ (flip >> (l.var() - 1) & 1 == 1);
                            if s { v } else { -v }
                        })
                        .collect();
                    xs.sort_by_key(|x| (x.abs(), *x));
                    xs
                })
                .collect();
            img.sort();
            if best.as_ref().is_none_or(|b| img < *b) {
                best = Some(img);
            }
        }
    }
    best.unwrap()
}

#[test]
fn exhaustive_corpus_matches_subset_enumeration() {
    let vars: BTreeSet<u32> = (1..=3).collect();
    let univ = all_clauses(&vars);
    let cap = 4;
    let mut classes = BTreeSet::new();
    let mut stack: Vec<(usize, Vec<Clause>)> = vec![(0, vec![])];
    while let Some((start, chosen)) = stack.pop() {
        let f = ClauseSet::from_clauses(chosen.iter().cloned());
        if !brute_sat(&f) {
            classes.insert(canonical(&f, 3));
        }
        if chosen.len() < cap {
            for i in start..univ.len() {
                let mut next = chosen.clone();
                next.push(univ[i].clone());
                stack.push((i + 1, next));
            }
        }
    }
    let got: BTreeSet<_> = corpus::exhaustive(cap).iter().map(|f| canonical(f, 3)).collect();
    assert_eq!(corpus::exhaustive(cap).len(), got.len(), "duplicate isomorphism classes");
    assert_eq!(got, classes);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dimacs_round_trip(f in clause_sets(5, 8)) {
        prop_assert_eq!(parse_dimacs(&write_dimacs(&f)).unwrap(), f);
    }

    #[test]
    fn satisfiability_matches_truth_tables(f in clause_sets(5, 10)) {
        prop_assert_eq!(cnf::is_satisfiable(&f).unwrap(), brute_sat(&f));
    }

    #[test]
    fn application_preserves_models(f in clause_sets(4, 8), v in 1u32..=4, b in any::<bool>()) {
        let phi = PartialAssignment::new().bind(v, b);
        let g = apply(&phi, &f);
        prop_assert!(!g.vars().contains(&v));
        let all: BTreeSet<u32> = (1..=4).collect();
        for t in totals(&all).into_iter().filter(|t| t.get(v) == Some(b)) {
            prop_assert_eq!(f.iter().all(|c| t.satisfies(c)), g.iter().all(|c| t.satisfies(c)));
        }
    }

    #[test]
    fn prime_implicates_match_enumeration(f in clause_sets(4, 6)) {
        let got = cnf::prime_implicates(&f).unwrap();
        let vars = f.vars();
        let want: ClauseSet = all_clauses(&vars)
            .into_iter()
            .filter(|c| entails(&f, c))
            .filter(|c| c.literals().iter().all(|l| {
                let smaller = Clause::new(c.literals().iter().copied().filter(|m| m != l)).unwrap();
                !entails(&f, &smaller)
            }))
            .collect();
        if brute_sat(&f) {
            prop_assert_eq!(got, want);
        } else {
            prop_assert_eq!(got, ClauseSet::bottom());
        }
    }

    #[test]
    fn subsumption_reduction_keeps_models(f in clause_sets(4, 8)) {
        let g = cnf::subsumption_reduce(&f);
        prop_assert!(g.iter().all(|c| f.contains(c)));
        for c in g.iter() {
            for d in g.iter() {
                prop_assert!(c == d || !c.is_subset(d));
            }
        }
        let all: BTreeSet<u32> = (1..=4).collect();
        prop_assert_eq!(models(&f, &all), models(&g, &all));
    }

    #[test]
    fn entailment_matches_models(f in clause_sets(4, 6), g in clause_sets(4, 2)) {
        let want = g.iter().all(|c| entails(&f, c));
        prop_assert_eq!(cnf::entails(&f, &g).unwrap(), want);
    }
}
