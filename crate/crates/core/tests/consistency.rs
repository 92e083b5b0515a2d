mod common;

use common::*;
use hardness::consistency::{self, ConsistencyKind};
use hardness::{corpus, measures, MeasureKind};
use proptest::prelude::*;

fn measure_of(kind: ConsistencyKind) -> MeasureKind {
    match kind {
        ConsistencyKind::KConsistent => MeasureKind::AsymWidth,
        ConsistencyKind::SymmetricK => MeasureKind::SymWidth,
        ConsistencyKind::WeaklyK => MeasureKind::Hardness,
        ConsistencyKind::VeryWeaklyK => MeasureKind::Depth,
    }
}

fn two_variable_corpus() -> Vec<hardness::ClauseSet> {
    corpus::exhaustive(8).into_iter().filter(|f| f.n() <= 2).collect()
}

#[test]
fn constructed_families_agree_with_enumeration() {
    for f in two_variable_corpus() {
        for kind in ConsistencyKind::ALL {
            for k in 0..=2 {
                assert_eq!(
                    consistency::exists_family(kind, &f, k).unwrap(),
                    consistency::exists_family_brute(kind, &f, k).unwrap(),
                    "{kind} k={k} {f}"
                );
            }
        }
    }
}

#[test]
fn existence_tracks_measures_on_two_variables() {
    for f in two_variable_corpus() {
        for kind in ConsistencyKind::ALL {
            let m = measures::base(measure_of(kind), &f).unwrap();
            for k in 0..=2 {
                assert_eq!(consistency::exists_family(kind, &f, k).unwrap(), m > k, "{kind} k={k} {f}");
            }
        }
    }
}

#[test]
fn families_are_closed_under_union() {
    for f in two_variable_corpus() {
        for kind in [ConsistencyKind::KConsistent, ConsistencyKind::SymmetricK] {
            for k in 0..=2 {
                let all = consistency::all_families_brute(kind, &f, k).unwrap();
                for a in &all {
                    for b in &all {
                        assert!(consistency::check_family(kind, &a.union(b), &f, k), "{kind} k={k} {f}");
                    }
                }
                let largest = consistency::largest_family(kind, &f, k).unwrap();
                match largest {
                    None => assert!(all.is_empty()),
                    Some(p) => assert!(all.iter().all(|a| a.members.is_subset(&p.members))),
                }
            }
        }
    }
}

#[test]
fn satisfiable_input_is_refused() {
    assert!(consistency::exists_family(ConsistencyKind::KConsistent, &cs(&[&[1, 2]]), 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn largest_family_within_closure_family(f in unsat_sets(3, 6), k in 0u32..3) {
        for kind in [ConsistencyKind::KConsistent, ConsistencyKind::SymmetricK] {
            let closure = consistency::closure_family(kind, &f, k).unwrap();
            if let Some(p) = consistency::largest_family(kind, &f, k).unwrap() {
                prop_assert!(p.members.is_subset(&closure.members));
                prop_assert!(consistency::check_family(kind, &p, &f, k));
            }
        }
    }

    #[test]
    fn witness_families_check(f in unsat_sets(3, 6), k in 0u32..3) {
        for kind in ConsistencyKind::ALL {
            if consistency::exists_family(kind, &f, k).unwrap() {
                let p = consistency::witness_family(kind, &f, k).unwrap();
                prop_assert_eq!(consistency::check_family_detailed(kind, &p, &f, k), Ok(()));
            }
        }
    }
}
