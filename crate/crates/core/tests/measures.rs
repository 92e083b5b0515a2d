mod common;

use common::*;
use hardness::cnf::{self, apply};
use hardness::measures::{self, MeasureKind};
use hardness::reductions;
use hardness::{corpus, PartialAssignment};
use proptest::prelude::*;

const BASE_KINDS: [MeasureKind; 4] = [MeasureKind::Hardness, MeasureKind::Depth, MeasureKind::SymWidth, MeasureKind::AsymWidth];

#[test]
fn small_corpus_matches_naive_definitions() {
    for f in corpus::exhaustive(5) {
        assert_eq!(measures::hardness(&f).unwrap(), naive_hd(&f), "{f}");
        assert_eq!(measures::depth(&f).unwrap(), naive_depth(&f), "{f}");
        assert_eq!(measures::asym_width(&f).unwrap(), naive_whd(&f), "{f}");
        assert_eq!(measures::sym_width(&f).unwrap(), naive_wid(&f), "{f}");
    }
}

#[test]
fn named_values() {
    let f = cs(&[&[1], &[-1, 2], &[-1, -2]]);
    assert_eq!(measures::hardness(&f).unwrap(), 1);
    assert_eq!(measures::asym_width(&f).unwrap(), 1);
    assert_eq!(measures::sym_width(&f).unwrap(), 2);
    assert_eq!(measures::depth(&f).unwrap(), 2);
    assert_eq!(measures::hardness(&cs(&[&[]])).unwrap(), 0);
    assert_eq!(measures::hardness(&cs(&[])).unwrap(), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn base_measures_match_oracles(f in unsat_sets(4, 7)) {
        prop_assert_eq!(measures::hardness(&f).unwrap(), naive_hd(&f));
        prop_assert_eq!(measures::depth(&f).unwrap(), naive_depth(&f));
        prop_assert_eq!(measures::asym_width(&f).unwrap(), naive_whd(&f));
        prop_assert_eq!(measures::sym_width(&f).unwrap(), naive_wid(&f));
    }

    #[test]
    fn hardness_equals_minimal_strahler(f in unsat_sets(4, 7)) {
        prop_assert_eq!(measures::hardness(&f).unwrap(), measures::hardness_by_strahler(&f).unwrap());
    }

    #[test]
    fn order_of_measures(f in unsat_sets(4, 7)) {
        let hd = measures::hardness(&f).unwrap();
        let whd = measures::asym_width(&f).unwrap();
        let wid = measures::sym_width(&f).unwrap();
        let dep = measures::depth(&f).unwrap();
        prop_assert!(whd <= hd && hd <= dep && dep as usize <= f.n());
        prop_assert!(whd <= wid);
    }

    #[test]
    fn measures_are_antitone(f in unsat_sets(4, 6), g in clause_sets(4, 3), v in 1u32..=4, b in any::<bool>()) {
        let phi = PartialAssignment::new().bind(v, b);
        let restricted = apply(&phi, &f);
        let bigger = f.union(&g);
        for kind in BASE_KINDS {
            let m = measures::base(kind, &f).unwrap();
            prop_assert!(measures::base(kind, &restricted).unwrap() <= m, "{kind:?} under restriction");
            prop_assert!(measures::base(kind, &bigger).unwrap() <= m, "{kind:?} under superset");
        }
    }

    #[test]
    fn lifted_matches_instantiation_maximum(f in clause_sets(3, 5)) {
        for kind in BASE_KINDS {
            let want = naive_lift(&f, |g| measures::base(kind, g).unwrap());
            prop_assert_eq!(measures::lift_measure(kind, &f, None).unwrap(), want, "{:?}", kind);
        }
    }

    #[test]
    fn witnesses_validate(f in unsat_sets(3, 6)) {
        for kind in MeasureKind::ALL {
            let r = measures::measure_report(kind, &f, None, true).unwrap();
            let w = r.witness.expect("witness for an unsatisfiable set");
            prop_assert!(measures::check_witness(kind, &w, &f, r.value), "{kind:?}");
        }
    }

    #[test]
    fn reduction_agrees_with_recursive_definition(f in clause_sets(4, 7), k in 0u32..3) {
        let r = reductions::rk(&f, k).unwrap();
        let naive = naive_rk(&f, k);
        prop_assert_eq!(r.refuted, naive.has_bottom());
        if !r.refuted {
            prop_assert_eq!(cnf::subsumption_reduce(&r.reduced), cnf::subsumption_reduce(&naive));
        }
    }
}
