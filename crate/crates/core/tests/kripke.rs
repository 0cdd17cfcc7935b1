mod common;

use craig_gamma::kripke::{clusters, model_check, model_from_json, model_to_json, SmallModel};
use craig_gamma::Formula;
use proptest::prelude::*;

proptest! {
    #[test]
    fn boxed_formulas_persist(m in common::model(5, &["p", "q"]), f in common::formula(&["p", "q"], 3)) {
        let boxed = model_check(&m, &Formula::boxed(f));
        for w in boxed.iter() {
            for v in m.successors(w).iter() {
                prop_assert!(boxed.contains(v));
            }
        }
    }

    #[test]
    fn diamond_is_dual_box(m in common::model(5, &["p", "q"]), f in common::formula(&["p", "q"], 3)) {
        let d = model_check(&m, &Formula::diamond(f.clone()));
        let b = model_check(&m, &Formula::boxed(Formula::not(f)));
        prop_assert_eq!(d, b.complement());
    }

    #[test]
    fn reflexive_transitive_axioms(m in common::model(5, &["p"]), f in common::formula(&["p"], 3)) {
        let bf = Formula::boxed(f.clone());
        let t = Formula::implies(bf.clone(), f);
        let four = Formula::implies(bf.clone(), Formula::boxed(bf));
        prop_assert_eq!(model_check(&m, &t).len(), m.len());
        prop_assert_eq!(model_check(&m, &four).len(), m.len());
    }

    #[test]
    fn bitmask_checker_agrees(m in common::model(5, &["p", "q"]), f in common::formula(&["p", "q"], 4)) {
        let small = SmallModel::new(&m);
        let mask = small.check(&f);
        let ext = model_check(&m, &f);
        for w in 0..m.len() {
            prop_assert_eq!(mask >> w & 1 == 1, ext.contains(w));
        }
    }

    #[test]
    fn json_round_trip(m in common::model(5, &["p", "q"])) {
        prop_assert_eq!(model_from_json(&model_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn clusters_partition_worlds(m in common::model(6, &["p"])) {
        let view = clusters(&m);
        let mut seen = vec![false; m.len()];
        for members in &view.clusters {
            for &a in members {
                prop_assert!(!seen[a]);
                seen[a] = true;
                for &b in members {
                    prop_assert!(m.leq(a, b) && m.leq(b, a));
                }
            }
        }
        prop_assert!(seen.into_iter().all(|s| s));
    }
}

#[test]
fn malformed_json_is_rejected() {
    assert!(model_from_json("{").is_err());
    let bad = r#"{"worlds":["a"],"order":[["a","b"]],"valuation":{}}"#;
    assert!(model_from_json(bad).is_err());
}
