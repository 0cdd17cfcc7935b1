mod common;

use craig_gamma::frame_formulas::Bound;
use craig_gamma::kripke::{clusters, model_check};
use craig_gamma::refine::{precondition_violation, refine_model, RefineOptions};
use craig_gamma::syntax::subformula_closure;
use craig_gamma::FormulaSet;
use proptest::prelude::*;

fn bound() -> impl Strategy<Value = Bound> {
    prop_oneof![
        Just(Bound::Finite(1)),
        Just(Bound::Finite(2)),
        Just(Bound::Omega)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn refinement_preserves_extents_and_bounds(
        model in common::model(6, &["p", "q"]),
        f in common::formula(&["p", "q"], 3),
        g in common::formula(&["p", "q"], 3),
        m in bound(),
        n in bound(),
    ) {
        let s1: FormulaSet = subformula_closure([&f]);
        let s2: FormulaSet = subformula_closure([&g]);
        let opts = RefineOptions { recheck_preconditions: true, ..RefineOptions::default() };
        let ok = precondition_violation(&model, &s1, &s2, m, n, opts.max_assignments).unwrap().is_none();
        match refine_model(&model, &s1, &s2, m, n, &opts) {
            Ok(r) => {
                prop_assert!(ok);
                prop_assert_eq!(r.model.names(), model.names());
                for h in s1.iter().chain(&s2) {
                    prop_assert_eq!(model_check(&r.model, h), model_check(&model, h), "{}", h);
                }
                let view = clusters(&r.model);
                for (c, members) in view.clusters.iter().enumerate() {
                    let b = if view.is_final[c] { m } else { n };
                    prop_assert!(b.admits(members.len()));
                }
            }
            Err(e) => prop_assert!(!ok, "refinement failed although preconditions hold: {}", e),
        }
    }
}
