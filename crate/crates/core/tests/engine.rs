mod common;

use craig_gamma::engine::{
    countermodel_search, find_interpolant, valid, Budget, Interpolation, LogicId, Verdict,
};
use craig_gamma::kripke::satisfies;
use craig_gamma::{parse, Formula};
use proptest::prelude::*;

fn logic() -> impl Strategy<Value = LogicId> {
    prop::sample::select(LogicId::all())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn decisions_agree_with_small_countermodels(f in common::formula(&["p", "q"], 3), l in logic()) {
        let found = countermodel_search(&f, l, 3).unwrap();
        match valid(&f, l, &Budget::default()) {
            Verdict::Valid => prop_assert!(found.is_none(), "valid but refuted: {}", f),
            Verdict::Invalid { model, world } => {
                prop_assert!(!satisfies(&model, world, &f));
                prop_assert_eq!(l.frame_violation(&model), None);
            }
            Verdict::Unknown(r) => prop_assert!(false, "undecided {}: {}", f, r),
        }
        if let Some((model, world)) = found {
            prop_assert!(!satisfies(&model, world, &f));
            prop_assert!(l.admits_frame(&model));
        }
    }

    #[test]
    fn interpolants_are_verified(
        a in common::formula(&["p", "q"], 2),
        c in common::formula(&["q"], 2),
        b in common::formula(&["q", "r"], 2),
    ) {
        let l = LogicId::s4();
        let budget = Budget { max_interpolant_size: 6, ..Budget::default() };
        let (f1, f2) = (Formula::and(a, c.clone()), Formula::or(c, b));
        let shared: Vec<String> = f1.atoms().intersection(&f2.atoms()).cloned().collect();
        match find_interpolant(&f1, &f2, l, &budget) {
            Interpolation::Interpolant(i) => {
                prop_assert!(valid(&Formula::implies(f1.clone(), i.clone()), l, &budget).is_valid());
                prop_assert!(valid(&Formula::implies(i.clone(), f2.clone()), l, &budget).is_valid());
                prop_assert!(i.atoms().iter().all(|x| shared.contains(x)), "{}", i);
            }
            Interpolation::NotValid { .. } => prop_assert!(false, "{} -> {} is valid", f1, f2),
            Interpolation::Unknown(_) => {}
        }
    }
}

#[test]
fn named_logics() {
    let b = Budget::default();
    let cases = [
        ("<>[]p -> []<>p", "S4", false),
        ("<>[]p -> []<>p", "S4.2", true),
        ("[]([](p -> []p) -> p) -> p", "Grz", true),
        ("[]([](p -> []p) -> p) -> p", "S4", false),
        ("p | ~p", "S4", true),
    ];
    for (f, l, expect) in cases {
        let l: LogicId = l.parse().unwrap();
        assert_eq!(
            valid(&parse(f).unwrap(), l, &b).is_valid(),
            expect,
            "{f} in {l}"
        );
    }
}

#[test]
fn interpolant_not_valid_gives_countermodel() {
    let (a, b) = (parse("p").unwrap(), parse("[]p").unwrap());
    match find_interpolant(&a, &b, LogicId::s4(), &Budget::default()) {
        Interpolation::NotValid { model, world } => {
            assert!(satisfies(&model, world, &a) && !satisfies(&model, world, &b));
        }
        other => panic!("{other:?}"),
    }
}
