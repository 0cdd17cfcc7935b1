mod common;

use craig_gamma::syntax::{
    apply_modality, box_negation_closure, canonical_modalities, neg, normalize_modality,
    split_modality, subformula_closure, ModalOp,
};
use craig_gamma::{parse, Formula};
use proptest::prelude::*;

#[test]
fn precedence_and_associativity() {
    assert_eq!(parse("p & q | r").unwrap(), parse("(p & q) | r").unwrap());
    assert_eq!(
        parse("p -> q -> r").unwrap(),
        parse("p -> (q -> r)").unwrap()
    );
    assert_eq!(parse("[]p -> q").unwrap(), parse("([]p) -> q").unwrap());
    assert_eq!(
        parse("~[]~p").unwrap(),
        Formula::not(Formula::boxed(Formula::not(Formula::atom("p"))))
    );
}

#[test]
fn rejects_garbage() {
    for s in ["", "p &", "(p", "p q", "[]", "p -> -> q"] {
        assert!(parse(s).is_err(), "{s}");
    }
}

#[test]
fn fourteen_modalities() {
    let all = canonical_modalities();
    assert_eq!(all.len(), 14);
    for m in &all {
        assert_eq!(&normalize_modality(m), m);
    }
}

#[test]
fn box_negation_closure_contains_every_modality() {
    let seeds = [parse("p").unwrap()];
    let c = box_negation_closure(&seeds);
    for m in canonical_modalities() {
        assert!(c.contains(&apply_modality(&m, &Formula::atom("p"))));
    }
}

proptest! {
    #[test]
    fn print_parse_round_trip(f in common::formula(&["p", "q", "r"], 5)) {
        let text = f.to_string();
        prop_assert_eq!(parse(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn subformula_closure_is_closed_and_idempotent(f in common::formula(&["p", "q"], 4)) {
        let c = subformula_closure([&f]);
        prop_assert!(c.contains(&f));
        for g in &c {
            for h in g.children() {
                prop_assert!(c.contains(h));
            }
        }
        prop_assert_eq!(subformula_closure(c.iter()), c);
    }

    #[test]
    fn normalization_is_idempotent(word in prop::collection::vec(prop::bool::ANY, 0..12)) {
        let word: Vec<ModalOp> = word.into_iter().map(|b| if b { ModalOp::Box } else { ModalOp::Not }).collect();
        let once = normalize_modality(&word);
        prop_assert_eq!(normalize_modality(&once), once.clone());
        prop_assert!(canonical_modalities().contains(&once));
    }

    #[test]
    fn neg_is_an_involution_on_normal_forms(f in common::formula(&["p", "q"], 4)) {
        let (prefix, core) = split_modality(&f);
        let g = apply_modality(&normalize_modality(&prefix), &core);
        prop_assert_eq!(neg(&neg(&g)), g);
    }
}
