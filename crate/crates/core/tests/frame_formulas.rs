use std::collections::BTreeMap;

use craig_gamma::engine::{rooted_preorders, valid, Budget, LogicId};
use craig_gamma::frame_formulas::{
    arity, cluster_frame, frame_formula, gamma, point_atom, substitute, Bound,
};
use craig_gamma::kripke::{satisfies, OrderMode, PreorderModel, RootedFrame, WorldSet};
use craig_gamma::parse;

/// The frame itself with `p_i` true exactly at point `i`.
fn point_model(g: &RootedFrame) -> PreorderModel {
    let n = g.len();
    let valuation: BTreeMap<String, WorldSet> = (0..n)
        .map(|i| (point_atom(i).to_string(), WorldSet::from_indices(n, [i])))
        .collect();
    PreorderModel::from_indices(n, &g.pairs(), valuation, OrderMode::Strict).unwrap()
}

#[test]
fn every_small_frame_refutes_its_formula_at_the_root() {
    for n in 1..=4 {
        for rows in rooted_preorders(n).unwrap() {
            let g = RootedFrame::new(rows.clone()).unwrap();
            let m = point_model(&g);
            let root = m.root().unwrap();
            assert!(!satisfies(&m, root, &frame_formula(&g)), "{:?}", g.pairs());
        }
    }
}

#[test]
fn gamma_arity_and_validity() {
    assert_eq!(arity(&gamma(Bound::Finite(1), false)), 2);
    assert_eq!(arity(&gamma(Bound::Finite(2), true)), 4);
    let b = Budget::default();
    let grz = LogicId::grz();
    assert!(valid(&gamma(Bound::Finite(1), false), grz, &b).is_valid());
    assert!(valid(&gamma(Bound::Finite(1), true), grz, &b).is_valid());
    let g22: LogicId = "G(Int,2,2)".parse().unwrap();
    assert!(valid(&gamma(Bound::Finite(2), false), g22, &b).is_valid());
    assert!(valid(&gamma(Bound::Finite(1), false), g22, &b).is_invalid());
}

#[test]
fn cluster_frames_are_clusters() {
    let g = cluster_frame(3, false).unwrap();
    assert_eq!(g.pairs().len(), 9);
    let t = cluster_frame(2, true).unwrap();
    assert_eq!(t.len(), 3);
    assert!(t.leq(0, 2) && !t.leq(2, 0));
}

#[test]
fn substitution_checks_arity() {
    let chi = gamma(Bound::Finite(1), false);
    assert!(substitute(&chi, &[parse("p").unwrap()]).is_err());
    let s = substitute(&chi, &[parse("p").unwrap(), parse("~p").unwrap()]).unwrap();
    assert_eq!(
        s.atoms().into_iter().collect::<Vec<_>>(),
        vec!["p".to_string()]
    );
}
