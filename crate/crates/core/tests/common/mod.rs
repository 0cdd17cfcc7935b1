#![allow(dead_code)]

use std::collections::BTreeMap;

use craig_gamma::kripke::{OrderMode, PreorderModel, WorldSet};
use craig_gamma::Formula;
use proptest::prelude::*;

pub fn formula(atoms: &'static [&'static str], depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        6 => prop::sample::select(atoms).prop_map(Formula::atom),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bottom),
    ];
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::boxed),
            inner.clone().prop_map(Formula::diamond),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}

/// A model on the reflexive-transitive closure of a random relation.
pub fn model(
    max_worlds: usize,
    atoms: &'static [&'static str],
) -> impl Strategy<Value = PreorderModel> {
    (1..=max_worlds).prop_flat_map(move |n| {
        (
            prop::collection::vec(any::<bool>(), n * n),
            prop::collection::vec(0u64..1 << n, atoms.len()),
        )
            .prop_map(move |(edges, masks)| {
                let pairs: Vec<(usize, usize)> = (0..n * n)
                    .filter(|&k| edges[k])
                    .map(|k| (k / n, k % n))
                    .collect();
                let valuation: BTreeMap<String, WorldSet> = atoms
                    .iter()
                    .zip(&masks)
                    .map(|(a, &m)| (a.to_string(), WorldSet::from_mask(n, m)))
                    .collect();
                PreorderModel::from_indices(n, &pairs, valuation, OrderMode::Close).unwrap()
            })
    })
}
