//! Modal prefixes built from `~` and `[]`, and their S4 normal forms.
//!
//! Over S4 every such prefix collapses to one of fourteen canonical words.
//! The rewrite system below reaches them: `~~ => ε`, `[][] => []`, and
//! `[]~[]~[]~[] => []~[]`. The last rule is `[]<>[]<> = []<>` with a
//! negation stripped from the end, and also yields `<>[]<>[] = <>[]`.

use super::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModalOp {
    Not,
    Box,
}

/// A prefix, outermost operator first.
pub type Modality = Vec<ModalOp>;

const COLLAPSE_FROM: [ModalOp; 7] = [
    ModalOp::Box,
    ModalOp::Not,
    ModalOp::Box,
    ModalOp::Not,
    ModalOp::Box,
    ModalOp::Not,
    ModalOp::Box,
];
const COLLAPSE_TO: [ModalOp; 3] = [ModalOp::Box, ModalOp::Not, ModalOp::Box];

/// Rewrite a prefix into its canonical representative.
pub fn normalize_modality(prefix: &[ModalOp]) -> Modality {
    let mut word: Modality = prefix.to_vec();
    loop {
        let before = word.len();
        let mut out: Modality = Vec::with_capacity(word.len());
        for &op in &word {
            match (out.last(), op) {
                (Some(ModalOp::Not), ModalOp::Not) => {
                    out.pop();
                }
                (Some(ModalOp::Box), ModalOp::Box) => {}
                _ => out.push(op),
            }
            if out.ends_with(&COLLAPSE_FROM) {
                out.truncate(out.len() - COLLAPSE_FROM.len());
                out.extend_from_slice(&COLLAPSE_TO);
            }
        }
        word = out;
        if word.len() == before {
            return word;
        }
    }
}

/// The fourteen canonical prefixes, shortest first.
pub fn canonical_modalities() -> Vec<Modality> {
    use ModalOp::{Box as B, Not as N};
    vec![
        vec![],
        vec![N],
        vec![B],
        vec![N, B],
        vec![B, N],
        vec![N, B, N],
        vec![B, N, B],
        vec![N, B, N, B],
        vec![B, N, B, N],
        vec![N, B, N, B, N],
        vec![B, N, B, N, B],
        vec![N, B, N, B, N, B],
        vec![B, N, B, N, B, N],
        vec![N, B, N, B, N, B, N],
    ]
}

/// Wrap `core` in `prefix`, outermost operator first.
pub fn apply_modality(prefix: &[ModalOp], core: &Formula) -> Formula {
    prefix.iter().rev().fold(core.clone(), |acc, op| match op {
        ModalOp::Not => Formula::not(acc),
        ModalOp::Box => Formula::boxed(acc),
    })
}

/// Peel leading `~`, `[]` and `<>` (read as `~[]~`) off a formula.
pub fn split_modality(f: &Formula) -> (Modality, Formula) {
    let mut prefix = Vec::new();
    let mut cur = f;
    loop {
        match cur {
            Formula::Not(g) => {
                prefix.push(ModalOp::Not);
                cur = g;
            }
            Formula::Box(g) => {
                prefix.push(ModalOp::Box);
                cur = g;
            }
            Formula::Diamond(g) => {
                prefix.extend([ModalOp::Not, ModalOp::Box, ModalOp::Not]);
                cur = g;
            }
            _ => return (prefix, cur.clone()),
        }
    }
}

/// Negation with the resulting prefix normalized, so that `neg(neg(f))`
/// is again in normal form.
pub fn neg(f: &Formula) -> Formula {
    let (mut prefix, core) = split_modality(f);
    prefix.insert(0, ModalOp::Not);
    apply_modality(&normalize_modality(&prefix), &core)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ModalOp::{Box as B, Not as N};

    #[test]
    fn simple_collapses() {
        assert_eq!(normalize_modality(&[B, B]), vec![B]);
        assert_eq!(normalize_modality(&[N, N]), Vec::<ModalOp>::new());
        assert_eq!(normalize_modality(&[N, B, N, N, B, N]), vec![N, B, N]);
    }

    #[test]
    fn alternating_identities() {
        // []<>[]<> = []<>
        assert_eq!(
            normalize_modality(&[B, N, B, N, B, N, B, N]),
            vec![B, N, B, N]
        );
        // <>[]<>[] = <>[]
        assert_eq!(
            normalize_modality(&[N, B, N, B, N, B, N, B]),
            vec![N, B, N, B]
        );
    }

    #[test]
    fn canonical_words_are_fixed_points() {
        let words = canonical_modalities();
        assert_eq!(words.len(), 14);
        for w in &words {
            assert_eq!(&normalize_modality(w), w);
        }
    }

    #[test]
    fn every_short_word_lands_in_the_canonical_set() {
        let words = canonical_modalities();
        for len in 0..=10u32 {
            for bits in 0..(1u32 << len) {
                let w: Modality = (0..len)
                    .map(|i| if bits >> i & 1 == 1 { B } else { N })
                    .collect();
                assert!(words.contains(&normalize_modality(&w)), "{w:?}");
            }
        }
    }

    #[test]
    fn normalized_negation() {
        let p = Formula::atom("p");
        assert_eq!(neg(&Formula::not(p.clone())), p);
        assert_eq!(
            neg(&Formula::diamond(p.clone())),
            Formula::boxed(Formula::not(p.clone()))
        );
        assert_eq!(neg(&neg(&Formula::boxed(p.clone()))), Formula::boxed(p));
    }
}
