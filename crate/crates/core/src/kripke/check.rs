use std::collections::HashMap;

use super::{PreorderModel, WorldSet};
use crate::syntax::Formula;

/// Satisfaction set of `f` in `m`. Atoms without a valuation entry are false.
pub fn model_check(m: &PreorderModel, f: &Formula) -> WorldSet {
    if m.len() <= 64 {
        return WorldSet::from_mask(m.len(), SmallModel::new(m).check(f));
    }
    let mut memo = HashMap::new();
    check_large(m, f, &mut memo)
}

pub fn satisfies(m: &PreorderModel, world: usize, f: &Formula) -> bool {
    model_check(m, f).contains(world)
}

fn check_large<'a>(
    m: &PreorderModel,
    f: &'a Formula,
    memo: &mut HashMap<&'a Formula, WorldSet>,
) -> WorldSet {
    if let Some(s) = memo.get(f) {
        return s.clone();
    }
    let n = m.len();
    let boxed =
        |s: &WorldSet| WorldSet::from_indices(n, (0..n).filter(|&i| m.successors(i).is_subset(s)));
    let out = match f {
        Formula::Atom(a) => {
            if !m.valuation().contains_key(a) {
                tracing::debug!(atom = %a, "atom has no valuation entry, treated as false");
            }
            m.atom_extent(a)
        }
        Formula::Bottom => WorldSet::empty(n),
        Formula::Top => WorldSet::full(n),
        Formula::Not(g) => check_large(m, g, memo).complement(),
        Formula::And(a, b) => {
            let mut s = check_large(m, a, memo);
            s.intersect_with(&check_large(m, b, memo));
            s
        }
        Formula::Or(a, b) => {
            let mut s = check_large(m, a, memo);
            s.union_with(&check_large(m, b, memo));
            s
        }
        Formula::Implies(a, b) => {
            let mut s = check_large(m, a, memo).complement();
            s.union_with(&check_large(m, b, memo));
            s
        }
        Formula::Iff(a, b) => {
            let x = check_large(m, a, memo);
            let y = check_large(m, b, memo);
            WorldSet::from_indices(n, (0..n).filter(|&i| x.contains(i) == y.contains(i)))
        }
        Formula::Box(g) => boxed(&check_large(m, g, memo)),
        Formula::Diamond(g) => boxed(&check_large(m, g, memo).complement()).complement(),
    };
    memo.insert(f, out.clone());
    out
}

/// A model of at most 64 worlds with successor sets packed into masks.
/// Cheap to build and evaluates formulas with word operations.
#[derive(Clone, Debug)]
pub struct SmallModel {
    n: usize,
    all: u64,
    succ: Vec<u64>,
    atoms: Vec<(String, u64)>,
}

impl SmallModel {
    pub fn new(m: &PreorderModel) -> SmallModel {
        assert!(m.len() <= 64, "SmallModel holds at most 64 worlds");
        let mask = |s: &WorldSet| s.iter().fold(0u64, |acc, i| acc | 1 << i);
        SmallModel {
            n: m.len(),
            all: full_mask(m.len()),
            succ: (0..m.len()).map(|i| mask(m.successors(i))).collect(),
            atoms: m
                .valuation()
                .iter()
                .map(|(a, s)| (a.clone(), mask(s)))
                .collect(),
        }
    }

    /// From raw successor masks; `succ` must already be a preorder.
    pub fn from_masks(succ: Vec<u64>, atoms: Vec<(String, u64)>) -> SmallModel {
        SmallModel {
            n: succ.len(),
            all: full_mask(succ.len()),
            succ,
            atoms,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn successors(&self, i: usize) -> u64 {
        self.succ[i]
    }

    pub fn atom(&self, name: &str) -> u64 {
        self.atoms
            .iter()
            .find(|(a, _)| a == name)
            .map_or(0, |(_, m)| *m)
    }

    pub fn box_of(&self, s: u64) -> u64 {
        let mut out = 0;
        for (i, &up) in self.succ.iter().enumerate() {
            if up & !s == 0 {
                out |= 1 << i;
            }
        }
        out
    }

    pub fn check(&self, f: &Formula) -> u64 {
        match f {
            Formula::Atom(a) => self.atom(a),
            Formula::Bottom => 0,
            Formula::Top => self.all,
            Formula::Not(g) => !self.check(g) & self.all,
            Formula::And(a, b) => self.check(a) & self.check(b),
            Formula::Or(a, b) => self.check(a) | self.check(b),
            Formula::Implies(a, b) => (!self.check(a) | self.check(b)) & self.all,
            Formula::Iff(a, b) => !(self.check(a) ^ self.check(b)) & self.all,
            Formula::Box(g) => self.box_of(self.check(g)),
            Formula::Diamond(g) => !self.box_of(!self.check(g) & self.all) & self.all,
        }
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::kripke::OrderMode;
    use crate::syntax::parse;

    fn model(n: usize, order: &[(usize, usize)], p: &[usize]) -> PreorderModel {
        PreorderModel::from_indices(
            n,
            order,
            BTreeMap::from([(
                "p".to_string(),
                WorldSet::from_indices(n, p.iter().copied()),
            )]),
            OrderMode::Close,
        )
        .unwrap()
    }

    fn ext(m: &PreorderModel, s: &str) -> Vec<usize> {
        model_check(m, &parse(s).unwrap()).iter().collect()
    }

    #[test]
    fn reflexive_singleton() {
        let m = model(1, &[], &[0]);
        assert_eq!(ext(&m, "[]p"), [0]);
    }

    #[test]
    fn two_chain() {
        let m = model(2, &[(0, 1)], &[1]);
        assert_eq!(ext(&m, "<>p"), [0, 1]);
        assert_eq!(ext(&m, "[]p"), [1]);
    }

    #[test]
    fn confluent_diamond() {
        let m = model(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], &[3]);
        assert_eq!(ext(&m, "<>[]p"), [0, 1, 2, 3]);
        assert_eq!(ext(&m, "[]<>p"), [0, 1, 2, 3]);
    }

    #[test]
    fn large_and_small_paths_agree() {
        let n = 70;
        let order: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let big = model(n, &order, &[3, 50, 69]);
        let small = model(5, &[(0, 1), (1, 2), (2, 3), (3, 4)], &[3]);
        for s in [
            "<>p",
            "[]p",
            "~[]~p -> p",
            "[]<>p <-> <>[]p",
            "<>(p & <>~p)",
        ] {
            let f = parse(s).unwrap();
            let mut memo = HashMap::new();
            assert_eq!(check_large(&small, &f, &mut memo), model_check(&small, &f));
        }
        assert_eq!(ext(&big, "<>p").len(), 70);
        assert_eq!(ext(&big, "[]p"), [69]);
    }
}
