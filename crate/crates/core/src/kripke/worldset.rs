use std::fmt;

/// Set of world indices over a fixed universe `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldSet {
    universe: usize,
    words: Vec<u64>,
}

impl WorldSet {
    pub fn empty(universe: usize) -> WorldSet {
        WorldSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> WorldSet {
        let mut s = WorldSet::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, items: I) -> WorldSet {
        let mut s = WorldSet::empty(universe);
        for i in items {
            s.insert(i);
        }
        s
    }

    /// Low 64 worlds packed into a mask.
    pub fn from_mask(universe: usize, mask: u64) -> WorldSet {
        WorldSet::from_indices(
            universe,
            (0..universe.min(64)).filter(|i| mask >> i & 1 == 1),
        )
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        assert!(
            i < self.universe,
            "world {i} outside universe {}",
            self.universe
        );
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.universe {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&i| self.contains(i))
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &WorldSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn union_with(&mut self, other: &WorldSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &WorldSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn complement(&self) -> WorldSet {
        let mut out = WorldSet::empty(self.universe);
        for i in 0..self.universe {
            if !self.contains(i) {
                out.insert(i);
            }
        }
        out
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
