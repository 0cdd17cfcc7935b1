use std::collections::{BTreeMap, BTreeSet};

use super::WorldSet;
use crate::Error;

/// How a constructor treats an order that is not already a preorder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderMode {
    /// Add the reflexive-transitive closure.
    Close,
    /// Reject anything that is not reflexive and transitive.
    Strict,
}

/// A finite model on a preorder. Worlds are kept sorted by name, so the
/// index order is the canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreorderModel {
    names: Vec<String>,
    succ: Vec<WorldSet>,
    valuation: BTreeMap<String, WorldSet>,
}

/// `w0, w1, ...` zero-padded so that lexicographic and numeric order agree.
pub fn default_world_names(n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("w{i:0width$}")).collect()
}

impl PreorderModel {
    /// Build from world names, an order given as pairs of names, and a
    /// valuation mapping atoms to world names.
    pub fn new(
        worlds: Vec<String>,
        order: &[(String, String)],
        valuation: &BTreeMap<String, Vec<String>>,
        mode: OrderMode,
    ) -> Result<PreorderModel, Error> {
        let index: BTreeMap<&str, usize> = worlds
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_str(), i))
            .collect();
        if index.len() != worlds.len() {
            return Err(Error::InvalidModel("duplicate world names".into()));
        }
        let lookup = |w: &str| {
            index
                .get(w)
                .copied()
                .ok_or_else(|| Error::UnknownWorld(w.to_string()))
        };
        let n = worlds.len();
        let mut succ = vec![WorldSet::empty(n); n];
        for (a, b) in order {
            succ[lookup(a)?].insert(lookup(b)?);
        }
        let mut val = BTreeMap::new();
        for (atom, ws) in valuation {
            let mut s = WorldSet::empty(n);
            for w in ws {
                s.insert(lookup(w)?);
            }
            val.insert(atom.clone(), s);
        }
        PreorderModel::from_parts(worlds, succ, val, mode)
    }

    /// Build from index pairs with default world names.
    pub fn from_indices(
        n: usize,
        order: &[(usize, usize)],
        valuation: BTreeMap<String, WorldSet>,
        mode: OrderMode,
    ) -> Result<PreorderModel, Error> {
        let mut succ = vec![WorldSet::empty(n); n];
        for &(a, b) in order {
            if a >= n || b >= n {
                return Err(Error::UnknownWorld(format!("{}", a.max(b))));
            }
            succ[a].insert(b);
        }
        PreorderModel::from_parts(default_world_names(n), succ, valuation, mode)
    }

    /// Build from successor sets indexed like `names`. Names need not be
    /// sorted; worlds are reindexed into canonical order.
    pub fn from_parts(
        names: Vec<String>,
        mut succ: Vec<WorldSet>,
        valuation: BTreeMap<String, WorldSet>,
        mode: OrderMode,
    ) -> Result<PreorderModel, Error> {
        let n = names.len();
        if succ.len() != n {
            return Err(Error::InvalidModel("order rows do not match worlds".into()));
        }
        if names.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::InvalidModel("duplicate world names".into()));
        }
        if let Some(bad) = valuation.keys().find(|a| !is_atom_name(a)) {
            return Err(Error::InvalidModel(format!("`{bad}` is not an atom name")));
        }
        if succ
            .iter()
            .chain(valuation.values())
            .any(|s| s.universe() != n)
        {
            return Err(Error::InvalidModel(
                "world set over the wrong universe".into(),
            ));
        }
        match mode {
            OrderMode::Close => close_preorder(&mut succ),
            OrderMode::Strict => {
                for i in 0..n {
                    if !succ[i].contains(i) {
                        return Err(Error::InvalidModel(format!(
                            "order is not reflexive at `{}`",
                            names[i]
                        )));
                    }
                    for j in succ[i].iter() {
                        if !succ[j].is_subset(&succ[i]) {
                            return Err(Error::InvalidModel(format!(
                                "order is not transitive through `{}`",
                                names[j]
                            )));
                        }
                    }
                }
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by(|&a, &b| names[a].cmp(&names[b]));
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            return Ok(PreorderModel {
                names,
                succ,
                valuation,
            });
        }
        let mut new_index = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            new_index[old] = new;
        }
        let remap = |s: &WorldSet| WorldSet::from_indices(n, s.iter().map(|i| new_index[i]));
        Ok(PreorderModel {
            names: perm.iter().map(|&i| names[i].clone()).collect(),
            succ: perm.iter().map(|&i| remap(&succ[i])).collect(),
            valuation: valuation
                .iter()
                .map(|(a, s)| (a.clone(), remap(s)))
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, Error> {
        self.names
            .binary_search_by(|n| n.as_str().cmp(name))
            .map_err(|_| Error::UnknownWorld(name.to_string()))
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.succ[i].contains(j)
    }

    /// All `j` with `i <= j`, including `i`.
    pub fn successors(&self, i: usize) -> &WorldSet {
        &self.succ[i]
    }

    pub fn valuation(&self) -> &BTreeMap<String, WorldSet> {
        &self.valuation
    }

    /// Worlds where `atom` holds; empty for atoms without an entry.
    pub fn atom_extent(&self, atom: &str) -> WorldSet {
        self.valuation
            .get(atom)
            .cloned()
            .unwrap_or_else(|| WorldSet::empty(self.len()))
    }

    pub fn set_atom(&mut self, atom: &str, extent: WorldSet) {
        assert_eq!(extent.universe(), self.len());
        self.valuation.insert(atom.to_string(), extent);
    }

    /// All related pairs `(i, j)` with `i <= j`, in index order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|i| self.succ[i].iter().map(move |j| (i, j)))
            .collect()
    }

    /// Same worlds and valuation with a different order, validated strictly.
    pub fn with_order(&self, succ: Vec<WorldSet>) -> Result<PreorderModel, Error> {
        PreorderModel::from_parts(
            self.names.clone(),
            succ,
            self.valuation.clone(),
            OrderMode::Strict,
        )
    }

    /// Restriction to `keep`; must be an up-set for truth to be preserved.
    pub fn restrict(&self, keep: &WorldSet) -> PreorderModel {
        let old: Vec<usize> = keep.iter().collect();
        let n = old.len();
        let mut new_index = vec![usize::MAX; self.len()];
        for (k, &i) in old.iter().enumerate() {
            new_index[i] = k;
        }
        let project = |s: &WorldSet| {
            WorldSet::from_indices(
                n,
                s.iter().filter(|&i| keep.contains(i)).map(|i| new_index[i]),
            )
        };
        PreorderModel {
            names: old.iter().map(|&i| self.names[i].clone()).collect(),
            succ: old.iter().map(|&i| project(&self.succ[i])).collect(),
            valuation: self
                .valuation
                .iter()
                .map(|(a, s)| (a.clone(), project(s)))
                .collect(),
        }
    }

    /// Submodel generated by world `x`.
    pub fn generated_submodel(&self, x: usize) -> PreorderModel {
        self.restrict(&self.succ[x])
    }

    pub fn is_confluent(&self) -> bool {
        (0..self.len()).all(|x| {
            let up: Vec<usize> = self.succ[x].iter().collect();
            up.iter().enumerate().all(|(k, &y)| {
                up[k + 1..]
                    .iter()
                    .all(|&z| self.succ[y].intersects(&self.succ[z]))
            })
        })
    }

    /// A world below every other world, if there is one.
    pub fn root(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.succ[i].len() == self.len())
    }
}

/// Reflexive-transitive closure in place.
pub(crate) fn close_preorder(succ: &mut [WorldSet]) {
    let n = succ.len();
    for (i, s) in succ.iter_mut().enumerate() {
        s.insert(i);
    }
    for k in 0..n {
        let row_k = succ[k].clone();
        for s in succ.iter_mut() {
            if s.contains(k) {
                s.union_with(&row_k);
            }
        }
    }
}

pub(crate) fn is_atom_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        && s != "true"
        && s != "false"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closes_and_sorts() {
        let m = PreorderModel::new(
            vec!["b".into(), "a".into(), "c".into()],
            &[("a".into(), "b".into()), ("b".into(), "c".into())],
            &BTreeMap::from([("p".to_string(), vec!["c".to_string()])]),
            OrderMode::Close,
        )
        .unwrap();
        assert_eq!(m.names(), ["a", "b", "c"]);
        assert!(m.leq(0, 2) && m.leq(1, 1) && !m.leq(2, 0));
        assert!(m.atom_extent("p").contains(2));
        assert!(m.atom_extent("q").is_empty());
    }

    #[test]
    fn strict_mode_rejects_non_preorders() {
        let r = PreorderModel::from_indices(2, &[(0, 1)], BTreeMap::new(), OrderMode::Strict);
        assert!(matches!(r, Err(Error::InvalidModel(_))));
    }

    #[test]
    fn padded_names() {
        assert_eq!(default_world_names(11)[3], "w03");
        assert_eq!(default_world_names(1), ["w0"]);
    }

    #[test]
    fn generated_submodels() {
        let chain =
            PreorderModel::from_indices(2, &[(0, 1)], BTreeMap::new(), OrderMode::Close).unwrap();
        assert_eq!(chain.generated_submodel(0), chain);
        let top = chain.generated_submodel(1);
        assert_eq!(top.names(), ["w1"]);
        assert_eq!(top.generated_submodel(0), top);
    }

    #[test]
    fn confluence() {
        let fork =
            PreorderModel::from_indices(3, &[(0, 1), (0, 2)], BTreeMap::new(), OrderMode::Close)
                .unwrap();
        assert!(!fork.is_confluent());
        let diamond = PreorderModel::from_indices(
            4,
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
            BTreeMap::new(),
            OrderMode::Close,
        )
        .unwrap();
        assert!(diamond.is_confluent());
    }
}
