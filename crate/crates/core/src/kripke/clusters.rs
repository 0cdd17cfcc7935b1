use super::PreorderModel;

/// Partition of a model into clusters (classes of mutually related worlds).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterView {
    /// Members of each cluster in index order; clusters ordered by least member.
    pub clusters: Vec<Vec<usize>>,
    /// Cluster index of every world.
    pub cluster_of: Vec<usize>,
    /// `is_final[c]` iff no cluster lies strictly above `c`.
    pub is_final: Vec<bool>,
    leq: Vec<Vec<bool>>,
}

impl ClusterView {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Cluster order (reflexive).
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn strictly_below(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    /// Clusters with no other cluster strictly below them among `candidates`.
    pub fn minimal_among(&self, candidates: &[usize]) -> Vec<usize> {
        candidates
            .iter()
            .copied()
            .filter(|&c| !candidates.iter().any(|&d| self.strictly_below(d, c)))
            .collect()
    }
}

pub fn clusters(m: &PreorderModel) -> ClusterView {
    let n = m.len();
    let mut cluster_of = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if cluster_of[i] != usize::MAX {
            continue;
        }
        let c = groups.len();
        let members: Vec<usize> = m.successors(i).iter().filter(|&j| m.leq(j, i)).collect();
        for &j in &members {
            cluster_of[j] = c;
        }
        groups.push(members);
    }
    let k = groups.len();
    let leq: Vec<Vec<bool>> = (0..k)
        .map(|a| (0..k).map(|b| m.leq(groups[a][0], groups[b][0])).collect())
        .collect();
    let is_final = (0..k)
        .map(|a| (0..k).all(|b| b == a || !leq[a][b]))
        .collect();
    ClusterView {
        clusters: groups,
        cluster_of,
        is_final,
        leq,
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::kripke::OrderMode;

    fn frame(n: usize, order: &[(usize, usize)]) -> PreorderModel {
        PreorderModel::from_indices(n, order, BTreeMap::new(), OrderMode::Close).unwrap()
    }

    #[test]
    fn total_cluster() {
        let v = clusters(&frame(3, &[(0, 1), (1, 2), (2, 0)]));
        assert_eq!(v.clusters, vec![vec![0, 1, 2]]);
        assert_eq!(v.is_final, vec![true]);
    }

    #[test]
    fn chain_of_singletons() {
        let v = clusters(&frame(2, &[(0, 1)]));
        assert_eq!(v.clusters, vec![vec![0], vec![1]]);
        assert_eq!(v.is_final, vec![false, true]);
        assert!(v.strictly_below(0, 1));
    }

    #[test]
    fn topped_two_cluster() {
        let v = clusters(&frame(3, &[(0, 1), (1, 0), (0, 2), (1, 2)]));
        assert_eq!(v.clusters, vec![vec![0, 1], vec![2]]);
        assert_eq!(v.is_final, vec![false, true]);
        assert_eq!(v.minimal_among(&[0, 1]), vec![0]);
    }
}
