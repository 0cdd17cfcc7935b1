use super::{model_check, PreorderModel, WorldSet};
use crate::syntax::Formula;
use crate::Error;

/// A finite preorder on points `0..len()` in which 0 reaches everything.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootedFrame {
    /// `rows[i]` has bit `j` set iff `i <= j`.
    rows: Vec<u64>,
}

impl RootedFrame {
    /// Validate `rows` as a rooted preorder on at most 64 points.
    pub fn new(rows: Vec<u64>) -> Result<RootedFrame, Error> {
        let n = rows.len();
        if n == 0 || n > 64 {
            return Err(Error::InvalidFrame(format!("{n} points (need 1..=64)")));
        }
        let all = super::check::full_mask(n);
        for (i, &r) in rows.iter().enumerate() {
            if r & !all != 0 {
                return Err(Error::InvalidFrame(format!(
                    "row {i} mentions missing points"
                )));
            }
            if r >> i & 1 == 0 {
                return Err(Error::InvalidFrame(format!("not reflexive at {i}")));
            }
            for j in 0..n {
                if r >> j & 1 == 1 && rows[j] & !r != 0 {
                    return Err(Error::InvalidFrame(format!("not transitive through {j}")));
                }
            }
        }
        if rows[0] != all {
            return Err(Error::InvalidFrame("point 0 is not a root".into()));
        }
        Ok(RootedFrame { rows })
    }

    /// Close the pairs reflexively and transitively, then validate.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<RootedFrame, Error> {
        if pairs.iter().any(|&(a, b)| a >= n || b >= n) {
            return Err(Error::InvalidFrame("pair outside the point range".into()));
        }
        let mut rows: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for &(a, b) in pairs {
            rows[a] |= 1 << b;
        }
        for k in 0..n {
            for i in 0..n {
                if rows[i] >> k & 1 == 1 {
                    rows[i] |= rows[k];
                }
            }
        }
        RootedFrame::new(rows)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|i| {
                (0..self.len())
                    .filter(move |&j| self.leq(i, j))
                    .map(move |j| (i, j))
            })
            .collect()
    }
}

/// A map from the worlds above `root` onto the points of a rooted frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMorphism {
    pub root: usize,
    /// Indexed by world of the source model; `None` outside the generated submodel.
    pub map: Vec<Option<usize>>,
}

/// Check monotonicity, the back condition and surjectivity of `map` on the
/// worlds above `x`.
fn is_p_morphism(m: &PreorderModel, x: usize, g: &RootedFrame, map: &[Option<usize>]) -> bool {
    let up = m.successors(x);
    let mut covered = 0u64;
    for y in up.iter() {
        let Some(fy) = map[y] else { return false };
        // monotone gives image ⊆ row(fy), back gives the reverse
        let image = m
            .successors(y)
            .iter()
            .fold(0u64, |acc, z| acc | map[z].map_or(0, |p| 1 << p));
        if image != g.row(fy) {
            return false;
        }
        covered |= 1 << fy;
    }
    covered == super::check::full_mask(g.len())
}

/// Search for a p-morphism from the submodel generated by `x` onto `g`.
///
/// With `preimages`, the only candidate sends `y` to the unique `i` with
/// `y` satisfying `preimages[i]`. Without, maps are tried in lexicographic
/// order and the first p-morphism is returned.
pub fn find_p_morphism(
    m: &PreorderModel,
    x: usize,
    g: &RootedFrame,
    preimages: Option<&[Formula]>,
) -> Result<Option<PMorphism>, Error> {
    if x >= m.len() {
        return Err(Error::UnknownWorld(x.to_string()));
    }
    let up: Vec<usize> = m.successors(x).iter().collect();
    match preimages {
        Some(spec) => {
            if spec.len() != g.len() {
                return Err(Error::InvalidArgument(format!(
                    "{} preimage formulas for a frame of {} points",
                    spec.len(),
                    g.len()
                )));
            }
            let extents: Vec<WorldSet> = spec.iter().map(|f| model_check(m, f)).collect();
            Ok(spec_candidate(m, x, g, &up, &extents))
        }
        None => Ok(search(m, x, g, &up)),
    }
}

/// Candidate check with precomputed preimage extents.
pub fn spec_candidate(
    m: &PreorderModel,
    x: usize,
    g: &RootedFrame,
    up: &[usize],
    extents: &[WorldSet],
) -> Option<PMorphism> {
    let mut map = vec![None; m.len()];
    for &y in up {
        let mut hits = (0..g.len()).filter(|&i| extents[i].contains(y));
        let first = hits.next()?;
        if hits.next().is_some() {
            return None;
        }
        map[y] = Some(first);
    }
    is_p_morphism(m, x, g, &map).then_some(PMorphism { root: x, map })
}

fn search(m: &PreorderModel, x: usize, g: &RootedFrame, up: &[usize]) -> Option<PMorphism> {
    let mut map = vec![None; m.len()];
    fn go(
        m: &PreorderModel,
        x: usize,
        g: &RootedFrame,
        up: &[usize],
        k: usize,
        map: &mut Vec<Option<usize>>,
    ) -> bool {
        if k == up.len() {
            return is_p_morphism(m, x, g, map);
        }
        let y = up[k];
        for p in 0..g.len() {
            let consistent = up[..k].iter().all(|&z| {
                let q = map[z].expect("assigned");
                (!m.leq(z, y) || g.leq(q, p)) && (!m.leq(y, z) || g.leq(p, q))
            });
            if consistent {
                map[y] = Some(p);
                if go(m, x, g, up, k + 1, map) {
                    return true;
                }
            }
        }
        map[y] = None;
        false
    }
    go(m, x, g, up, 0, &mut map).then_some(PMorphism { root: x, map })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::kripke::OrderMode;

    fn frame_model(n: usize, order: &[(usize, usize)]) -> PreorderModel {
        PreorderModel::from_indices(n, order, BTreeMap::new(), OrderMode::Close).unwrap()
    }

    fn two_cluster() -> RootedFrame {
        RootedFrame::from_pairs(2, &[(0, 1), (1, 0)]).unwrap()
    }

    #[test]
    fn identity_spec() {
        let g = RootedFrame::from_pairs(3, &[(0, 1), (0, 2)]).unwrap();
        let m = PreorderModel::from_indices(
            3,
            &g.pairs(),
            (0..3)
                .map(|i| (format!("p{i}"), WorldSet::from_indices(3, [i])))
                .collect(),
            OrderMode::Strict,
        )
        .unwrap();
        let spec: Vec<Formula> = (0..3).map(|i| Formula::atom(format!("p{i}"))).collect();
        let f = find_p_morphism(&m, 0, &g, Some(&spec)).unwrap().unwrap();
        assert_eq!(f.map, vec![Some(0), Some(1), Some(2)]);
    }

    #[test]
    fn chain_does_not_map_onto_cluster() {
        assert!(
            find_p_morphism(&frame_model(2, &[(0, 1)]), 0, &two_cluster(), None)
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn cluster_maps_onto_smaller_cluster() {
        let m = frame_model(3, &[(0, 1), (1, 2), (2, 0)]);
        let f = find_p_morphism(&m, 0, &two_cluster(), None)
            .unwrap()
            .unwrap();
        assert_eq!(f.map, vec![Some(0), Some(0), Some(1)]);
    }

    #[test]
    fn rejects_bad_frames() {
        assert!(RootedFrame::from_pairs(2, &[]).is_err());
        assert!(RootedFrame::new(vec![0b11, 0b01]).is_err());
    }
}
