//! Shrinking oversized clusters by deleting edges inside them.
//!
//! A cluster keeps a small adequate set of worlds reachable from every
//! member; every other member only sees itself and the kept set. When the
//! kept set is adequate for a Boolean and subformula closed set, every
//! formula of that set keeps its extension.
//!
//! Only the boxed members of a set matter for adequacy, and a Boolean
//! closure has the same boxed members as the set it is generated from.
//! So the sets passed here are generators: they are closed under
//! subformulas internally, and their Boolean closure is what is preserved.

use serde::Serialize;

use crate::frame_formulas::{cluster_frame, relative_frame_refutation, Bound};
use crate::kripke::{clusters, model_check, PreorderModel, WorldSet};
use crate::syntax::{subformula_closure, Formula, FormulaSet};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinementPlan {
    pub cluster: Vec<usize>,
    /// One or two members of the cluster.
    pub keep: Vec<usize>,
    /// Pairs `(y, z)` of distinct cluster members with `z` outside `keep`.
    pub removed_edges: Vec<(usize, usize)>,
}

impl RefinementPlan {
    pub fn new(
        m: &PreorderModel,
        cluster: &[usize],
        keep: &[usize],
    ) -> Result<RefinementPlan, Error> {
        check_cluster(m, cluster)?;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() || keep.len() > 2 {
            return Err(Error::InvalidArgument(format!(
                "a kept set has one or two worlds, not {}",
                keep.len()
            )));
        }
        if let Some(&w) = keep.iter().find(|w| !cluster.contains(w)) {
            return Err(Error::InvalidArgument(format!(
                "`{}` is not in the cluster",
                m.name(w)
            )));
        }
        let mut cluster = cluster.to_vec();
        cluster.sort_unstable();
        let removed_edges = cluster
            .iter()
            .flat_map(|&y| {
                let keep = &keep;
                cluster
                    .iter()
                    .filter(move |&&z| z != y && !keep.contains(&z))
                    .map(move |&z| (y, z))
            })
            .collect();
        Ok(RefinementPlan {
            cluster,
            keep,
            removed_edges,
        })
    }
}

fn check_cluster(m: &PreorderModel, cluster: &[usize]) -> Result<(), Error> {
    let Some(&x) = cluster.first() else {
        return Err(Error::InvalidArgument("empty cluster".into()));
    };
    if let Some(&w) = cluster.iter().find(|&&w| w >= m.len()) {
        return Err(Error::UnknownWorld(format!("world index {w}")));
    }
    let members: Vec<usize> = m.successors(x).iter().filter(|&y| m.leq(y, x)).collect();
    let mut given = cluster.to_vec();
    given.sort_unstable();
    given.dedup();
    if given != members {
        return Err(Error::InvalidArgument(format!(
            "worlds {:?} do not form a cluster",
            cluster.iter().map(|&w| m.name(w)).collect::<Vec<_>>()
        )));
    }
    Ok(())
}

/// Extensions of the modal members of a set, with their bodies; a
/// diamond counts as the box of its negated body.
struct Boxes {
    /// (extent of `[]f`, extent of `f`)
    items: Vec<(WorldSet, WorldSet)>,
}

impl Boxes {
    fn new(m: &PreorderModel, sigma: &FormulaSet) -> Boxes {
        let items = sigma
            .iter()
            .filter_map(|f| match f {
                Formula::Box(body) => Some((model_check(m, f), model_check(m, body))),
                Formula::Diamond(body) => Some((
                    model_check(m, f).complement(),
                    model_check(m, body).complement(),
                )),
                _ => None,
            })
            .collect();
        Boxes { items }
    }

    /// Every box whose body holds throughout `s` but which fails there has
    /// a counterexample strictly above the cluster.
    fn adequate(&self, m: &PreorderModel, s: &[usize]) -> bool {
        let x = s[0];
        let above: Vec<usize> = m.successors(x).iter().filter(|&z| !m.leq(z, x)).collect();
        self.items.iter().all(|(boxed, body)| {
            let split = s.iter().all(|&w| !boxed.contains(w) && body.contains(w));
            !split || above.iter().any(|&z| !body.contains(z))
        })
    }
}

/// Is `s` (one or two members of `cluster`) adequate for the boxed
/// members of `sigma`?
pub fn is_adequate(
    m: &PreorderModel,
    cluster: &[usize],
    s: &[usize],
    sigma: &FormulaSet,
) -> Result<bool, Error> {
    RefinementPlan::new(m, cluster, s)?;
    Ok(Boxes::new(m, sigma).adequate(m, s))
}

/// Delete the plan's edges. The result is checked to be a preorder.
pub fn refine_cluster(m: &PreorderModel, plan: &RefinementPlan) -> Result<PreorderModel, Error> {
    let expected = RefinementPlan::new(m, &plan.cluster, &plan.keep)?;
    if expected.removed_edges != plan.removed_edges {
        return Err(Error::InvalidArgument(
            "removed edges do not match the kept set".into(),
        ));
    }
    let mut succ: Vec<WorldSet> = (0..m.len()).map(|i| m.successors(i).clone()).collect();
    for &(y, z) in &plan.removed_edges {
        succ[y].remove(z);
    }
    m.with_order(succ)
}

/// An adequate set of at most `n` worlds for both sides, searched in the
/// order of the cluster elimination argument. `None` means the cluster
/// does not satisfy its cluster axiom relative to the sides.
pub fn find_adequate_set(
    m: &PreorderModel,
    cluster: &[usize],
    sigma1: &FormulaSet,
    sigma2: &FormulaSet,
    n: usize,
) -> Result<Option<Vec<usize>>, Error> {
    if !(1..=2).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "kept sets have 1 or 2 worlds, not {n}"
        )));
    }
    check_cluster(m, cluster)?;
    let mut c = cluster.to_vec();
    c.sort_unstable();
    let (s1, s2) = (
        subformula_closure(sigma1.iter()),
        subformula_closure(sigma2.iter()),
    );
    let (b1, b2) = (Boxes::new(m, &s1), Boxes::new(m, &s2));
    let both = |s: &[usize]| b1.adequate(m, s) && b2.adequate(m, s);
    let set = |a: usize, b: usize| {
        if a == b {
            vec![a]
        } else {
            vec![a.min(b), a.max(b)]
        }
    };
    if n == 1 {
        let found = c.iter().find(|&&x| both(&[x])).map(|&x| vec![x]);
        if found.as_ref().is_some_and(|s| s[0] != c[0]) {
            tracing::warn!("least world of the cluster is not adequate; using a later one");
        }
        return Ok(found);
    }
    for &x in &c {
        let y1 = c.iter().copied().find(|&y| b1.adequate(m, &set(x, y)));
        let y2 = c.iter().copied().find(|&y| b2.adequate(m, &set(x, y)));
        let (Some(y1), Some(y2)) = (y1, y2) else {
            continue;
        };
        for s in [set(x, y1), set(x, y2), set(y1, y2)] {
            if both(&s) {
                return Ok(Some(s));
            }
        }
    }
    for (i, &a) in c.iter().enumerate() {
        for &b in &c[i..] {
            let s = set(a, b);
            if both(&s) {
                tracing::warn!("adequate set found outside the elimination argument's candidates");
                return Ok(Some(s));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct RefineOptions {
    /// Re-establish relative satisfaction of the cluster axioms before
    /// every step, and fail if it does not hold.
    pub recheck_preconditions: bool,
    pub max_assignments: u128,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            recheck_preconditions: cfg!(debug_assertions),
            max_assignments: 1 << 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefineStep {
    pub cluster: Vec<String>,
    pub keep: Vec<String>,
    pub removed_edges: usize,
    pub was_final: bool,
}

#[derive(Clone, Debug)]
pub struct Refinement {
    pub model: PreorderModel,
    pub steps: Vec<RefineStep>,
}

/// A cluster above its bound that fails its cluster axiom relative to one
/// of the sides, described for error messages.
pub fn precondition_violation(
    m: &PreorderModel,
    sigma1: &FormulaSet,
    sigma2: &FormulaSet,
    final_bound: Bound,
    nonfinal_bound: Bound,
    max_assignments: u128,
) -> Result<Option<String>, Error> {
    let view = clusters(m);
    let sides = [
        subformula_closure(sigma1.iter()),
        subformula_closure(sigma2.iter()),
    ];
    for (c, members) in view.clusters.iter().enumerate() {
        let fin = view.is_final[c];
        let bound = if fin { final_bound } else { nonfinal_bound };
        let Bound::Finite(k) = bound else { continue };
        if members.len() <= k {
            continue;
        }
        let g = cluster_frame(k + 1, !fin)?;
        for (i, side) in sides.iter().enumerate() {
            if let Some((x, args)) =
                relative_frame_refutation(m, members, &g, side, max_assignments)?
            {
                let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                return Ok(Some(format!(
                    "{} cluster at `{}` refutes its cluster axiom relative to side {} with arguments [{}]",
                    if fin { "final" } else { "non-final" },
                    m.name(x),
                    i + 1,
                    args.join(", ")
                )));
            }
        }
    }
    Ok(None)
}

/// Refine minimal oversized non-final clusters down to `n`, then final
/// clusters down to `m`, preserving the Boolean closures of both sides.
pub fn refine_model(
    model: &PreorderModel,
    sigma1: &FormulaSet,
    sigma2: &FormulaSet,
    m: Bound,
    n: Bound,
    opts: &RefineOptions,
) -> Result<Refinement, Error> {
    for b in [m, n] {
        if matches!(b, Bound::Finite(k) if !(1..=2).contains(&k)) {
            return Err(Error::InvalidArgument(format!(
                "cluster bound {b} is not 1, 2 or w"
            )));
        }
    }
    let generators: FormulaSet = subformula_closure(sigma1.iter().chain(sigma2.iter()));
    let extents = |model: &PreorderModel| -> Vec<WorldSet> {
        generators.iter().map(|f| model_check(model, f)).collect()
    };
    let before = extents(model);
    let mut current = model.clone();
    let mut steps = Vec::new();
    for phase_final in [false, true] {
        let Bound::Finite(k) = (if phase_final { m } else { n }) else {
            continue;
        };
        loop {
            let view = clusters(&current);
            let oversized: Vec<usize> = (0..view.len())
                .filter(|&c| view.is_final[c] == phase_final && view.clusters[c].len() > k)
                .collect();
            let Some(&c) = view.minimal_among(&oversized).first() else {
                break;
            };
            if opts.recheck_preconditions {
                if let Some(why) =
                    precondition_violation(&current, sigma1, sigma2, m, n, opts.max_assignments)?
                {
                    return Err(Error::InvalidModel(why));
                }
            }
            let members = view.clusters[c].clone();
            let Some(keep) = find_adequate_set(&current, &members, sigma1, sigma2, k)? else {
                let why =
                    precondition_violation(&current, sigma1, sigma2, m, n, opts.max_assignments)?
                        .unwrap_or_else(|| "no violated cluster axiom was found".into());
                return Err(Error::InvalidModel(format!(
                    "no adequate set in the cluster of `{}`: {why}",
                    current.name(members[0])
                )));
            };
            let plan = RefinementPlan::new(&current, &members, &keep)?;
            let next = refine_cluster(&current, &plan)?;
            steps.push(RefineStep {
                cluster: members
                    .iter()
                    .map(|&w| current.name(w).to_string())
                    .collect(),
                keep: keep.iter().map(|&w| current.name(w).to_string()).collect(),
                removed_edges: plan.removed_edges.len(),
                was_final: phase_final,
            });
            tracing::debug!(cluster = ?steps.last().map(|s| &s.cluster), "refined");
            current = next;
        }
    }
    if let Some(i) = extents(&current)
        .iter()
        .zip(&before)
        .position(|(a, b)| a != b)
    {
        let f = generators.iter().nth(i).expect("same length");
        return Err(Error::InvalidModel(format!(
            "refinement changed the extension of {f}"
        )));
    }
    Ok(Refinement {
        model: current,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::OrderMode;
    use crate::syntax::parse;
    use std::collections::BTreeMap;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn set(items: &[&str]) -> FormulaSet {
        items.iter().map(|s| f(s)).collect()
    }

    /// A single cluster on `n` worlds, `p` true at the listed ones.
    fn cluster_model(n: usize, p: &[usize]) -> PreorderModel {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let val = BTreeMap::from([(
            "p".to_string(),
            WorldSet::from_indices(n, p.iter().copied()),
        )]);
        PreorderModel::from_indices(n, &pairs, val, OrderMode::Close).unwrap()
    }

    #[test]
    fn adequacy_examples() {
        let m = cluster_model(2, &[0]);
        assert!(is_adequate(&m, &[0, 1], &[0], &set(&["p"])).unwrap());
        assert!(!is_adequate(&m, &[0, 1], &[0], &set(&["[]p"])).unwrap());
        assert!(is_adequate(&m, &[0, 1], &[1], &set(&["[]p"])).unwrap());
        let single = cluster_model(1, &[0]);
        assert!(is_adequate(&single, &[0], &[0], &set(&["[]p"])).unwrap());
        assert!(is_adequate(&m, &[0], &[0], &set(&[])).is_err());
    }

    #[test]
    fn refined_cluster_shape() {
        let m = cluster_model(4, &[]);
        let plan = RefinementPlan::new(&m, &[0, 1, 2, 3], &[1, 2]).unwrap();
        let r = refine_cluster(&m, &plan).unwrap();
        for y in 0..4 {
            for z in 0..4 {
                assert_eq!(r.leq(y, z), y == z || z == 1 || z == 2, "{y} {z}");
            }
        }
        let whole = RefinementPlan::new(&cluster_model(2, &[]), &[0, 1], &[0, 1]).unwrap();
        assert!(whole.removed_edges.is_empty());
    }

    #[test]
    fn indistinguishable_final_cluster_collapses() {
        let m = cluster_model(3, &[0, 1, 2]);
        let sigma = set(&["[]p", "p"]);
        let r = refine_model(
            &m,
            &sigma,
            &sigma,
            Bound::Finite(1),
            Bound::Finite(1),
            &RefineOptions::default(),
        )
        .unwrap();
        let view = clusters(&r.model);
        assert!(view.clusters.iter().all(|c| c.len() == 1));
        assert_eq!(r.steps.len(), 1);
        assert_eq!(r.steps[0].keep, ["w0"]);
    }

    #[test]
    fn unbounded_is_identity() {
        let m = cluster_model(3, &[0]);
        let sigma = set(&["[]p"]);
        let r = refine_model(
            &m,
            &sigma,
            &sigma,
            Bound::Omega,
            Bound::Omega,
            &RefineOptions::default(),
        )
        .unwrap();
        assert_eq!(r.model, m);
        assert!(r.steps.is_empty());
    }

    #[test]
    fn violated_precondition_is_reported() {
        // p splits a final 2-cluster, which needs m >= 2
        let m = cluster_model(2, &[0]);
        let sigma = set(&["[]p", "[]~p"]);
        let err = refine_model(
            &m,
            &sigma,
            &sigma,
            Bound::Finite(1),
            Bound::Finite(1),
            &RefineOptions::default(),
        );
        assert!(matches!(err, Err(Error::InvalidModel(_))));
    }
}
