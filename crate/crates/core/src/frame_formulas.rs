//! Frame formulas of finite rooted frames, the cluster axioms built from
//! them, substitution, and relative satisfaction on clusters.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::kripke::{model_check, PreorderModel, RootedFrame, SmallModel, WorldSet};
use crate::syntax::{Formula, FormulaSet};
use crate::{par, Error};

/// A cluster-size bound: a finite size or unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Bound {
    Finite(usize),
    Omega,
}

impl Bound {
    pub fn admits(self, size: usize) -> bool {
        match self {
            Bound::Finite(k) => size <= k,
            Bound::Omega => true,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(k) => write!(f, "{k}"),
            Bound::Omega => f.write_str("w"),
        }
    }
}

/// `n` mutually related points, plus a point `n` above them when `topped`.
pub fn cluster_frame(n: usize, topped: bool) -> Result<RootedFrame, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "cluster size must be at least 1".into(),
        ));
    }
    let cluster = (1u64 << n) - 1;
    let mut rows = vec![cluster; n];
    if topped {
        for r in rows.iter_mut() {
            *r |= 1 << n;
        }
        rows.push(1 << n);
    }
    RootedFrame::new(rows)
}

pub fn point_atom(i: usize) -> Formula {
    Formula::atom(format!("p{i}"))
}

/// The conjunction a frame formula negates, as its list of conjuncts.
pub fn frame_conjuncts(g: &RootedFrame) -> Vec<Formula> {
    let n = g.len();
    let p = point_atom;
    let mut out = vec![p(0), Formula::boxed(Formula::disjunction((0..n).map(p)))];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(Formula::boxed(Formula::implies(p(i), Formula::not(p(j)))));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if g.leq(i, j) {
                out.push(Formula::boxed(Formula::implies(
                    p(i),
                    Formula::diamond(p(j)),
                )));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !g.leq(i, j) {
                out.push(Formula::boxed(Formula::implies(
                    p(i),
                    Formula::not(Formula::diamond(p(j))),
                )));
            }
        }
    }
    out
}

/// Frame formula of `g` over atoms `p0..p(n-1)`.
pub fn frame_formula(g: &RootedFrame) -> Formula {
    Formula::not(Formula::conjunction(frame_conjuncts(g)))
}

/// `gamma(n)` is the frame formula of the `n+1`-cluster (topped or not);
/// unbounded gives `true`.
pub fn gamma(bound: Bound, topped: bool) -> Formula {
    match bound {
        Bound::Omega => Formula::Top,
        Bound::Finite(n) => frame_formula(&cluster_frame(n + 1, topped).expect("n + 1 >= 1")),
    }
}

/// Number of points of the frame behind `gamma(bound, topped)`.
pub fn gamma_arity(bound: Bound, topped: bool) -> usize {
    match bound {
        Bound::Omega => 0,
        Bound::Finite(n) => n + 1 + usize::from(topped),
    }
}

fn point_index(atom: &str) -> Option<usize> {
    let digits = atom.strip_prefix('p')?;
    if digits.is_empty() || (digits.len() > 1 && digits.starts_with('0')) {
        return None;
    }
    digits.parse().ok()
}

/// Number of argument slots of `chi`: one more than the largest `pI` it uses.
pub fn arity(chi: &Formula) -> usize {
    chi.atoms()
        .iter()
        .filter_map(|a| point_index(a))
        .map(|i| i + 1)
        .max()
        .unwrap_or(0)
}

/// Replace `p0..p(k-1)` in `chi` by `args` simultaneously.
pub fn substitute(chi: &Formula, args: &[Formula]) -> Result<Formula, Error> {
    let needed = arity(chi);
    if needed > args.len() {
        return Err(Error::InvalidArgument(format!(
            "formula uses {needed} argument slots, {} given",
            args.len()
        )));
    }
    Ok(chi.map_atoms(&|a| point_index(a).and_then(|i| args.get(i).cloned())))
}

#[derive(Clone, Copy, Debug)]
pub struct RelativeOptions {
    /// Largest number of argument tuples to try.
    pub max_tuples: u128,
}

impl Default for RelativeOptions {
    fn default() -> Self {
        RelativeOptions {
            max_tuples: 1 << 22,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relative {
    Holds,
    /// First failing tuple in canonical order, with a world of the
    /// cluster refuting the instance.
    Fails {
        args: Vec<Formula>,
        world: usize,
    },
}

/// Does every world of `cluster` satisfy `chi[args]` for every tuple of
/// members of `sigma`?
pub fn satisfies_relative(
    m: &PreorderModel,
    cluster: &[usize],
    chi: &Formula,
    sigma: &FormulaSet,
    opts: &RelativeOptions,
) -> Result<Relative, Error> {
    let k = arity(chi);
    let items: Vec<&Formula> = sigma.iter().collect();
    if items.is_empty() && k > 0 {
        return Ok(Relative::Holds);
    }
    let total = (items.len() as u128).checked_pow(k as u32);
    if total.map_or(true, |t| t > opts.max_tuples) {
        return Err(Error::ResourceExceeded(format!(
            "{}^{k} argument tuples exceed the cap of {}",
            items.len(),
            opts.max_tuples
        )));
    }
    let total = total.expect("checked") as u64;
    let decode = |mut code: u64| {
        let mut idx = vec![0usize; k];
        for slot in idx.iter_mut().rev() {
            *slot = (code % items.len() as u64) as usize;
            code /= items.len() as u64;
        }
        idx
    };
    let failure = par::find_map_first_range(total, |code| {
        let args: Vec<Formula> = decode(code).iter().map(|&i| items[i].clone()).collect();
        let inst = substitute(chi, &args).expect("arity checked");
        let ext = model_check(m, &inst);
        cluster
            .iter()
            .copied()
            .find(|&w| !ext.contains(w))
            .map(|world| Relative::Fails { args, world })
    });
    Ok(failure.unwrap_or(Relative::Holds))
}

/// Relative satisfaction of `frame_formula(g)` where the arguments range
/// over all Boolean combinations of `generators`.
///
/// On the worlds above `x`, a Boolean combination of the generators
/// denotes exactly a union of classes of worlds agreeing on every
/// generator. The instance can only be refuted at `x` when the arguments
/// partition those worlds, so it suffices to try every assignment of
/// classes to points of `g` with the class of `x` sent to 0.
///
/// Returns the first refuted world of the cluster and arguments written
/// as disjunctions of class descriptions.
pub fn relative_frame_refutation(
    m: &PreorderModel,
    cluster: &[usize],
    g: &RootedFrame,
    generators: &FormulaSet,
    max_assignments: u128,
) -> Result<Option<(usize, Vec<Formula>)>, Error> {
    if m.len() > 64 {
        return Err(Error::ResourceExceeded(
            "relative satisfaction supports at most 64 worlds".into(),
        ));
    }
    let gens: Vec<&Formula> = generators.iter().collect();
    let extents: Vec<WorldSet> = gens.iter().map(|f| model_check(m, f)).collect();
    let small = SmallModel::new(m);
    let succ: Vec<u64> = (0..small.len()).map(|i| small.successors(i)).collect();
    let beta = frame_formula(g);
    for &x in cluster {
        let up: Vec<usize> = m.successors(x).iter().collect();
        // classes of worlds above x by generator signature, ordered by first member
        let mut class_of: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
        let mut classes: Vec<(Vec<bool>, u64)> = Vec::new();
        for &y in &up {
            let sig: Vec<bool> = extents.iter().map(|e| e.contains(y)).collect();
            let c = *class_of.entry(sig.clone()).or_insert_with(|| {
                classes.push((sig, 0));
                classes.len() - 1
            });
            classes[c].1 |= 1 << y;
        }
        let b = classes.len();
        let k = g.len();
        let x_class = class_of[&extents.iter().map(|e| e.contains(x)).collect::<Vec<_>>()];
        let count = (k as u128).checked_pow(b as u32 - 1);
        if count.map_or(true, |c| c > max_assignments) {
            return Err(Error::ResourceExceeded(format!(
                "{k}^{} class assignments exceed the cap of {max_assignments}",
                b - 1
            )));
        }
        let others: Vec<usize> = (0..b).filter(|&c| c != x_class).collect();
        let found = par::find_map_first_range(count.expect("checked") as u64, |mut code| {
            let mut point = vec![0usize; b];
            for &c in others.iter().rev() {
                point[c] = (code % k as u64) as usize;
                code /= k as u64;
            }
            let mut masks = vec![0u64; k];
            for (c, &(_, mask)) in classes.iter().enumerate() {
                masks[point[c]] |= mask;
            }
            let revalued = SmallModel::from_masks(
                succ.clone(),
                masks
                    .iter()
                    .enumerate()
                    .map(|(i, &mask)| (format!("p{i}"), mask))
                    .collect(),
            );
            (revalued.check(&beta) >> x & 1 == 0).then_some(point)
        });
        if let Some(point) = found {
            let describe = |sig: &[bool]| {
                Formula::conjunction(gens.iter().zip(sig).map(|(g, &v)| {
                    if v {
                        (*g).clone()
                    } else {
                        Formula::not((*g).clone())
                    }
                }))
            };
            let args = (0..k)
                .map(|i| {
                    Formula::disjunction(
                        (0..b)
                            .filter(|&c| point[c] == i)
                            .map(|c| describe(&classes[c].0)),
                    )
                })
                .collect();
            return Ok(Some((x, args)));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternKind {
    Final2,
    Nonfinal2,
    Final3,
    Nonfinal3,
}

/// The substituted cluster axiom refuted by a point of an oversized
/// cluster in which `phi` (and `psi`) split the cluster.
pub fn pattern_instance(
    kind: PatternKind,
    phi: &Formula,
    psi: Option<&Formula>,
) -> Result<Formula, Error> {
    let not = |f: &Formula| Formula::not(f.clone());
    let and = |items: Vec<Formula>| Formula::conjunction(items);
    let unboxed = not(&Formula::boxed(phi.clone()));
    let boxed = Formula::boxed(phi.clone());
    let (frame_bound, topped, args) = match (kind, psi) {
        (PatternKind::Final2, None) => (1, false, vec![phi.clone(), not(phi)]),
        (PatternKind::Nonfinal2, None) => (
            1,
            true,
            vec![
                and(vec![unboxed.clone(), phi.clone()]),
                and(vec![unboxed, not(phi)]),
                boxed,
            ],
        ),
        (PatternKind::Final3, Some(psi)) => (
            2,
            false,
            vec![
                and(vec![phi.clone(), psi.clone()]),
                and(vec![not(phi), psi.clone()]),
                not(psi),
            ],
        ),
        (PatternKind::Nonfinal3, Some(psi)) => (
            2,
            true,
            vec![
                and(vec![unboxed.clone(), phi.clone(), psi.clone()]),
                and(vec![unboxed.clone(), not(phi), psi.clone()]),
                and(vec![unboxed, not(psi)]),
                boxed,
            ],
        ),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "pattern {kind:?} takes {} formula(s)",
                if matches!(kind, PatternKind::Final2 | PatternKind::Nonfinal2) {
                    1
                } else {
                    2
                }
            )))
        }
    };
    substitute(&gamma(Bound::Finite(frame_bound), topped), &args)
}
