//! Separability, maximal sets and the Smoryński model of a signed closure.
//!
//! Every logic handled here has Craig interpolation, so a set is
//! separable exactly when it is inconsistent; the interpolant of the two
//! halves is the separating formula.

use std::collections::{BTreeMap, HashMap};

use crate::engine::{
    find_interpolant, sat, Budget, Decider, Interpolation, LogicId, NodeId, Root, SatResult,
};
use crate::kripke::{model_check, OrderMode, PreorderModel, WorldSet};
use crate::syntax::{neg, Formula, FormulaSet, SignedClosure};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separability {
    /// A formula over the shared atoms implied by the first half and
    /// refuted by the second.
    Separable(Formula),
    Inseparable,
}

/// A maximal inseparable set, split by side. A formula of both sides
/// appears in both halves.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MaximalSet {
    pub t1: FormulaSet,
    pub t2: FormulaSet,
}

impl MaximalSet {
    fn from_members(members: &FormulaSet, closure: &SignedClosure) -> MaximalSet {
        MaximalSet {
            t1: members.intersection(&closure.sigma1).cloned().collect(),
            t2: members.intersection(&closure.sigma2).cloned().collect(),
        }
    }

    pub fn members(&self) -> FormulaSet {
        self.t1.union(&self.t2).cloned().collect()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.t1.contains(f) || self.t2.contains(f)
    }

    /// The sorted member list, used as a world name.
    pub fn name(&self) -> String {
        let items: Vec<String> = self.members().iter().map(|f| f.to_string()).collect();
        format!("{{{}}}", items.join(", "))
    }
}

#[derive(Clone, Debug)]
pub struct SmorynskiModel {
    pub closure: SignedClosure,
    /// Indexed like the worlds of `model`.
    pub worlds: Vec<MaximalSet>,
    pub model: PreorderModel,
}

fn undecided(reason: String) -> Error {
    Error::Undecided(reason)
}

fn check_inside(t: &FormulaSet, closure: &SignedClosure) -> Result<(), Error> {
    match t
        .iter()
        .find(|f| !closure.sigma1.contains(f) && !closure.sigma2.contains(f))
    {
        Some(f) => Err(Error::InvalidArgument(format!(
            "`{f}` is outside both closures"
        ))),
        None => Ok(()),
    }
}

/// Decides separability of `t` relative to the closure's two sides.
pub fn is_separable(
    t: &FormulaSet,
    closure: &SignedClosure,
    logic: LogicId,
    budget: &Budget,
) -> Result<Separability, Error> {
    check_inside(t, closure)?;
    let half =
        |sigma: &FormulaSet| Formula::conjunction(t.iter().filter(|f| sigma.contains(*f)).cloned());
    let (a, b) = (half(&closure.sigma1), half(&closure.sigma2));
    match sat(&Formula::and(a.clone(), b.clone()), logic, budget) {
        SatResult::Satisfiable { .. } => Ok(Separability::Inseparable),
        SatResult::Unknown(r) => Err(undecided(r)),
        SatResult::Unsatisfiable => match find_interpolant(&a, &Formula::not(b), logic, budget) {
            Interpolation::Interpolant(w) => Ok(Separability::Separable(w)),
            Interpolation::Unknown(r) => Err(undecided(r)),
            Interpolation::NotValid { .. } => Err(undecided(
                "inconsistent set whose halves are not contradictory".into(),
            )),
        },
    }
}

/// Consistency queries over a fixed closure, memoized by constraint set.
struct Oracle {
    decider: Decider,
    sigma: Vec<Formula>,
    nodes: Vec<NodeId>,
    memo: HashMap<Vec<(NodeId, bool)>, Option<Root>>,
}

impl Oracle {
    fn new(
        sigma: Vec<Formula>,
        extra: &FormulaSet,
        logic: LogicId,
        budget: &Budget,
    ) -> Result<Oracle, Error> {
        let mut decider = Decider::new(logic, budget.clone());
        let mut nodes = Vec::with_capacity(sigma.len());
        for f in &sigma {
            nodes.push(decider.add(f).map_err(|s| undecided(s.0))?);
        }
        for f in extra {
            decider.add(f).map_err(|s| undecided(s.0))?;
        }
        Ok(Oracle {
            decider,
            sigma,
            nodes,
            memo: HashMap::new(),
        })
    }

    fn node(&mut self, f: &Formula) -> Result<NodeId, Error> {
        self.decider.add(f).map_err(|s| undecided(s.0))
    }

    fn consistent(&mut self, constraints: &[(NodeId, bool)]) -> Result<Option<Root>, Error> {
        let mut key = constraints.to_vec();
        key.sort_unstable();
        key.dedup();
        if let Some(r) = self.memo.get(&key) {
            return Ok(*r);
        }
        let r = self.decider.find_root(&key).map_err(|s| undecided(s.0))?;
        self.memo.insert(key, r);
        Ok(r)
    }

    fn values(&mut self, root: &Root) -> Vec<bool> {
        let nodes = self.nodes.clone();
        self.decider.values(root, &nodes)
    }

    fn members(&self, values: &[bool]) -> FormulaSet {
        self.sigma
            .iter()
            .zip(values)
            .filter(|(_, &v)| v)
            .map(|(f, _)| f.clone())
            .collect()
    }
}

fn separable_error(
    t: &FormulaSet,
    closure: &SignedClosure,
    logic: LogicId,
    budget: &Budget,
) -> Error {
    match is_separable(t, closure, logic, budget) {
        Ok(Separability::Separable(w)) => Error::Separable(w.to_string()),
        Ok(Separability::Inseparable) => undecided("consistency checks disagree".into()),
        Err(e) => e,
    }
}

/// Extends an inseparable `t` by deciding every closure formula in
/// canonical order, preferring the formula itself over its negation.
pub fn extend_to_maximal(
    t: &FormulaSet,
    closure: &SignedClosure,
    logic: LogicId,
    budget: &Budget,
) -> Result<MaximalSet, Error> {
    check_inside(t, closure)?;
    let sigma: Vec<Formula> = closure.union().into_iter().collect();
    let mut oracle = Oracle::new(sigma.clone(), t, logic, budget)?;
    let mut constraints = Vec::new();
    for f in t {
        constraints.push((oracle.node(f)?, true));
    }
    if oracle.consistent(&constraints)?.is_none() {
        return Err(separable_error(t, closure, logic, budget));
    }
    for i in 0..sigma.len() {
        let node = oracle.nodes[i];
        constraints.push((node, true));
        if oracle.consistent(&constraints)?.is_none() {
            constraints.pop();
            constraints.push((node, false));
        }
    }
    let root = oracle
        .consistent(&constraints)?
        .ok_or_else(|| undecided("maximal extension became inconsistent".into()))?;
    let values = oracle.values(&root);
    let members = oracle.members(&values);
    if let Some(f) = sigma
        .iter()
        .find(|f| members.contains(*f) && members.contains(&neg(f)))
    {
        return Err(undecided(format!("`{f}` and its negation both chosen")));
    }
    Ok(MaximalSet::from_members(&members, closure))
}

/// All maximal sets of the closure, ordered by persistence of boxed
/// members and valued by atom membership.
pub fn build_smorynski_model(
    closure: &SignedClosure,
    logic: LogicId,
    budget: &Budget,
) -> Result<SmorynskiModel, Error> {
    let sigma: Vec<Formula> = closure.union().into_iter().collect();
    let mut oracle = Oracle::new(sigma.clone(), &FormulaSet::new(), logic, budget)?;
    let mut leaves: Vec<Vec<bool>> = Vec::new();
    let Some(root) = oracle.consistent(&[])? else {
        return Err(undecided(format!("{logic} has no models")));
    };
    // depth-first over the closure; a branch agreeing with the current
    // witness needs no query
    let mut stack: Vec<(usize, Vec<(NodeId, bool)>, Vec<bool>)> =
        vec![(0, Vec::new(), oracle.values(&root))];
    while let Some((i, constraints, witness)) = stack.pop() {
        if i == sigma.len() {
            leaves.push(witness);
            if leaves.len() > budget.max_worlds {
                return Err(Error::ResourceExceeded(format!(
                    "more than {} maximal sets",
                    budget.max_worlds
                )));
            }
            continue;
        }
        let node = oracle.nodes[i];
        let mut other = constraints.clone();
        other.push((node, !witness[i]));
        if let Some(r) = oracle.consistent(&other)? {
            let values = oracle.values(&r);
            stack.push((i + 1, other, values));
        }
        let mut same = constraints;
        same.push((node, witness[i]));
        stack.push((i + 1, same, witness));
    }
    let mut worlds: Vec<MaximalSet> = leaves
        .iter()
        .map(|v| MaximalSet::from_members(&oracle.members(v), closure))
        .collect();
    worlds.sort_by_cached_key(|w| w.name());
    worlds.dedup();
    let model = model_of(&worlds, &sigma)?;
    Ok(SmorynskiModel {
        closure: closure.clone(),
        worlds,
        model,
    })
}

fn model_of(worlds: &[MaximalSet], sigma: &[Formula]) -> Result<PreorderModel, Error> {
    let n = worlds.len();
    let members: Vec<FormulaSet> = worlds.iter().map(MaximalSet::members).collect();
    let succ: Vec<WorldSet> = members
        .iter()
        .map(|t| {
            let boxed: Vec<&Formula> = t.iter().filter(|f| f.is_boxed()).collect();
            WorldSet::from_indices(
                n,
                (0..n).filter(|&j| boxed.iter().all(|f| members[j].contains(*f))),
            )
        })
        .collect();
    let mut valuation = BTreeMap::new();
    for f in sigma {
        if let Formula::Atom(a) = f {
            valuation.insert(
                a.clone(),
                WorldSet::from_indices(n, (0..n).filter(|&j| members[j].contains(f))),
            );
        }
    }
    let names = worlds.iter().map(MaximalSet::name).collect();
    PreorderModel::from_parts(names, succ, valuation, OrderMode::Strict)
}

impl SmorynskiModel {
    /// Pairs (world, formula) where membership and truth differ.
    pub fn truth_lemma_failures(&self) -> Vec<(usize, Formula)> {
        let mut out = Vec::new();
        for f in self.closure.union() {
            let ext = model_check(&self.model, &f);
            for (i, w) in self.worlds.iter().enumerate() {
                if ext.contains(i) != w.contains(&f) {
                    out.push((i, f.clone()));
                }
            }
        }
        out
    }

    /// Exactly one of each formula and its negation per side.
    pub fn is_maximal(&self) -> bool {
        self.worlds.iter().all(|w| {
            [(&w.t1, &self.closure.sigma1), (&w.t2, &self.closure.sigma2)]
                .iter()
                .all(|(t, sigma)| sigma.iter().all(|f| t.contains(f) != t.contains(&neg(f))))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn set(items: &[&str]) -> FormulaSet {
        items.iter().map(|s| f(s)).collect()
    }

    fn closure(a: &str, b: &str) -> SignedClosure {
        SignedClosure::box_negation(&[f(a)], &[f(b)])
    }

    fn sides(a: &[&str], b: &[&str]) -> SignedClosure {
        SignedClosure {
            sigma1: set(a),
            sigma2: set(b),
            provenance: vec![],
        }
    }

    #[test]
    fn separability_examples() {
        let b = Budget::default();
        let sep = |t: &[&str], c: &SignedClosure| is_separable(&set(t), c, LogicId::s4(), &b);
        assert_eq!(
            sep(&["p", "~p"], &sides(&["p"], &["~p"])),
            Ok(Separability::Separable(f("p")))
        );
        assert_eq!(
            sep(&["p", "q"], &closure("p", "q")),
            Ok(Separability::Inseparable)
        );
        assert_eq!(
            sep(&["[]p", "~p"], &sides(&["[]p"], &["~p"])),
            Ok(Separability::Separable(f("p")))
        );
        // a contradiction on one side is separated by a constant
        assert_eq!(
            sep(&["p", "~p"], &closure("p", "q")),
            Ok(Separability::Separable(Formula::Bottom))
        );
        assert!(sep(&["r"], &closure("p", "q")).is_err());
    }

    #[test]
    fn maximal_extension() {
        let b = Budget::default();
        let c = closure("p", "q");
        let m = extend_to_maximal(&set(&["p", "~q"]), &c, LogicId::s4(), &b).unwrap();
        assert!(m.contains(&f("p")) && m.contains(&f("~q")));
        for g in c.sigma1.iter() {
            assert!(m.t1.contains(g) != m.t1.contains(&neg(g)), "{g}");
        }
        let again = extend_to_maximal(&m.members(), &c, LogicId::s4(), &b).unwrap();
        assert_eq!(again, m);
        let c = closure("p", "p");
        assert!(matches!(
            extend_to_maximal(&set(&["p", "~p"]), &c, LogicId::s4(), &b),
            Err(Error::Separable(_))
        ));
    }

    #[test]
    fn model_of_one_atom() {
        let b = Budget::default();
        let s = build_smorynski_model(&closure("p", "p"), LogicId::s4(), &b).unwrap();
        assert!(s.worlds.iter().any(|w| w.contains(&f("p"))));
        assert!(s.worlds.iter().any(|w| w.contains(&f("~p"))));
        assert!(s.is_maximal());
        assert_eq!(s.truth_lemma_failures(), vec![]);
    }

    #[test]
    fn confluent_for_kc() {
        let b = Budget::default();
        let s = build_smorynski_model(&closure("<>[]p", "[]<>p"), LogicId::s4_2(), &b).unwrap();
        assert!(s.model.is_confluent());
        assert_eq!(s.truth_lemma_failures(), vec![]);
    }

    #[test]
    fn refutes_invalid_implication() {
        let b = Budget::default();
        let (p1, p2) = (f("<>[]p"), f("[]<>p"));
        let s = build_smorynski_model(&closure("<>[]p", "[]<>p"), LogicId::s4(), &b).unwrap();
        let w = s
            .worlds
            .iter()
            .position(|w| w.contains(&p1) && !w.contains(&p2))
            .unwrap();
        assert!(!crate::kripke::satisfies(
            &s.model,
            w,
            &Formula::implies(p1, p2)
        ));
    }
}
