//! Logics, satisfiability and validity, countermodels and interpolants.

mod catalog;
mod countermodel;
mod decide;
mod interpolate;
mod logic;

use std::time::Duration;

use serde::Serialize;

pub use catalog::{catalog, CatalogEntry, Family};
pub use countermodel::{countermodel_search, rooted_preorders, MAX_ENUMERATED_WORLDS};
pub(crate) use decide::{Decider, NodeId, Root};
pub use interpolate::{find_interpolant, Interpolation};
pub use logic::{Lambda, LogicId};

use crate::kripke::PreorderModel;
use crate::syntax::Formula;
use crate::Error;

/// Resource limits for a single decision.
#[derive(Clone, Debug, Serialize)]
pub struct Budget {
    /// Largest number of distinct boxed subformulas.
    pub max_closure: usize,
    /// Largest number of box levels examined.
    pub max_levels: usize,
    /// Largest model returned as a witness.
    pub max_worlds: usize,
    /// Largest interpolant candidate, in formula nodes.
    pub max_interpolant_size: usize,
    pub time: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_closure: 40,
            max_levels: 1 << 21,
            max_worlds: 1 << 12,
            max_interpolant_size: 12,
            time: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    Satisfiable { model: PreorderModel, world: usize },
    Unsatisfiable,
    Unknown(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// `model` lies in the logic's frame class and refutes the formula at `world`.
    Invalid {
        model: PreorderModel,
        world: usize,
    },
    Unknown(String),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn is_invalid(&self) -> bool {
        matches!(self, Verdict::Invalid { .. })
    }
}

/// Is `f` true at some world of some model in the logic's frame class?
/// A returned model has been model-checked and its frame validated.
pub fn sat(f: &Formula, logic: LogicId, budget: &Budget) -> SatResult {
    match decide::decide(f, logic, budget) {
        Ok(Some((model, world))) => SatResult::Satisfiable { model, world },
        Ok(None) => SatResult::Unsatisfiable,
        Err(decide::Stop(reason)) => {
            tracing::debug!(%f, %logic, %reason, "satisfiability undecided");
            SatResult::Unknown(reason)
        }
    }
}

pub fn valid(f: &Formula, logic: LogicId, budget: &Budget) -> Verdict {
    match sat(&Formula::not(f.clone()), logic, budget) {
        SatResult::Satisfiable { model, world } => Verdict::Invalid { model, world },
        SatResult::Unsatisfiable => Verdict::Valid,
        SatResult::Unknown(r) => Verdict::Unknown(r),
    }
}

/// Equivalence of `f` and `g` in the logic; `Error::Undecided` if the
/// budget ran out.
pub fn equivalent(
    f: &Formula,
    g: &Formula,
    logic: LogicId,
    budget: &Budget,
) -> Result<bool, Error> {
    if f == g {
        return Ok(true);
    }
    match valid(&Formula::iff(f.clone(), g.clone()), logic, budget) {
        Verdict::Valid => Ok(true),
        Verdict::Invalid { .. } => Ok(false),
        Verdict::Unknown(r) => Err(Error::Undecided(r)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn sat_examples() {
        let b = Budget::default();
        assert_eq!(
            sat(&f("p & ~p"), LogicId::s4(), &b),
            SatResult::Unsatisfiable
        );
        let SatResult::Satisfiable { model, world } = sat(&f("<>[]p & <>[]~p"), LogicId::s4(), &b)
        else {
            panic!("fork expected")
        };
        assert!(crate::kripke::satisfies(
            &model,
            world,
            &f("<>[]p & <>[]~p")
        ));
        assert_eq!(
            sat(&f("<>[]p & <>[]~p"), LogicId::s4_2(), &b),
            SatResult::Unsatisfiable
        );
    }

    #[test]
    fn validity_examples() {
        let b = Budget::default();
        assert!(valid(&f("[]p -> p"), LogicId::s4(), &b).is_valid());
        assert!(valid(&f("<>[]p -> []<>p"), LogicId::s4(), &b).is_invalid());
        assert!(valid(&f("<>[]p -> []<>p"), LogicId::s4_2(), &b).is_valid());
        let g1 = crate::frame_formulas::gamma(crate::frame_formulas::Bound::Finite(1), false);
        assert!(valid(&g1, LogicId::grz(), &b).is_valid());
        assert!(valid(&g1, LogicId::s4(), &b).is_invalid());
    }

    #[test]
    fn equivalence_examples() {
        let b = Budget::default();
        assert_eq!(
            equivalent(&f("[][]p"), &f("[]p"), LogicId::s4(), &b),
            Ok(true)
        );
        assert_eq!(
            equivalent(&f("<>[]p"), &f("[]<>p"), LogicId::s4(), &b),
            Ok(false)
        );
        assert_eq!(
            equivalent(&f("p -> q"), &f("p -> q"), LogicId::grz(), &b),
            Ok(true)
        );
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        let b = Budget {
            max_closure: 1,
            ..Budget::default()
        };
        assert!(matches!(
            sat(&f("[]p & []q"), LogicId::s4(), &b),
            SatResult::Unknown(_)
        ));
    }
}
