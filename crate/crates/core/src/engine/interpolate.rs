//! Search for Craig interpolants by enumerating formulas over the shared
//! vocabulary in order of size.

use std::collections::HashMap;
use std::time::Instant;

use super::countermodel::rooted_preorders;
use super::{equivalent, valid, Budget, LogicId, Verdict};
use crate::kripke::{full_mask, satisfies, PreorderModel, SmallModel};
use crate::syntax::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Interpolation {
    Interpolant(Formula),
    /// The implication itself fails at `world`.
    NotValid {
        model: PreorderModel,
        world: usize,
    },
    Unknown(String),
}

const MAX_SAMPLES: usize = 4096;
const SAMPLE_WORLDS: usize = 3;

/// Small models of the frame class over the shared atoms, used to
/// fingerprint candidates.
fn samples(atoms: &[String], logic: LogicId) -> Vec<SmallModel> {
    let mut out = Vec::new();
    for n in 1..=SAMPLE_WORLDS {
        let frames: Vec<&Vec<u64>> = rooted_preorders(n)
            .expect("small frame sizes are enumerable")
            .iter()
            .filter(|rows| {
                let pairs: Vec<(usize, usize)> = (0..n)
                    .flat_map(|i| {
                        (0..n)
                            .filter(move |&j| rows[i] >> j & 1 == 1)
                            .map(move |j| (i, j))
                    })
                    .collect();
                let m = PreorderModel::from_indices(
                    n,
                    &pairs,
                    Default::default(),
                    crate::kripke::OrderMode::Strict,
                )
                .expect("enumerated preorder");
                logic.admits_frame(&m)
            })
            .collect();
        let bits = n * atoms.len();
        if bits >= 20 || out.len() + frames.len() << bits > MAX_SAMPLES {
            break;
        }
        for rows in frames {
            for val in 0u64..1 << bits {
                let extents = atoms
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (a.clone(), val >> (i * n) & full_mask(n)))
                    .collect();
                out.push(SmallModel::from_masks(rows.clone(), extents));
            }
        }
    }
    out
}

struct Classes<'a> {
    logic: LogicId,
    budget: &'a Budget,
    samples: Vec<SmallModel>,
    by_print: HashMap<Vec<u64>, Vec<Formula>>,
    by_size: Vec<Vec<Formula>>,
}

impl Classes<'_> {
    /// Keeps `f` if it is not equivalent to a formula already kept.
    fn offer(&mut self, f: Formula, fresh: &mut Vec<Formula>) {
        let print: Vec<u64> = self.samples.iter().map(|m| m.check(&f)).collect();
        let bucket = self.by_print.entry(print).or_default();
        for g in bucket.iter() {
            // undecided pairs are kept apart
            if equivalent(&f, g, self.logic, self.budget) == Ok(true) {
                return;
            }
        }
        bucket.push(f.clone());
        fresh.push(f);
    }

    /// Representatives of the new classes whose smallest member has `size` nodes.
    fn round(&mut self, size: usize, atoms: &[String]) -> Vec<Formula> {
        let mut raw = Vec::new();
        if size == 1 {
            raw.push(Formula::Top);
            raw.push(Formula::Bottom);
            raw.extend(atoms.iter().map(Formula::atom));
        } else {
            for a in &self.by_size[size - 1] {
                raw.push(Formula::not(a.clone()));
                raw.push(Formula::boxed(a.clone()));
                raw.push(Formula::diamond(a.clone()));
            }
            for i in 1..size - 1 {
                let j = size - 1 - i;
                if i > j {
                    break;
                }
                for (x, a) in self.by_size[i].iter().enumerate() {
                    let start = if i == j { x + 1 } else { 0 };
                    for b in &self.by_size[j][start..] {
                        raw.push(Formula::and(a.clone(), b.clone()));
                        raw.push(Formula::or(a.clone(), b.clone()));
                    }
                }
            }
        }
        raw.sort();
        raw.dedup();
        let mut fresh = Vec::new();
        for f in raw {
            self.offer(f, &mut fresh);
        }
        self.by_size.push(fresh.clone());
        fresh
    }
}

/// A formula over the atoms common to `f1` and `f2` implied by `f1` and
/// implying `f2` in the logic, smallest first. `Unknown` when the search
/// passes the budget's size limit.
pub fn find_interpolant(
    f1: &Formula,
    f2: &Formula,
    logic: LogicId,
    budget: &Budget,
) -> Interpolation {
    let start = Instant::now();
    match valid(&Formula::implies(f1.clone(), f2.clone()), logic, budget) {
        Verdict::Valid => {}
        Verdict::Invalid { model, world } => return Interpolation::NotValid { model, world },
        Verdict::Unknown(r) => return Interpolation::Unknown(r),
    }
    let shared: Vec<String> = f1.atoms().intersection(&f2.atoms()).cloned().collect();
    let mut classes = Classes {
        logic,
        budget,
        samples: samples(&shared, logic),
        by_print: HashMap::new(),
        by_size: vec![Vec::new()],
    };
    // countermodels to earlier candidates: f1 true and the candidate false
    // refutes the first implication, f2 false and the candidate true the second
    let mut below: Vec<(PreorderModel, usize)> = Vec::new();
    let mut above: Vec<(PreorderModel, usize)> = Vec::new();
    let mut undecided = None;
    for size in 1..=budget.max_interpolant_size {
        if let Some(limit) = budget.time {
            if start.elapsed() > limit {
                return Interpolation::Unknown("time limit reached".into());
            }
        }
        let round = classes.round(size, &shared);
        tracing::debug!(size, classes = round.len(), "interpolant round");
        for c in round {
            if below.iter().any(|(m, w)| !satisfies(m, *w, &c))
                || above.iter().any(|(m, w)| satisfies(m, *w, &c))
            {
                continue;
            }
            match valid(&Formula::implies(f1.clone(), c.clone()), logic, budget) {
                Verdict::Valid => {}
                Verdict::Invalid { model, world } => {
                    below.push((model, world));
                    continue;
                }
                Verdict::Unknown(r) => {
                    undecided.get_or_insert(r);
                    continue;
                }
            }
            match valid(&Formula::implies(c.clone(), f2.clone()), logic, budget) {
                Verdict::Valid => {
                    debug_assert!(c.atoms().iter().all(|a| shared.contains(a)));
                    return Interpolation::Interpolant(c);
                }
                Verdict::Invalid { model, world } => above.push((model, world)),
                Verdict::Unknown(r) => {
                    undecided.get_or_insert(r);
                }
            }
        }
    }
    Interpolation::Unknown(match undecided {
        Some(r) => format!(
            "no interpolant up to size {}; some candidates undecided: {r}",
            budget.max_interpolant_size
        ),
        None => format!("no interpolant up to size {}", budget.max_interpolant_size),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn propositional() {
        let b = Budget::default();
        let r = find_interpolant(&f("p & q"), &f("q | r"), LogicId::s4(), &b);
        assert_eq!(r, Interpolation::Interpolant(f("q")));
    }

    #[test]
    fn modal() {
        let b = Budget::default();
        let r = find_interpolant(&f("[](p & q)"), &f("[]p | r"), LogicId::s4(), &b);
        assert_eq!(r, Interpolation::Interpolant(f("[]p")));
    }

    #[test]
    fn constants_when_nothing_is_shared() {
        let b = Budget::default();
        let r = find_interpolant(&f("p & ~p"), &f("q"), LogicId::s4(), &b);
        assert_eq!(r, Interpolation::Interpolant(Formula::Bottom));
        let r = find_interpolant(&f("p"), &f("[]q -> q"), LogicId::s4(), &b);
        assert_eq!(r, Interpolation::Interpolant(Formula::Top));
    }

    #[test]
    fn invalid_implication() {
        let b = Budget::default();
        let Interpolation::NotValid { model, world } =
            find_interpolant(&f("p"), &f("[]p"), LogicId::s4(), &b)
        else {
            panic!("expected a countermodel")
        };
        assert!(satisfies(&model, world, &f("p & ~[]p")));
    }
}
