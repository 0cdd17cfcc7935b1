use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::modality::{apply_modality, canonical_modalities, split_modality};
use super::{Formula, FormulaSet};
use crate::Error;

/// Upper bound on the number of representatives a Boolean closure may
/// produce unless the caller asks for more.
pub const DEFAULT_BOOL_CLOSURE_CAP: usize = 1 << 17;

/// Tables are packed into a `u64`, which caps the letter count at six.
const MAX_LETTERS: usize = 6;

#[derive(Clone, Copy, Debug)]
pub struct BoolClosureOptions {
    pub cap: usize,
}

impl Default for BoolClosureOptions {
    fn default() -> Self {
        BoolClosureOptions {
            cap: DEFAULT_BOOL_CLOSURE_CAP,
        }
    }
}

pub fn subformula_closure<'a, I>(seeds: I) -> FormulaSet
where
    I: IntoIterator<Item = &'a Formula>,
{
    let mut out = FormulaSet::new();
    let mut stack: Vec<&Formula> = seeds.into_iter().collect();
    while let Some(f) = stack.pop() {
        if out.insert(f.clone()) {
            stack.extend(f.children());
        }
    }
    out
}

/// Subformula closure, then every core (a member stripped of its leading
/// `~`/`[]`/`<>`) under each of the fourteen canonical prefixes.
///
/// Suffixes of canonical prefixes are canonical, so the result stays
/// subformula closed, and applying `neg` or `[]` to a member and
/// normalizing lands back inside.
pub fn box_negation_closure<'a, I>(seeds: I) -> FormulaSet
where
    I: IntoIterator<Item = &'a Formula>,
{
    let sub = subformula_closure(seeds);
    let cores: BTreeSet<Formula> = sub.iter().map(|f| split_modality(f).1).collect();
    let mut out = sub;
    for word in canonical_modalities() {
        for c in &cores {
            out.insert(apply_modality(&word, c));
        }
    }
    out
}

/// The letters a Boolean closure is taken over: atoms and box-headed
/// subformulas, with `<>f` contributing the letter `[]~f`.
fn letters_of(sub: &FormulaSet) -> Vec<Formula> {
    let mut letters = BTreeSet::new();
    for f in sub {
        match f {
            Formula::Atom(_) | Formula::Box(_) => {
                letters.insert(f.clone());
            }
            Formula::Diamond(g) => {
                letters.insert(Formula::boxed(Formula::not((**g).clone())));
            }
            _ => {}
        }
    }
    letters.into_iter().collect()
}

fn truth_table(f: &Formula, letters: &BTreeMap<Formula, usize>, rows: usize) -> u64 {
    let mut table = 0u64;
    for row in 0..rows {
        if eval_row(f, letters, row) {
            table |= 1 << row;
        }
    }
    table
}

fn eval_row(f: &Formula, letters: &BTreeMap<Formula, usize>, row: usize) -> bool {
    let letter = |g: &Formula| letters.get(g).is_some_and(|&i| row >> i & 1 == 1);
    match f {
        Formula::Atom(_) | Formula::Box(_) => letter(f),
        Formula::Diamond(g) => !letter(&Formula::boxed(Formula::not((**g).clone()))),
        Formula::Bottom => false,
        Formula::Top => true,
        Formula::Not(g) => !eval_row(g, letters, row),
        Formula::And(a, b) => eval_row(a, letters, row) && eval_row(b, letters, row),
        Formula::Or(a, b) => eval_row(a, letters, row) || eval_row(b, letters, row),
        Formula::Implies(a, b) => !eval_row(a, letters, row) || eval_row(b, letters, row),
        Formula::Iff(a, b) => eval_row(a, letters, row) == eval_row(b, letters, row),
    }
}

/// Sorted-DNF representative of a truth table over `letters`.
fn representative(table: u64, letters: &[Formula], rows: usize) -> Formula {
    let all = if rows == 64 {
        u64::MAX
    } else {
        (1u64 << rows) - 1
    };
    if table == 0 {
        return Formula::Bottom;
    }
    if table == all {
        return Formula::Top;
    }
    Formula::disjunction((0..rows).filter(|r| table >> r & 1 == 1).map(|row| {
        Formula::conjunction(letters.iter().enumerate().map(|(i, l)| {
            if row >> i & 1 == 1 {
                l.clone()
            } else {
                Formula::not(l.clone())
            }
        }))
    }))
}

/// Subformula closure of `seeds` plus one sorted-DNF representative for
/// every Boolean function of its letters not already represented.
pub fn boolean_subformula_closure<'a, I>(
    seeds: I,
    opts: &BoolClosureOptions,
) -> Result<FormulaSet, Error>
where
    I: IntoIterator<Item = &'a Formula>,
{
    let sub = subformula_closure(seeds);
    let letters = letters_of(&sub);
    if letters.len() > MAX_LETTERS {
        return Err(Error::ResourceExceeded(format!(
            "Boolean closure over {} letters (at most {MAX_LETTERS} supported)",
            letters.len()
        )));
    }
    let rows = 1usize << letters.len();
    let functions = 1u128 << rows;
    let index: BTreeMap<Formula, usize> = letters
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, l)| (l, i))
        .collect();
    let present: BTreeSet<u64> = sub.iter().map(|f| truth_table(f, &index, rows)).collect();
    let total = sub.len() as u128 + functions - present.len() as u128;
    if total > opts.cap as u128 {
        return Err(Error::ResourceExceeded(format!(
            "Boolean closure needs {total} representatives, cap is {}",
            opts.cap
        )));
    }
    let mut out = sub;
    for table in 0..functions as u64 {
        if !present.contains(&table) {
            out.insert(representative(table, &letters, rows));
        }
    }
    Ok(out)
}

/// Boolean closure of `seeds` together with every instance of `chi` whose
/// atoms `p0..p(arity-1)` are replaced by members of `seeds`.
pub fn chi_closure(
    seeds: &FormulaSet,
    chi: &Formula,
    arity: usize,
    opts: &BoolClosureOptions,
) -> Result<FormulaSet, Error> {
    let items: Vec<&Formula> = seeds.iter().collect();
    let mut all = seeds.clone();
    if !items.is_empty() {
        let tuples = (items.len() as u128).checked_pow(arity as u32);
        if tuples.map_or(true, |t| t > opts.cap as u128) {
            return Err(Error::ResourceExceeded(format!(
                "{}^{arity} substitution instances exceed cap {}",
                items.len(),
                opts.cap
            )));
        }
        let mut idx = vec![0usize; arity];
        loop {
            let args: Vec<Formula> = idx.iter().map(|&i| items[i].clone()).collect();
            all.insert(crate::frame_formulas::substitute(chi, &args)?);
            let mut k = arity;
            loop {
                if k == 0 {
                    return boolean_subformula_closure(&all, opts);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < items.len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
    boolean_subformula_closure(&all, opts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureStep {
    Subformula,
    BoxNegation,
    Boolean,
}

/// A pair of formula sets for the two sides of an implication.
#[derive(Clone, Debug)]
pub struct SignedClosure {
    pub sigma1: FormulaSet,
    pub sigma2: FormulaSet,
    /// Operators applied to produce both sets, in order.
    pub provenance: Vec<ClosureStep>,
}

impl SignedClosure {
    /// Close each seed set under subformulas, `~` and `[]`.
    pub fn box_negation(seeds1: &[Formula], seeds2: &[Formula]) -> SignedClosure {
        SignedClosure {
            sigma1: box_negation_closure(seeds1),
            sigma2: box_negation_closure(seeds2),
            provenance: vec![ClosureStep::Subformula, ClosureStep::BoxNegation],
        }
    }

    pub fn union(&self) -> FormulaSet {
        self.sigma1.union(&self.sigma2).cloned().collect()
    }

    /// Atoms occurring on both sides.
    pub fn shared_atoms(&self) -> BTreeSet<String> {
        let a1: BTreeSet<String> = self.sigma1.iter().flat_map(|f| f.atoms()).collect();
        let a2: BTreeSet<String> = self.sigma2.iter().flat_map(|f| f.atoms()).collect();
        a1.intersection(&a2).cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{neg, parse};

    fn set(items: &[&str]) -> FormulaSet {
        items.iter().map(|s| parse(s).unwrap()).collect()
    }

    #[test]
    fn subformulas() {
        assert_eq!(
            subformula_closure(&set(&["[]p -> q"])),
            set(&["[]p -> q", "[]p", "p", "q"])
        );
        assert!(subformula_closure(&FormulaSet::new()).is_empty());
        assert_eq!(subformula_closure(&set(&["~~p"])), set(&["~~p", "~p", "p"]));
    }

    #[test]
    fn boolean_closure_counts() {
        let o = BoolClosureOptions::default();
        assert_eq!(
            boolean_subformula_closure(&set(&["p"]), &o).unwrap().len(),
            4
        );
        assert_eq!(
            boolean_subformula_closure(&set(&["p", "q"]), &o)
                .unwrap()
                .len(),
            16
        );
        assert_eq!(
            boolean_subformula_closure(&FormulaSet::new(), &o).unwrap(),
            set(&["false", "true"])
        );
    }

    #[test]
    fn boolean_closure_respects_cap() {
        let o = BoolClosureOptions { cap: 10 };
        assert!(matches!(
            boolean_subformula_closure(&set(&["p", "q"]), &o),
            Err(Error::ResourceExceeded(_))
        ));
    }

    #[test]
    fn chi_closures() {
        let o = BoolClosureOptions::default();
        let s = set(&["p"]);
        assert_eq!(
            chi_closure(&s, &parse("p0").unwrap(), 1, &o).unwrap().len(),
            4
        );
        assert_eq!(
            chi_closure(&s, &parse("[]p0").unwrap(), 1, &o)
                .unwrap()
                .len(),
            16
        );
        assert_eq!(
            chi_closure(&FormulaSet::new(), &parse("[]p0").unwrap(), 1, &o).unwrap(),
            set(&["false", "true"])
        );
    }

    #[test]
    fn box_negation_closure_shape() {
        let c = box_negation_closure(&set(&["p"]));
        assert_eq!(c.len(), 14);
        assert_eq!(box_negation_closure(&c), c);
        let c = box_negation_closure(&set(&["[]p -> q"]));
        let sub = subformula_closure(&set(&["[]p -> q"]));
        assert!(c.len() <= 14 * sub.len() + sub.len());
        for f in &c {
            assert!(c.contains(&neg(f)), "{f}");
            let boxed = crate::syntax::normalize_modality(&{
                let (mut w, _) = split_modality(f);
                w.insert(0, crate::syntax::ModalOp::Box);
                w
            });
            assert!(c.contains(&apply_modality(&boxed, &split_modality(f).1)));
            for g in f.children() {
                assert!(c.contains(g));
            }
        }
    }
}
