use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

/// A modal formula over named atoms.
///
/// `Diamond` is kept as its own node so that printed output stays close to
/// what the user wrote; every semantic operation treats `<>f` as `~[]~f`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    Atom(String),
    Bottom,
    Top,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Diamond(Box<Formula>),
}

/// Finite formula set ordered canonically.
pub type FormulaSet = BTreeSet<Formula>;

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Formula {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Formula {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn implies(f: Formula, g: Formula) -> Formula {
        Formula::Implies(Box::new(f), Box::new(g))
    }

    pub fn iff(f: Formula, g: Formula) -> Formula {
        Formula::Iff(Box::new(f), Box::new(g))
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    pub fn diamond(f: Formula) -> Formula {
        Formula::Diamond(Box::new(f))
    }

    /// Left-nested conjunction; the empty conjunction is `true`.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; the empty disjunction is `false`.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Bottom)
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Bottom | Formula::Top => Vec::new(),
            Formula::Not(f) | Formula::Box(f) | Formula::Diamond(f) => vec![f],
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => vec![f, g],
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::size)
            .sum::<usize>()
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Box(f) | Formula::Diamond(f) => 1 + f.modal_depth(),
            _ => self
                .children()
                .into_iter()
                .map(Formula::modal_depth)
                .max()
                .unwrap_or(0),
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        if let Formula::Atom(a) = self {
            out.insert(a.clone());
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    pub fn is_boxed(&self) -> bool {
        matches!(self, Formula::Box(_))
    }

    /// Rewrite every `<>f` as `~[]~f`. Idempotent.
    pub fn without_diamonds(&self) -> Formula {
        match self {
            Formula::Atom(_) | Formula::Bottom | Formula::Top => self.clone(),
            Formula::Not(f) => Formula::not(f.without_diamonds()),
            Formula::Box(f) => Formula::boxed(f.without_diamonds()),
            Formula::Diamond(f) => Formula::not(Formula::boxed(Formula::not(f.without_diamonds()))),
            Formula::And(f, g) => Formula::and(f.without_diamonds(), g.without_diamonds()),
            Formula::Or(f, g) => Formula::or(f.without_diamonds(), g.without_diamonds()),
            Formula::Implies(f, g) => Formula::implies(f.without_diamonds(), g.without_diamonds()),
            Formula::Iff(f, g) => Formula::iff(f.without_diamonds(), g.without_diamonds()),
        }
    }

    /// Replace atoms according to `map`; atoms without an entry are kept.
    pub fn map_atoms(&self, map: &dyn Fn(&str) -> Option<Formula>) -> Formula {
        match self {
            Formula::Atom(a) => map(a).unwrap_or_else(|| self.clone()),
            Formula::Bottom | Formula::Top => self.clone(),
            Formula::Not(f) => Formula::not(f.map_atoms(map)),
            Formula::Box(f) => Formula::boxed(f.map_atoms(map)),
            Formula::Diamond(f) => Formula::diamond(f.map_atoms(map)),
            Formula::And(f, g) => Formula::and(f.map_atoms(map), g.map_atoms(map)),
            Formula::Or(f, g) => Formula::or(f.map_atoms(map), g.map_atoms(map)),
            Formula::Implies(f, g) => Formula::implies(f.map_atoms(map), g.map_atoms(map)),
            Formula::Iff(f, g) => Formula::iff(f.map_atoms(map), g.map_atoms(map)),
        }
    }

    fn variant_rank(&self) -> u8 {
        match self {
            Formula::Atom(_) => 0,
            Formula::Bottom => 1,
            Formula::Top => 2,
            Formula::Not(_) => 3,
            Formula::And(..) => 4,
            Formula::Or(..) => 5,
            Formula::Implies(..) => 6,
            Formula::Iff(..) => 7,
            Formula::Box(_) => 8,
            Formula::Diamond(_) => 9,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print(self))
    }
}

/// Canonical order: modal depth, then size, then printed form.
impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.modal_depth()
            .cmp(&other.modal_depth())
            .then_with(|| self.size().cmp(&other.size()))
            .then_with(|| super::print(self).cmp(&super::print(other)))
            // distinct trees with equal prints cannot occur for well-formed
            // formulas, but keep the order total regardless
            .then_with(|| structural_cmp(self, other))
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn structural_cmp(a: &Formula, b: &Formula) -> Ordering {
    a.variant_rank()
        .cmp(&b.variant_rank())
        .then_with(|| match (a, b) {
            (Formula::Atom(x), Formula::Atom(y)) => x.cmp(y),
            _ => {
                let (ca, cb) = (a.children(), b.children());
                for (x, y) in ca.iter().zip(cb.iter()) {
                    let o = structural_cmp(x, y);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            }
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn depth_and_size() {
        let f = parse("<>[]p -> []<>p").unwrap();
        assert_eq!(f.modal_depth(), 2);
        assert_eq!(f.size(), 7);
        assert_eq!(Formula::Top.modal_depth(), 0);
    }

    #[test]
    fn diamond_rewrite_is_idempotent() {
        let f = parse("<>(p & <>q)").unwrap();
        let once = f.without_diamonds();
        assert_eq!(once, once.without_diamonds());
        assert_eq!(once, parse("~[]~(p & ~[]~q)").unwrap());
    }

    #[test]
    fn canonical_order_prefers_shallow_then_small() {
        let mut v = vec![
            parse("[]p").unwrap(),
            parse("q & p").unwrap(),
            parse("p").unwrap(),
            parse("~p").unwrap(),
        ];
        v.sort();
        let printed: Vec<String> = v.iter().map(|f| f.to_string()).collect();
        assert_eq!(printed, ["p", "~p", "q & p", "[]p"]);
    }
}
