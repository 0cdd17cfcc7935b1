use std::collections::BTreeSet;

use serde::Serialize;

use crate::frame_formulas::Bound;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    For,
    Int,
    KC,
    LP2,
    LV,
    LS,
    Cl,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::For => "For",
            Family::Int => "Int",
            Family::KC => "KC",
            Family::LP2 => "LP2",
            Family::LV => "LV",
            Family::LS => "LS",
            Family::Cl => "Cl",
        }
    }
}

/// A normal extension of S4 with (at least) deductive interpolation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub family: Family,
    /// Final and non-final cluster bounds; `None` for the inconsistent logic.
    pub m: Option<Bound>,
    pub n: Option<Bound>,
    pub aliases: Vec<&'static str>,
    pub has_cip: bool,
    pub has_dip: bool,
    pub decidable_here: bool,
}

fn bound_name(b: Bound) -> String {
    b.to_string()
}

fn entry(family: Family, m: Bound, n: Bound, has_cip: bool) -> CatalogEntry {
    let aliases = match (family, m, n) {
        (Family::Int, Bound::Omega, Bound::Omega) => vec!["S4"],
        (Family::KC, Bound::Omega, Bound::Omega) => vec!["S4.2"],
        (Family::Int, Bound::Finite(1), Bound::Finite(1)) => vec!["Grz"],
        (Family::Cl, Bound::Omega, Bound::Finite(0)) => vec!["S5"],
        _ => vec![],
    };
    CatalogEntry {
        name: format!("G({},{},{})", family.name(), bound_name(m), bound_name(n)),
        family,
        m: Some(m),
        n: Some(n),
        aliases,
        has_cip,
        has_dip: true,
        decidable_here: matches!(family, Family::Int | Family::KC),
    }
}

/// Every normal extension of S4 with the deductive interpolation
/// property; `has_cip` marks those that also have Craig interpolation.
pub fn catalog() -> Vec<CatalogEntry> {
    use Bound::{Finite, Omega};
    let all = [Finite(1), Finite(2), Omega];
    let mut out = vec![CatalogEntry {
        name: "For".into(),
        family: Family::For,
        m: None,
        n: None,
        aliases: vec![],
        has_cip: true,
        has_dip: true,
        decidable_here: false,
    }];
    for family in [Family::Int, Family::KC] {
        for m in all {
            for n in all {
                out.push(entry(family, m, n, true));
            }
        }
    }
    for family in [Family::LP2, Family::LV, Family::LS] {
        let mut seen = BTreeSet::new();
        for k in all {
            for (m, n) in [(k, Finite(1)), (Finite(1), k)] {
                if seen.insert((m, n)) {
                    out.push(entry(family, m, n, true));
                }
            }
        }
        for m in [Finite(2), Omega] {
            for n in [Finite(2), Omega] {
                out.push(entry(family, m, n, false));
            }
        }
    }
    for m in all {
        out.push(entry(Family::Cl, m, Finite(0), true));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let c = catalog();
        assert_eq!(c.iter().filter(|e| e.has_cip).count(), 37);
        assert_eq!(c.iter().filter(|e| e.has_dip).count(), 49);
        assert_eq!(c.iter().filter(|e| e.decidable_here).count(), 18);
        let names: BTreeSet<&str> = c.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names.len(), c.len());
        let grz = c.iter().find(|e| e.name == "G(Int,1,1)").unwrap();
        assert_eq!(grz.aliases, ["Grz"]);
    }
}
