use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::frame_formulas::Bound;
use crate::kripke::{clusters, PreorderModel};
use crate::Error;

/// Intermediate logic whose modal companion is the base of the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Lambda {
    /// Base S4.
    Int,
    /// Base S4.2: confluent frames.
    KC,
}

/// `G(lambda, m, n)`: finite preorders of the base logic whose final
/// clusters have at most `m` and non-final clusters at most `n` worlds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LogicId {
    pub lambda: Lambda,
    pub m: Bound,
    pub n: Bound,
}

const BOUNDS: [Bound; 3] = [Bound::Finite(1), Bound::Finite(2), Bound::Omega];

impl LogicId {
    pub fn new(lambda: Lambda, m: Bound, n: Bound) -> Result<LogicId, Error> {
        for b in [m, n] {
            if !BOUNDS.contains(&b) {
                return Err(Error::UnknownLogic(format!("cluster bound {b}")));
            }
        }
        Ok(LogicId { lambda, m, n })
    }

    pub fn s4() -> LogicId {
        LogicId {
            lambda: Lambda::Int,
            m: Bound::Omega,
            n: Bound::Omega,
        }
    }

    pub fn s4_2() -> LogicId {
        LogicId {
            lambda: Lambda::KC,
            ..LogicId::s4()
        }
    }

    pub fn grz() -> LogicId {
        LogicId {
            lambda: Lambda::Int,
            m: Bound::Finite(1),
            n: Bound::Finite(1),
        }
    }

    /// The eighteen logics in canonical order.
    pub fn all() -> Vec<LogicId> {
        let mut out = Vec::new();
        for lambda in [Lambda::Int, Lambda::KC] {
            for m in BOUNDS {
                for n in BOUNDS {
                    out.push(LogicId { lambda, m, n });
                }
            }
        }
        out
    }

    /// Why `model` is outside this logic's frame class, if it is.
    pub fn frame_violation(&self, model: &PreorderModel) -> Option<String> {
        if self.lambda == Lambda::KC && !model.is_confluent() {
            return Some("frame is not confluent".into());
        }
        let view = clusters(model);
        for (c, members) in view.clusters.iter().enumerate() {
            let (bound, kind) = if view.is_final[c] {
                (self.m, "final")
            } else {
                (self.n, "non-final")
            };
            if !bound.admits(members.len()) {
                return Some(format!(
                    "{kind} cluster of {} worlds exceeds bound {bound}",
                    members.len()
                ));
            }
        }
        None
    }

    pub fn admits_frame(&self, model: &PreorderModel) -> bool {
        self.frame_violation(model).is_none()
    }

    /// Frame class inclusion: every frame of `self` is a frame of `other`.
    pub fn frames_included_in(&self, other: &LogicId) -> bool {
        let le = |a: Bound, b: Bound| match (a, b) {
            (_, Bound::Omega) => true,
            (Bound::Finite(x), Bound::Finite(y)) => x <= y,
            (Bound::Omega, Bound::Finite(_)) => false,
        };
        (other.lambda == Lambda::Int || self.lambda == Lambda::KC)
            && le(self.m, other.m)
            && le(self.n, other.n)
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lambda::Int => "Int",
            Lambda::KC => "KC",
        })
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{},{})", self.lambda, self.m, self.n)
    }
}

fn parse_bound(s: &str) -> Option<Bound> {
    match s.trim() {
        "1" => Some(Bound::Finite(1)),
        "2" => Some(Bound::Finite(2)),
        "w" | "ω" | "omega" => Some(Bound::Omega),
        _ => None,
    }
}

impl FromStr for LogicId {
    type Err = Error;

    fn from_str(s: &str) -> Result<LogicId, Error> {
        let t = s.trim();
        match t {
            "S4" => return Ok(LogicId::s4()),
            "S4.2" => return Ok(LogicId::s4_2()),
            "Grz" => return Ok(LogicId::grz()),
            _ => {}
        }
        let bad = || Error::UnknownLogic(s.to_string());
        let inner = t
            .strip_prefix("G(")
            .or_else(|| t.strip_prefix("Γ("))
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split(',').collect();
        let [lambda, m, n] = parts.as_slice() else {
            return Err(bad());
        };
        let lambda = match lambda.trim() {
            "Int" => Lambda::Int,
            "KC" => Lambda::KC,
            _ => return Err(bad()),
        };
        LogicId::new(
            lambda,
            parse_bound(m).ok_or_else(bad)?,
            parse_bound(n).ok_or_else(bad)?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!("S4".parse::<LogicId>().unwrap(), LogicId::s4());
        assert_eq!("G(KC,w,w)".parse::<LogicId>().unwrap(), LogicId::s4_2());
        assert_eq!("G(Int, 1, 1)".parse::<LogicId>().unwrap(), LogicId::grz());
        assert_eq!(LogicId::grz().to_string(), "G(Int,1,1)");
        assert!("G(LV,1,1)".parse::<LogicId>().is_err());
        assert!("G(Int,3,1)".parse::<LogicId>().is_err());
        for l in LogicId::all() {
            assert_eq!(l.to_string().parse::<LogicId>().unwrap(), l);
        }
    }

    #[test]
    fn inclusion() {
        assert!(LogicId::grz().frames_included_in(&LogicId::s4()));
        assert!(LogicId::s4_2().frames_included_in(&LogicId::s4()));
        assert!(!LogicId::s4().frames_included_in(&LogicId::s4_2()));
    }
}
