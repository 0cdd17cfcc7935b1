//! Decision procedures, model constructions and interpolation for the
//! cluster-bounded modal logics `G(L, m, n)` over S4.

pub mod engine;
mod error;
pub mod frame_formulas;
pub mod kripke;
mod par;
pub mod refine;
pub mod smorynski;
pub mod suites;
pub mod syntax;

pub use error::Error;
pub use par::is_parallel;
pub use syntax::{parse, Formula, FormulaSet};
