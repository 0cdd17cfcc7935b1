//! Formulas, the text grammar, and the closure operators used by the
//! model constructions.

mod closure;
mod formula;
mod modality;
mod parse;
mod print;

pub use closure::{
    boolean_subformula_closure, box_negation_closure, chi_closure, subformula_closure,
    BoolClosureOptions, ClosureStep, SignedClosure, DEFAULT_BOOL_CLOSURE_CAP,
};
pub use formula::{Formula, FormulaSet};
pub use modality::{
    apply_modality, canonical_modalities, neg, normalize_modality, split_modality, ModalOp,
    Modality,
};
pub use parse::{parse, ParseError};
pub use print::print;
