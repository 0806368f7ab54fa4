//! Modal and first-order formulas: syntax, sizes, text format, evaluation and
//! the formula families used by the succinctness experiment.

use alloc::string::String;

mod enumerate;
mod fo;
mod ml;
mod parse;

pub use enumerate::{enumerate_ml, enumerate_ml_sorted, Commutativity, FormulaEnumeration, Node};
pub use fo::{
    eval_fo, eval_fo_named, fo_size, make_phi, make_psi, Assignment, FoFormula, SizeConvention, Var,
};
pub use ml::{eval_ml, ml_sizes, modal_depth, separates, Literal, MlFormula, SizeReport};
pub use parse::{parse_ml, print_ml, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LogicError {
    #[error("proposition `{0}` is not in the model's signature")]
    UnknownProposition(String),
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("world `{0}` does not exist")]
    UnknownWorld(String),
    #[error("formula families are indexed from 1")]
    ZeroIndex,
}
