//! Constructions producing functional vset-automata: formula compilation
//! and the spanner algebra.

mod equality;
mod join;
mod ops;
mod regex;

use thiserror::Error;

use crate::formula::FunctionalityViolation;
use crate::model::VarName;
use crate::vsa::VsaError;

pub use equality::{apply_selections, build_equality_automaton, equality_assignment_count};
pub use join::{join, join_many};
pub use ops::{expand_strict, project, union};
pub use regex::compile_regex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("formula is not functional: {}", list(.0))]
    NonFunctional(Vec<FunctionalityViolation>),
    #[error("automaton is not functional: {0}")]
    NonFunctionalAutomaton(#[from] VsaError),
    #[error("variable {0} is not a variable of the automaton")]
    UnknownVariable(VarName),
    #[error("variable sets differ: {{{}}} vs {{{}}}", list(.0), list(.1))]
    VariableMismatch(Vec<VarName>, Vec<VarName>),
    #[error("nothing to combine")]
    NoOperands,
    #[error("no string-equality selections given")]
    NoSelections,
}

fn list<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
