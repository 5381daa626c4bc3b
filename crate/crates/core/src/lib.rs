//! Document spanners: regex formulas with capture variables, vset-automata,
//! spanner algebra and polynomial-delay enumeration.

pub mod bench;
pub mod compile;
pub mod enumerate;
pub mod formula;
pub mod harness;
pub mod model;
pub mod query;
pub mod vsa;

/// Any error raised by this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] model::ModelError),
    #[error(transparent)]
    Formula(#[from] formula::ParseError),
    #[error(transparent)]
    Automaton(#[from] vsa::VsaError),
    #[error(transparent)]
    Dump(#[from] vsa::DumpError),
    #[error(transparent)]
    Compile(#[from] compile::CompileError),
    #[error(transparent)]
    Query(#[from] query::QueryError),
    #[error(transparent)]
    Generator(#[from] harness::gen::GenError),
    #[error(transparent)]
    Oracle(#[from] harness::oracle::OracleError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
