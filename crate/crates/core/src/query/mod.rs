//! Regex conjunctive queries and their unions: `π_Y(α_1 ⋈ ⋯ ⋈ α_k)` with
//! optional string-equality atoms, evaluated either relationally or by
//! compiling the whole query into one automaton.

mod eval;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::compile::CompileError;
use crate::formula::{check_functional_regex, RegexFormula};
use crate::model::VarName;
use crate::vsa::VsaError;

pub use eval::{
    compile_cq, eval, eval_canonical, eval_compiled, plan, DisjunctStrategy, Plan, PlanOptions,
    Strategy, TupleStream, DEFAULT_MAX_EQUALITY_PATHS, DEFAULT_MAX_JOIN_COMPILE,
};
pub use parse::parse_query;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid query: {0}")]
    Invalid(String),
    #[error(transparent)]
    Compile(#[from] CompileError),
}

impl From<VsaError> for QueryError {
    fn from(e: VsaError) -> Self {
        QueryError::Compile(CompileError::NonFunctionalAutomaton(e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegexCQ {
    pub projection: BTreeSet<VarName>,
    pub atoms: Vec<RegexFormula>,
    pub equalities: Vec<(VarName, VarName)>,
}

impl RegexCQ {
    /// Builds and validates a query.
    pub fn new(
        projection: BTreeSet<VarName>,
        atoms: Vec<RegexFormula>,
        equalities: Vec<(VarName, VarName)>,
    ) -> Result<Self, QueryError> {
        let q = RegexCQ {
            projection,
            atoms,
            equalities,
        };
        q.validate()?;
        Ok(q)
    }

    /// Variables of all regex atoms.
    pub fn vars(&self) -> BTreeSet<VarName> {
        self.atoms.iter().flat_map(|a| a.vars()).collect()
    }

    pub fn is_boolean(&self) -> bool {
        self.projection.is_empty()
    }

    pub fn validate(&self) -> Result<(), QueryError> {
        if self.atoms.is_empty() {
            return Err(QueryError::Invalid(
                "a query needs at least one atom".into(),
            ));
        }
        for (i, atom) in self.atoms.iter().enumerate() {
            if let Err(v) = check_functional_regex(atom) {
                let why: Vec<String> = v.iter().map(|v| v.to_string()).collect();
                return Err(QueryError::Invalid(format!(
                    "atom {} is not functional: {}",
                    i + 1,
                    why.join(", ")
                )));
            }
        }
        let vars = self.vars();
        for y in &self.projection {
            if !vars.contains(y) {
                return Err(QueryError::Invalid(format!(
                    "selected variable {y} does not occur in any atom"
                )));
            }
        }
        for v in self.equalities.iter().flat_map(|(x, y)| [x, y]) {
            if !vars.contains(v) {
                return Err(QueryError::Invalid(format!(
                    "equality variable {v} does not occur in any atom"
                )));
            }
        }
        Ok(())
    }

    /// The relational skeleton: one relation symbol per atom.
    pub fn to_relational(&self) -> RelationalSkeleton {
        map_to_relational(self)
    }
}

impl fmt::Display for RegexCQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SELECT ")?;
        if self.projection.is_empty() {
            write!(f, "()")?;
        } else {
            let ys: Vec<&str> = self.projection.iter().map(|v| v.as_str()).collect();
            write!(f, "{}", ys.join(", "))?;
        }
        write!(f, " FROM ")?;
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "/{atom}/")?;
        }
        for (i, (x, y)) in self.equalities.iter().enumerate() {
            let kw = if i == 0 { " WHERE" } else { " AND" };
            write!(f, "{kw} {x} == {y}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegexUCQ {
    pub disjuncts: Vec<RegexCQ>,
}

impl RegexUCQ {
    /// Validates every disjunct and checks that all select the same
    /// variables. Internal variables may differ.
    pub fn new(disjuncts: Vec<RegexCQ>) -> Result<Self, QueryError> {
        let Some(first) = disjuncts.first() else {
            return Err(QueryError::Invalid(
                "a query needs at least one disjunct".into(),
            ));
        };
        for (i, q) in disjuncts.iter().enumerate() {
            q.validate()?;
            if q.projection != first.projection {
                return Err(QueryError::Invalid(format!(
                    "disjunct {} selects different variables than disjunct 1",
                    i + 1
                )));
            }
        }
        Ok(RegexUCQ { disjuncts })
    }

    pub fn projection(&self) -> &BTreeSet<VarName> {
        &self.disjuncts[0].projection
    }

    pub fn is_boolean(&self) -> bool {
        self.projection().is_empty()
    }
}

impl From<RegexCQ> for RegexUCQ {
    fn from(q: RegexCQ) -> Self {
        RegexUCQ { disjuncts: vec![q] }
    }
}

impl fmt::Display for RegexUCQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, q) in self.disjuncts.iter().enumerate() {
            if i > 0 {
                write!(f, "\nUNION ")?;
            }
            write!(f, "{q}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationalAtom {
    pub symbol: String,
    pub attributes: BTreeSet<VarName>,
}

/// Relational CQ with the same atom/variable incidence as a regex CQ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationalSkeleton {
    pub projection: BTreeSet<VarName>,
    pub atoms: Vec<RelationalAtom>,
    pub equalities: Vec<(VarName, VarName)>,
}

impl RelationalSkeleton {
    pub fn variables(&self) -> BTreeSet<VarName> {
        self.atoms
            .iter()
            .flat_map(|a| a.attributes.iter().cloned())
            .collect()
    }

    /// Variables occurring in at least two atoms.
    pub fn shared_variables(&self) -> BTreeSet<VarName> {
        let mut seen = BTreeSet::new();
        let mut shared = BTreeSet::new();
        for v in self.atoms.iter().flat_map(|a| &a.attributes) {
            if !seen.insert(v) {
                shared.insert(v.clone());
            }
        }
        shared
    }
}

impl fmt::Display for RelationalSkeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |vs: &mut dyn Iterator<Item = &VarName>| {
            vs.map(|v| v.as_str()).collect::<Vec<_>>().join(", ")
        };
        write!(f, "Q({}) :- ", join(&mut self.projection.iter()))?;
        let mut parts: Vec<String> = self
            .atoms
            .iter()
            .map(|a| format!("{}({})", a.symbol, join(&mut a.attributes.iter())))
            .collect();
        parts.extend(self.equalities.iter().map(|(x, y)| format!("{x} = {y}")));
        write!(f, "{}", parts.join(", "))
    }
}

pub fn map_to_relational(q: &RegexCQ) -> RelationalSkeleton {
    RelationalSkeleton {
        projection: q.projection.clone(),
        atoms: q
            .atoms
            .iter()
            .enumerate()
            .map(|(i, a)| RelationalAtom {
                symbol: format!("R{}", i + 1),
                attributes: a.vars(),
            })
            .collect(),
        equalities: q.equalities.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_regex_formula;
    use crate::model::var;

    fn f(s: &str) -> RegexFormula {
        parse_regex_formula(s).unwrap()
    }

    #[test]
    fn validation() {
        let ys = |v: &[&str]| v.iter().map(|n| var(n)).collect::<BTreeSet<_>>();
        assert!(RegexCQ::new(ys(&["x"]), vec![f("x{a}")], vec![]).is_ok());
        assert!(RegexCQ::new(ys(&["y"]), vec![f("x{a}")], vec![]).is_err());
        assert!(RegexCQ::new(ys(&[]), vec![], vec![]).is_err());
        assert!(RegexCQ::new(ys(&[]), vec![f("x{a}x{a}")], vec![]).is_err());
        assert!(RegexCQ::new(ys(&[]), vec![f("x{a}")], vec![(var("x"), var("z"))]).is_err());
    }

    #[test]
    fn skeleton_shares_variables() {
        let q = RegexCQ::new(
            [var("x")].into(),
            vec![f("x{a} y{b}"), f("Σ* x{a} Σ*")],
            vec![],
        )
        .unwrap();
        let s = map_to_relational(&q);
        assert_eq!(s.atoms.len(), 2);
        assert_eq!(s.shared_variables(), [var("x")].into());
        assert_eq!(s.to_string(), "Q(x) :- R1(x, y), R2(x)");
    }
}
