//! Structural functionality test.
//!
//! Each subformula is summarized by the exact variable set that every one
//! of its ref-words opens and closes, or by the fact that its ref-word
//! language is empty. Summaries combine in one bottom-up pass, so the test
//! runs in `O(|α|·v)`.

use std::collections::BTreeSet;
use std::fmt;

use super::RegexFormula;
use crate::model::VarName;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationReason {
    /// Bound twice on some ref-word.
    Rebound,
    /// Bound on some alternatives but not on others.
    BranchMismatch,
    /// Bound inside a Kleene star.
    UnderStar,
    /// Occurs in the formula but is missing from every ref-word.
    NeverBound,
}

impl fmt::Display for ViolationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationReason::Rebound => "rebound",
            ViolationReason::BranchMismatch => "branch-mismatch",
            ViolationReason::UnderStar => "under-star",
            ViolationReason::NeverBound => "never-bound",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionalityViolation {
    pub var: VarName,
    pub reason: ViolationReason,
}

impl fmt::Display for FunctionalityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.var, self.reason)
    }
}

enum Shape {
    /// The ref-word language is empty.
    Empty,
    /// Every ref-word binds exactly these variables, once each.
    Fixed(BTreeSet<VarName>),
    /// Some ref-word is invalid in every context.
    Bad(BTreeSet<FunctionalityViolation>),
}

fn violations(
    vars: impl IntoIterator<Item = VarName>,
    reason: ViolationReason,
) -> BTreeSet<FunctionalityViolation> {
    vars.into_iter()
        .map(|var| FunctionalityViolation { var, reason })
        .collect()
}

fn merge(a: Shape, b: Shape) -> Shape {
    let mut out = BTreeSet::new();
    for s in [a, b] {
        if let Shape::Bad(v) = s {
            out.extend(v);
        }
    }
    Shape::Bad(out)
}

fn shape(alpha: &RegexFormula) -> Shape {
    use RegexFormula::*;
    match alpha {
        Empty => Shape::Empty,
        Epsilon | Symbol(_) | Wildcard => Shape::Fixed(BTreeSet::new()),
        Concatenation(a, b) => match (shape(a), shape(b)) {
            (Shape::Empty, _) | (_, Shape::Empty) => Shape::Empty,
            (Shape::Fixed(x), Shape::Fixed(y)) => {
                let shared: Vec<VarName> = x.intersection(&y).cloned().collect();
                if shared.is_empty() {
                    Shape::Fixed(x.union(&y).cloned().collect())
                } else {
                    Shape::Bad(violations(shared, ViolationReason::Rebound))
                }
            }
            (a, b) => merge(a, b),
        },
        Disjunction(a, b) => match (shape(a), shape(b)) {
            (Shape::Empty, s) | (s, Shape::Empty) => s,
            (Shape::Fixed(x), Shape::Fixed(y)) => {
                if x == y {
                    Shape::Fixed(x)
                } else {
                    let diff: Vec<VarName> = x.symmetric_difference(&y).cloned().collect();
                    Shape::Bad(violations(diff, ViolationReason::BranchMismatch))
                }
            }
            (a, b) => merge(a, b),
        },
        Star(a) => match shape(a) {
            Shape::Empty => Shape::Fixed(BTreeSet::new()),
            Shape::Fixed(x) if x.is_empty() => Shape::Fixed(x),
            Shape::Fixed(x) => Shape::Bad(violations(x, ViolationReason::UnderStar)),
            bad => bad,
        },
        Binding(v, a) => match shape(a) {
            Shape::Fixed(mut x) => {
                if x.contains(v) {
                    Shape::Bad(violations([v.clone()], ViolationReason::Rebound))
                } else {
                    x.insert(v.clone());
                    Shape::Fixed(x)
                }
            }
            other => other,
        },
    }
}

/// Accepts `α` iff every ref-word of `R(α)` is valid for `Vars(α)`;
/// otherwise returns the offending variables with reasons.
pub fn check_functional_regex(alpha: &RegexFormula) -> Result<(), Vec<FunctionalityViolation>> {
    match shape(alpha) {
        Shape::Empty => Ok(()),
        Shape::Fixed(bound) => {
            let missing: Vec<VarName> = alpha.vars().difference(&bound).cloned().collect();
            if missing.is_empty() {
                Ok(())
            } else {
                Err(violations(missing, ViolationReason::NeverBound)
                    .into_iter()
                    .collect())
            }
        }
        Shape::Bad(v) => Err(v.into_iter().collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_regex_formula;
    use crate::model::var;

    fn check(s: &str) -> Result<(), Vec<FunctionalityViolation>> {
        check_functional_regex(&parse_regex_formula(s).unwrap())
    }

    fn reasons(s: &str) -> Vec<(String, ViolationReason)> {
        check(s)
            .unwrap_err()
            .into_iter()
            .map(|v| (v.var.to_string(), v.reason))
            .collect()
    }

    #[test]
    fn classic_examples() {
        assert!(check("Σ*((x{foo}Σ*y{bar})∨(y{bar}Σ*x{foo}))Σ*").is_ok());
        assert!(check("a* x{a*} a*").is_ok());
        assert_eq!(
            reasons("x{a}x{a}"),
            vec![("x".to_string(), ViolationReason::Rebound)]
        );
        assert_eq!(
            reasons("x{a} ∨ y{a}"),
            vec![
                ("x".to_string(), ViolationReason::BranchMismatch),
                ("y".to_string(), ViolationReason::BranchMismatch)
            ]
        );
    }

    #[test]
    fn star_and_nesting() {
        assert_eq!(
            reasons("(x{a})*"),
            vec![("x".to_string(), ViolationReason::UnderStar)]
        );
        assert_eq!(
            reasons("x{x{a}}"),
            vec![("x".to_string(), ViolationReason::Rebound)]
        );
        assert!(check("x{y{a}} b").is_ok());
    }

    #[test]
    fn empty_language_is_vacuously_functional() {
        assert!(check("∅").is_ok());
        assert!(check("∅ x{a} x{a}").is_ok());
        assert!(check("x{a} | ∅").is_ok());
        // the star still produces ε, which does not bind x
        assert_eq!(
            reasons("(∅ x{a})*"),
            vec![("x".to_string(), ViolationReason::NeverBound)]
        );
    }

    #[test]
    fn never_bound_variables() {
        let v = check("a | ∅ x{a}").unwrap_err();
        assert_eq!(
            v,
            vec![FunctionalityViolation {
                var: var("x"),
                reason: ViolationReason::NeverBound
            }]
        );
    }
}
