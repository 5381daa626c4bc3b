//! Regex formulas: regular expressions with capture variables `x{…}`.

mod functional;
mod matcher;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

use crate::model::VarName;

pub use functional::{check_functional_regex, FunctionalityViolation, ViolationReason};
pub use matcher::{bounded_ref_language, match_ref_word};
pub use parse::{parse_regex_formula, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RegexFormula {
    Empty,
    Epsilon,
    Symbol(char),
    /// Any single symbol of the document (`.` or `Σ`).
    Wildcard,
    Disjunction(Box<RegexFormula>, Box<RegexFormula>),
    Concatenation(Box<RegexFormula>, Box<RegexFormula>),
    Star(Box<RegexFormula>),
    Binding(VarName, Box<RegexFormula>),
}

use RegexFormula::*;

impl RegexFormula {
    pub fn sym(c: char) -> Self {
        Symbol(c)
    }

    pub fn or(self, other: Self) -> Self {
        Disjunction(Box::new(self), Box::new(other))
    }

    pub fn then(self, other: Self) -> Self {
        Concatenation(Box::new(self), Box::new(other))
    }

    pub fn star(self) -> Self {
        Star(Box::new(self))
    }

    pub fn bind(var: VarName, inner: Self) -> Self {
        Binding(var, Box::new(inner))
    }

    /// `Σ*`
    pub fn any_string() -> Self {
        Wildcard.star()
    }

    /// Left-nested concatenation; `ε` for an empty list.
    pub fn concat_all(parts: impl IntoIterator<Item = RegexFormula>) -> Self {
        parts.into_iter().reduce(Self::then).unwrap_or(Epsilon)
    }

    /// Left-nested disjunction; `∅` for an empty list.
    pub fn disj_all(parts: impl IntoIterator<Item = RegexFormula>) -> Self {
        parts.into_iter().reduce(Self::or).unwrap_or(Empty)
    }

    /// Literal string as a concatenation of symbols.
    pub fn literal(text: &str) -> Self {
        Self::concat_all(text.chars().map(Symbol))
    }

    pub fn vars(&self) -> BTreeSet<VarName> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<VarName>) {
        match self {
            Empty | Epsilon | Symbol(_) | Wildcard => {}
            Disjunction(a, b) | Concatenation(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Star(a) => a.collect_vars(out),
            Binding(x, a) => {
                out.insert(x.clone());
                a.collect_vars(out);
            }
        }
    }

    /// Node count `|α|`.
    pub fn size(&self) -> usize {
        match self {
            Empty | Epsilon | Symbol(_) | Wildcard => 1,
            Disjunction(a, b) | Concatenation(a, b) => 1 + a.size() + b.size(),
            Star(a) | Binding(_, a) => 1 + a.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Empty | Epsilon | Symbol(_) | Wildcard => 1,
            Disjunction(a, b) | Concatenation(a, b) => 1 + a.depth().max(b.depth()),
            Star(a) | Binding(_, a) => 1 + a.depth(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Disjunction(..) => 0,
            Concatenation(..) => 1,
            Star(_) => 2,
            _ => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.precedence() < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Empty => f.write_str("∅")?,
            Epsilon => f.write_str("ε")?,
            Wildcard => f.write_str(".")?,
            Symbol(c) => write_symbol(f, *c)?,
            // Both operators parse left-associatively, so a nested right
            // operand of the same kind needs parentheses.
            Disjunction(a, b) => {
                a.fmt_prec(f, 0)?;
                f.write_str(" | ")?;
                b.fmt_prec(f, 1)?;
            }
            Concatenation(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" ")?;
                b.fmt_prec(f, 2)?;
            }
            Star(a) => {
                a.fmt_prec(f, 2)?;
                f.write_str("*")?;
            }
            Binding(x, a) => {
                write!(f, "{x}{{")?;
                a.fmt_prec(f, 0)?;
                f.write_str("}")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Characters with a meaning in the concrete syntax; they need a backslash
/// to be read as literal symbols.
pub(crate) fn is_special(c: char) -> bool {
    matches!(
        c,
        '{' | '}' | '(' | ')' | '|' | '*' | '+' | '.' | '\\' | '/' | '∨' | '·' | 'Σ' | 'ε' | '∅'
    ) || c.is_whitespace()
}

fn write_symbol(f: &mut fmt::Formatter<'_>, c: char) -> fmt::Result {
    match c {
        '\n' => f.write_str("\\n"),
        '\t' => f.write_str("\\t"),
        '\r' => f.write_str("\\r"),
        c if is_special(c) => write!(f, "\\{c}"),
        // A name character printed right before a binding could be read
        // as part of the variable name; the printer always separates
        // concatenated items with a space, so plain output is safe.
        c => write!(f, "{c}"),
    }
}

/// Prints in the concrete syntax accepted by [`parse_regex_formula`].
impl fmt::Display for RegexFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::var;

    #[test]
    fn vars_and_size() {
        let alpha = parse_regex_formula("Σ* x{Σ* y{Σ*} Σ*} Σ*").unwrap();
        assert_eq!(alpha.vars(), [var("x"), var("y")].into_iter().collect());
        assert!(parse_regex_formula("a").unwrap().vars().is_empty());
        assert_eq!(parse_regex_formula("a b").unwrap().size(), 3);
    }

    #[test]
    fn printing_escapes_specials() {
        let f = RegexFormula::literal("a.b c");
        assert_eq!(f.to_string(), "a \\. b \\  c");
        assert_eq!(parse_regex_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn printing_keeps_right_nesting() {
        let right = Symbol('a').then(Symbol('b').then(Symbol('c')));
        assert_eq!(right.to_string(), "a (b c)");
        assert_eq!(parse_regex_formula(&right.to_string()).unwrap(), right);
        let alt = Symbol('a').or(Symbol('b').or(Symbol('c')));
        assert_eq!(parse_regex_formula(&alt.to_string()).unwrap(), alt);
    }
}
