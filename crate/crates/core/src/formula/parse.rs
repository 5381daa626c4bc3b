//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! alt     := concat (('|' | '∨') concat)*
//! concat  := postfix (['·'] postfix)*
//! postfix := atom ('*' | '+')*
//! atom    := '(' [alt] ')' | name '{' [alt] '}' | '.' | 'Σ' | 'ε' | '∅'
//!          | '\' char | char
//! ```
//!
//! Unescaped whitespace is ignored. A name is a maximal run of name
//! characters directly followed by `{`; without the brace the run is read
//! as individual literal symbols.

use thiserror::Error;

use super::{is_special, RegexFormula};
use crate::model::VarName;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: {message}")]
pub struct ParseError {
    /// 1-based character offset into the input.
    pub position: usize,
    pub message: String,
}

pub fn parse_regex_formula(text: &str) -> Result<RegexFormula, ParseError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty formula"));
    }
    let f = p.alt()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error(format!("unexpected {:?}", p.chars[p.pos])));
    }
    Ok(f)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            position: self.pos + 1,
            message: message.into(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {c:?}")))
        }
    }

    fn alt(&mut self) -> Result<RegexFormula, ParseError> {
        let mut left = self.concat()?;
        while matches!(self.peek(), Some('|' | '∨')) {
            self.pos += 1;
            let right = self.concat()?;
            left = left.or(right);
        }
        Ok(left)
    }

    fn starts_item(c: char) -> bool {
        !matches!(c, '|' | '∨' | ')' | '}' | '*' | '+' | '·')
    }

    fn concat(&mut self) -> Result<RegexFormula, ParseError> {
        match self.peek() {
            Some(c) if Self::starts_item(c) => {}
            Some(c) => return Err(self.error(format!("expected an expression before {c:?}"))),
            None => return Err(self.error("unexpected end of formula")),
        }
        let mut left = self.postfix()?;
        loop {
            match self.peek() {
                Some('·') => {
                    self.pos += 1;
                    let right = self.postfix()?;
                    left = left.then(right);
                }
                Some(c) if Self::starts_item(c) => {
                    let right = self.postfix()?;
                    left = left.then(right);
                }
                _ => return Ok(left),
            }
        }
    }

    fn postfix(&mut self) -> Result<RegexFormula, ParseError> {
        let mut inner = self.atom()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    inner = inner.star();
                }
                Some('+') => {
                    self.pos += 1;
                    inner = inner.clone().then(inner.star());
                }
                _ => return Ok(inner),
            }
        }
    }

    /// Contents of a group or binding body; empty means `ε`.
    fn body(&mut self, close: char) -> Result<RegexFormula, ParseError> {
        if self.peek() == Some(close) {
            self.pos += 1;
            return Ok(RegexFormula::Epsilon);
        }
        let inner = self.alt()?;
        self.expect(close)?;
        Ok(inner)
    }

    fn atom(&mut self) -> Result<RegexFormula, ParseError> {
        let c = match self.peek() {
            Some(c) => c,
            None => return Err(self.error("unexpected end of formula")),
        };
        let start = self.pos;
        match c {
            '(' => {
                self.pos += 1;
                self.body(')')
            }
            '.' | 'Σ' => {
                self.pos += 1;
                Ok(RegexFormula::Wildcard)
            }
            'ε' => {
                self.pos += 1;
                Ok(RegexFormula::Epsilon)
            }
            '∅' => {
                self.pos += 1;
                Ok(RegexFormula::Empty)
            }
            '\\' => {
                self.pos += 1;
                let escaped = match self.chars.get(self.pos) {
                    Some('n') => '\n',
                    Some('t') => '\t',
                    Some('r') => '\r',
                    Some(&c) => c,
                    None => return Err(self.error("dangling escape")),
                };
                self.pos += 1;
                Ok(RegexFormula::Symbol(escaped))
            }
            c if VarName::is_name_char(c) => {
                let mut end = start;
                while end < self.chars.len() && VarName::is_name_char(self.chars[end]) {
                    end += 1;
                }
                if self.chars.get(end) == Some(&'{') {
                    let name: String = self.chars[start..end].iter().collect();
                    let var = VarName::new(&name).map_err(|_| ParseError {
                        position: start + 1,
                        message: format!("invalid variable name {name:?}"),
                    })?;
                    self.pos = end + 1;
                    let inner = self.body('}')?;
                    Ok(RegexFormula::bind(var, inner))
                } else {
                    self.pos += 1;
                    Ok(RegexFormula::Symbol(c))
                }
            }
            c if is_special(c) => Err(self.error(format!("unexpected {c:?}"))),
            c => {
                self.pos += 1;
                Ok(RegexFormula::Symbol(c))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::var;
    use RegexFormula::*;

    fn p(s: &str) -> RegexFormula {
        parse_regex_formula(s).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    #[test]
    fn infix_formula() {
        let a = || Symbol('a').star();
        let expected = a().then(RegexFormula::bind(var("x"), a())).then(a());
        assert_eq!(p("a* x{a*} a*"), expected);
        assert_eq!(p("a*x{a*}a*"), expected);
        assert_eq!(p("a*·x{a*}·a*"), expected);
    }

    #[test]
    fn non_functional_formula_parses() {
        let xa = || RegexFormula::bind(var("x"), Symbol('a'));
        assert_eq!(p("x{a} x{a}"), xa().then(xa()));
    }

    #[test]
    fn empty_is_an_error() {
        let e = parse_regex_formula("").unwrap_err();
        assert_eq!(e.position, 1);
        assert!(parse_regex_formula("   ").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_regex_formula("a|").unwrap_err().position, 3);
        assert_eq!(parse_regex_formula("(a").unwrap_err().position, 3);
        assert_eq!(parse_regex_formula("a)").unwrap_err().position, 2);
        assert_eq!(parse_regex_formula("*a").unwrap_err().position, 1);
        assert!(parse_regex_formula("x{a").is_err());
        assert!(parse_regex_formula("a\\").is_err());
    }

    #[test]
    fn shorthands() {
        assert_eq!(p("a+"), Symbol('a').then(Symbol('a').star()));
        assert_eq!(p("."), Wildcard);
        assert_eq!(p("Σ"), Wildcard);
        assert_eq!(p("()"), Epsilon);
        assert_eq!(p("x{}"), RegexFormula::bind(var("x"), Epsilon));
        assert_eq!(p("∅"), Empty);
        assert_eq!(p("a ∨ b"), p("a|b"));
        assert_eq!(p("\\. \\ "), Symbol('.').then(Symbol(' ')));
        assert_eq!(p("\\n"), Symbol('\n'));
    }

    #[test]
    fn name_runs() {
        // without a brace, a run of letters is a literal string
        assert_eq!(p("foo"), RegexFormula::literal("foo"));
        assert_eq!(p("Σ*x{foo}Σ*y{bar}").vars().len(), 2);
        assert_eq!(
            p("ab x1{b}"),
            RegexFormula::literal("ab").then(RegexFormula::bind(var("x1"), Symbol('b')))
        );
    }

    #[test]
    fn foo_bar_formula() {
        let f = p("Σ*((x{foo}Σ*y{bar})∨(y{bar}Σ*x{foo}))Σ*");
        assert_eq!(f.vars(), [var("x"), var("y")].into_iter().collect());
    }

    #[test]
    fn print_parse_round_trip() {
        for s in [
            "a* x{a*} a*",
            "Σ* x{Σ* y{Σ*} Σ*} Σ*",
            "(a|b)* (c|ε) ∅",
            "x{(a b)*}",
            "a (b (c d))",
            "\\{ \\} \\( \\| \\* \\+ \\/",
            "((a*)*)*",
        ] {
            let f = p(s);
            assert_eq!(p(&f.to_string()), f, "{s} printed as {f}");
        }
    }
}
