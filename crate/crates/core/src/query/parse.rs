//! Concrete query syntax.
//!
//! ```text
//! query  := cq ('UNION' cq)*
//! cq     := 'SELECT' ('(' ')' | name (',' name)*)
//!           'FROM' atom (',' atom)*
//!           ['WHERE' name '==' name ('AND' name '==' name)*]
//! atom   := '/' formula '/'
//! ```
//!
//! Keywords are case-insensitive. An atom ends at the first unescaped `/`;
//! its text, escapes included, goes to the formula parser, which reads
//! `\/` as a literal slash. Outside atoms, `--` starts a comment running
//! to the end of the line. Keywords cannot be used as variable names in
//! the select list or in equalities.

use std::collections::BTreeSet;

use super::{QueryError, RegexCQ, RegexUCQ};
use crate::formula::{check_functional_regex, parse_regex_formula, RegexFormula};
use crate::model::VarName;

pub fn parse_query(text: &str) -> Result<RegexUCQ, QueryError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let mut disjuncts = Vec::new();
    let mut first_projection: Option<BTreeSet<VarName>> = None;
    loop {
        p.skip_trivia();
        let select_at = p.pos;
        let q = p.cq()?;
        match &first_projection {
            None => first_projection = Some(q.projection.clone()),
            Some(y) if *y != q.projection => {
                return Err(p.error_at(select_at, "all disjuncts must select the same variables"))
            }
            Some(_) => {}
        }
        disjuncts.push(q);
        p.skip_trivia();
        if p.at_end() {
            break;
        }
        p.keyword("UNION")?;
    }
    Ok(RegexUCQ { disjuncts })
}

/// Reserved where a variable name is expected.
const KEYWORDS: [&str; 5] = ["SELECT", "FROM", "WHERE", "AND", "UNION"];

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error_at(&self, pos: usize, message: impl Into<String>) -> QueryError {
        let before = &self.chars[..pos.min(self.chars.len())];
        let line = before.iter().filter(|&&c| c == '\n').count() + 1;
        let column = before.iter().rev().take_while(|&&c| c != '\n').count() + 1;
        QueryError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> QueryError {
        self.error_at(self.pos, message)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_trivia(&mut self) {
        loop {
            while self.peek().is_some_and(char::is_whitespace) {
                self.pos += 1;
            }
            if self.chars[self.pos.min(self.chars.len())..].starts_with(&['-', '-']) {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.pos += 1;
                }
            } else {
                return;
            }
        }
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(VarName::is_name_char) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn keyword(&mut self, kw: &str) -> Result<(), QueryError> {
        self.skip_trivia();
        let start = self.pos;
        let w = self.word();
        if w.eq_ignore_ascii_case(kw) {
            Ok(())
        } else {
            self.pos = start;
            Err(self.error(format!("expected {kw}")))
        }
    }

    /// Consumes `kw` if it comes next.
    fn try_keyword(&mut self, kw: &str) -> bool {
        let start = self.pos;
        if self.keyword(kw).is_ok() {
            true
        } else {
            self.pos = start;
            false
        }
    }

    fn punct(&mut self, s: &str) -> bool {
        self.skip_trivia();
        let s: Vec<char> = s.chars().collect();
        if self.chars[self.pos..].starts_with(&s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn name(&mut self) -> Result<(VarName, usize), QueryError> {
        self.skip_trivia();
        let at = self.pos;
        let w = self.word();
        if KEYWORDS.iter().any(|k| w.eq_ignore_ascii_case(k)) {
            return Err(self.error_at(at, "expected a variable name"));
        }
        VarName::new(&w)
            .map(|v| (v, at))
            .map_err(|_| self.error_at(at, "expected a variable name"))
    }

    fn cq(&mut self) -> Result<RegexCQ, QueryError> {
        self.keyword("SELECT")?;
        let mut projection = Vec::new();
        if !self.punct("()") && !(self.punct("(") && self.punct(")")) {
            loop {
                projection.push(self.name()?);
                if !self.punct(",") {
                    break;
                }
            }
        }
        self.keyword("FROM")?;
        let mut atoms = Vec::new();
        loop {
            atoms.push(self.atom()?);
            if !self.punct(",") {
                break;
            }
        }
        let mut equalities = Vec::new();
        if self.try_keyword("WHERE") {
            loop {
                let x = self.name()?;
                if !self.punct("==") {
                    return Err(self.error("expected =="));
                }
                let y = self.name()?;
                equalities.push((x, y));
                if !self.try_keyword("AND") {
                    break;
                }
            }
        }

        let vars: BTreeSet<VarName> = atoms.iter().flat_map(|(a, _)| a.vars()).collect();
        let mut ys = BTreeSet::new();
        for (y, at) in &projection {
            if !vars.contains(y) {
                return Err(self.error_at(*at, format!("{y} does not occur in any atom")));
            }
            if !ys.insert(y.clone()) {
                return Err(self.error_at(*at, format!("{y} is selected twice")));
            }
        }
        for (v, at) in equalities.iter().flat_map(|(x, y)| [x, y]) {
            if !vars.contains(v) {
                return Err(self.error_at(*at, format!("{v} does not occur in any atom")));
            }
        }
        Ok(RegexCQ {
            projection: ys,
            atoms: atoms.into_iter().map(|(a, _)| a).collect(),
            equalities: equalities
                .into_iter()
                .map(|((x, _), (y, _))| (x, y))
                .collect(),
        })
    }

    fn atom(&mut self) -> Result<(RegexFormula, usize), QueryError> {
        self.skip_trivia();
        let open = self.pos;
        if self.peek() != Some('/') {
            return Err(self.error("expected /formula/"));
        }
        self.pos += 1;
        let mut text = String::new();
        // source offset of each formula character
        let mut origin = Vec::new();
        loop {
            match self.peek() {
                None => return Err(self.error_at(open, "unterminated formula")),
                Some('/') => break,
                Some('\\') if self.chars.get(self.pos + 1).is_some() => {
                    text.push('\\');
                    text.push(self.chars[self.pos + 1]);
                    origin.extend([self.pos, self.pos + 1]);
                    self.pos += 2;
                }
                Some(c) => {
                    text.push(c);
                    origin.push(self.pos);
                    self.pos += 1;
                }
            }
        }
        let close = self.pos;
        self.pos += 1;
        let f = parse_regex_formula(&text).map_err(|e| {
            let at = origin.get(e.position - 1).copied().unwrap_or(close);
            self.error_at(at, e.message)
        })?;
        if let Err(v) = check_functional_regex(&f) {
            let why: Vec<String> = v.iter().map(|v| v.to_string()).collect();
            return Err(self.error_at(
                open,
                format!("formula is not functional: {}", why.join(", ")),
            ));
        }
        Ok((f, open))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::var;

    fn syntax(text: &str) -> (usize, usize) {
        match parse_query(text) {
            Err(QueryError::Syntax { line, column, .. }) => (line, column),
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn single_atom() {
        let q = parse_query("SELECT x FROM /a* x{a*} a*/").unwrap();
        assert_eq!(q.disjuncts.len(), 1);
        assert_eq!(q.disjuncts[0].atoms.len(), 1);
        assert_eq!(q.projection(), &[var("x")].into());
    }

    #[test]
    fn six_atoms_and_keywords_in_any_case() {
        let q = parse_query(
            "select x from /Σ* x{Σ*} Σ*/, /y{Σ*} z{Σ*}/, /Σ* x{Σ*}/, \
             /y{Σ*}/, /z{Σ*}/, /Σ*/",
        )
        .unwrap();
        assert_eq!(q.disjuncts[0].atoms.len(), 6);
    }

    #[test]
    fn equalities_and_union() {
        let q = parse_query(
            "SELECT () FROM /x{Σ*} y{Σ*}/ WHERE x == y\n\
             -- second disjunct\n\
             UNION SELECT () FROM /x{a}/",
        )
        .unwrap();
        assert_eq!(q.disjuncts.len(), 2);
        assert_eq!(q.disjuncts[0].equalities, vec![(var("x"), var("y"))]);
        assert!(q.is_boolean());
    }

    #[test]
    fn escaped_slash() {
        let q = parse_query(r"SELECT x FROM /x{a\/b}/").unwrap();
        assert_eq!(
            q.disjuncts[0].atoms[0],
            RegexFormula::bind(var("x"), RegexFormula::literal("a/b"))
        );
    }

    #[test]
    fn display_round_trips() {
        let text = r"SELECT x, y FROM /x{a\/} Σ*/, /Σ* y{b}/ WHERE x == y AND y == x UNION SELECT x, y FROM /x{Σ} y{Σ}/";
        let q = parse_query(text).unwrap();
        assert_eq!(parse_query(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn errors_carry_locations() {
        assert_eq!(syntax("SELECT y FROM /x{a}/"), (1, 8));
        assert_eq!(syntax("SELECT x FROM\n  /x{a}x{a}/"), (2, 3));
        assert_eq!(syntax("SELECT x FROM /x{a(/"), (1, 20));
        assert_eq!(syntax("SELECT x FROM /x{a}"), (1, 15));
        assert_eq!(syntax("SELECT x FROM"), (1, 14));
        assert_eq!(syntax("SELECT () FROM /x{a}/ WHERE x == z"), (1, 34));
        assert_eq!(
            syntax("SELECT x FROM /x{a}/ UNION SELECT () FROM /a/"),
            (1, 28)
        );
        assert_eq!(syntax("SELECT x, x FROM /x{a}/"), (1, 11));
        assert_eq!(syntax("SELECT FROM /a/"), (1, 8));
        assert_eq!(syntax(""), (1, 1));
    }
}
