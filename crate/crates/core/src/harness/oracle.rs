//! Brute-force semantics: every candidate tuple is tried against every
//! ordering of its variable operations.

use std::collections::{BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use crate::formula::{match_ref_word, RegexFormula};
use crate::model::{Document, RefSymbol, RefWord, Span, SpanRelation, SpanTuple, VarName};
use crate::vsa::{Label, OpKind, VSetAutomaton};

pub const MAX_ORACLE_VARS: usize = 3;
pub const MAX_ORACLE_DOC: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle supports at most {MAX_ORACLE_VARS} variables, got {0}")]
    TooManyVariables(usize),
    #[error("oracle supports documents of at most {MAX_ORACLE_DOC} symbols, got {0}")]
    DocumentTooLong(usize),
}

fn guard(vars: usize, d: &Document) -> Result<(), OracleError> {
    if vars > MAX_ORACLE_VARS {
        return Err(OracleError::TooManyVariables(vars));
    }
    if d.len() > MAX_ORACLE_DOC {
        return Err(OracleError::DocumentTooLong(d.len()));
    }
    Ok(())
}

/// All tuples over `vars` for a document of length `len`.
pub fn all_tuples(vars: &BTreeSet<VarName>, len: usize) -> Vec<SpanTuple> {
    let spans = Document::from_symbols(vec!['?'; len]).all_spans();
    let mut out = vec![SpanTuple::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|t| {
                spans.iter().map(move |s| {
                    let mut t = t.clone();
                    t.insert(v.clone(), *s);
                    t
                })
            })
            .collect();
    }
    out
}

/// Orderings of a boundary's operations in which each variable opens
/// before it closes.
fn orderings(ops: &[RefSymbol]) -> Vec<Vec<RefSymbol>> {
    if ops.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..ops.len() {
        let head = &ops[i];
        if let RefSymbol::Close(v) = head {
            if ops.contains(&RefSymbol::Open(v.clone())) {
                continue;
            }
        }
        let rest: Vec<RefSymbol> = ops
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, s)| s.clone())
            .collect();
        for mut tail in orderings(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// Every valid ref-word `r` with `clean(r) = d` that denotes `tuple`.
pub fn ref_words_for(tuple: &SpanTuple, d: &Document) -> Vec<RefWord> {
    let n = d.len();
    let mut at: Vec<Vec<RefSymbol>> = vec![Vec::new(); n + 2];
    for (v, s) in tuple.iter() {
        at[s.start].push(RefSymbol::Open(v.clone()));
        at[s.end].push(RefSymbol::Close(v.clone()));
    }
    let mut words = vec![Vec::new()];
    for p in 1..=n + 1 {
        let orders = orderings(&at[p]);
        words = words
            .into_iter()
            .flat_map(|w: Vec<RefSymbol>| {
                orders.iter().map(move |o| {
                    let mut w = w.clone();
                    w.extend(o.iter().cloned());
                    if let Some(c) = d.symbol(p) {
                        w.push(RefSymbol::Terminal(c));
                    }
                    w
                })
            })
            .collect();
    }
    words.into_iter().map(RefWord::new).collect()
}

fn brute_force(
    vars: &BTreeSet<VarName>,
    d: &Document,
    accepts: impl Fn(&RefWord) -> bool,
) -> Result<SpanRelation, OracleError> {
    guard(vars.len(), d)?;
    let mut rel = SpanRelation::new(vars.clone());
    for t in all_tuples(vars, d.len()) {
        if ref_words_for(&t, d).iter().any(&accepts) {
            rel.insert(t).expect("candidate tuples are total");
        }
    }
    Ok(rel)
}

/// `⟦α⟧(d)` from the ref-word semantics of the formula.
pub fn oracle_enumerate_formula(
    alpha: &RegexFormula,
    d: &Document,
) -> Result<SpanRelation, OracleError> {
    brute_force(&alpha.vars(), d, |r| match_ref_word(alpha, r))
}

/// `⟦A⟧(d)` by plain ε-NFA simulation over ref-words; an operation-set
/// edge reads its operations consecutively in canonical order.
pub fn oracle_enumerate_automaton(
    a: &VSetAutomaton,
    d: &Document,
) -> Result<SpanRelation, OracleError> {
    brute_force(a.vars(), d, |r| automaton_accepts(a, r))
}

pub fn automaton_accepts(a: &VSetAutomaton, word: &RefWord) -> bool {
    let w = word.symbols();
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut queue = VecDeque::from([(a.initial(), 0usize)]);
    seen.insert((a.initial(), 0));
    while let Some((q, i)) = queue.pop_front() {
        if q == a.final_state() && i == w.len() {
            return true;
        }
        for t in a.outgoing(q) {
            let next = match &t.label {
                Label::Epsilon => Some(i),
                Label::Symbol(c) => (w.get(i) == Some(&RefSymbol::Terminal(*c))).then_some(i + 1),
                Label::Any => matches!(w.get(i), Some(RefSymbol::Terminal(_))).then_some(i + 1),
                Label::Ops(ops) => {
                    let fits = ops.iter().enumerate().all(|(k, op)| {
                        let expected = match op.kind {
                            OpKind::Open => RefSymbol::Open(op.var.clone()),
                            OpKind::Close => RefSymbol::Close(op.var.clone()),
                        };
                        w.get(i + k) == Some(&expected)
                    });
                    fits.then_some(i + ops.len())
                }
            };
            if let Some(j) = next {
                if seen.insert((t.to, j)) {
                    queue.push_back((t.to, j));
                }
            }
        }
    }
    false
}

/// Relational operators on materialized relations.
pub mod relational {
    use super::*;

    pub fn project(r: &SpanRelation, y: &BTreeSet<VarName>) -> SpanRelation {
        let mut out = SpanRelation::new(y.clone());
        for t in r.iter() {
            out.insert(t.restrict(y))
                .expect("restriction is total on Y");
        }
        out
    }

    pub fn union(a: &SpanRelation, b: &SpanRelation) -> SpanRelation {
        let mut out = a.clone();
        for t in b.iter() {
            out.insert(t.clone()).expect("same variables");
        }
        out
    }

    /// Nested-loop natural join.
    pub fn join(a: &SpanRelation, b: &SpanRelation) -> SpanRelation {
        let vars: BTreeSet<VarName> = a.vars().union(b.vars()).cloned().collect();
        let shared: Vec<&VarName> = a.vars().intersection(b.vars()).collect();
        let mut out = SpanRelation::new(vars);
        for s in a.iter() {
            for t in b.iter() {
                if shared.iter().all(|v| s.get(v) == t.get(v)) {
                    let merged: SpanTuple = s
                        .iter()
                        .chain(t.iter())
                        .map(|(v, sp)| (v.clone(), *sp))
                        .collect();
                    out.insert(merged).expect("total on the union");
                }
            }
        }
        out
    }

    /// Keeps tuples whose selected pairs span equal strings.
    pub fn select_equal(
        r: &SpanRelation,
        selections: &[(VarName, VarName)],
        d: &Document,
    ) -> SpanRelation {
        let text = |s: Option<Span>| d.slice(s.expect("selection variable present")).unwrap();
        let mut out = SpanRelation::new(r.vars().clone());
        for t in r.iter() {
            if selections
                .iter()
                .all(|(x, y)| text(t.get(x)) == text(t.get(y)))
            {
                out.insert(t.clone()).expect("same variables");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_regex_formula;
    use crate::model::var;
    use crate::vsa::fixtures::*;

    #[test]
    fn prefix_infix_suffix_table() {
        let f = parse_regex_formula("a* x{a*} a*").unwrap();
        let r = oracle_enumerate_formula(&f, &Document::new("aaa")).unwrap();
        assert_eq!(r.len(), 10);
    }

    #[test]
    fn a_fun_table() {
        let r = oracle_enumerate_automaton(&a_fun(), &Document::new("aa")).unwrap();
        assert_eq!(r.len(), 6);
    }

    #[test]
    fn empty_document() {
        let f = parse_regex_formula("x{a*}").unwrap();
        let r = oracle_enumerate_formula(&f, &Document::new("")).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(
            r.iter().next().unwrap().get(&var("x")),
            Some(Span { start: 1, end: 1 })
        );
    }

    #[test]
    fn orderings_respect_open_before_close() {
        let ops = vec![
            RefSymbol::Open(var("x")),
            RefSymbol::Close(var("x")),
            RefSymbol::Open(var("y")),
        ];
        assert_eq!(orderings(&ops).len(), 3);
    }

    #[test]
    fn guard_rails() {
        let f = parse_regex_formula("x{a}").unwrap();
        assert!(oracle_enumerate_formula(&f, &Document::new("aaaaaaaaa")).is_err());
    }
}
