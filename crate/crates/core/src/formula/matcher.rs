//! Direct ref-word semantics of formulas, used by oracles and tests.
//!
//! Deliberately independent of the automaton compiler: a formula is read as
//! an ordinary regular expression over terminals and `⊢x`/`⊣x` letters.

use std::collections::BTreeSet;

use super::RegexFormula;
use crate::model::{RefSymbol, RefWord};

/// True iff `word ∈ R(α)`.
pub fn match_ref_word(alpha: &RegexFormula, word: &RefWord) -> bool {
    let syms = word.symbols();
    ends(alpha, syms, &BTreeSet::from([0])).contains(&syms.len())
}

/// Positions reachable after matching `alpha` from any of `starts`.
fn ends(alpha: &RegexFormula, w: &[RefSymbol], starts: &BTreeSet<usize>) -> BTreeSet<usize> {
    use RegexFormula::*;
    match alpha {
        Empty => BTreeSet::new(),
        Epsilon => starts.clone(),
        Symbol(c) => starts
            .iter()
            .filter(|&&i| w.get(i) == Some(&RefSymbol::Terminal(*c)))
            .map(|i| i + 1)
            .collect(),
        Wildcard => starts
            .iter()
            .filter(|&&i| matches!(w.get(i), Some(RefSymbol::Terminal(_))))
            .map(|i| i + 1)
            .collect(),
        Disjunction(a, b) => {
            let mut out = ends(a, w, starts);
            out.extend(ends(b, w, starts));
            out
        }
        Concatenation(a, b) => {
            let mid = ends(a, w, starts);
            if mid.is_empty() {
                mid
            } else {
                ends(b, w, &mid)
            }
        }
        Star(a) => {
            let mut seen = starts.clone();
            let mut frontier = starts.clone();
            while !frontier.is_empty() {
                let next = ends(a, w, &frontier);
                frontier = next.difference(&seen).copied().collect();
                seen.extend(frontier.iter().copied());
            }
            seen
        }
        Binding(x, a) => {
            let opened: BTreeSet<usize> = starts
                .iter()
                .filter(|&&i| matches!(w.get(i), Some(RefSymbol::Open(v)) if v == x))
                .map(|i| i + 1)
                .collect();
            if opened.is_empty() {
                return opened;
            }
            ends(a, w, &opened)
                .into_iter()
                .filter(|&i| matches!(w.get(i), Some(RefSymbol::Close(v)) if v == x))
                .map(|i| i + 1)
                .collect()
        }
    }
}

fn within(w: &[RefSymbol], max_terminals: usize, max_ops: usize) -> bool {
    let t = w
        .iter()
        .filter(|s| matches!(s, RefSymbol::Terminal(_)))
        .count();
    t <= max_terminals && w.len() - t <= max_ops
}

/// All ref-words of `R(α)` with at most `max_terminals` terminals and at
/// most `max_ops` variable operations; `.` ranges over `alphabet`.
pub fn bounded_ref_language(
    alpha: &RegexFormula,
    alphabet: &[char],
    max_terminals: usize,
    max_ops: usize,
) -> BTreeSet<RefWord> {
    lang(alpha, alphabet, max_terminals, max_ops)
        .into_iter()
        .map(RefWord::new)
        .collect()
}

type Lang = BTreeSet<Vec<RefSymbol>>;

fn product(a: &Lang, b: &Lang, mt: usize, mo: usize) -> Lang {
    let mut out = Lang::new();
    for x in a {
        for y in b {
            let mut w = x.clone();
            w.extend(y.iter().cloned());
            if within(&w, mt, mo) {
                out.insert(w);
            }
        }
    }
    out
}

fn lang(alpha: &RegexFormula, sigma: &[char], mt: usize, mo: usize) -> Lang {
    use RegexFormula::*;
    let single = |s: RefSymbol| -> Lang {
        let w = vec![s];
        if within(&w, mt, mo) {
            Lang::from([w])
        } else {
            Lang::new()
        }
    };
    match alpha {
        Empty => Lang::new(),
        Epsilon => Lang::from([vec![]]),
        Symbol(c) => single(RefSymbol::Terminal(*c)),
        Wildcard => sigma
            .iter()
            .flat_map(|c| single(RefSymbol::Terminal(*c)))
            .collect(),
        Disjunction(a, b) => {
            let mut out = lang(a, sigma, mt, mo);
            out.extend(lang(b, sigma, mt, mo));
            out
        }
        Concatenation(a, b) => product(&lang(a, sigma, mt, mo), &lang(b, sigma, mt, mo), mt, mo),
        Star(a) => {
            let inner = lang(a, sigma, mt, mo);
            let mut all = Lang::from([vec![]]);
            let mut frontier = all.clone();
            while !frontier.is_empty() {
                let next = product(&frontier, &inner, mt, mo);
                frontier = next.difference(&all).cloned().collect();
                all.extend(frontier.iter().cloned());
            }
            all
        }
        Binding(x, a) => {
            let open = single(RefSymbol::Open(x.clone()));
            let close = single(RefSymbol::Close(x.clone()));
            let body = product(&open, &lang(a, sigma, mt, mo), mt, mo);
            product(&body, &close, mt, mo)
        }
    }
}
