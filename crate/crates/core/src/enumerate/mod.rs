//! Polynomial-delay enumeration in radix order.
//!
//! All result words have length `ℓ+1`, so radix order is lexicographic
//! order over letters. The enumerator keeps the current word `κ_0 … κ_ℓ`
//! and the node sets `S_0 … S_ℓ`, where `S_0` is the start node and
//! `S_{i+1}` is the set of nodes reached from `S_i` by `κ_i`. Advancing finds
//! the last position with a larger available letter, switches to it, and
//! refills the suffix with minimal letters. The final letter is always the
//! configuration of `q_f`, so the search starts one position earlier.

mod match_nfa;

pub use match_nfa::{Letter, MatchNfa};

use crate::model::{Document, Span, SpanTuple, VarName, VarState};
use crate::vsa::{VSetAutomaton, VsaError};

pub struct Enumerator {
    nfa: Option<MatchNfa>,
    vars: Vec<VarName>,
    word: Vec<Letter>,
    sets: Vec<Vec<u32>>,
    /// Generation stamp per node for duplicate-free set unions.
    mark: Vec<u32>,
    generation: u32,
    started: bool,
    done: bool,
    max_set: usize,
}

/// Streams `⟦A⟧(d)` without duplicates in radix order of configuration
/// sequences.
pub fn enumerate(a: &VSetAutomaton, d: &Document) -> Result<Enumerator, VsaError> {
    let nfa = MatchNfa::build(a, d)?;
    Ok(Enumerator::new(nfa, a.var_list(), d.len()))
}

impl Enumerator {
    pub fn new(nfa: Option<MatchNfa>, vars: Vec<VarName>, doc_len: usize) -> Self {
        let nodes = nfa.as_ref().map_or(0, |n| n.num_nodes());
        Self {
            done: nfa.is_none(),
            nfa,
            vars,
            word: vec![0; doc_len + 1],
            sets: vec![Vec::new(); doc_len + 2],
            mark: vec![0; nodes],
            generation: 0,
            started: false,
            max_set: 0,
        }
    }

    pub fn match_nfa(&self) -> Option<&MatchNfa> {
        self.nfa.as_ref()
    }

    /// Largest node set seen so far; 1 means every step was deterministic.
    pub fn max_set_size(&self) -> usize {
        self.max_set
    }

    /// Fills `S_{i+1}` from `S_i` and `κ_i`.
    fn advance_set(&mut self, i: usize) {
        let nfa = self.nfa.as_ref().expect("nonempty");
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.generation = 1;
        }
        let letter = self.word[i];
        let (head, tail) = self.sets.split_at_mut(i + 1);
        let next = &mut tail[0];
        next.clear();
        for &g in &head[i] {
            for &t in nfa.successors(g, letter) {
                if self.mark[t as usize] != self.generation {
                    self.mark[t as usize] = self.generation;
                    next.push(t);
                }
            }
        }
        self.max_set = self.max_set.max(next.len());
    }

    /// Completes positions `from..=ℓ` with the smallest letters, given `S_from`.
    fn min_string(&mut self, from: usize) {
        let ell = self.word.len() - 1;
        for i in from..=ell {
            let nfa = self.nfa.as_ref().expect("nonempty");
            self.word[i] = self.sets[i]
                .iter()
                .filter_map(|&g| nfa.min_letter(g))
                .min()
                .expect("every node lies on an accepting path");
            if i < ell {
                self.advance_set(i);
            }
        }
    }

    /// Moves to the next word; false when exhausted.
    fn next_string(&mut self) -> bool {
        let ell = self.word.len() - 1;
        for i in (0..ell).rev() {
            let nfa = self.nfa.as_ref().expect("nonempty");
            let cur = self.word[i];
            if let Some(l) = self.sets[i]
                .iter()
                .filter_map(|&g| nfa.next_letter(g, cur))
                .min()
            {
                self.word[i] = l;
                self.advance_set(i);
                self.min_string(i + 1);
                return true;
            }
        }
        false
    }

    /// Advances and returns the next word of letters.
    pub fn next_word(&mut self) -> Option<&[Letter]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            let start = self.nfa.as_ref().expect("nonempty").start_node();
            self.sets[0].clear();
            self.sets[0].push(start);
            self.max_set = 1;
            self.min_string(0);
        } else if !self.next_string() {
            self.done = true;
            return None;
        }
        Some(&self.word)
    }

    /// Decodes the current word: a span starts at the first position where
    /// the variable is no longer waiting and ends at the first position
    /// where it is closed.
    fn decode(&self) -> SpanTuple {
        let nfa = self.nfa.as_ref().expect("nonempty");
        let mut tuple = SpanTuple::new();
        for (x, v) in self.vars.iter().enumerate() {
            let state = |l: usize| nfa.letter_config(self.word[l]).0[x];
            let start = (0..self.word.len())
                .find(|&l| state(l) != VarState::Waiting)
                .expect("variables are closed at the end");
            let end = (start..self.word.len())
                .find(|&l| state(l) == VarState::Closed)
                .expect("variables are closed at the end");
            tuple.insert(
                v.clone(),
                Span {
                    start: start + 1,
                    end: end + 1,
                },
            );
        }
        tuple
    }
}

impl Iterator for Enumerator {
    type Item = SpanTuple;

    fn next(&mut self) -> Option<SpanTuple> {
        self.next_word()?;
        Some(self.decode())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vsa::fixtures::*;

    fn letters(e: &mut Enumerator) -> Vec<String> {
        let mut out = Vec::new();
        while let Some(w) = e.next_word().map(|w| w.to_vec()) {
            let nfa = e.match_nfa().unwrap();
            out.push(
                w.iter()
                    .map(|&l| nfa.letter_config(l).0[0].letter())
                    .collect(),
            );
        }
        out
    }

    #[test]
    fn a_fun_order() {
        let mut e = enumerate(&a_fun(), &Document::new("aa")).unwrap();
        assert_eq!(letters(&mut e), ["wwc", "woc", "wcc", "ooc", "occ", "ccc"]);
        assert!(e.next().is_none());
    }

    #[test]
    fn diamond_single_tuple() {
        let mut e = enumerate(&diamond(), &Document::new("aaa")).unwrap();
        assert_eq!(letters(&mut e), ["oooc"]);
    }

    #[test]
    fn empty_document() {
        let e = enumerate(&a_fun(), &Document::new("")).unwrap();
        let all: Vec<SpanTuple> = e.collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].to_tsv(), "1..1");
    }

    #[test]
    fn no_result() {
        let mut e = enumerate(&a_fun(), &Document::new("b")).unwrap();
        assert!(e.next().is_none());
    }
}
