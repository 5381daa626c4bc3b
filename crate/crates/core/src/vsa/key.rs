//! Key-attribute test via a two-copy product.
//!
//! Both copies read the same document. At every boundary they must agree
//! on the state of `x`, so both runs produce the same span for `x`; a bit
//! records whether the full configurations have differed somewhere. An
//! accepting product run with the bit set is a pair of distinct tuples
//! that agree on `x`.

use std::collections::{HashMap, VecDeque};

use super::closure::closure_by;
use super::{check_functional_vsa, Label, StateId, VSetAutomaton, VsaError};
use crate::model::{ConfigSequence, Configuration, SpanTuple, VarName};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyWitness {
    pub document: String,
    pub first: SpanTuple,
    pub second: SpanTuple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeyVerdict {
    Key,
    NotKey(KeyWitness),
}

impl KeyVerdict {
    pub fn is_key(&self) -> bool {
        matches!(self, KeyVerdict::Key)
    }
}

type Node = (bool, StateId, StateId);

/// Symbol used for steps where both copies read a wildcard.
const FILLER: char = 'a';

/// Decides whether `μ(x) = μ′(x)` implies `μ = μ′` for all tuples of
/// `⟦A⟧(s)` over all documents `s`.
pub fn is_key_attribute(a: &VSetAutomaton, x: &VarName) -> Result<KeyVerdict, VsaError> {
    if !a.vars().contains(x) {
        return Err(VsaError::UnknownVariable(x.clone()));
    }
    let (a, table) = check_functional_vsa(a)?;
    if a.is_empty_language() {
        return Ok(KeyVerdict::Key);
    }
    let xi = table.index_of(x).expect("x is a variable of A");
    let c = |q: StateId| table.get(q);
    let agree = |p: StateId, q: StateId| c(p).0[xi] == c(q).0[xi];
    let ve = closure_by(&a, |l| matches!(l, Label::Epsilon | Label::Ops(_)));
    let qf = a.final_state();

    // node -> (predecessor, symbol read to get here)
    let mut parent: HashMap<Node, Option<(Node, char)>> = HashMap::new();
    let mut queue = VecDeque::new();
    for &p1 in &ve[a.initial()] {
        for &p2 in &ve[a.initial()] {
            if agree(p1, p2) {
                let node = (c(p1) != c(p2), p1, p2);
                if parent.insert(node, None).is_none() {
                    queue.push_back(node);
                }
            }
        }
    }
    let goal = (true, qf, qf);
    while let Some(node @ (bit, p1, p2)) = queue.pop_front() {
        if node == goal {
            break;
        }
        for t1 in a.outgoing(p1).filter(|t| t.label.is_terminal()) {
            for t2 in a.outgoing(p2).filter(|t| t.label.is_terminal()) {
                let sym = match (&t1.label, &t2.label) {
                    (Label::Symbol(s), Label::Symbol(r)) if s == r => *s,
                    (Label::Symbol(s), Label::Any) | (Label::Any, Label::Symbol(s)) => *s,
                    (Label::Any, Label::Any) => FILLER,
                    _ => continue,
                };
                for &q1 in &ve[t1.to] {
                    for &q2 in &ve[t2.to] {
                        if !agree(q1, q2) {
                            continue;
                        }
                        let next = (bit || c(q1) != c(q2), q1, q2);
                        if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                            e.insert(Some((node, sym)));
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
    }
    if !parent.contains_key(&goal) {
        return Ok(KeyVerdict::Key);
    }

    let mut path = vec![goal];
    let mut symbols = Vec::new();
    let mut cur = goal;
    while let Some(Some((prev, sym))) = parent.get(&cur) {
        symbols.push(*sym);
        path.push(*prev);
        cur = *prev;
    }
    path.reverse();
    symbols.reverse();
    let decode = |pick: fn(&Node) -> StateId| -> SpanTuple {
        let configs: Vec<Configuration> = path.iter().map(|n| c(pick(n)).clone()).collect();
        ConfigSequence::new(table.vars().to_vec(), configs)
            .expect("accepting runs of functional automata give valid sequences")
            .to_tuple()
    };
    Ok(KeyVerdict::NotKey(KeyWitness {
        document: symbols.into_iter().collect(),
        first: decode(|n| n.1),
        second: decode(|n| n.2),
    }))
}
