//! Variable-set automata over terminals, a wildcard, `ε` and sets of
//! variable operations.

mod closure;
mod config;
mod dump;
mod key;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::model::{VarName, VarState};

pub use closure::{compute_closures, ClosureTables};
pub use config::{check_functional_vsa, compute_configurations, ConfigurationTable};
pub use dump::{parse_dump, DumpError};
pub use key::{is_key_attribute, KeyVerdict, KeyWitness};

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VsaError {
    #[error("state {state}: variable {var} reaches it both {first} and {second}")]
    Inconsistent {
        state: StateId,
        var: VarName,
        first: char,
        second: char,
    },
    #[error("transition into state {state}: cannot {op} variable {var} in state {current}")]
    IllegalOperation {
        state: StateId,
        var: VarName,
        op: &'static str,
        current: char,
    },
    #[error("variable {var} is not closed in the final state {state}")]
    NotClosedAtFinal { state: StateId, var: VarName },
    #[error("state {0} is not reachable from the initial state")]
    Unreachable(StateId),
    #[error("variable {0} is not a variable of the automaton")]
    UnknownVariable(VarName),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpKind {
    Open,
    Close,
}

/// A single variable operation. The derived order puts every open before
/// every close, and orders by variable name within each kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarOp {
    pub kind: OpKind,
    pub var: VarName,
}

impl VarOp {
    pub fn open(var: VarName) -> Self {
        Self {
            kind: OpKind::Open,
            var,
        }
    }

    pub fn close(var: VarName) -> Self {
        Self {
            kind: OpKind::Close,
            var,
        }
    }

    /// State of the variable after applying the operation, if legal.
    pub fn apply(&self, state: VarState) -> Option<VarState> {
        match (self.kind, state) {
            (OpKind::Open, VarState::Waiting) => Some(VarState::Open),
            (OpKind::Close, VarState::Open) => Some(VarState::Closed),
            _ => None,
        }
    }
}

impl fmt::Display for VarOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            OpKind::Open => write!(f, "⊢{}", self.var),
            OpKind::Close => write!(f, "⊣{}", self.var),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Epsilon,
    Symbol(char),
    /// Any single document symbol.
    Any,
    /// A nonempty set of operations, kept sorted and duplicate-free.
    Ops(Vec<VarOp>),
}

impl Label {
    /// Set label from arbitrary operations; the empty set becomes `ε`.
    pub fn ops(ops: impl IntoIterator<Item = VarOp>) -> Self {
        let set: BTreeSet<VarOp> = ops.into_iter().collect();
        if set.is_empty() {
            Label::Epsilon
        } else {
            Label::Ops(set.into_iter().collect())
        }
    }

    pub fn open(var: VarName) -> Self {
        Label::Ops(vec![VarOp::open(var)])
    }

    pub fn close(var: VarName) -> Self {
        Label::Ops(vec![VarOp::close(var)])
    }

    /// Reads a terminal (symbol or wildcard).
    pub fn is_terminal(&self) -> bool {
        matches!(self, Label::Symbol(_) | Label::Any)
    }

    pub fn matches(&self, c: char) -> bool {
        match self {
            Label::Symbol(s) => *s == c,
            Label::Any => true,
            _ => false,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Epsilon => f.write_str("ε"),
            Label::Symbol(c) => write!(f, "{c}"),
            Label::Any => f.write_str("Σ"),
            Label::Ops(ops) => {
                let parts: Vec<String> = ops.iter().map(|o| o.to_string()).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub from: StateId,
    pub label: Label,
    pub to: StateId,
}

/// Automaton with dense state ids, one initial and one final state, and
/// forward/backward adjacency over the transition list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VSetAutomaton {
    vars: BTreeSet<VarName>,
    initial: StateId,
    final_state: StateId,
    transitions: Vec<Transition>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
}

impl VSetAutomaton {
    /// An automaton with `states` states and no transitions.
    pub fn with_states(
        vars: BTreeSet<VarName>,
        states: usize,
        initial: StateId,
        final_state: StateId,
    ) -> Self {
        assert!(
            initial < states && final_state < states,
            "state out of range"
        );
        Self {
            vars,
            initial,
            final_state,
            transitions: Vec::new(),
            outgoing: vec![Vec::new(); states],
            incoming: vec![Vec::new(); states],
        }
    }

    /// The canonical automaton with empty language: two states, no edges.
    pub fn empty(vars: BTreeSet<VarName>) -> Self {
        Self::with_states(vars, 2, 0, 1)
    }

    pub fn add_state(&mut self) -> StateId {
        self.outgoing.push(Vec::new());
        self.incoming.push(Vec::new());
        self.outgoing.len() - 1
    }

    pub fn add_transition(&mut self, from: StateId, label: Label, to: StateId) {
        assert!(
            from < self.num_states() && to < self.num_states(),
            "state out of range"
        );
        let idx = self.transitions.len();
        self.transitions.push(Transition { from, label, to });
        self.outgoing[from].push(idx);
        self.incoming[to].push(idx);
    }

    pub fn set_initial(&mut self, q: StateId) {
        self.initial = q;
    }

    pub fn set_final(&mut self, q: StateId) {
        self.final_state = q;
    }

    pub fn set_vars(&mut self, vars: BTreeSet<VarName>) {
        self.vars = vars;
    }

    /// Copies all states and transitions of `other` into `self`, returning
    /// the id offset of the copied states.
    pub fn embed(&mut self, other: &VSetAutomaton) -> StateId {
        let offset = self.num_states();
        for _ in 0..other.num_states() {
            self.add_state();
        }
        for t in &other.transitions {
            self.add_transition(t.from + offset, t.label.clone(), t.to + offset);
        }
        offset
    }

    pub fn vars(&self) -> &BTreeSet<VarName> {
        &self.vars
    }

    /// Variables in ascending name order; configuration vectors index into
    /// this list.
    pub fn var_list(&self) -> Vec<VarName> {
        self.vars.iter().cloned().collect()
    }

    pub fn num_states(&self) -> usize {
        self.outgoing.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn final_state(&self) -> StateId {
        self.final_state
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn outgoing(&self, q: StateId) -> impl Iterator<Item = &Transition> {
        self.outgoing[q].iter().map(move |&i| &self.transitions[i])
    }

    pub fn incoming(&self, q: StateId) -> impl Iterator<Item = &Transition> {
        self.incoming[q].iter().map(move |&i| &self.transitions[i])
    }

    /// Concrete symbols on transitions.
    pub fn symbols(&self) -> BTreeSet<char> {
        self.transitions
            .iter()
            .filter_map(|t| match t.label {
                Label::Symbol(c) => Some(c),
                _ => None,
            })
            .collect()
    }

    /// True when no transitions exist, or the final state cannot be reached.
    pub fn is_empty_language(&self) -> bool {
        !self.reachable_from_initial()[self.final_state]
    }

    fn search(&self, start: StateId, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(q) = queue.pop_front() {
            let edges = if forward {
                &self.outgoing[q]
            } else {
                &self.incoming[q]
            };
            for &i in edges {
                let t = &self.transitions[i];
                let next = if forward { t.to } else { t.from };
                if !seen[next] {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
        seen
    }

    pub fn reachable_from_initial(&self) -> Vec<bool> {
        self.search(self.initial, true)
    }

    pub fn coreachable_to_final(&self) -> Vec<bool> {
        self.search(self.final_state, false)
    }

    /// Keeps only states that lie on some path from the initial to the final
    /// state, renumbering densely in the original order and dropping
    /// duplicate transitions.
    pub fn trim(&self) -> VSetAutomaton {
        let fwd = self.reachable_from_initial();
        let bwd = self.coreachable_to_final();
        if !fwd[self.final_state] {
            return Self::empty(self.vars.clone());
        }
        let mut map = vec![usize::MAX; self.num_states()];
        let mut n = 0;
        for q in 0..self.num_states() {
            if fwd[q] && bwd[q] {
                map[q] = n;
                n += 1;
            }
        }
        let mut out = Self::with_states(
            self.vars.clone(),
            n,
            map[self.initial],
            map[self.final_state],
        );
        let mut seen = BTreeSet::new();
        for t in &self.transitions {
            let (a, b) = (map[t.from], map[t.to]);
            if a != usize::MAX && b != usize::MAX && seen.insert((a, t.label.clone(), b)) {
                out.add_transition(a, t.label.clone(), b);
            }
        }
        out
    }

    pub fn is_trimmed(&self) -> bool {
        let fwd = self.reachable_from_initial();
        let bwd = self.coreachable_to_final();
        fwd.iter().zip(&bwd).all(|(a, b)| *a && *b)
    }
}

impl fmt::Display for VSetAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&dump::to_dump(self))
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::model::var;

    #[test]
    fn trim_keeps_a_fun() {
        let a = a_fun();
        assert_eq!(a.trim(), a);
        assert!(a.is_trimmed());
    }

    #[test]
    fn trim_drops_isolated_state() {
        let mut a = a_fun();
        let extra = a.add_state();
        a.add_transition(extra, Label::Symbol('b'), extra);
        let t = a.trim();
        assert_eq!(t.num_states(), 3);
        assert_eq!(t, a_fun());
    }

    #[test]
    fn trim_unreachable_final_gives_empty() {
        let mut a = VSetAutomaton::with_states(BTreeSet::new(), 3, 0, 2);
        a.add_transition(0, Label::Symbol('a'), 1);
        let t = a.trim();
        assert_eq!(t, VSetAutomaton::empty(BTreeSet::new()));
        assert!(t.is_empty_language());
    }

    #[test]
    fn op_order_is_opens_first() {
        let l = Label::ops([
            VarOp::close(var("a")),
            VarOp::open(var("z")),
            VarOp::open(var("b")),
        ]);
        assert_eq!(l.to_string(), "{⊢b,⊢z,⊣a}");
        assert_eq!(Label::ops([]), Label::Epsilon);
    }
}
