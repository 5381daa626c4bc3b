use std::collections::BTreeMap;

use super::{Label, StateId, VSetAutomaton};

/// `E(q)` over `ε` edges, `VE(q)` over `ε` and operation edges, and
/// `T^σ(p) = ⋃ E(δ(p,σ))` for each requested symbol (wildcard edges count
/// for every symbol). All sets are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureTables {
    pub eps: Vec<Vec<StateId>>,
    pub var_eps: Vec<Vec<StateId>>,
    pub step: BTreeMap<char, Vec<Vec<StateId>>>,
}

impl ClosureTables {
    pub fn e(&self, q: StateId) -> &[StateId] {
        &self.eps[q]
    }

    pub fn ve(&self, q: StateId) -> &[StateId] {
        &self.var_eps[q]
    }

    /// `T^σ(p)`; empty for symbols outside the requested alphabet.
    pub fn t(&self, sigma: char, p: StateId) -> &[StateId] {
        self.step
            .get(&sigma)
            .map(|t| t[p].as_slice())
            .unwrap_or(&[])
    }
}

/// Reflexive-transitive closure under the edges selected by `follow`, one
/// depth-first search per state.
pub(crate) fn closure_by(a: &VSetAutomaton, follow: impl Fn(&Label) -> bool) -> Vec<Vec<StateId>> {
    let n = a.num_states();
    let mut out = Vec::with_capacity(n);
    let mut mark = vec![usize::MAX; n];
    let mut stack = Vec::new();
    for q in 0..n {
        let mut set = vec![q];
        mark[q] = q;
        stack.push(q);
        while let Some(p) = stack.pop() {
            for t in a.outgoing(p) {
                if follow(&t.label) && mark[t.to] != q {
                    mark[t.to] = q;
                    set.push(t.to);
                    stack.push(t.to);
                }
            }
        }
        set.sort_unstable();
        out.push(set);
    }
    out
}

pub fn compute_closures(a: &VSetAutomaton, alphabet: &[char]) -> ClosureTables {
    let eps = closure_by(a, |l| matches!(l, Label::Epsilon));
    let var_eps = closure_by(a, |l| matches!(l, Label::Epsilon | Label::Ops(_)));
    let mut step = BTreeMap::new();
    for &sigma in alphabet {
        let table = (0..a.num_states())
            .map(|p| {
                let mut set: Vec<StateId> = a
                    .outgoing(p)
                    .filter(|t| t.label.matches(sigma))
                    .flat_map(|t| eps[t.to].iter().copied())
                    .collect();
                set.sort_unstable();
                set.dedup();
                set
            })
            .collect();
        step.insert(sigma, table);
    }
    ClosureTables { eps, var_eps, step }
}
