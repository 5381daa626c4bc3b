//! Natural join of functional automata as a product over consistent pairs.
//!
//! A pair `(q1,q2)` is consistent when `c_{q1}` and `c_{q2}` agree on the
//! shared variables; its configuration is the union of both. Edges:
//!
//! 1. `ε` from the initial pair into `E1(q01) × E2(q02)`;
//! 2. a terminal step into `T1^σ(p1) × T2^σ(p2)`, where a wildcard on one
//!    side synchronizes with a concrete symbol on the other and two
//!    wildcards give a wildcard;
//! 3. an operation edge into every pair of `VE1(p1) × VE2(p2)` whose
//!    configuration differs, labeled with exactly the operations that turn
//!    one configuration into the other.
//!
//! Differently ordered operation sequences on the two sides therefore meet
//! in one set-labeled edge.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::ops::functional_trimmed;
use super::CompileError;
use crate::model::{Configuration, VarName, VarState};
use crate::vsa::{compute_closures, compute_configurations, Label, StateId, VSetAutomaton, VarOp};

struct Side {
    a: VSetAutomaton,
    configs: Vec<Configuration>,
    /// Position of each of this side's variables in the joint variable list.
    slots: Vec<usize>,
    eps: Vec<Vec<StateId>>,
    var_eps: Vec<Vec<StateId>>,
}

impl Side {
    fn new(a: VSetAutomaton, joint: &[VarName]) -> Result<Self, CompileError> {
        let configs = compute_configurations(&a)?.configs().to_vec();
        let slots = a
            .vars()
            .iter()
            .map(|v| {
                joint
                    .binary_search(v)
                    .expect("joint list contains all variables")
            })
            .collect();
        let closures = compute_closures(&a, &[]);
        let (eps, var_eps) = (closures.eps, closures.var_eps);
        Ok(Self {
            a,
            configs,
            slots,
            eps,
            var_eps,
        })
    }
}

/// Joint configuration of a pair, or `None` when inconsistent.
fn combine(l: &Side, r: &Side, p: (StateId, StateId), width: usize) -> Option<Configuration> {
    let mut out = vec![None; width];
    for (side, q) in [(l, p.0), (r, p.1)] {
        for (i, &slot) in side.slots.iter().enumerate() {
            let s = side.configs[q].0[i];
            match out[slot] {
                Some(existing) if existing != s => return None,
                _ => out[slot] = Some(s),
            }
        }
    }
    Some(Configuration(
        out.into_iter()
            .map(|s| s.expect("every joint variable belongs to a side"))
            .collect(),
    ))
}

fn diff(vars: &[VarName], from: &Configuration, to: &Configuration) -> Option<Label> {
    let mut ops = Vec::new();
    for (i, v) in vars.iter().enumerate() {
        match (from.0[i], to.0[i]) {
            (a, b) if a == b => {}
            (VarState::Waiting, VarState::Open) => ops.push(VarOp::open(v.clone())),
            (VarState::Open, VarState::Closed) => ops.push(VarOp::close(v.clone())),
            (VarState::Waiting, VarState::Closed) => {
                ops.push(VarOp::open(v.clone()));
                ops.push(VarOp::close(v.clone()));
            }
            _ => return None,
        }
    }
    Some(Label::ops(ops))
}

struct Product {
    ids: HashMap<(StateId, StateId), StateId>,
    configs: Vec<Configuration>,
    queue: VecDeque<(StateId, StateId)>,
    out: VSetAutomaton,
}

impl Product {
    /// State id of a consistent pair, created and queued on first sight.
    fn intern(&mut self, pair: (StateId, StateId), config: Configuration) -> StateId {
        if let Some(&id) = self.ids.get(&pair) {
            return id;
        }
        let id = self.out.add_state();
        self.ids.insert(pair, id);
        self.configs.push(config);
        self.queue.push_back(pair);
        id
    }
}

/// `A1 ⋈ A2` over `V1 ∪ V2`.
pub fn join(a1: &VSetAutomaton, a2: &VSetAutomaton) -> Result<VSetAutomaton, CompileError> {
    let a1 = functional_trimmed(a1)?;
    let a2 = functional_trimmed(a2)?;
    let all: BTreeSet<VarName> = a1.vars().union(a2.vars()).cloned().collect();
    if a1.is_empty_language() || a2.is_empty_language() {
        return Ok(VSetAutomaton::empty(all));
    }
    let joint: Vec<VarName> = all.iter().cloned().collect();
    let l = Side::new(a1, &joint)?;
    let r = Side::new(a2, &joint)?;
    let width = joint.len();

    let mut b = Product {
        ids: HashMap::new(),
        configs: Vec::new(),
        queue: VecDeque::new(),
        out: VSetAutomaton::with_states(all, 1, 0, 0),
    };
    let init = (l.a.initial(), r.a.initial());
    b.ids.insert(init, 0);
    b.configs
        .push(combine(&l, &r, init, width).expect("initial pair is all-w"));
    b.queue.push_back(init);

    let mut edges: BTreeSet<(StateId, Label, StateId)> = BTreeSet::new();

    // rule 1
    for &q1 in &l.eps[init.0] {
        for &q2 in &r.eps[init.1] {
            if (q1, q2) == init {
                continue;
            }
            if let Some(c) = combine(&l, &r, (q1, q2), width) {
                edges.insert((0, Label::Epsilon, b.intern((q1, q2), c)));
            }
        }
    }

    while let Some(p @ (p1, p2)) = b.queue.pop_front() {
        let pid = b.ids[&p];
        // rule 2
        for t1 in l.a.outgoing(p1).filter(|t| t.label.is_terminal()) {
            for t2 in r.a.outgoing(p2).filter(|t| t.label.is_terminal()) {
                let label = match (&t1.label, &t2.label) {
                    (Label::Symbol(a), Label::Symbol(b)) if a == b => Label::Symbol(*a),
                    (Label::Symbol(a), Label::Any) | (Label::Any, Label::Symbol(a)) => {
                        Label::Symbol(*a)
                    }
                    (Label::Any, Label::Any) => Label::Any,
                    _ => continue,
                };
                for &q1 in &l.eps[t1.to] {
                    for &q2 in &r.eps[t2.to] {
                        if let Some(c) = combine(&l, &r, (q1, q2), width) {
                            edges.insert((pid, label.clone(), b.intern((q1, q2), c)));
                        }
                    }
                }
            }
        }
        // rule 3
        let cp = b.configs[pid].clone();
        for &q1 in &l.var_eps[p1] {
            for &q2 in &r.var_eps[p2] {
                let Some(c) = combine(&l, &r, (q1, q2), width) else {
                    continue;
                };
                if c == cp {
                    continue;
                }
                let Some(label) = diff(&joint, &cp, &c) else {
                    continue;
                };
                edges.insert((pid, label, b.intern((q1, q2), c)));
            }
        }
    }

    let Product { ids, mut out, .. } = b;
    let fin = (l.a.final_state(), r.a.final_state());
    let Some(&fid) = ids.get(&fin) else {
        return Ok(VSetAutomaton::empty(out.vars().clone()));
    };
    out.set_final(fid);
    for (from, label, to) in edges {
        out.add_transition(from, label, to);
    }
    Ok(out.trim())
}

/// Left fold of [`join`], trimming after each step.
pub fn join_many(operands: &[VSetAutomaton]) -> Result<VSetAutomaton, CompileError> {
    let (first, rest) = operands.split_first().ok_or(CompileError::NoOperands)?;
    let mut acc = functional_trimmed(first)?;
    for a in rest {
        acc = join(&acc, a)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compile::compile_regex;
    use crate::formula::parse_regex_formula;
    use crate::vsa::check_functional_vsa;

    fn compile(s: &str) -> VSetAutomaton {
        compile_regex(&parse_regex_formula(s).unwrap()).unwrap()
    }

    #[test]
    fn join_is_functional() {
        let j = join(&compile("x{a} Σ*"), &compile("Σ* y{a}")).unwrap();
        assert!(check_functional_vsa(&j).is_ok());
        assert_eq!(j.vars().len(), 2);
    }

    #[test]
    fn conflicting_operation_orders_meet() {
        let j = join(&compile("x{y{a}}"), &compile("y{x{a}}")).unwrap();
        assert!(!j.is_empty_language());
        assert!(j
            .transitions()
            .iter()
            .any(|t| matches!(&t.label, Label::Ops(ops) if ops.len() == 2)));
    }

    #[test]
    fn join_with_empty_is_empty() {
        let j = join(&compile("x{a}"), &compile("∅")).unwrap();
        assert!(j.is_empty_language());
    }
}
