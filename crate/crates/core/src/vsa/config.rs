use std::collections::VecDeque;

use super::{Label, StateId, VSetAutomaton, VarOp, VsaError};
use crate::model::{Configuration, VarName, VarState};

/// The configuration `c_q` of every state of a functional automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigurationTable {
    vars: Vec<VarName>,
    configs: Vec<Configuration>,
}

impl ConfigurationTable {
    pub fn vars(&self) -> &[VarName] {
        &self.vars
    }

    pub fn get(&self, q: StateId) -> &Configuration {
        &self.configs[q]
    }

    pub fn configs(&self) -> &[Configuration] {
        &self.configs
    }

    pub fn index_of(&self, var: &VarName) -> Option<usize> {
        self.vars.binary_search(var).ok()
    }

    /// `c_q(x)`.
    pub fn state(&self, q: StateId, var_index: usize) -> VarState {
        self.configs[q].0[var_index]
    }
}

/// Applies an operation set: all opens, then all closes, so `{⊢x,⊣x}`
/// takes `x` from `w` to `c`.
pub(crate) fn apply_ops(
    vars: &[VarName],
    config: &Configuration,
    ops: &[VarOp],
    target: StateId,
) -> Result<Configuration, VsaError> {
    let mut next = config.clone();
    for op in ops {
        let i = vars
            .binary_search(&op.var)
            .map_err(|_| VsaError::UnknownVariable(op.var.clone()))?;
        next.0[i] = op
            .apply(next.0[i])
            .ok_or_else(|| VsaError::IllegalOperation {
                state: target,
                var: op.var.clone(),
                op: match op.kind {
                    super::OpKind::Open => "open",
                    super::OpKind::Close => "close",
                },
                current: next.0[i].letter(),
            })?;
    }
    Ok(next)
}

/// Breadth-first propagation of configurations from the all-`w` initial
/// state. Every state must be reachable and reached consistently.
pub fn compute_configurations(a: &VSetAutomaton) -> Result<ConfigurationTable, VsaError> {
    let vars = a.var_list();
    let mut configs: Vec<Option<Configuration>> = vec![None; a.num_states()];
    configs[a.initial()] = Some(Configuration::uniform(vars.len(), VarState::Waiting));
    let mut queue = VecDeque::from([a.initial()]);
    while let Some(p) = queue.pop_front() {
        let cp = configs[p].clone().expect("queued states are configured");
        for t in a.outgoing(p) {
            let cq = match &t.label {
                Label::Ops(ops) => apply_ops(&vars, &cp, ops, t.to)?,
                _ => cp.clone(),
            };
            match &configs[t.to] {
                None => {
                    configs[t.to] = Some(cq);
                    queue.push_back(t.to);
                }
                Some(existing) if *existing != cq => {
                    let i = (0..vars.len())
                        .find(|&i| existing.0[i] != cq.0[i])
                        .expect("configurations differ somewhere");
                    return Err(VsaError::Inconsistent {
                        state: t.to,
                        var: vars[i].clone(),
                        first: existing.0[i].letter(),
                        second: cq.0[i].letter(),
                    });
                }
                Some(_) => {}
            }
        }
    }
    let configs = configs
        .into_iter()
        .enumerate()
        .map(|(q, c)| c.ok_or(VsaError::Unreachable(q)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ConfigurationTable { vars, configs })
}

/// Trims, then checks that configurations are consistent and the final
/// state closes every variable. Returns the trimmed automaton with its
/// table.
pub fn check_functional_vsa(
    a: &VSetAutomaton,
) -> Result<(VSetAutomaton, ConfigurationTable), VsaError> {
    let trimmed = a.trim();
    if trimmed.is_empty_language() {
        let table = ConfigurationTable {
            vars: trimmed.var_list(),
            configs: Vec::new(),
        };
        return Ok((trimmed, table));
    }
    let table = compute_configurations(&trimmed)?;
    let qf = trimmed.final_state();
    if let Some(i) = (0..table.vars.len()).find(|&i| table.state(qf, i) != VarState::Closed) {
        return Err(VsaError::NotClosedAtFinal {
            state: qf,
            var: table.vars[i].clone(),
        });
    }
    Ok((trimmed, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vsa::fixtures::*;
    use std::collections::BTreeSet;

    #[test]
    fn a_fun_configurations() {
        let t = compute_configurations(&a_fun()).unwrap();
        let letters: String = (0..3).map(|q| t.state(q, 0).letter()).collect();
        assert_eq!(letters, "woc");
        assert!(check_functional_vsa(&a_fun()).is_ok());
    }

    #[test]
    fn a_loop_is_inconsistent() {
        let err = compute_configurations(&a_loop()).unwrap_err();
        assert!(
            matches!(err, VsaError::Inconsistent { state: 0, .. }),
            "{err:?}"
        );
        assert!(check_functional_vsa(&a_loop()).is_err());
    }

    #[test]
    fn variable_free_automaton() {
        let mut a = VSetAutomaton::with_states(BTreeSet::new(), 2, 0, 1);
        a.add_transition(0, Label::Symbol('a'), 1);
        let t = compute_configurations(&a).unwrap();
        assert!(t.configs().iter().all(|c| c.0.is_empty()));
    }

    #[test]
    fn unclosed_variable_at_final() {
        let x = crate::model::var("x");
        let mut a = VSetAutomaton::with_states([x.clone()].into(), 2, 0, 1);
        a.add_transition(0, Label::open(x), 1);
        assert!(matches!(
            check_functional_vsa(&a),
            Err(VsaError::NotClosedAtFinal { .. })
        ));
    }

    #[test]
    fn close_before_open_is_illegal() {
        let x = crate::model::var("x");
        let mut a = VSetAutomaton::with_states([x.clone()].into(), 2, 0, 1);
        a.add_transition(0, Label::close(x), 1);
        assert!(matches!(
            compute_configurations(&a),
            Err(VsaError::IllegalOperation { .. })
        ));
    }

    #[test]
    fn open_close_set_in_one_step() {
        let x = crate::model::var("x");
        let mut a = VSetAutomaton::with_states([x.clone()].into(), 2, 0, 1);
        a.add_transition(0, Label::ops([VarOp::close(x.clone()), VarOp::open(x)]), 1);
        assert!(check_functional_vsa(&a).is_ok());
    }
}
