use std::collections::BTreeSet;

use super::CompileError;
use crate::model::VarName;
use crate::vsa::{check_functional_vsa, Label, VSetAutomaton};

/// `π_Y`: erases operations on variables outside `Y`.
pub fn project(a: &VSetAutomaton, y: &BTreeSet<VarName>) -> Result<VSetAutomaton, CompileError> {
    if let Some(v) = y.iter().find(|v| !a.vars().contains(*v)) {
        return Err(CompileError::UnknownVariable(v.clone()));
    }
    let mut out =
        VSetAutomaton::with_states(y.clone(), a.num_states(), a.initial(), a.final_state());
    for t in a.transitions() {
        let label = match &t.label {
            Label::Ops(ops) => Label::ops(ops.iter().filter(|o| y.contains(&o.var)).cloned()),
            other => other.clone(),
        };
        out.add_transition(t.from, label, t.to);
    }
    Ok(out.trim())
}

/// Fresh initial and final states linked by `ε` to every operand.
pub fn union(operands: &[VSetAutomaton]) -> Result<VSetAutomaton, CompileError> {
    let first = operands.first().ok_or(CompileError::NoOperands)?;
    for a in &operands[1..] {
        if a.vars() != first.vars() {
            return Err(CompileError::VariableMismatch(
                first.var_list(),
                a.var_list(),
            ));
        }
    }
    let mut out = VSetAutomaton::with_states(first.vars().clone(), 2, 0, 1);
    for a in operands {
        let a = a.trim();
        if a.is_empty_language() {
            continue;
        }
        let offset = out.embed(&a);
        out.add_transition(0, Label::Epsilon, a.initial() + offset);
        out.add_transition(a.final_state() + offset, Label::Epsilon, 1);
    }
    Ok(out.trim())
}

/// Replaces every multi-operation edge by a chain of single-operation
/// edges in canonical order (opens before closes, then by name).
pub fn expand_strict(a: &VSetAutomaton) -> VSetAutomaton {
    let mut out = VSetAutomaton::with_states(
        a.vars().clone(),
        a.num_states(),
        a.initial(),
        a.final_state(),
    );
    for t in a.transitions() {
        match &t.label {
            Label::Ops(ops) if ops.len() > 1 => {
                let mut from = t.from;
                for (i, op) in ops.iter().enumerate() {
                    let to = if i + 1 == ops.len() {
                        t.to
                    } else {
                        out.add_state()
                    };
                    out.add_transition(from, Label::Ops(vec![op.clone()]), to);
                    from = to;
                }
            }
            label => out.add_transition(t.from, label.clone(), t.to),
        }
    }
    out
}

/// Shared precondition of the binary constructions.
pub(crate) fn functional_trimmed(a: &VSetAutomaton) -> Result<VSetAutomaton, CompileError> {
    Ok(check_functional_vsa(a)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::var;
    use crate::vsa::VarOp;

    #[test]
    fn expand_chain_order() {
        let mut a = VSetAutomaton::with_states([var("x"), var("y")].into(), 2, 0, 1);
        a.add_transition(
            0,
            Label::ops([VarOp::close(var("y")), VarOp::open(var("x"))]),
            1,
        );
        let e = expand_strict(&a);
        assert_eq!(e.num_states(), 3);
        let labels: Vec<String> = e
            .transitions()
            .iter()
            .map(|t| t.label.to_string())
            .collect();
        assert_eq!(labels, ["{⊢x}", "{⊣y}"]);
        assert_eq!((e.transitions()[0].to, e.transitions()[1].from), (2, 2));
    }

    #[test]
    fn union_requires_equal_vars() {
        let a = VSetAutomaton::empty([var("x")].into());
        let b = VSetAutomaton::empty([var("y")].into());
        assert!(matches!(
            union(&[a, b]),
            Err(CompileError::VariableMismatch(..))
        ));
        assert!(matches!(union(&[]), Err(CompileError::NoOperands)));
    }

    #[test]
    fn project_unknown_variable() {
        let a = VSetAutomaton::empty([var("x")].into());
        assert!(project(&a, &[var("z")].into()).is_err());
    }
}
