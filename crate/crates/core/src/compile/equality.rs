//! Document-specific automaton for string-equality selections.
//!
//! Selections `x = y` are merged into equality classes. An admissible
//! assignment gives every variable of a class a span with the same content.
//! Each assignment becomes one path that spells the document with the
//! variable operations interleaved at their boundaries; paths share common
//! prefixes. The automaton accepts nothing on any other document.

use std::collections::{BTreeSet, HashMap};

use super::{join, CompileError};
use crate::model::{Document, Span, VarName};
use crate::vsa::{Label, StateId, VSetAutomaton, VarOp};

/// Equality classes of the selection variables, each sorted, in order of
/// their smallest member.
fn classes(selections: &[(VarName, VarName)]) -> Vec<Vec<VarName>> {
    let mut sets: Vec<BTreeSet<VarName>> = Vec::new();
    for (x, y) in selections {
        let hits: Vec<usize> = (0..sets.len())
            .filter(|&i| sets[i].contains(x) || sets[i].contains(y))
            .collect();
        let mut merged: BTreeSet<VarName> = [x.clone(), y.clone()].into();
        for &i in hits.iter().rev() {
            merged.extend(sets.remove(i));
        }
        sets.push(merged);
    }
    let mut out: Vec<Vec<VarName>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
    out.sort();
    out
}

/// For every length `L`, the start positions of length-`L` substrings
/// grouped by content. Substrings are compared symbol by symbol.
fn substring_groups(d: &Document) -> Vec<(usize, Vec<Vec<usize>>)> {
    let s = d.symbols();
    let n = s.len();
    (0..=n)
        .map(|len| {
            let mut groups: Vec<Vec<usize>> = Vec::new();
            for i in 1..=n - len + 1 {
                let piece = &s[i - 1..i - 1 + len];
                match groups
                    .iter_mut()
                    .find(|g| &s[g[0] - 1..g[0] - 1 + len] == piece)
                {
                    Some(g) => g.push(i),
                    None => groups.push(vec![i]),
                }
            }
            (len, groups)
        })
        .collect()
}

/// Every way to place the `k` members of a class on equal substrings.
fn class_choices(k: usize, groups: &[(usize, Vec<Vec<usize>>)]) -> Vec<Vec<Span>> {
    let mut out = Vec::new();
    for (len, gs) in groups {
        for g in gs {
            let mut idx = vec![0usize; k];
            loop {
                out.push(
                    idx.iter()
                        .map(|&i| Span {
                            start: g[i],
                            end: g[i] + len,
                        })
                        .collect(),
                );
                // odometer over g^k
                let mut pos = k;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < g.len() {
                        break;
                    }
                    idx[pos] = 0;
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
    }
    out
}

/// Number of accepted tuples (and paths) of the equality automaton,
/// saturating at `usize::MAX`.
pub fn equality_assignment_count(d: &Document, selections: &[(VarName, VarName)]) -> usize {
    let groups = substring_groups(d);
    classes(selections)
        .iter()
        .map(|class| {
            groups
                .iter()
                .flat_map(|(_, gs)| gs.iter())
                .map(|g| {
                    (0..class.len())
                        .try_fold(1usize, |acc, _| acc.checked_mul(g.len()))
                        .unwrap_or(usize::MAX)
                })
                .fold(0usize, |a, b| a.saturating_add(b))
        })
        .fold(1usize, |a, b| a.saturating_mul(b))
}

pub fn build_equality_automaton(
    d: &Document,
    selections: &[(VarName, VarName)],
) -> Result<VSetAutomaton, CompileError> {
    if selections.is_empty() {
        return Err(CompileError::NoSelections);
    }
    let classes = classes(selections);
    let groups = substring_groups(d);
    let choices: Vec<Vec<Vec<Span>>> = classes
        .iter()
        .map(|c| class_choices(c.len(), &groups))
        .collect();
    let vars: BTreeSet<VarName> = classes.iter().flatten().cloned().collect();
    let n = d.len();

    let mut a = VSetAutomaton::with_states(vars, 2, 0, 1);
    let mut children: HashMap<(StateId, Label), StateId> = HashMap::new();
    let mut leaves: BTreeSet<StateId> = BTreeSet::new();
    let mut pick = vec![0usize; classes.len()];
    let mut at_boundary: Vec<Vec<VarOp>> = vec![Vec::new(); n + 2];
    loop {
        for ops in at_boundary.iter_mut() {
            ops.clear();
        }
        for (ci, class) in classes.iter().enumerate() {
            for (v, span) in class.iter().zip(&choices[ci][pick[ci]]) {
                at_boundary[span.start].push(VarOp::open(v.clone()));
                at_boundary[span.end].push(VarOp::close(v.clone()));
            }
        }
        let mut q = 0;
        for (p, ops) in at_boundary.iter().enumerate().skip(1) {
            let mut step = |label: Label, a: &mut VSetAutomaton| {
                q = *children.entry((q, label.clone())).or_insert_with(|| {
                    let next = a.add_state();
                    a.add_transition(q, label, next);
                    next
                });
            };
            if !ops.is_empty() {
                step(Label::ops(ops.iter().cloned()), &mut a);
            }
            if let Some(c) = d.symbol(p) {
                step(Label::Symbol(c), &mut a);
            }
        }
        leaves.insert(q);

        let mut ci = classes.len();
        loop {
            if ci == 0 {
                break;
            }
            ci -= 1;
            pick[ci] += 1;
            if pick[ci] < choices[ci].len() {
                break;
            }
            pick[ci] = 0;
        }
        if pick.iter().all(|&i| i == 0) {
            break;
        }
    }
    for leaf in leaves {
        a.add_transition(leaf, Label::Epsilon, 1);
    }
    Ok(a)
}

/// `ζ^=_{x1,y1} ⋯ A` on the document `d`, as a join with the equality
/// automaton of `d`.
pub fn apply_selections(
    a: &VSetAutomaton,
    selections: &[(VarName, VarName)],
    d: &Document,
) -> Result<VSetAutomaton, CompileError> {
    for (x, y) in selections {
        for v in [x, y] {
            if !a.vars().contains(v) {
                return Err(CompileError::UnknownVariable(v.clone()));
            }
        }
    }
    if selections.is_empty() {
        return Ok(a.clone());
    }
    join(a, &build_equality_automaton(d, selections)?)
}
