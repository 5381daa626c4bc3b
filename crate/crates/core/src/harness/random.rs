//! Seeded generators for property tests and acceptance runs.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::RegexFormula;
use crate::model::{Configuration, Document, VarName, VarState};
use crate::query::RegexCQ;
use crate::vsa::{Label, VSetAutomaton, VarOp};

pub fn random_document(rng: &mut impl Rng, alphabet: &[char], max_len: usize) -> Document {
    let len = rng.gen_range(0..=max_len);
    Document::from_symbols((0..len).map(|_| *alphabet.choose(rng).unwrap()).collect())
}

fn leaf(rng: &mut impl Rng, alphabet: &[char]) -> RegexFormula {
    match rng.gen_range(0..10) {
        0..=5 => RegexFormula::Symbol(*alphabet.choose(rng).unwrap()),
        6 | 7 => RegexFormula::Wildcard,
        8 => RegexFormula::Epsilon,
        // rare, but the empty language must stay covered
        _ if rng.gen_bool(0.3) => RegexFormula::Empty,
        _ => RegexFormula::Wildcard,
    }
}

/// A formula of depth at most `depth` in which every ref-word binds each
/// variable of `required` exactly once. Needs `depth > required.len()`.
pub fn functional_formula(
    rng: &mut impl Rng,
    required: &[VarName],
    alphabet: &[char],
    depth: usize,
) -> RegexFormula {
    assert!(depth > required.len(), "depth too small for the variables");
    let k = required.len();
    // options that keep `child depth > child requirement`
    let mut options = Vec::new();
    if k == 0 {
        options.extend(["leaf", "leaf"]);
    }
    if depth >= 2 && 2 * (depth - 2) >= k {
        options.push("concat");
    }
    if depth >= 2 {
        if depth > k + 1 {
            options.push("disj");
        }
        if k == 0 {
            options.push("star");
        }
    }
    if k > 0 {
        options.extend(["bind", "bind"]);
    }
    match *options.choose(rng).unwrap() {
        "leaf" => leaf(rng, alphabet),
        "concat" => {
            let mut vars = required.to_vec();
            vars.shuffle(rng);
            // both halves must fit into depth - 1
            let lo = k.saturating_sub(depth - 2);
            let hi = k.min(depth - 2);
            let cut = rng.gen_range(lo..=hi);
            let (l, r) = vars.split_at(cut);
            let (mut l, mut r) = (l.to_vec(), r.to_vec());
            l.sort();
            r.sort();
            functional_formula(rng, &l, alphabet, depth - 1).then(functional_formula(
                rng,
                &r,
                alphabet,
                depth - 1,
            ))
        }
        "disj" => functional_formula(rng, required, alphabet, depth - 1).or(functional_formula(
            rng,
            required,
            alphabet,
            depth - 1,
        )),
        "star" => functional_formula(rng, &[], alphabet, depth - 1).star(),
        _ => {
            let i = rng.gen_range(0..k);
            let mut rest = required.to_vec();
            let x = rest.remove(i);
            RegexFormula::bind(x, functional_formula(rng, &rest, alphabet, depth - 1))
        }
    }
}

/// Random formula over `vars`, functional or not.
pub fn arbitrary_formula(
    rng: &mut impl Rng,
    vars: &[VarName],
    alphabet: &[char],
    depth: usize,
) -> RegexFormula {
    if depth <= 1 || rng.gen_bool(0.25) {
        return leaf(rng, alphabet);
    }
    let sub = |rng: &mut _| arbitrary_formula(rng, vars, alphabet, depth - 1);
    match rng.gen_range(0..4) {
        0 => sub(rng).then(sub(rng)),
        1 => sub(rng).or(sub(rng)),
        2 => sub(rng).star(),
        _ if vars.is_empty() => sub(rng),
        _ => RegexFormula::bind(vars.choose(rng).unwrap().clone(), sub(rng)),
    }
}

/// A functional automaton with at most `max_states` states: every state
/// gets a configuration up front, and edges either keep the configuration
/// (terminals, `ε`) or move it forward by exactly their operation set.
pub fn functional_automaton(
    rng: &mut impl Rng,
    vars: &BTreeSet<VarName>,
    alphabet: &[char],
    max_states: usize,
) -> VSetAutomaton {
    let v = vars.len();
    let names: Vec<VarName> = vars.iter().cloned().collect();
    let n = rng.gen_range(2..=max_states.max(2));
    let states = [VarState::Waiting, VarState::Open, VarState::Closed];
    let configs: Vec<Configuration> = (0..n)
        .map(|q| match q {
            0 => Configuration::uniform(v, VarState::Waiting),
            1 => Configuration::uniform(v, VarState::Closed),
            _ => Configuration((0..v).map(|_| *states.choose(rng).unwrap()).collect()),
        })
        .collect();
    let mut a = VSetAutomaton::with_states(vars.clone(), n, 0, 1);
    let edges = rng.gen_range(n..=3 * n);
    for _ in 0..edges * 4 {
        if a.transitions().len() >= edges {
            break;
        }
        let p = rng.gen_range(0..n);
        let q = rng.gen_range(0..n);
        if configs[p] == configs[q] {
            let label = match rng.gen_range(0..5) {
                0 => Label::Epsilon,
                1 => Label::Any,
                _ => Label::Symbol(*alphabet.choose(rng).unwrap()),
            };
            a.add_transition(p, label, q);
            continue;
        }
        let mut ops = Vec::new();
        let mut forward = true;
        for i in 0..v {
            match (configs[p].0[i], configs[q].0[i]) {
                (x, y) if x == y => {}
                (VarState::Waiting, VarState::Open) => ops.push(VarOp::open(names[i].clone())),
                (VarState::Open, VarState::Closed) => ops.push(VarOp::close(names[i].clone())),
                (VarState::Waiting, VarState::Closed) => {
                    ops.push(VarOp::open(names[i].clone()));
                    ops.push(VarOp::close(names[i].clone()));
                }
                _ => forward = false,
            }
        }
        if forward {
            a.add_transition(p, Label::ops(ops), q);
        }
    }
    a.trim()
}

/// Random valid CQ with up to `max_atoms` atoms over two-variable subsets
/// of `pool`, a random projection and at most one equality.
pub fn random_cq(
    rng: &mut impl Rng,
    pool: &[VarName],
    alphabet: &[char],
    max_atoms: usize,
) -> RegexCQ {
    let atoms: Vec<RegexFormula> = (0..rng.gen_range(1..=max_atoms))
        .map(|_| {
            let mut vars: Vec<VarName> = pool.choose_multiple(rng, 2).cloned().collect();
            vars.truncate(rng.gen_range(0..=2));
            vars.sort();
            functional_formula(rng, &vars, alphabet, 4)
        })
        .collect();
    let all: Vec<VarName> = atoms
        .iter()
        .flat_map(|a| a.vars())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let projection = all.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    let equalities = if all.len() >= 2 && rng.gen_bool(0.5) {
        let pair: Vec<VarName> = all.choose_multiple(rng, 2).cloned().collect();
        vec![(pair[0].clone(), pair[1].clone())]
    } else {
        Vec::new()
    };
    RegexCQ::new(projection, atoms, equalities).expect("valid by construction")
}

/// CNF over variables `1..=vars`; literals are signed indices.
pub fn random_3cnf(rng: &mut impl Rng, vars: usize, clauses: usize) -> Vec<[i32; 3]> {
    (0..clauses)
        .map(|_| {
            let mut c = [0i32; 3];
            for lit in c.iter_mut() {
                let v = rng.gen_range(1..=vars as i32);
                *lit = if rng.gen_bool(0.5) { v } else { -v };
            }
            c
        })
        .collect()
}

/// Undirected simple graph on `0..nodes` as sorted edge pairs.
pub fn random_graph(rng: &mut impl Rng, nodes: usize, density: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..nodes {
        for j in i + 1..nodes {
            if rng.gen_bool(density) {
                edges.push((i, j));
            }
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::check_functional_regex;
    use crate::model::var;
    use crate::vsa::check_functional_vsa;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn functional_by_construction() {
        let mut rng = StdRng::seed_from_u64(7);
        let vars = [var("x"), var("y")];
        for _ in 0..500 {
            let k = rng.gen_range(0..=2);
            let f = functional_formula(&mut rng, &vars[..k], &['a', 'b'], 4);
            assert!(f.depth() <= 4, "{f}");
            assert!(check_functional_regex(&f).is_ok(), "{f}");
        }
    }

    #[test]
    fn automata_are_functional() {
        let mut rng = StdRng::seed_from_u64(11);
        let vars: BTreeSet<VarName> = [var("x"), var("y")].into();
        for _ in 0..300 {
            let a = functional_automaton(&mut rng, &vars, &['a', 'b'], 6);
            assert!(check_functional_vsa(&a).is_ok(), "{a}");
        }
    }
}
