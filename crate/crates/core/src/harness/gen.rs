//! Hardness-reduction instances with brute-force ground truth.
//!
//! * 3CNF: document `a`; variable `x_i` false is the span `1..1`, true is
//!   `2..2`; each clause becomes one atom listing its satisfying
//!   assignments.
//! * k-clique: the document lists the edges `⊢v_i#v_j⊣` (`i < j`, ordered),
//!   node codes being fixed-width words over `{a,b}`. One atom `γ` picks
//!   `k(k-1)/2` edges in order; atom `δ_l` forces every occurrence of the
//!   `l`-th clique node to carry the same code.
//! * The string-equality variant replaces the `δ_l` by equality chains.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::RegexFormula;
use crate::model::{var, Document, VarName};
use crate::query::RegexCQ;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("clause {0} contains the literal 0")]
    ZeroLiteral(usize),
    #[error("a formula needs at least one clause")]
    NoClauses,
    #[error("clique size must be at least 2, got {0}")]
    CliqueTooSmall(usize),
    #[error("edge ({0}, {1}) is a self-loop or names a missing node")]
    BadEdge(usize, usize),
}

/// Satisfying assignments of one clause over its distinct variables.
fn clause_models(clause: &[i32; 3]) -> Vec<Vec<(u32, bool)>> {
    let vars: BTreeSet<u32> = clause.iter().map(|l| l.unsigned_abs()).collect();
    let vars: Vec<u32> = vars.into_iter().collect();
    (0..1u32 << vars.len())
        .map(|bits| {
            vars.iter()
                .enumerate()
                .map(|(i, &v)| (v, bits >> i & 1 == 1))
                .collect::<Vec<_>>()
        })
        .filter(|tau| {
            clause.iter().any(|&l| {
                let value = tau.iter().find(|(v, _)| *v == l.unsigned_abs()).unwrap().1;
                value == (l > 0)
            })
        })
        .collect()
}

/// Nests bindings around `ε`, like `x{y{ε}}`.
fn bind_all(vars: &[VarName]) -> RegexFormula {
    vars.iter().rev().fold(RegexFormula::Epsilon, |inner, v| {
        RegexFormula::bind(v.clone(), inner)
    })
}

fn cnf_var(i: u32) -> VarName {
    var(&format!("x{i}"))
}

/// Boolean regex CQ over the document `a` that is nonempty iff the
/// clauses are satisfiable. Literals are signed variable indices.
pub fn gen_3cnf_query(clauses: &[[i32; 3]]) -> Result<(RegexCQ, Document), GenError> {
    if clauses.is_empty() {
        return Err(GenError::NoClauses);
    }
    let mut atoms = Vec::new();
    for (i, clause) in clauses.iter().enumerate() {
        if clause.contains(&0) {
            return Err(GenError::ZeroLiteral(i + 1));
        }
        let options = clause_models(clause).into_iter().map(|tau| {
            let at = |value: bool| -> Vec<VarName> {
                tau.iter()
                    .filter(|(_, b)| *b == value)
                    .map(|(v, _)| cnf_var(*v))
                    .collect()
            };
            bind_all(&at(false))
                .then(RegexFormula::sym('a'))
                .then(bind_all(&at(true)))
        });
        atoms.push(RegexFormula::disj_all(options));
    }
    let q = RegexCQ {
        projection: BTreeSet::new(),
        atoms,
        equalities: Vec::new(),
    };
    Ok((q, Document::new("a")))
}

pub fn brute_force_sat(clauses: &[[i32; 3]]) -> bool {
    let n = clauses
        .iter()
        .flatten()
        .map(|l| l.unsigned_abs())
        .max()
        .unwrap_or(0);
    (0..1u64 << n).any(|bits| {
        clauses.iter().all(|c| {
            c.iter()
                .any(|&l| (bits >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0))
        })
    })
}

/// Undirected simple graph on nodes `0..nodes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub nodes: usize,
    /// Pairs `(i, j)` with `i < j`.
    pub edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(
        nodes: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GenError> {
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i == j || i >= nodes || j >= nodes {
                return Err(GenError::BadEdge(i, j));
            }
            set.insert((i.min(j), i.max(j)));
        }
        Ok(Graph { nodes, edges: set })
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }
}

pub fn has_clique(g: &Graph, k: usize) -> bool {
    fn extend(g: &Graph, chosen: &mut Vec<usize>, from: usize, k: usize) -> bool {
        if chosen.len() == k {
            return true;
        }
        for v in from..g.nodes {
            if chosen.iter().all(|&u| g.has_edge(u, v)) {
                chosen.push(v);
                if extend(g, chosen, v + 1, k) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    extend(g, &mut Vec::new(), 0, k)
}

/// Fixed-width binary code of node `v` over `{a,b}`.
fn node_code(v: usize, nodes: usize) -> String {
    let width = (usize::BITS - nodes.saturating_sub(1).leading_zeros()).max(1) as usize;
    (0..width)
        .rev()
        .map(|b| if v >> b & 1 == 1 { 'b' } else { 'a' })
        .collect()
}

fn clique_document(g: &Graph) -> Document {
    let text: String = g
        .edges
        .iter()
        .map(|&(i, j)| format!("⊢{}#{}⊣", node_code(i, g.nodes), node_code(j, g.nodes)))
        .collect();
    Document::new(&text)
}

fn xv(i: usize, j: usize) -> VarName {
    var(&format!("x{i}_{j}"))
}

fn yv(i: usize, j: usize) -> VarName {
    var(&format!("y{i}_{j}"))
}

fn gamma(k: usize) -> RegexFormula {
    let ab = || RegexFormula::sym('a').or(RegexFormula::sym('b')).star();
    let mut parts = Vec::new();
    for i in 1..k {
        for j in i + 1..=k {
            parts.extend([
                RegexFormula::any_string(),
                RegexFormula::sym('⊢'),
                RegexFormula::bind(xv(i, j), ab()),
                RegexFormula::sym('#'),
                RegexFormula::bind(yv(i, j), ab()),
                RegexFormula::sym('⊣'),
                RegexFormula::any_string(),
            ]);
        }
    }
    RegexFormula::concat_all(parts)
}

fn check_k(k: usize) -> Result<(), GenError> {
    if k < 2 {
        Err(GenError::CliqueTooSmall(k))
    } else {
        Ok(())
    }
}

/// Boolean regex CQ `γ ⋈ δ_1 ⋈ ⋯ ⋈ δ_k`, nonempty iff `g` has a
/// `k`-clique.
pub fn gen_clique_query(g: &Graph, k: usize) -> Result<(RegexCQ, Document), GenError> {
    check_k(k)?;
    let mut atoms = vec![gamma(k)];
    for l in 1..=k {
        let per_node = (0..g.nodes).map(|v| {
            let code = RegexFormula::literal(&node_code(v, g.nodes));
            let mut parts = Vec::new();
            for i in 1..l {
                parts.extend([
                    RegexFormula::any_string(),
                    RegexFormula::sym('#'),
                    RegexFormula::bind(yv(i, l), code.clone()),
                    RegexFormula::sym('⊣'),
                    RegexFormula::any_string(),
                ]);
            }
            for j in l + 1..=k {
                parts.extend([
                    RegexFormula::any_string(),
                    RegexFormula::sym('⊢'),
                    RegexFormula::bind(xv(l, j), code.clone()),
                    RegexFormula::sym('#'),
                    RegexFormula::any_string(),
                ]);
            }
            RegexFormula::concat_all(parts)
        });
        atoms.push(RegexFormula::disj_all(per_node));
    }
    let q = RegexCQ {
        projection: BTreeSet::new(),
        atoms,
        equalities: Vec::new(),
    };
    Ok((q, clique_document(g)))
}

/// Boolean regex CQ `γ` with equality chains over each node's variables.
pub fn gen_streq_clique_query(g: &Graph, k: usize) -> Result<(RegexCQ, Document), GenError> {
    check_k(k)?;
    let mut equalities = Vec::new();
    for l in 1..=k {
        let chain: Vec<VarName> = (1..l)
            .map(|i| yv(i, l))
            .chain((l + 1..=k).map(|j| xv(l, j)))
            .collect();
        equalities.extend(chain.windows(2).map(|w| (w[0].clone(), w[1].clone())));
    }
    let q = RegexCQ {
        projection: BTreeSet::new(),
        atoms: vec![gamma(k)],
        equalities,
    };
    Ok((q, clique_document(g)))
}
