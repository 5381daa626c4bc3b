//! Layered NFA for one (automaton, document) pair.
//!
//! Nodes `(i, q)` for `i = 0..=ℓ`: layer 0 is `VE(q0)`, and `(i,p)` has an
//! edge to `(i+1,q)` for every `q ∈ VE(δ(p, σ_{i+1}))`. Layer `ℓ` keeps only
//! `q_f`, and nodes that cannot reach it are pruned. Every edge is labeled
//! with the configuration of its target, so the accepted words of length
//! `ℓ+1` are exactly the configuration sequences of the result tuples.

use crate::model::{Configuration, Document};
use crate::vsa::{check_functional_vsa, compute_closures, StateId, VSetAutomaton, VsaError};

/// Interned configuration; ids increase with the canonical letter order.
pub type Letter = u32;

/// Outgoing edges of one node that carry one letter.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Group {
    pub letter: Letter,
    pub start: u32,
    pub end: u32,
}

#[derive(Debug, Clone)]
pub struct MatchNfa {
    doc_len: usize,
    letters: Vec<Configuration>,
    /// Letter of each automaton state.
    state_letter: Vec<Letter>,
    /// Surviving automaton states of each layer, ascending.
    layers: Vec<Vec<StateId>>,
    /// Global id of the first node of each layer; the start node is
    /// `total_nodes`, after all layer nodes.
    layer_offset: Vec<u32>,
    /// Per global node (start node last), range into `groups`.
    group_range: Vec<(u32, u32)>,
    pub(crate) groups: Vec<Group>,
    /// Global ids of edge targets.
    pub(crate) targets: Vec<u32>,
}

impl MatchNfa {
    /// `None` when the result on `d` is empty.
    pub fn build(a: &VSetAutomaton, d: &Document) -> Result<Option<Self>, VsaError> {
        let (a, table) = check_functional_vsa(a)?;
        if a.is_empty_language() {
            return Ok(None);
        }
        let n = a.num_states();
        let ell = d.len();

        let mut letters: Vec<Configuration> = table.configs().to_vec();
        letters.sort();
        letters.dedup();
        let state_letter: Vec<Letter> = (0..n)
            .map(|q| letters.binary_search(table.get(q)).expect("interned") as Letter)
            .collect();

        let ve = compute_closures(&a, &[]).var_eps;
        // Forward layers as membership bitmaps.
        let mut present = vec![vec![false; n]; ell + 1];
        for &q in &ve[a.initial()] {
            present[0][q] = true;
        }
        for i in 0..ell {
            let sigma = d.symbols()[i];
            let (cur, next) = present.split_at_mut(i + 1);
            for p in (0..n).filter(|&p| cur[i][p]) {
                for t in a.outgoing(p).filter(|t| t.label.matches(sigma)) {
                    for &q in &ve[t.to] {
                        next[0][q] = true;
                    }
                }
            }
        }
        let qf = a.final_state();
        if !present[ell][qf] {
            return Ok(None);
        }
        present[ell] = vec![false; n];
        present[ell][qf] = true;

        // successors of (i,p) for i < ℓ, restricted to the next layer
        let succ = |i: usize, p: StateId, next: &[bool]| -> Vec<StateId> {
            let sigma = d.symbols()[i];
            let mut out: Vec<StateId> = a
                .outgoing(p)
                .filter(|t| t.label.matches(sigma))
                .flat_map(|t| ve[t.to].iter().copied())
                .filter(|&q| next[q])
                .collect();
            out.sort_unstable();
            out.dedup();
            out
        };
        for i in (0..ell).rev() {
            let (cur, next) = present.split_at_mut(i + 1);
            for p in 0..n {
                if cur[i][p] && succ(i, p, &next[0]).is_empty() {
                    cur[i][p] = false;
                }
            }
        }

        let layers: Vec<Vec<StateId>> = present
            .iter()
            .map(|l| (0..n).filter(|&q| l[q]).collect())
            .collect();
        let mut layer_offset = Vec::with_capacity(ell + 2);
        let mut total = 0u32;
        for l in &layers {
            layer_offset.push(total);
            total += l.len() as u32;
        }
        layer_offset.push(total);
        let global = |i: usize, q: StateId| -> u32 {
            layer_offset[i] + layers[i].binary_search(&q).expect("node present") as u32
        };

        let mut nfa = MatchNfa {
            doc_len: ell,
            letters,
            state_letter,
            layers: layers.clone(),
            layer_offset: layer_offset.clone(),
            group_range: Vec::with_capacity(total as usize + 1),
            groups: Vec::new(),
            targets: Vec::new(),
        };
        for i in 0..=ell {
            for &p in &layers[i] {
                let out: Vec<u32> = if i < ell {
                    succ(i, p, &present[i + 1])
                        .into_iter()
                        .map(|q| global(i + 1, q))
                        .collect()
                } else {
                    Vec::new()
                };
                nfa.push_node(out);
            }
        }
        let start: Vec<u32> = layers[0].iter().map(|&q| global(0, q)).collect();
        nfa.push_node(start);
        Ok(Some(nfa))
    }

    /// Appends the next node's edges, grouped and sorted by letter.
    fn push_node(&mut self, mut targets: Vec<u32>) {
        let letter_of = |g: u32, nfa: &MatchNfa| nfa.node_letter(g);
        targets.sort_by_key(|&g| (letter_of(g, self), g));
        let first = self.groups.len() as u32;
        for g in targets {
            let letter = letter_of(g, self);
            let pos = self.targets.len() as u32;
            let fresh = self.groups.len() as u32 == first;
            match self.groups.last_mut() {
                Some(last) if !fresh && last.letter == letter => last.end = pos + 1,
                _ => self.groups.push(Group {
                    letter,
                    start: pos,
                    end: pos + 1,
                }),
            }
            self.targets.push(g);
        }
        self.group_range.push((first, self.groups.len() as u32));
    }

    fn layer_of(&self, g: u32) -> usize {
        self.layer_offset.partition_point(|&o| o <= g) - 1
    }

    pub fn doc_len(&self) -> usize {
        self.doc_len
    }

    pub fn letters(&self) -> &[Configuration] {
        &self.letters
    }

    pub fn letter_config(&self, l: Letter) -> &Configuration {
        &self.letters[l as usize]
    }

    /// Number of layer nodes plus the start node.
    pub fn num_nodes(&self) -> usize {
        self.group_range.len()
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len()
    }

    pub fn layer(&self, i: usize) -> &[StateId] {
        &self.layers[i]
    }

    pub fn start_node(&self) -> u32 {
        (self.group_range.len() - 1) as u32
    }

    /// `(layer, automaton state)` of a non-start node.
    pub fn node(&self, g: u32) -> (usize, StateId) {
        let i = self.layer_of(g);
        (i, self.layers[i][(g - self.layer_offset[i]) as usize])
    }

    /// Letter on every edge into `g`.
    pub fn node_letter(&self, g: u32) -> Letter {
        self.state_letter[self.node(g).1]
    }

    pub(crate) fn node_groups(&self, g: u32) -> &[Group] {
        let (a, b) = self.group_range[g as usize];
        &self.groups[a as usize..b as usize]
    }

    /// Smallest letter on an edge leaving `g`.
    pub fn min_letter(&self, g: u32) -> Option<Letter> {
        self.node_groups(g).first().map(|gr| gr.letter)
    }

    /// Smallest letter above `after` on an edge leaving `g`.
    pub fn next_letter(&self, g: u32, after: Letter) -> Option<Letter> {
        self.node_groups(g)
            .iter()
            .find(|gr| gr.letter > after)
            .map(|gr| gr.letter)
    }

    pub fn successors(&self, g: u32, letter: Letter) -> &[u32] {
        self.node_groups(g)
            .iter()
            .find(|gr| gr.letter == letter)
            .map(|gr| &self.targets[gr.start as usize..gr.end as usize])
            .unwrap_or(&[])
    }

    /// True iff the word (one letter per layer) is accepted.
    pub fn accepts(&self, word: &[Letter]) -> bool {
        if word.len() != self.doc_len + 1 {
            return false;
        }
        let mut cur = vec![self.start_node()];
        for &l in word {
            let mut next: Vec<u32> = cur
                .iter()
                .flat_map(|&g| self.successors(g, l).iter().copied())
                .collect();
            next.sort_unstable();
            next.dedup();
            if next.is_empty() {
                return false;
            }
            cur = next;
        }
        true
    }
}
