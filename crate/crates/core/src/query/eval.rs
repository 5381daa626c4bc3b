//! Two evaluation strategies and the planner choosing between them.
//!
//! Canonical: materialize every atom, hash-join, filter equalities, project.
//! Compiled: one automaton per CQ (join, equality selection, projection),
//! enumerated with polynomial delay. Both emit tuples in the same radix
//! order, so switching strategies never changes the output bytes.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::thread;

use super::{QueryError, RegexCQ, RegexUCQ};
use crate::compile::{
    apply_selections, compile_regex, equality_assignment_count, join_many, project, union,
};
use crate::enumerate::{enumerate, Enumerator};
use crate::model::{radix_key, Document, Span, SpanRelation, SpanTuple, VarName};
use crate::vsa::VSetAutomaton;

pub const DEFAULT_MAX_JOIN_COMPILE: usize = 3;
/// Compiling equalities builds one automaton path per admissible
/// assignment; beyond this many the planner goes relational.
pub const DEFAULT_MAX_EQUALITY_PATHS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Auto,
    Canonical,
    Compiled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisjunctStrategy {
    Canonical,
    Compiled,
}

#[derive(Debug, Clone)]
pub struct PlanOptions {
    pub strategy: Strategy,
    /// Largest atom count compiled under [`Strategy::Auto`].
    pub max_join_compile: usize,
    /// Largest number of equality atoms compiled under [`Strategy::Auto`].
    pub max_equalities_compile: usize,
    pub max_equality_paths: usize,
}

impl Default for PlanOptions {
    fn default() -> Self {
        Self {
            strategy: Strategy::Auto,
            max_join_compile: DEFAULT_MAX_JOIN_COMPILE,
            max_equalities_compile: 2,
            max_equality_paths: DEFAULT_MAX_EQUALITY_PATHS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub disjuncts: Vec<DisjunctStrategy>,
}

impl Plan {
    pub fn all_compiled(&self) -> bool {
        self.disjuncts
            .iter()
            .all(|s| *s == DisjunctStrategy::Compiled)
    }
}

pub fn plan(q: &RegexUCQ, d: &Document, opts: &PlanOptions) -> Plan {
    let choose = |cq: &RegexCQ| match opts.strategy {
        Strategy::Canonical => DisjunctStrategy::Canonical,
        Strategy::Compiled => DisjunctStrategy::Compiled,
        Strategy::Auto => {
            let fits = cq.atoms.len() <= opts.max_join_compile
                && (cq.equalities.is_empty()
                    || (cq.equalities.len() <= opts.max_equalities_compile
                        && equality_assignment_count(d, &cq.equalities)
                            <= opts.max_equality_paths));
            if fits {
                DisjunctStrategy::Compiled
            } else {
                DisjunctStrategy::Canonical
            }
        }
    };
    Plan {
        disjuncts: q.disjuncts.iter().map(choose).collect(),
    }
}

/// `π_Y(ζ(α_1 ⋈ ⋯ ⋈ α_k))` as a single functional automaton; equality
/// selections make it specific to `d`.
pub fn compile_cq(q: &RegexCQ, d: &Document) -> Result<VSetAutomaton, QueryError> {
    let atoms = q
        .atoms
        .iter()
        .map(compile_regex)
        .collect::<Result<Vec<_>, _>>()?;
    let joined = join_many(&atoms)?;
    let selected = apply_selections(&joined, &q.equalities, d)?;
    Ok(project(&selected, &q.projection)?)
}

pub fn eval_compiled(q: &RegexCQ, d: &Document) -> Result<Enumerator, QueryError> {
    Ok(enumerate(&compile_cq(q, d)?, d)?)
}

struct Materialized {
    vars: BTreeSet<VarName>,
    tuples: Vec<SpanTuple>,
}

fn materialize(
    atom: &crate::formula::RegexFormula,
    d: &Document,
) -> Result<Materialized, QueryError> {
    let a = compile_regex(atom)?;
    Ok(Materialized {
        vars: a.vars().clone(),
        tuples: enumerate(&a, d)?.collect(),
    })
}

fn hash_join(l: Materialized, r: Materialized) -> Materialized {
    let shared: Vec<VarName> = l.vars.intersection(&r.vars).cloned().collect();
    let key = |t: &SpanTuple| -> Vec<Span> {
        shared
            .iter()
            .map(|v| t.get(v).expect("total tuple"))
            .collect()
    };
    let (build, probe) = if l.tuples.len() <= r.tuples.len() {
        (&l, &r)
    } else {
        (&r, &l)
    };
    let mut index: HashMap<Vec<Span>, Vec<&SpanTuple>> = HashMap::new();
    for t in &build.tuples {
        index.entry(key(t)).or_default().push(t);
    }
    let mut tuples = Vec::new();
    for t in &probe.tuples {
        if let Some(matches) = index.get(&key(t)) {
            for s in matches {
                let mut merged = t.clone();
                for (v, sp) in s.iter() {
                    merged.insert(v.clone(), *sp);
                }
                tuples.push(merged);
            }
        }
    }
    Materialized {
        vars: l.vars.union(&r.vars).cloned().collect(),
        tuples,
    }
}

/// Relational evaluation: atoms are materialized in parallel, then joined
/// smallest first, preferring atoms connected to what is already joined.
pub fn eval_canonical(q: &RegexCQ, d: &Document) -> Result<SpanRelation, QueryError> {
    let mut rels: Vec<Materialized> = thread::scope(|s| {
        let handles: Vec<_> = q
            .atoms
            .iter()
            .map(|atom| s.spawn(move || materialize(atom, d)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("materialization panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;
    rels.sort_by_key(|r| r.tuples.len());
    let mut rels: VecDeque<Materialized> = rels.into();
    let mut acc = rels.pop_front().expect("validated queries have atoms");
    while !rels.is_empty() && !acc.tuples.is_empty() {
        let next = rels
            .iter()
            .position(|r| !r.vars.is_disjoint(&acc.vars))
            .unwrap_or(0);
        let r = rels.remove(next).expect("index in range");
        acc = hash_join(acc, r);
    }
    if !rels.is_empty() {
        acc.tuples.clear();
    }

    let text = |t: &SpanTuple, v: &VarName| d.slice(t.get(v).expect("total tuple")).unwrap();
    let mut out = SpanRelation::new(q.projection.clone());
    for t in &acc.tuples {
        if q.equalities.iter().all(|(x, y)| text(t, x) == text(t, y)) {
            out.insert(t.restrict(&q.projection))
                .expect("projection variables occur in the atoms");
        }
    }
    Ok(out)
}

/// Canonical results in enumeration order.
fn ordered(rel: SpanRelation, doc_len: usize) -> Vec<SpanTuple> {
    let mut tuples: Vec<SpanTuple> = rel.tuples().iter().cloned().collect();
    tuples.sort_by_cached_key(|t| radix_key(t, doc_len));
    tuples
}

enum Source {
    Compiled(Box<Enumerator>),
    Materialized(std::vec::IntoIter<SpanTuple>),
}

impl Iterator for Source {
    type Item = SpanTuple;

    fn next(&mut self) -> Option<SpanTuple> {
        match self {
            Source::Compiled(e) => e.next(),
            Source::Materialized(it) => it.next(),
        }
    }
}

/// Result stream of a UCQ. All fallible work happens before the first
/// tuple; the stream itself cannot fail.
pub struct TupleStream {
    plan: Plan,
    sources: VecDeque<Source>,
    /// Needed only when disjuncts are evaluated separately.
    seen: Option<HashSet<SpanTuple>>,
}

impl TupleStream {
    pub fn plan(&self) -> &Plan {
        &self.plan
    }

    /// True when one automaton produces the whole result.
    pub fn is_unified(&self) -> bool {
        self.seen.is_none()
    }
}

impl Iterator for TupleStream {
    type Item = SpanTuple;

    fn next(&mut self) -> Option<SpanTuple> {
        loop {
            let t = match self.sources.front_mut()?.next() {
                Some(t) => t,
                None => {
                    self.sources.pop_front();
                    continue;
                }
            };
            if let Some(seen) = &mut self.seen {
                if !seen.insert(t.clone()) {
                    continue;
                }
            }
            return Some(t);
        }
    }
}

/// Evaluates a UCQ. When every disjunct is compiled, the projected
/// automata are unioned and enumerated as one; otherwise disjuncts are
/// streamed in order with cross-disjunct deduplication.
pub fn eval(q: &RegexUCQ, d: &Document, opts: &PlanOptions) -> Result<TupleStream, QueryError> {
    let plan = plan(q, d, opts);
    if plan.all_compiled() {
        let automata = q
            .disjuncts
            .iter()
            .map(|cq| compile_cq(cq, d))
            .collect::<Result<Vec<_>, _>>()?;
        let unified = if automata.len() == 1 {
            automata.into_iter().next().expect("one disjunct")
        } else {
            union(&automata)?
        };
        return Ok(TupleStream {
            plan,
            sources: [Source::Compiled(Box::new(enumerate(&unified, d)?))].into(),
            seen: None,
        });
    }
    let mut sources = VecDeque::new();
    for (cq, s) in q.disjuncts.iter().zip(&plan.disjuncts) {
        sources.push_back(match s {
            DisjunctStrategy::Compiled => Source::Compiled(Box::new(eval_compiled(cq, d)?)),
            DisjunctStrategy::Canonical => {
                Source::Materialized(ordered(eval_canonical(cq, d)?, d.len()).into_iter())
            }
        });
    }
    Ok(TupleStream {
        plan,
        seen: (sources.len() > 1).then(HashSet::new),
        sources,
    })
}
