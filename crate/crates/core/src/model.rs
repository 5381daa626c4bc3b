//! Documents, spans, span-tuples, ref-words and variable configurations.
//!
//! Positions are 1-based and counted in Unicode scalar values. A span
//! `⟨i,j⟩` of a document of length `ℓ` satisfies `1 ≤ i ≤ j ≤ ℓ+1` and
//! selects the symbols at positions `i..j-1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("span {span} is out of range for a document of length {len}")]
    SpanOutOfRange { span: Span, len: usize },
    #[error("invalid span: start {start} is after end {end}")]
    ReversedSpan { start: usize, end: usize },
    #[error("invalid variable name {0:?}")]
    InvalidVariableName(String),
    #[error("ref-word is not valid for variable {var}: {reason}")]
    InvalidRefWord { var: VarName, reason: &'static str },
    #[error("ref-word uses variable {0} outside the variable set")]
    UnexpectedVariable(VarName),
    #[error("configuration sequence is invalid for variable {var} at position {position}")]
    InvalidConfigSequence { var: VarName, position: usize },
    #[error("configuration sequence must contain at least one configuration")]
    EmptyConfigSequence,
    #[error("tuple is missing variable {0}")]
    MissingVariable(VarName),
    #[error("malformed span text {0:?}")]
    MalformedSpan(String),
}

/// A text document, indexed by Unicode scalar value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Document {
    symbols: Vec<char>,
}

impl Document {
    pub fn new(text: &str) -> Self {
        Self {
            symbols: text.chars().collect(),
        }
    }

    pub fn from_symbols(symbols: Vec<char>) -> Self {
        Self { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    /// Symbol at 1-based position `pos`.
    pub fn symbol(&self, pos: usize) -> Option<char> {
        pos.checked_sub(1)
            .and_then(|i| self.symbols.get(i))
            .copied()
    }

    /// Distinct symbols occurring in the document, sorted.
    pub fn alphabet(&self) -> Vec<char> {
        let set: BTreeSet<char> = self.symbols.iter().copied().collect();
        set.into_iter().collect()
    }

    /// The full-document span `⟨1,ℓ+1⟩`.
    pub fn full_span(&self) -> Span {
        Span {
            start: 1,
            end: self.len() + 1,
        }
    }

    pub fn slice(&self, span: Span) -> Result<&[char], ModelError> {
        if !span.is_valid_for(self.len()) {
            return Err(ModelError::SpanOutOfRange {
                span,
                len: self.len(),
            });
        }
        Ok(&self.symbols[span.start - 1..span.end - 1])
    }

    /// `s_⟨i,j⟩`, the symbols at positions `i..j-1`.
    pub fn span_substring(&self, span: Span) -> Result<String, ModelError> {
        self.slice(span).map(|s| s.iter().collect())
    }

    /// Every valid span of the document, ordered by start then end.
    pub fn all_spans(&self) -> Vec<Span> {
        let n = self.len();
        let mut out = Vec::with_capacity((n + 1) * (n + 2) / 2);
        for start in 1..=n + 1 {
            for end in start..=n + 1 {
                out.push(Span { start, end });
            }
        }
        out
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.symbols {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Half-open span `⟨start,end⟩` with 1-based positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Result<Self, ModelError> {
        if start == 0 || start > end {
            return Err(ModelError::ReversedSpan { start, end });
        }
        Ok(Self { start, end })
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn is_valid_for(&self, doc_len: usize) -> bool {
        1 <= self.start && self.start <= self.end && self.end <= doc_len + 1
    }
}

/// TSV rendering: `i..j`.
impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl FromStr for Span {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || ModelError::MalformedSpan(s.to_string());
        let (a, b) = s.split_once("..").ok_or_else(malformed)?;
        let start = a.parse().map_err(|_| malformed())?;
        let end = b.parse().map_err(|_| malformed())?;
        Span::new(start, end)
    }
}

impl Serialize for Span {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.start, self.end].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Span {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [start, end] = <[usize; 2]>::deserialize(deserializer)?;
        Span::new(start, end).map_err(de::Error::custom)
    }
}

/// A capture variable name: a nonempty run of letters, digits and `_`
/// that does not start with a digit. The letters `Σ`, `ε` and `∅` are
/// reserved by the formula syntax and never part of a name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarName(Arc<str>);

impl VarName {
    pub fn new(name: &str) -> Result<Self, ModelError> {
        if Self::is_valid(name) {
            Ok(Self(Arc::from(name)))
        } else {
            Err(ModelError::InvalidVariableName(name.to_string()))
        }
    }

    pub fn is_valid(name: &str) -> bool {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if Self::is_name_char(c) && !c.is_numeric() => {}
            _ => return false,
        }
        chars.all(Self::is_name_char)
    }

    /// Characters that may appear in a variable name.
    pub fn is_name_char(c: char) -> bool {
        (c.is_alphanumeric() || c == '_') && !matches!(c, 'Σ' | 'ε' | '∅')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for VarName {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(s)
    }
}

/// Shorthand used throughout tests and generators.
pub fn var(name: &str) -> VarName {
    VarName::new(name).expect("valid variable name")
}

/// Assignment of spans to variables. Equality and hashing go through the
/// sorted `(variable, span)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SpanTuple(BTreeMap<VarName, Span>);

impl SpanTuple {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, var: VarName, span: Span) -> Option<Span> {
        self.0.insert(var, span)
    }

    pub fn get(&self, var: &VarName) -> Option<Span> {
        self.0.get(var).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = &VarName> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarName, &Span)> {
        self.0.iter()
    }

    /// Restriction to the variables in `keep`.
    pub fn restrict(&self, keep: &BTreeSet<VarName>) -> SpanTuple {
        SpanTuple(
            self.0
                .iter()
                .filter(|(v, _)| keep.contains(*v))
                .map(|(v, s)| (v.clone(), *s))
                .collect(),
        )
    }

    /// Tab-separated spans in variable order.
    pub fn to_tsv(&self) -> String {
        let cols: Vec<String> = self.0.values().map(|s| s.to_string()).collect();
        cols.join("\t")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("span tuples always serialize")
    }

    pub fn is_valid_for(&self, doc_len: usize) -> bool {
        self.0.values().all(|s| s.is_valid_for(doc_len))
    }
}

impl FromIterator<(VarName, Span)> for SpanTuple {
    fn from_iter<I: IntoIterator<Item = (VarName, Span)>>(iter: I) -> Self {
        SpanTuple(iter.into_iter().collect())
    }
}

impl fmt::Display for SpanTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, s)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}={s}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for SpanTuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (v, s) in &self.0 {
            map.serialize_entry(v.as_str(), s)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for SpanTuple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct TupleVisitor;

        impl<'de> Visitor<'de> for TupleVisitor {
            type Value = SpanTuple;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from variable names to [start, end] pairs")
            }

            fn visit_map<M: MapAccess<'de>>(self, mut access: M) -> Result<SpanTuple, M::Error> {
                let mut tuple = SpanTuple::new();
                while let Some((name, span)) = access.next_entry::<String, Span>()? {
                    let v = VarName::new(&name).map_err(de::Error::custom)?;
                    tuple.insert(v, span);
                }
                Ok(tuple)
            }
        }

        deserializer.deserialize_map(TupleVisitor)
    }
}

/// A `(V,s)`-relation: a duplicate-free set of tuples total on `V`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpanRelation {
    vars: BTreeSet<VarName>,
    tuples: BTreeSet<SpanTuple>,
}

impl SpanRelation {
    pub fn new(vars: BTreeSet<VarName>) -> Self {
        Self {
            vars,
            tuples: BTreeSet::new(),
        }
    }

    pub fn from_tuples(
        vars: BTreeSet<VarName>,
        tuples: impl IntoIterator<Item = SpanTuple>,
    ) -> Result<Self, ModelError> {
        let mut rel = Self::new(vars);
        for t in tuples {
            rel.insert(t)?;
        }
        Ok(rel)
    }

    /// Inserts a tuple; returns `Ok(false)` when it was already present.
    pub fn insert(&mut self, tuple: SpanTuple) -> Result<bool, ModelError> {
        for v in &self.vars {
            if tuple.get(v).is_none() {
                return Err(ModelError::MissingVariable(v.clone()));
            }
        }
        if let Some(extra) = tuple.vars().find(|v| !self.vars.contains(*v)) {
            return Err(ModelError::UnexpectedVariable(extra.clone()));
        }
        Ok(self.tuples.insert(tuple))
    }

    pub fn vars(&self) -> &BTreeSet<VarName> {
        &self.vars
    }

    pub fn tuples(&self) -> &BTreeSet<SpanTuple> {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &SpanTuple) -> bool {
        self.tuples.contains(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &SpanTuple> {
        self.tuples.iter()
    }
}

/// A letter of a ref-word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RefSymbol {
    Terminal(char),
    Open(VarName),
    Close(VarName),
}

impl fmt::Display for RefSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefSymbol::Terminal(c) => write!(f, "{c}"),
            RefSymbol::Open(v) => write!(f, "⊢{v}"),
            RefSymbol::Close(v) => write!(f, "⊣{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RefWord(pub Vec<RefSymbol>);

impl RefWord {
    pub fn new(symbols: Vec<RefSymbol>) -> Self {
        Self(symbols)
    }

    pub fn terminals(text: &str) -> Self {
        Self(text.chars().map(RefSymbol::Terminal).collect())
    }

    pub fn symbols(&self) -> &[RefSymbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &RefWord) -> RefWord {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        RefWord(v)
    }

    /// Checks that every variable of `vars` is opened once and later closed
    /// once, and that no other variable occurs.
    pub fn validate(&self, vars: &BTreeSet<VarName>) -> Result<(), ModelError> {
        let mut seen: BTreeMap<&VarName, VarState> = BTreeMap::new();
        for sym in &self.0 {
            match sym {
                RefSymbol::Terminal(_) => {}
                RefSymbol::Open(v) => {
                    if !vars.contains(v) {
                        return Err(ModelError::UnexpectedVariable(v.clone()));
                    }
                    match seen.get(v) {
                        None => {
                            seen.insert(v, VarState::Open);
                        }
                        Some(_) => {
                            return Err(ModelError::InvalidRefWord {
                                var: v.clone(),
                                reason: "opened more than once",
                            })
                        }
                    }
                }
                RefSymbol::Close(v) => {
                    if !vars.contains(v) {
                        return Err(ModelError::UnexpectedVariable(v.clone()));
                    }
                    match seen.get(v) {
                        Some(VarState::Open) => {
                            seen.insert(v, VarState::Closed);
                        }
                        Some(_) => {
                            return Err(ModelError::InvalidRefWord {
                                var: v.clone(),
                                reason: "closed more than once",
                            })
                        }
                        None => {
                            return Err(ModelError::InvalidRefWord {
                                var: v.clone(),
                                reason: "closed before it was opened",
                            })
                        }
                    }
                }
            }
        }
        for v in vars {
            match seen.get(v) {
                Some(VarState::Closed) => {}
                Some(_) => {
                    return Err(ModelError::InvalidRefWord {
                        var: v.clone(),
                        reason: "never closed",
                    })
                }
                None => {
                    return Err(ModelError::InvalidRefWord {
                        var: v.clone(),
                        reason: "never opened",
                    })
                }
            }
        }
        Ok(())
    }

    pub fn is_valid_for(&self, vars: &BTreeSet<VarName>) -> bool {
        self.validate(vars).is_ok()
    }
}

impl fmt::Display for RefWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Erases variable operations, keeping the terminals in order.
pub fn clean(word: &[RefSymbol]) -> String {
    word.iter()
        .filter_map(|s| match s {
            RefSymbol::Terminal(c) => Some(*c),
            _ => None,
        })
        .collect()
}

/// Interprets a valid ref-word as a tuple: `⊢x` after `k` terminals
/// starts the span at `k+1`, and the span ends after the terminals read
/// before `⊣x`.
pub fn ref_word_to_tuple(
    word: &RefWord,
    vars: &BTreeSet<VarName>,
) -> Result<SpanTuple, ModelError> {
    word.validate(vars)?;
    let mut tuple = SpanTuple::new();
    let mut opened: BTreeMap<&VarName, usize> = BTreeMap::new();
    let mut read = 0usize;
    for sym in &word.0 {
        match sym {
            RefSymbol::Terminal(_) => read += 1,
            RefSymbol::Open(v) => {
                opened.insert(v, read + 1);
            }
            RefSymbol::Close(v) => {
                let start = opened[v];
                tuple.insert(
                    v.clone(),
                    Span {
                        start,
                        end: read + 1,
                    },
                );
            }
        }
    }
    Ok(tuple)
}

/// Lifecycle of a variable along a run. The derived order `w < o < c`
/// is the one used for configuration comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarState {
    Waiting,
    Open,
    Closed,
}

impl VarState {
    pub fn letter(self) -> char {
        match self {
            VarState::Waiting => 'w',
            VarState::Open => 'o',
            VarState::Closed => 'c',
        }
    }
}

/// Variable states indexed by the position of each variable in an
/// ascending, name-sorted variable list. Comparing two configurations over
/// the same list lexicographically gives the canonical letter order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration(pub Vec<VarState>);

impl Configuration {
    pub fn uniform(len: usize, state: VarState) -> Self {
        Self(vec![state; len])
    }

    pub fn states(&self) -> &[VarState] {
        &self.0
    }

    pub fn is_all(&self, state: VarState) -> bool {
        self.0.iter().all(|s| *s == state)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for s in &self.0 {
            write!(f, "{}", s.letter())?;
        }
        f.write_str(")")
    }
}

/// `ℓ+1` configurations `c_1 … c_{ℓ+1}` over a sorted variable list;
/// `c_l` is the configuration immediately before reading symbol `l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConfigSequence {
    vars: Vec<VarName>,
    configs: Vec<Configuration>,
}

impl ConfigSequence {
    /// Builds a sequence after checking per-variable monotonicity.
    pub fn new(vars: Vec<VarName>, configs: Vec<Configuration>) -> Result<Self, ModelError> {
        let seq = Self { vars, configs };
        seq.validate()?;
        Ok(seq)
    }

    pub fn vars(&self) -> &[VarName] {
        &self.vars
    }

    pub fn configs(&self) -> &[Configuration] {
        &self.configs
    }

    pub fn doc_len(&self) -> usize {
        self.configs.len().saturating_sub(1)
    }

    fn validate(&self) -> Result<(), ModelError> {
        if self.configs.is_empty() {
            return Err(ModelError::EmptyConfigSequence);
        }
        for (x, name) in self.vars.iter().enumerate() {
            for (pos, pair) in self.configs.windows(2).enumerate() {
                let (a, b) = (pair[0].0[x], pair[1].0[x]);
                if b < a {
                    return Err(ModelError::InvalidConfigSequence {
                        var: name.clone(),
                        position: pos + 2,
                    });
                }
            }
            // every variable must be closed at the end
            if self.configs.last().unwrap().0[x] != VarState::Closed {
                return Err(ModelError::InvalidConfigSequence {
                    var: name.clone(),
                    position: self.configs.len(),
                });
            }
        }
        Ok(())
    }

    /// `c_l(x)` is `w` for `l < i`, `o` for `i ≤ l < j`, `c` for `l ≥ j`.
    pub fn from_tuple(
        tuple: &SpanTuple,
        vars: &BTreeSet<VarName>,
        doc_len: usize,
    ) -> Result<Self, ModelError> {
        let vars: Vec<VarName> = vars.iter().cloned().collect();
        let mut spans = Vec::with_capacity(vars.len());
        for v in &vars {
            let s = tuple
                .get(v)
                .ok_or_else(|| ModelError::MissingVariable(v.clone()))?;
            if !s.is_valid_for(doc_len) {
                return Err(ModelError::SpanOutOfRange {
                    span: s,
                    len: doc_len,
                });
            }
            spans.push(s);
        }
        let configs = (1..=doc_len + 1)
            .map(|l| {
                Configuration(
                    spans
                        .iter()
                        .map(|s| {
                            if l < s.start {
                                VarState::Waiting
                            } else if l < s.end {
                                VarState::Open
                            } else {
                                VarState::Closed
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        Ok(Self { vars, configs })
    }

    /// For each variable, the span starts at the first position whose state
    /// is not `w` and ends at the first position whose state is `c`.
    pub fn to_tuple(&self) -> SpanTuple {
        let mut tuple = SpanTuple::new();
        for (x, name) in self.vars.iter().enumerate() {
            let start = self
                .configs
                .iter()
                .position(|c| c.0[x] != VarState::Waiting)
                .expect("validated sequence closes every variable")
                + 1;
            let end = self
                .configs
                .iter()
                .position(|c| c.0[x] == VarState::Closed)
                .expect("validated sequence closes every variable")
                + 1;
            tuple.insert(name.clone(), Span { start, end });
        }
        tuple
    }

    /// Compact rendering such as `wo c` per variable column: one letter per
    /// configuration when there is a single variable.
    pub fn letters(&self) -> Vec<String> {
        self.configs
            .iter()
            .map(|c| c.0.iter().map(|s| s.letter()).collect())
            .collect()
    }
}

pub fn tuple_to_config_sequence(
    tuple: &SpanTuple,
    vars: &BTreeSet<VarName>,
    doc_len: usize,
) -> Result<ConfigSequence, ModelError> {
    ConfigSequence::from_tuple(tuple, vars, doc_len)
}

pub fn config_sequence_to_tuple(seq: &ConfigSequence) -> SpanTuple {
    seq.to_tuple()
}

/// Sort key placing tuples in the radix order of their configuration
/// sequences. All sequences of one document have the same length, so this
/// is the lexicographic order of the configuration lists.
pub fn radix_key(tuple: &SpanTuple, doc_len: usize) -> Vec<Configuration> {
    let vars: BTreeSet<VarName> = tuple.vars().cloned().collect();
    ConfigSequence::from_tuple(tuple, &vars, doc_len)
        .map(|s| s.configs)
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(names: &[&str]) -> BTreeSet<VarName> {
        names.iter().map(|n| var(n)).collect()
    }

    fn open(n: &str) -> RefSymbol {
        RefSymbol::Open(var(n))
    }

    fn close(n: &str) -> RefSymbol {
        RefSymbol::Close(var(n))
    }

    fn word(parts: &[RefSymbol]) -> RefWord {
        RefWord(parts.to_vec())
    }

    fn t(c: char) -> RefSymbol {
        RefSymbol::Terminal(c)
    }

    #[test]
    fn substring_examples() {
        let d = Document::new("chocolate cookie");
        assert_eq!(d.len(), 16);
        assert_eq!(d.span_substring(Span::new(4, 6).unwrap()).unwrap(), "co");
        assert_eq!(d.span_substring(Span::new(11, 13).unwrap()).unwrap(), "co");
        assert_eq!(d.span_substring(Span::new(1, 1).unwrap()).unwrap(), "");
        assert_eq!(d.span_substring(Span::new(2, 2).unwrap()).unwrap(), "");
        assert_eq!(d.span_substring(d.full_span()).unwrap(), "chocolate cookie");
        assert_ne!(Span::new(4, 6).unwrap(), Span::new(11, 13).unwrap());
    }

    #[test]
    fn substring_out_of_range() {
        let d = Document::new("ab");
        let err = d.span_substring(Span::new(2, 4).unwrap()).unwrap_err();
        assert!(matches!(err, ModelError::SpanOutOfRange { .. }));
        assert!(Span::new(3, 2).is_err());
        assert!(Span::new(0, 1).is_err());
    }

    #[test]
    fn spans_are_scalar_indexed() {
        let d = Document::new("ñé€x");
        assert_eq!(d.len(), 4);
        assert_eq!(d.span_substring(Span::new(2, 4).unwrap()).unwrap(), "é€");
    }

    #[test]
    fn clean_examples() {
        let r1 = word(&[
            t('c'),
            open("x"),
            t('o'),
            t('o'),
            close("x"),
            t('k'),
            t('i'),
            t('e'),
        ]);
        assert_eq!(clean(&r1.0), "cookie");
        assert_eq!(clean(&[open("x"), close("x")]), "");
        assert_eq!(clean(&RefWord::terminals("plain").0), "plain");
    }

    #[test]
    fn validity_examples() {
        let v = set(&["x"]);
        assert!(word(&[t('c'), open("x"), t('o'), close("x")]).is_valid_for(&v));
        assert!(word(&[open("x"), close("x")]).is_valid_for(&v));
        assert!(!word(&[close("x"), t('a'), open("x")]).is_valid_for(&v));
        assert!(
            !word(&[open("x"), t('a'), close("x"), open("x"), t('a'), close("x")]).is_valid_for(&v)
        );
        // valid for {x} is not valid for a superset
        assert!(!word(&[open("x"), close("x")]).is_valid_for(&set(&["x", "y"])));
    }

    #[test]
    fn ref_word_interpretation() {
        let v = set(&["x"]);
        let r1 = word(&[
            t('c'),
            open("x"),
            t('o'),
            t('o'),
            close("x"),
            t('k'),
            t('i'),
            t('e'),
        ]);
        let mu = ref_word_to_tuple(&r1, &v).unwrap();
        assert_eq!(mu.get(&var("x")), Some(Span::new(2, 4).unwrap()));

        let empty = ref_word_to_tuple(&word(&[open("x"), close("x")]), &v).unwrap();
        assert_eq!(empty.get(&var("x")), Some(Span::new(1, 1).unwrap()));

        let mut r2: Vec<RefSymbol> = "cookie".chars().map(t).collect();
        r2.push(open("x"));
        r2.push(close("x"));
        let mu2 = ref_word_to_tuple(&RefWord(r2), &v).unwrap();
        assert_eq!(mu2.get(&var("x")), Some(Span::new(7, 7).unwrap()));
    }

    #[test]
    fn invalid_ref_word_names_variable() {
        let err = ref_word_to_tuple(&word(&[open("y")]), &set(&["y"])).unwrap_err();
        match err {
            ModelError::InvalidRefWord { var: v, .. } => assert_eq!(v, var("y")),
            other => panic!("unexpected {other:?}"),
        }
    }

    fn letters_of(seq: &ConfigSequence) -> String {
        seq.letters().concat()
    }

    #[test]
    fn config_sequence_examples() {
        let v = set(&["x"]);
        let mut mu = SpanTuple::new();
        mu.insert(var("x"), Span::new(2, 3).unwrap());
        let seq = tuple_to_config_sequence(&mu, &v, 2).unwrap();
        assert_eq!(letters_of(&seq), "woc");

        let mut mu = SpanTuple::new();
        mu.insert(var("x"), Span::new(1, 1).unwrap());
        let seq = tuple_to_config_sequence(&mu, &v, 2).unwrap();
        assert_eq!(letters_of(&seq), "ccc");
    }

    #[test]
    fn config_round_trip_on_all_spans() {
        let v = set(&["x"]);
        let d = Document::new("aa");
        let spans = d.all_spans();
        assert_eq!(spans.len(), 6);
        for s in spans {
            let mut mu = SpanTuple::new();
            mu.insert(var("x"), s);
            let seq = tuple_to_config_sequence(&mu, &v, 2).unwrap();
            assert!(seq.configs().last().unwrap().is_all(VarState::Closed));
            assert_eq!(config_sequence_to_tuple(&seq), mu);
        }
    }

    #[test]
    fn invalid_config_sequence_rejected() {
        use VarState::*;
        let vars = vec![var("x")];
        let bad = vec![
            Configuration(vec![Open]),
            Configuration(vec![Waiting]),
            Configuration(vec![Closed]),
        ];
        assert!(ConfigSequence::new(vars.clone(), bad).is_err());
        let unclosed = vec![Configuration(vec![Waiting]), Configuration(vec![Open])];
        assert!(ConfigSequence::new(vars, unclosed).is_err());
    }

    #[test]
    fn json_and_tsv_rendering() {
        let mut mu = SpanTuple::new();
        mu.insert(var("y"), Span::new(3, 5).unwrap());
        mu.insert(var("x"), Span::new(1, 2).unwrap());
        assert_eq!(mu.to_json(), r#"{"x":[1,2],"y":[3,5]}"#);
        assert_eq!(mu.to_tsv(), "1..2\t3..5");
        let back: SpanTuple = serde_json::from_str(&mu.to_json()).unwrap();
        assert_eq!(back, mu);
        assert_eq!("3..5".parse::<Span>().unwrap(), Span::new(3, 5).unwrap());
        assert!("3-5".parse::<Span>().is_err());
    }

    #[test]
    fn relation_rejects_partial_tuples() {
        let mut rel = SpanRelation::new(set(&["x", "y"]));
        let mut mu = SpanTuple::new();
        mu.insert(var("x"), Span::new(1, 1).unwrap());
        assert!(rel.insert(mu.clone()).is_err());
        mu.insert(var("y"), Span::new(1, 1).unwrap());
        assert!(rel.insert(mu.clone()).unwrap());
        assert!(!rel.insert(mu).unwrap());
        assert_eq!(rel.len(), 1);
    }

    #[test]
    fn variable_names() {
        assert!(VarName::new("x_mail").is_ok());
        assert!(VarName::new("y1").is_ok());
        assert!(VarName::new("1y").is_err());
        assert!(VarName::new("").is_err());
        assert!(VarName::new("a-b").is_err());
        assert!(VarName::new("Σx").is_err());
    }
}
