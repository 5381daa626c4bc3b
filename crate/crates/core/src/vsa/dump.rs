//! Line-oriented text form of an automaton:
//!
//! ```text
//! vsa v=x,y n=4
//! init 0
//! final 3
//! 0 ops:[⊢x,⊢y] 1
//! 1 sym:a 2
//! 2 any 2
//! 2 eps 3
//! ```
//!
//! In `sym:` labels, space, tab, newline, carriage return and backslash are
//! written as `\s`, `\t`, `\n`, `\r` and `\\`.

use std::collections::BTreeSet;
use std::fmt::Write;

use thiserror::Error;

use super::{Label, OpKind, VSetAutomaton, VarOp};
use crate::model::VarName;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("dump line {line}: {message}")]
pub struct DumpError {
    pub line: usize,
    pub message: String,
}

fn escape(c: char) -> String {
    match c {
        ' ' => "\\s".into(),
        '\t' => "\\t".into(),
        '\n' => "\\n".into(),
        '\r' => "\\r".into(),
        '\\' => "\\\\".into(),
        c => c.to_string(),
    }
}

fn label_text(label: &Label) -> String {
    match label {
        Label::Epsilon => "eps".into(),
        Label::Any => "any".into(),
        Label::Symbol(c) => format!("sym:{}", escape(*c)),
        Label::Ops(ops) => {
            let parts: Vec<String> = ops.iter().map(|o| o.to_string()).collect();
            format!("ops:[{}]", parts.join(","))
        }
    }
}

pub(crate) fn to_dump(a: &VSetAutomaton) -> String {
    let vars: Vec<&str> = a.vars().iter().map(|v| v.as_str()).collect();
    let mut out = String::new();
    let _ = writeln!(out, "vsa v={} n={}", vars.join(","), a.num_states());
    let _ = writeln!(out, "init {}", a.initial());
    let _ = writeln!(out, "final {}", a.final_state());
    for t in a.transitions() {
        let _ = writeln!(out, "{} {} {}", t.from, label_text(&t.label), t.to);
    }
    out
}

fn parse_label(text: &str) -> Result<Label, String> {
    if text == "eps" {
        return Ok(Label::Epsilon);
    }
    if text == "any" {
        return Ok(Label::Any);
    }
    if let Some(sym) = text.strip_prefix("sym:") {
        let c = match sym {
            "\\s" => ' ',
            "\\t" => '\t',
            "\\n" => '\n',
            "\\r" => '\r',
            "\\\\" => '\\',
            _ => {
                let mut chars = sym.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => c,
                    _ => return Err(format!("bad symbol {sym:?}")),
                }
            }
        };
        return Ok(Label::Symbol(c));
    }
    if let Some(body) = text.strip_prefix("ops:[").and_then(|s| s.strip_suffix(']')) {
        let mut ops = Vec::new();
        for part in body.split(',').filter(|p| !p.is_empty()) {
            let (kind, name) = if let Some(n) = part.strip_prefix('⊢') {
                (OpKind::Open, n)
            } else if let Some(n) = part.strip_prefix('⊣') {
                (OpKind::Close, n)
            } else {
                return Err(format!("bad operation {part:?}"));
            };
            let var = VarName::new(name).map_err(|e| e.to_string())?;
            ops.push(VarOp { kind, var });
        }
        if ops.is_empty() {
            return Err("empty operation set".into());
        }
        return Ok(Label::ops(ops));
    }
    Err(format!("unknown label {text:?}"))
}

/// Parses the output of `Display` for [`VSetAutomaton`].
pub fn parse_dump(text: &str) -> Result<VSetAutomaton, DumpError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let err = |line: usize, message: String| DumpError { line, message };

    let (ln, header) = lines
        .next()
        .ok_or_else(|| err(1, "missing header".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (vars, n) = match fields.as_slice() {
        ["vsa", v, n] => {
            let v = v
                .strip_prefix("v=")
                .ok_or_else(|| err(ln, "expected v=".into()))?;
            let n = n
                .strip_prefix("n=")
                .and_then(|n| n.parse::<usize>().ok())
                .ok_or_else(|| err(ln, "expected n=<states>".into()))?;
            let vars = v
                .split(',')
                .filter(|s| !s.is_empty())
                .map(VarName::new)
                .collect::<Result<BTreeSet<_>, _>>()
                .map_err(|e| err(ln, e.to_string()))?;
            (vars, n)
        }
        _ => return Err(err(ln, "expected `vsa v=<vars> n=<states>`".into())),
    };
    let mut state_line = |key: &str| -> Result<usize, DumpError> {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| err(ln, format!("missing {key} line")))?;
        line.strip_prefix(key)
            .and_then(|r| r.trim().parse::<usize>().ok())
            .filter(|&q| q < n)
            .ok_or_else(|| err(ln, format!("expected `{key} <state>`")))
    };
    let init = state_line("init")?;
    let fin = state_line("final")?;
    let mut a = VSetAutomaton::with_states(vars, n, init, fin);
    for (ln, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [from, label, to] = parts.as_slice() else {
            return Err(err(ln, "expected `<from> <label> <to>`".into()));
        };
        let state = |s: &str| s.parse::<usize>().ok().filter(|&q| q < n);
        let (Some(from), Some(to)) = (state(from), state(to)) else {
            return Err(err(ln, "state out of range".into()));
        };
        let label = parse_label(label).map_err(|m| err(ln, m))?;
        if let Label::Ops(ops) = &label {
            if let Some(op) = ops.iter().find(|o| !a.vars().contains(&o.var)) {
                return Err(err(ln, format!("undeclared variable {}", op.var)));
            }
        }
        a.add_transition(from, label, to);
    }
    Ok(a)
}
