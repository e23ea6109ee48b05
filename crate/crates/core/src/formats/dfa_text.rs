//! Native automaton text format.
//!
//! ```text
//! symbols:
//!   A
//!   B
//! states: 3
//! initial: 0
//! accepting:
//!   0 1
//! delta:
//!   0 A -> 1
//!   0 B -> 0
//!   0 * -> 2
//! ```
//!
//! `*` rows give the default ("other") successor; the transition table must
//! be total.

use std::fs;
use std::path::Path;

use super::{FormatError, ParseError};
use crate::automata::Dfa;
use crate::events::Activity;

pub fn read_dfa(path: &Path) -> Result<Dfa, FormatError> {
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    parse_dfa(&text).map_err(|e| FormatError::parse(path, e))
}

pub fn write_dfa(path: &Path, dfa: &Dfa) -> Result<(), FormatError> {
    fs::write(path, to_text(dfa)).map_err(|e| FormatError::io(path, e))
}

pub fn parse_dfa(text: &str) -> Result<Dfa, ParseError> {
    enum Section {
        None,
        Symbols,
        Accepting,
        Delta,
    }
    let mut section = Section::None;
    let mut symbols: Vec<Activity> = Vec::new();
    let mut states: Option<usize> = None;
    let mut initial: Option<usize> = None;
    let mut accepting: Vec<usize> = Vec::new();
    let mut rows: Vec<(usize, Option<usize>, usize, usize)> = Vec::new(); // (state, symbol, succ, line)

    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "symbols:" {
            section = Section::Symbols;
            continue;
        }
        if line == "accepting:" {
            section = Section::Accepting;
            continue;
        }
        if line == "delta:" {
            section = Section::Delta;
            continue;
        }
        if let Some(rest) = line.strip_prefix("states:") {
            states = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| ParseError::new(lineno, "states: expects a number"))?,
            );
            continue;
        }
        if let Some(rest) = line.strip_prefix("initial:") {
            initial = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| ParseError::new(lineno, "initial: expects a state id"))?,
            );
            continue;
        }
        match section {
            Section::None => {
                return Err(ParseError::new(lineno, format!("unexpected entry {line:?}")))
            }
            Section::Symbols => {
                symbols.push(
                    Activity::new(line).map_err(|e| ParseError::new(lineno, e.to_string()))?,
                );
            }
            Section::Accepting => {
                for token in line.split_whitespace() {
                    accepting.push(token.parse().map_err(|_| {
                        ParseError::new(lineno, format!("bad state id {token:?}"))
                    })?);
                }
            }
            Section::Delta => {
                let (lhs, succ) = line.split_once("->").ok_or_else(|| {
                    ParseError::new(lineno, format!("expected 'state sym -> state', got {line:?}"))
                })?;
                let succ: usize = succ.trim().parse().map_err(|_| {
                    ParseError::new(lineno, format!("bad successor in {line:?}"))
                })?;
                let mut parts = lhs.split_whitespace();
                let state: usize = parts
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| ParseError::new(lineno, format!("bad state in {line:?}")))?;
                let sym = parts
                    .next()
                    .ok_or_else(|| ParseError::new(lineno, format!("missing symbol in {line:?}")))?;
                let symbol = if sym == "*" {
                    None
                } else {
                    let a = Activity::new(sym)
                        .map_err(|e| ParseError::new(lineno, e.to_string()))?;
                    Some(symbols.iter().position(|s| s == &a).ok_or_else(|| {
                        ParseError::new(lineno, format!("undeclared symbol {sym:?}"))
                    })?)
                };
                rows.push((state, symbol, succ, lineno));
            }
        }
    }

    let n = states.ok_or_else(|| ParseError::new(0, "missing states: line"))?;
    let initial = initial.ok_or_else(|| ParseError::new(0, "missing initial: line"))?;
    let mut delta = vec![vec![usize::MAX; symbols.len()]; n];
    let mut defaults = vec![usize::MAX; n];
    for (state, symbol, succ, lineno) in rows {
        if state >= n || succ >= n {
            return Err(ParseError::new(lineno, "state id out of range"));
        }
        match symbol {
            Some(col) => delta[state][col] = succ,
            None => defaults[state] = succ,
        }
    }
    for s in 0..n {
        if defaults[s] == usize::MAX || delta[s].iter().any(|&t| t == usize::MAX) {
            return Err(ParseError::new(
                0,
                format!("state {s} is missing transitions (the table must be total)"),
            ));
        }
    }
    let mut acc = vec![false; n];
    for s in accepting {
        if s >= n {
            return Err(ParseError::new(0, format!("accepting state {s} out of range")));
        }
        acc[s] = true;
    }
    Dfa::new(symbols, initial, acc, delta, defaults).map_err(|e| ParseError::new(0, e.to_string()))
}

pub fn to_text(dfa: &Dfa) -> String {
    let mut out = String::from("symbols:\n");
    for s in dfa.symbols() {
        out.push_str(&format!("  {s}\n"));
    }
    out.push_str(&format!("states: {}\n", dfa.state_count()));
    out.push_str(&format!("initial: {}\n", dfa.initial()));
    out.push_str("accepting:\n  ");
    let acc: Vec<String> = (0..dfa.state_count())
        .filter(|&s| dfa.is_accepting(s))
        .map(|s| s.to_string())
        .collect();
    out.push_str(&acc.join(" "));
    out.push_str("\ndelta:\n");
    for state in 0..dfa.state_count() {
        for (i, sym) in dfa.symbols().iter().enumerate() {
            out.push_str(&format!("  {state} {sym} -> {}\n", dfa.delta_at(state, i)));
        }
        out.push_str(&format!("  {state} * -> {}\n", dfa.default_successor(state)));
    }
    out
}
