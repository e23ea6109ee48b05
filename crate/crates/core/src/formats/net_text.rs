//! Native Petri-net text format.
//!
//! ```text
//! places:
//!   p0
//!   p1
//! transitions:
//!   t0 label=A
//!   t1 silent
//! arcs:
//!   p0 -> t0
//!   t0 -> p1
//! initial:
//!   p0
//! final:
//!   p1
//! ```
//!
//! The `initial:` section holds one marking (space-separated places, one
//! token per occurrence); `final:` holds one marking per line.

use std::fs;
use std::path::Path;

use super::{FormatError, ParseError};
use crate::events::Activity;
use crate::petri::PetriNet;

pub fn read_net(path: &Path) -> Result<PetriNet, FormatError> {
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    parse_net(&text).map_err(|e| FormatError::parse(path, e))
}

pub fn write_net(path: &Path, net: &PetriNet) -> Result<(), FormatError> {
    fs::write(path, to_text(net)).map_err(|e| FormatError::io(path, e))
}

#[derive(PartialEq, Clone, Copy)]
enum Section {
    None,
    Places,
    Transitions,
    Arcs,
    Initial,
    Final,
}

pub fn parse_net(text: &str) -> Result<PetriNet, ParseError> {
    let mut builder = PetriNet::builder();
    let mut section = Section::None;
    let mut initial_seen = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line {
            "places:" => section = Section::Places,
            "transitions:" => section = Section::Transitions,
            "arcs:" => section = Section::Arcs,
            "initial:" => section = Section::Initial,
            "final:" => section = Section::Final,
            entry => match section {
                Section::None => {
                    return Err(ParseError::new(lineno, format!("entry {entry:?} before any section")))
                }
                Section::Places => {
                    builder.place(entry);
                }
                Section::Transitions => {
                    let mut parts = entry.split_whitespace();
                    let name = parts.next().unwrap();
                    match parts.next() {
                        Some("silent") => {
                            builder.transition(name, None);
                        }
                        Some(spec) if spec.starts_with("label=") => {
                            let label = Activity::new(&spec["label=".len()..])
                                .map_err(|e| ParseError::new(lineno, e.to_string()))?;
                            builder.transition(name, Some(label));
                        }
                        _ => {
                            return Err(ParseError::new(
                                lineno,
                                format!("expected '<name> label=<activity>' or '<name> silent', got {entry:?}"),
                            ))
                        }
                    }
                    if parts.next().is_some() {
                        return Err(ParseError::new(lineno, format!("trailing input in {entry:?}")));
                    }
                }
                Section::Arcs => {
                    let (from, to) = entry
                        .split_once("->")
                        .ok_or_else(|| ParseError::new(lineno, format!("expected 'from -> to', got {entry:?}")))?;
                    builder.arc(from.trim(), to.trim());
                }
                Section::Initial => {
                    if initial_seen {
                        return Err(ParseError::new(lineno, "more than one initial marking"));
                    }
                    initial_seen = true;
                    let places: Vec<&str> = entry.split_whitespace().collect();
                    builder.initial_marking(&places);
                }
                Section::Final => {
                    let places: Vec<&str> = entry.split_whitespace().collect();
                    builder.final_marking(&places);
                }
            },
        }
    }
    builder.build().map_err(|e| ParseError::new(0, e.to_string()))
}

pub fn to_text(net: &PetriNet) -> String {
    let mut out = String::from("places:\n");
    for p in net.place_names() {
        out.push_str(&format!("  {p}\n"));
    }
    out.push_str("transitions:\n");
    for t in net.transition_names() {
        match net.transition_label(t).unwrap() {
            Some(a) => out.push_str(&format!("  {t} label={a}\n")),
            None => out.push_str(&format!("  {t} silent\n")),
        }
    }
    out.push_str("arcs:\n");
    for t in net.transition_names() {
        let (inputs, outputs) = net.transition_arcs(t).unwrap();
        for p in inputs {
            out.push_str(&format!("  {p} -> {t}\n"));
        }
        for p in outputs {
            out.push_str(&format!("  {t} -> {p}\n"));
        }
    }
    out.push_str("initial:\n  ");
    out.push_str(&marking_places(net, net.initial_marking()));
    out.push('\n');
    out.push_str("final:\n");
    for m in net.final_markings() {
        out.push_str(&format!("  {}\n", marking_places(net, m)));
    }
    out
}

fn marking_places(net: &PetriNet, marking: &crate::petri::Marking) -> String {
    let mut names = Vec::new();
    for (i, &count) in marking.tokens().iter().enumerate() {
        for _ in 0..count {
            names.push(net.place_names()[i].as_str());
        }
    }
    names.join(" ")
}
