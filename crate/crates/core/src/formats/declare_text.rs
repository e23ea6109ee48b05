//! Constraint text: one constraint per line, `Template[Arg1,Arg2,...]`.
//! Lines are sorted on write, so write ∘ read is the identity up to line
//! order.

use std::fs;
use std::path::Path;

use super::{FormatError, ParseError};
use crate::declare::{Constraint, Template};
use crate::events::Activity;

pub fn read_constraints(path: &Path) -> Result<Vec<Constraint>, FormatError> {
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    parse_constraints(&text).map_err(|e| FormatError::parse(path, e))
}

pub fn write_constraints(path: &Path, constraints: &[Constraint]) -> Result<(), FormatError> {
    fs::write(path, to_text(constraints)).map_err(|e| FormatError::io(path, e))
}

pub fn parse_constraints(text: &str) -> Result<Vec<Constraint>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        out.push(parse_line(line).map_err(|m| ParseError::new(i + 1, m))?);
    }
    Ok(out)
}

fn parse_line(line: &str) -> Result<Constraint, String> {
    let open = line
        .find('[')
        .ok_or_else(|| format!("expected 'Template[...]', got {line:?}"))?;
    if !line.ends_with(']') {
        return Err(format!("missing closing ']' in {line:?}"));
    }
    let template: Template = line[..open].trim().parse().map_err(|e| format!("{e}"))?;
    let args: Result<Vec<Activity>, _> = line[open + 1..line.len() - 1]
        .split(',')
        .map(|a| Activity::new(a.trim()))
        .collect();
    let args = args.map_err(|e| e.to_string())?;
    Constraint::new(template, args).map_err(|e| e.to_string())
}

pub fn to_text(constraints: &[Constraint]) -> String {
    let mut lines: Vec<String> = constraints.iter().map(|c| c.to_string()).collect();
    lines.sort();
    let mut out = lines.join("\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}
