//! Event-log readers and writers.
//!
//! Lines format: one trace per line, activities separated by `,`; an empty
//! line is the empty trace. CSV: header `case_id,activity`, one event per
//! row, traces grouped by case id in order of first appearance (rows of
//! different cases may interleave); empty traces are not representable.
//! XES subset: `<trace>` elements containing `<event>` elements whose
//! activity is the `<string key="concept:name" value="..."/>` attribute;
//! all other attributes are ignored.

use std::fs;
use std::path::Path;

use quick_xml::events::Event as XmlEvent;
use quick_xml::Reader;

use super::{FormatError, LogFormat, ParseError};
use crate::events::{Activity, EventLog, Trace};

/// Reads a log file in the given format.
pub fn read_log(path: &Path, format: LogFormat) -> Result<EventLog, FormatError> {
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    parse_log(&text, format).map_err(|e| FormatError::parse(path, e))
}

/// Reads a log file, guessing the format from the extension.
pub fn read_log_auto(path: &Path) -> Result<EventLog, FormatError> {
    read_log(path, LogFormat::from_path(path)?)
}

pub fn parse_log(text: &str, format: LogFormat) -> Result<EventLog, ParseError> {
    match format {
        LogFormat::Lines => parse_lines(text),
        LogFormat::Csv => parse_csv(text),
        LogFormat::Xes => parse_xes(text),
    }
}

pub fn write_log(path: &Path, log: &EventLog, format: LogFormat) -> Result<(), FormatError> {
    let text = match format {
        LogFormat::Lines => to_lines(log),
        LogFormat::Csv => to_csv(log),
        LogFormat::Xes => to_xes(log),
    };
    fs::write(path, text).map_err(|e| FormatError::io(path, e))
}

pub fn parse_lines(text: &str) -> Result<EventLog, ParseError> {
    let mut traces = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            traces.push(Trace::empty());
            continue;
        }
        let mut events = Vec::new();
        for token in line.split(',') {
            let token = token.trim();
            let activity = Activity::new(token)
                .map_err(|e| ParseError::new(i + 1, e.to_string()))?;
            events.push(activity);
        }
        traces.push(Trace::new(events));
    }
    Ok(EventLog::new(traces))
}

pub fn to_lines(log: &EventLog) -> String {
    let mut out = String::new();
    for trace in log.traces() {
        let line: Vec<&str> = trace.iter().map(|a| a.name()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_csv(text: &str) -> Result<EventLog, ParseError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "case_id,activity" => {}
        Some((i, header)) => {
            return Err(ParseError::new(
                i + 1,
                format!("expected header 'case_id,activity', got {header:?}"),
            ))
        }
        None => return Err(ParseError::new(1, "empty file")),
    }
    // traces grouped by case id, cases ordered by first appearance
    let mut order: Vec<String> = Vec::new();
    let mut by_case: std::collections::BTreeMap<String, Vec<Activity>> =
        std::collections::BTreeMap::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (case, activity) = line.split_once(',').ok_or_else(|| {
            ParseError::new(i + 1, format!("expected 'case_id,activity', got {line:?}"))
        })?;
        let activity = Activity::new(activity.trim())
            .map_err(|e| ParseError::new(i + 1, e.to_string()))?;
        let case = case.trim().to_string();
        if !by_case.contains_key(&case) {
            order.push(case.clone());
        }
        by_case.entry(case).or_default().push(activity);
    }
    Ok(EventLog::new(
        order
            .into_iter()
            .map(|case| Trace::new(by_case.remove(&case).unwrap()))
            .collect(),
    ))
}

pub fn to_csv(log: &EventLog) -> String {
    let mut out = String::from("case_id,activity\n");
    for (i, trace) in log.traces().iter().enumerate() {
        for event in trace {
            out.push_str(&format!("case_{i},{event}\n"));
        }
    }
    out
}

pub fn parse_xes(text: &str) -> Result<EventLog, ParseError> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);
    let mut traces: Vec<Trace> = Vec::new();
    let mut current: Option<Vec<Activity>> = None;
    let mut in_event = false;
    let mut event_name: Option<Activity> = None;

    let line_of = |reader: &Reader<&[u8]>| text[..reader.buffer_position() as usize]
        .bytes()
        .filter(|&b| b == b'\n')
        .count()
        + 1;

    loop {
        match reader.read_event() {
            Err(e) => return Err(ParseError::new(line_of(&reader), e.to_string())),
            Ok(XmlEvent::Eof) => break,
            Ok(XmlEvent::Start(tag)) => match tag.local_name().as_ref() {
                b"trace" => current = Some(Vec::new()),
                b"event" => {
                    in_event = true;
                    event_name = None;
                }
                _ => {}
            },
            Ok(XmlEvent::End(tag)) => match tag.local_name().as_ref() {
                b"trace" => {
                    if let Some(events) = current.take() {
                        traces.push(Trace::new(events));
                    }
                }
                b"event" => {
                    let line = line_of(&reader);
                    let name = event_name.take().ok_or_else(|| {
                        ParseError::new(line, "event without a concept:name attribute")
                    })?;
                    if let Some(events) = current.as_mut() {
                        events.push(name);
                    }
                    in_event = false;
                }
                _ => {}
            },
            Ok(XmlEvent::Empty(tag)) => match tag.local_name().as_ref() {
                b"trace" => traces.push(Trace::empty()),
                b"string" if in_event => {
                    let mut key = None;
                    let mut value = None;
                    for attr in tag.attributes().flatten() {
                        match attr.key.as_ref() {
                            b"key" => key = Some(attr.value.to_vec()),
                            b"value" => value = Some(attr.value.to_vec()),
                            _ => {}
                        }
                    }
                    if key.as_deref() == Some(b"concept:name") {
                        let line = line_of(&reader);
                        let raw = value.ok_or_else(|| {
                            ParseError::new(line, "concept:name without a value")
                        })?;
                        let name = String::from_utf8(raw)
                            .map_err(|e| ParseError::new(line, e.to_string()))?;
                        event_name = Some(
                            Activity::new(&name)
                                .map_err(|e| ParseError::new(line, e.to_string()))?,
                        );
                    }
                }
                _ => {}
            },
            Ok(_) => {}
        }
    }
    Ok(EventLog::new(traces))
}

pub fn to_xes(log: &EventLog) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<log xes.version=\"1.0\">\n",
    );
    for trace in log.traces() {
        out.push_str("  <trace>\n");
        for event in trace {
            out.push_str(&format!(
                "    <event><string key=\"concept:name\" value=\"{event}\"/></event>\n"
            ));
        }
        out.push_str("  </trace>\n");
    }
    out.push_str("</log>\n");
    out
}
