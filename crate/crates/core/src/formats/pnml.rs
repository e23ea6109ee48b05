//! Minimal PNML subset: `place` (with `initialMarking`), `transition`
//! (labeled through `<name><text>…</text></name>`; a transition without a
//! name element is silent), and `arc`. Final markings are not part of core
//! PNML, so they travel in a `<toolspecific tool="procframe" version="1">`
//! element holding `<finalMarkings><marking><place idref="…" tokens="…"/>
//! </marking>…</finalMarkings>`.

use std::fs;
use std::path::Path;

use quick_xml::events::Event as XmlEvent;
use quick_xml::Reader;

use super::{FormatError, ParseError};
use crate::events::Activity;
use crate::petri::PetriNet;

pub fn read_pnml(path: &Path) -> Result<PetriNet, FormatError> {
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    parse_pnml(&text).map_err(|e| FormatError::parse(path, e))
}

pub fn write_pnml(path: &Path, net: &PetriNet) -> Result<(), FormatError> {
    fs::write(path, to_text(net)).map_err(|e| FormatError::io(path, e))
}

pub fn parse_pnml(text: &str) -> Result<PetriNet, ParseError> {
    #[derive(Default)]
    struct PlaceDecl {
        id: String,
        tokens: u32,
    }
    #[derive(Default)]
    struct TransitionDecl {
        id: String,
        label: Option<String>,
    }

    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);

    let mut places: Vec<PlaceDecl> = Vec::new();
    let mut transitions: Vec<TransitionDecl> = Vec::new();
    let mut arcs: Vec<(String, String)> = Vec::new();
    let mut finals: Vec<Vec<(String, u32)>> = Vec::new();

    // element-path context
    let mut stack: Vec<Vec<u8>> = Vec::new();
    let mut in_final_markings = false;
    let mut pending_text: Option<String> = None;

    let line_of = |reader: &Reader<&[u8]>| {
        text[..reader.buffer_position() as usize]
            .bytes()
            .filter(|&b| b == b'\n')
            .count()
            + 1
    };

    let attr_of = |tag: &quick_xml::events::BytesStart, name: &[u8]| -> Option<String> {
        tag.attributes()
            .flatten()
            .find(|a| a.key.as_ref() == name)
            .and_then(|a| String::from_utf8(a.value.to_vec()).ok())
    };

    loop {
        match reader.read_event() {
            Err(e) => return Err(ParseError::new(line_of(&reader), e.to_string())),
            Ok(XmlEvent::Eof) => break,
            Ok(XmlEvent::Start(tag)) => {
                let name = tag.local_name().as_ref().to_vec();
                match name.as_slice() {
                    b"place" => {
                        let id = attr_of(&tag, b"id").ok_or_else(|| {
                            ParseError::new(line_of(&reader), "place without id")
                        })?;
                        places.push(PlaceDecl { id, tokens: 0 });
                    }
                    b"transition" => {
                        let id = attr_of(&tag, b"id").ok_or_else(|| {
                            ParseError::new(line_of(&reader), "transition without id")
                        })?;
                        transitions.push(TransitionDecl { id, label: None });
                    }
                    b"arc" => {
                        // arcs are usually self-closing but may have children
                        let source = attr_of(&tag, b"source");
                        let target = attr_of(&tag, b"target");
                        match (source, target) {
                            (Some(s), Some(t)) => arcs.push((s, t)),
                            _ => {
                                return Err(ParseError::new(
                                    line_of(&reader),
                                    "arc without source/target",
                                ))
                            }
                        }
                    }
                    b"finalMarkings" => in_final_markings = true,
                    b"marking" if in_final_markings => finals.push(Vec::new()),
                    _ => {}
                }
                stack.push(name);
            }
            Ok(XmlEvent::End(tag)) => {
                let name = tag.local_name().as_ref().to_vec();
                if name == b"finalMarkings" {
                    in_final_markings = false;
                }
                if name == b"text" {
                    // attach the collected text to the enclosing element
                    let context: Vec<&[u8]> = stack.iter().map(|v| v.as_slice()).collect();
                    if let Some(value) = pending_text.take() {
                        match context.as_slice() {
                            [.., b"place", b"initialMarking", b"text"] => {
                                if let Some(p) = places.last_mut() {
                                    p.tokens = value.trim().parse().map_err(|_| {
                                        ParseError::new(
                                            line_of(&reader),
                                            "initialMarking text must be a number",
                                        )
                                    })?;
                                }
                            }
                            [.., b"transition", b"name", b"text"] => {
                                if let Some(t) = transitions.last_mut() {
                                    t.label = Some(value);
                                }
                            }
                            _ => {}
                        }
                    }
                }
                stack.pop();
            }
            Ok(XmlEvent::Empty(tag)) => match tag.local_name().as_ref() {
                b"arc" => {
                    let source = attr_of(&tag, b"source");
                    let target = attr_of(&tag, b"target");
                    match (source, target) {
                        (Some(s), Some(t)) => arcs.push((s, t)),
                        _ => {
                            return Err(ParseError::new(
                                line_of(&reader),
                                "arc without source/target",
                            ))
                        }
                    }
                }
                // <place idref=... tokens=.../> inside a final marking is a
                // reference; elsewhere a self-closing place is a declaration.
                b"place" if in_final_markings => {
                    let idref = attr_of(&tag, b"idref").ok_or_else(|| {
                        ParseError::new(line_of(&reader), "final-marking place without idref")
                    })?;
                    let tokens: u32 = attr_of(&tag, b"tokens")
                        .unwrap_or_else(|| "1".into())
                        .parse()
                        .map_err(|_| {
                            ParseError::new(line_of(&reader), "tokens must be a number")
                        })?;
                    if let Some(m) = finals.last_mut() {
                        m.push((idref, tokens));
                    }
                }
                b"place" => {
                    let id = attr_of(&tag, b"id").ok_or_else(|| {
                        ParseError::new(line_of(&reader), "place without id")
                    })?;
                    places.push(PlaceDecl { id, tokens: 0 });
                }
                b"transition" => {
                    let id = attr_of(&tag, b"id").ok_or_else(|| {
                        ParseError::new(line_of(&reader), "transition without id")
                    })?;
                    transitions.push(TransitionDecl { id, label: None });
                }
                b"marking" if in_final_markings => finals.push(Vec::new()),
                _ => {}
            },
            Ok(XmlEvent::Text(t)) => {
                pending_text = Some(
                    t.decode()
                        .map_err(|e| ParseError::new(line_of(&reader), e.to_string()))?
                        .into_owned(),
                );
            }
            Ok(_) => {}
        }
    }

    let mut builder = PetriNet::builder();
    for p in &places {
        builder.place(&p.id);
    }
    for t in &transitions {
        let label = match &t.label {
            Some(name) => {
                Some(Activity::new(name).map_err(|e| ParseError::new(0, e.to_string()))?)
            }
            None => None,
        };
        builder.transition(&t.id, label);
    }
    for (from, to) in &arcs {
        builder.arc(from, to);
    }
    let initial: Vec<String> = places
        .iter()
        .flat_map(|p| std::iter::repeat(p.id.clone()).take(p.tokens as usize))
        .collect();
    let initial_refs: Vec<&str> = initial.iter().map(|s| s.as_str()).collect();
    builder.initial_marking(&initial_refs);
    for marking in &finals {
        let expanded: Vec<String> = marking
            .iter()
            .flat_map(|(id, k)| std::iter::repeat(id.clone()).take(*k as usize))
            .collect();
        let refs: Vec<&str> = expanded.iter().map(|s| s.as_str()).collect();
        builder.final_marking(&refs);
    }
    builder.build().map_err(|e| ParseError::new(0, e.to_string()))
}

pub fn to_text(net: &PetriNet) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<pnml>\n  <net id=\"net0\">\n    <page id=\"page0\">\n",
    );
    let tokens = net.initial_marking().tokens();
    for (i, p) in net.place_names().iter().enumerate() {
        out.push_str(&format!("      <place id=\"{p}\">"));
        if tokens[i] > 0 {
            out.push_str(&format!(
                "<initialMarking><text>{}</text></initialMarking>",
                tokens[i]
            ));
        }
        out.push_str("</place>\n");
    }
    for t in net.transition_names() {
        match net.transition_label(t).unwrap() {
            Some(a) => out.push_str(&format!(
                "      <transition id=\"{t}\"><name><text>{a}</text></name></transition>\n"
            )),
            None => out.push_str(&format!("      <transition id=\"{t}\"/>\n")),
        }
    }
    let mut arc_id = 0;
    for t in net.transition_names() {
        let (inputs, outputs) = net.transition_arcs(t).unwrap();
        for p in inputs {
            out.push_str(&format!(
                "      <arc id=\"a{arc_id}\" source=\"{p}\" target=\"{t}\"/>\n"
            ));
            arc_id += 1;
        }
        for p in outputs {
            out.push_str(&format!(
                "      <arc id=\"a{arc_id}\" source=\"{t}\" target=\"{p}\"/>\n"
            ));
            arc_id += 1;
        }
    }
    out.push_str("    </page>\n    <toolspecific tool=\"procframe\" version=\"1\">\n      <finalMarkings>\n");
    for m in net.final_markings() {
        out.push_str("        <marking>");
        for (i, &k) in m.tokens().iter().enumerate() {
            if k > 0 {
                out.push_str(&format!(
                    "<place idref=\"{}\" tokens=\"{k}\"/>",
                    net.place_names()[i]
                ));
            }
        }
        out.push_str("</marking>\n");
    }
    out.push_str("      </finalMarkings>\n    </toolspecific>\n  </net>\n</pnml>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::DEFAULT_STATE_CAP;
    use crate::events::Trace;

    #[test]
    fn round_trip() {
        let mut b = PetriNet::builder();
        b.place("p0").place("p1").place("p2");
        b.transition("t0", Some(Activity::new("A").unwrap()));
        b.transition("skip", None);
        b.arc("p0", "t0").arc("t0", "p1");
        b.arc("p1", "skip").arc("skip", "p2");
        b.initial_marking(&["p0"]);
        b.final_marking(&["p2"]);
        let net = b.build().unwrap();

        let text = to_text(&net);
        let again = parse_pnml(&text).unwrap();
        assert_eq!(to_text(&again), text);
        let t = Trace::from_names(["A"]).unwrap();
        assert_eq!(
            net.accepts(&t, DEFAULT_STATE_CAP).unwrap(),
            again.accepts(&t, DEFAULT_STATE_CAP).unwrap()
        );
    }
}
