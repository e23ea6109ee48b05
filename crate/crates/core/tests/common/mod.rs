//! Shared helpers for the integration suites: reference nets for the
//! procedural construct variants, the frame fixtures, and an independent
//! constraint oracle implemented by direct scanning (no automata).

#![allow(dead_code)]

use procframe::petri::PetriNet;
use procframe::rigidity::{Construct, Variant};
use procframe::{Activity, ActivitySet, Constraint, EventLog, Template, Trace};

pub fn act(s: &str) -> Activity {
    Activity::new(s).unwrap()
}

pub fn tr(names: &[&str]) -> Trace {
    Trace::from_names(names.iter().copied()).unwrap()
}

pub fn set(names: &[&str]) -> ActivitySet {
    names.iter().map(|s| act(s)).collect()
}

pub fn con(t: Template, args: &[&str]) -> Constraint {
    Constraint::new(t, args.iter().map(|s| act(s)).collect()).unwrap()
}

pub const ALL_VARIANTS: [Variant; 4] = [
    Variant::Mandatory,
    Variant::Optional,
    Variant::MandatoryRepeatable,
    Variant::OptionalRepeatable,
];

pub const ALL_CONSTRUCTS: [Construct; 4] = [
    Construct::Sequence,
    Construct::Parallel,
    Construct::Xor,
    Construct::Or,
];

/// Reference net for one construct variant: an outer loop `A … D` whose
/// body holds the construct over two (sequence) or four (other constructs)
/// activities; the inner variant is realized by a skip silent, a loop-back
/// silent, or both.
pub fn reference_net(construct: Construct, variant: Variant) -> PetriNet {
    let mut b = PetriNet::builder();
    b.place("p0").place("p1").place("p2");
    b.transition("tA", Some(act("A")));
    b.transition("tD", Some(act("D")));
    b.arc("p0", "tA").arc("tA", "p1");
    b.arc("p2", "tD").arc("tD", "p0");
    b.initial_marking(&["p0"]);
    b.final_marking(&["p0"]);

    match construct {
        Construct::Sequence => {
            b.place("m");
            b.transition("tB", Some(act("B")));
            b.transition("tC", Some(act("C")));
            b.arc("p1", "tB").arc("tB", "m").arc("m", "tC").arc("tC", "p2");
        }
        Construct::Parallel => {
            b.place("b0").place("b1").place("b2");
            b.place("c0").place("c1").place("c2");
            b.transition("split", None);
            b.transition("join", None);
            b.arc("p1", "split").arc("split", "b0").arc("split", "c0");
            b.transition("tB1", Some(act("B1")));
            b.transition("tB2", Some(act("B2")));
            b.arc("b0", "tB1").arc("tB1", "b1").arc("b1", "tB2").arc("tB2", "b2");
            b.transition("tC1", Some(act("C1")));
            b.transition("tC2", Some(act("C2")));
            b.arc("c0", "tC1").arc("tC1", "c1").arc("c1", "tC2").arc("tC2", "c2");
            b.arc("b2", "join").arc("c2", "join").arc("join", "p2");
        }
        Construct::Xor => {
            b.place("bm").place("cm");
            b.transition("tB1", Some(act("B1")));
            b.transition("tB2", Some(act("B2")));
            b.arc("p1", "tB1").arc("tB1", "bm").arc("bm", "tB2").arc("tB2", "p2");
            b.transition("tC1", Some(act("C1")));
            b.transition("tC2", Some(act("C2")));
            b.arc("p1", "tC1").arc("tC1", "cm").arc("cm", "tC2").arc("tC2", "p2");
        }
        Construct::Or => {
            b.place("b0").place("b1").place("bdone");
            b.place("c0").place("c1").place("cdone");
            b.transition("tB1", Some(act("B1")));
            b.transition("tB2", Some(act("B2")));
            b.arc("b0", "tB1").arc("tB1", "b1").arc("b1", "tB2").arc("tB2", "bdone");
            b.transition("tC1", Some(act("C1")));
            b.transition("tC2", Some(act("C2")));
            b.arc("c0", "tC1").arc("tC1", "c1").arc("c1", "tC2").arc("tC2", "cdone");
            // choose both, only the b branch, or only the c branch
            b.transition("or_both", None);
            b.arc("p1", "or_both").arc("or_both", "b0").arc("or_both", "c0");
            b.transition("or_b", None);
            b.arc("p1", "or_b").arc("or_b", "b0").arc("or_b", "cdone");
            b.transition("or_c", None);
            b.arc("p1", "or_c").arc("or_c", "bdone").arc("or_c", "c0");
            b.transition("or_join", None);
            b.arc("bdone", "or_join").arc("cdone", "or_join").arc("or_join", "p2");
        }
    }
    if variant.skippable() {
        b.transition("skip", None);
        b.arc("p1", "skip").arc("skip", "p2");
    }
    if variant.repeatable() {
        b.transition("again", None);
        b.arc("p2", "again").arc("again", "p1");
    }
    b.build().unwrap()
}

/// Activities of the reference net for a construct.
pub fn reference_alphabet(construct: Construct) -> Vec<&'static str> {
    match construct {
        Construct::Sequence => vec!["A", "B", "C", "D"],
        _ => vec!["A", "B1", "B2", "C1", "C2", "D"],
    }
}

/// Branches of the reference construct body.
pub fn reference_branches(construct: Construct) -> Vec<Vec<Activity>> {
    match construct {
        Construct::Sequence => vec![vec![act("B"), act("C")]],
        _ => vec![vec![act("B1"), act("B2")], vec![act("C1"), act("C2")]],
    }
}

/// Overlapping optional regions: each outer-loop iteration is one of
/// `A`, `A B F`, `A B C D E F`, or `A E F`.
pub fn overlap_optional_net() -> PetriNet {
    let mut b = PetriNet::builder();
    for p in ["q0", "q1", "q2", "q3", "q4", "q5", "q6"] {
        b.place(p);
    }
    for (t, from, to) in [
        ("tA", "q0", "q1"),
        ("tB", "q1", "q2"),
        ("tC", "q2", "q3"),
        ("tD", "q3", "q4"),
        ("tE", "q4", "q5"),
        ("tF", "q5", "q6"),
    ] {
        b.transition(t, Some(act(&t[1..])));
        b.arc(from, t).arc(t, to);
    }
    b.transition("s1", None); // conclude the iteration right after A
    b.arc("q1", "s1").arc("s1", "q6");
    b.transition("s2", None); // after B, skip C D E
    b.arc("q2", "s2").arc("s2", "q5");
    b.transition("s3", None); // after A, go directly to E
    b.arc("q1", "s3").arc("s3", "q4");
    b.transition("loop", None);
    b.arc("q6", "loop").arc("loop", "q0");
    b.initial_marking(&["q0"]);
    b.final_marking(&["q0"]);
    b.build().unwrap()
}

/// Overlapping repeatable regions: the same skeleton with the silent
/// transitions reversed, so every iteration runs `A B C D E F` with
/// optional jumps back after `D`, `E`, and `F`.
pub fn overlap_repeatable_net() -> PetriNet {
    let mut b = PetriNet::builder();
    for p in ["q0", "q1", "q2", "q3", "q4", "q5", "q6"] {
        b.place(p);
    }
    for (t, from, to) in [
        ("tA", "q0", "q1"),
        ("tB", "q1", "q2"),
        ("tC", "q2", "q3"),
        ("tD", "q3", "q4"),
        ("tE", "q4", "q5"),
        ("tF", "q5", "q6"),
    ] {
        b.transition(t, Some(act(&t[1..])));
        b.arc(from, t).arc(t, to);
    }
    b.transition("s1", None); // after F, back before B
    b.arc("q6", "s1").arc("s1", "q1");
    b.transition("s2", None); // after E, back before C
    b.arc("q5", "s2").arc("s2", "q2");
    b.transition("s3", None); // after D, back before B
    b.arc("q4", "s3").arc("s3", "q1");
    b.transition("loop", None);
    b.arc("q6", "loop").arc("loop", "q0");
    b.initial_marking(&["q0"]);
    b.final_marking(&["q0"]);
    b.build().unwrap()
}

/// Overlapping AND branches: the `B1 B2` branch merges into the middle of
/// the `D1 D2` branch (D2 waits for B2), while `C1 C2 C3` runs freely.
pub fn overlap_parallel_net() -> PetriNet {
    let mut b = PetriNet::builder();
    for p in [
        "p0", "pb", "pb1", "pb2", "pc", "pc1", "pc2", "pc3", "pd", "pd1", "pd2", "pe", "pend",
    ] {
        b.place(p);
    }
    b.transition("tA", Some(act("A")));
    b.arc("p0", "tA").arc("tA", "pb").arc("tA", "pc").arc("tA", "pd");
    for (t, from, to) in [
        ("tB1", "pb", "pb1"),
        ("tB2", "pb1", "pb2"),
        ("tC1", "pc", "pc1"),
        ("tC2", "pc1", "pc2"),
        ("tC3", "pc2", "pc3"),
        ("tD1", "pd", "pd1"),
    ] {
        b.transition(t, Some(act(&t[1..])));
        b.arc(from, t).arc(t, to);
    }
    b.transition("tD2", Some(act("D2")));
    b.arc("pd1", "tD2").arc("pb2", "tD2").arc("tD2", "pd2");
    b.transition("join", None);
    b.arc("pd2", "join").arc("pc3", "join").arc("join", "pe");
    b.transition("tE", Some(act("E")));
    b.arc("pe", "tE").arc("tE", "pend");
    b.transition("loop", None);
    b.arc("pend", "loop").arc("loop", "p0");
    b.initial_marking(&["p0"]);
    b.final_marking(&["p0"]);
    b.build().unwrap()
}

/// The same structure with exclusive choices: after `A` choose `B1 B2 D2`,
/// or `C1` followed by either `D1 D2` (the cross-link into the D tail) or
/// `C2 C3`; every iteration closes with `E`.
///
/// Reconstruction note: keeping a single closing activity is a deliberate
/// deviation — were the close itself an exclusive choice, no
/// eventually-follows constraint could force an iteration to finish (no
/// single activity follows every path), so no constraint model could match
/// the net exactly. The overlapping-choice structure under study is
/// unaffected.
pub fn overlap_xor_net() -> PetriNet {
    let mut b = PetriNet::builder();
    for p in ["p0", "ps", "pb", "pc", "pc2", "pj1", "pf", "pend"] {
        b.place(p);
    }
    b.transition("tA", Some(act("A")));
    b.arc("p0", "tA").arc("tA", "ps");
    for (t, from, to) in [
        ("tB1", "ps", "pb"),
        ("tB2", "pb", "pj1"),
        ("tC1", "ps", "pc"),
        ("tD1", "pc", "pj1"),
        ("tC2", "pc", "pc2"),
        ("tC3", "pc2", "pf"),
        ("tD2", "pj1", "pf"),
        ("tE", "pf", "pend"),
    ] {
        b.transition(t, Some(act(&t[1..])));
        b.arc(from, t).arc(t, to);
    }
    b.transition("loop", None);
    b.arc("pend", "loop").arc("loop", "p0");
    b.initial_marking(&["p0"]);
    b.final_marking(&["p0"]);
    b.build().unwrap()
}

/// The first interplay net: `A` then exactly one of `B`/`C`.
pub fn interplay_m1() -> PetriNet {
    let mut b = PetriNet::builder();
    b.place("s0").place("s1").place("s2");
    b.transition("tA", Some(act("A")));
    b.transition("tB", Some(act("B")));
    b.transition("tC", Some(act("C")));
    b.arc("s0", "tA").arc("tA", "s1");
    b.arc("s1", "tB").arc("tB", "s2");
    b.arc("s1", "tC").arc("tC", "s2");
    b.initial_marking(&["s0"]);
    b.final_marking(&["s2"]);
    b.build().unwrap()
}

/// The second interplay net: optionally `K` then `L`, each at most once.
pub fn interplay_m2() -> PetriNet {
    let mut b = PetriNet::builder();
    b.place("r0").place("r1").place("r2");
    b.transition("tK", Some(act("K")));
    b.transition("tL", Some(act("L")));
    b.transition("none", None);
    b.arc("r0", "tK").arc("tK", "r1");
    b.arc("r1", "tL").arc("tL", "r2");
    b.arc("r0", "none").arc("none", "r2");
    b.initial_marking(&["r0"]);
    b.final_marking(&["r2"]);
    b.build().unwrap()
}

/// The explicit B–K relation net: `B` at most once, `K` at most once, `B`
/// before `K`, and `B` only together with a later `K`.
pub fn relation_b_k() -> PetriNet {
    let mut b = PetriNet::builder();
    b.place("v0").place("v1").place("v2");
    b.transition("tB", Some(act("B")));
    b.arc("v0", "tB").arc("tB", "v1");
    b.transition("tK_after_b", Some(act("K")));
    b.arc("v1", "tK_after_b").arc("tK_after_b", "v2");
    b.transition("tK_alone", Some(act("K")));
    b.arc("v0", "tK_alone").arc("tK_alone", "v2");
    b.initial_marking(&["v0"]);
    b.final_marking(&["v0"]);
    b.final_marking(&["v2"]);
    b.build().unwrap()
}

/// Direct scan-based constraint semantics, independent of the automata.
pub mod oracle {
    use procframe::{Activity, Constraint, Template, Trace};

    fn positions(t: &Trace, a: &Activity) -> Vec<usize> {
        t.events()
            .iter()
            .enumerate()
            .filter(|(_, e)| *e == a)
            .map(|(i, _)| i)
            .collect()
    }

    /// Whether `trace` satisfies `c`, by the template's definition.
    pub fn holds(c: &Constraint, trace: &Trace) -> bool {
        let ev = trace.events();
        let args = c.args();
        match c.template() {
            Template::Existence(n) => positions(trace, &args[0]).len() >= n as usize,
            Template::Absence(n) => positions(trace, &args[0]).len() < n as usize,
            Template::Exactly(n) => positions(trace, &args[0]).len() == n as usize,
            Template::Init => ev.first() == Some(&args[0]),
            Template::Response => {
                let (a, b) = (&args[0], &args[1]);
                positions(trace, a)
                    .iter()
                    .all(|&i| ev[i + 1..].contains(b))
            }
            Template::Precedence => {
                let (a, b) = (&args[0], &args[1]);
                positions(trace, b).iter().all(|&i| ev[..i].contains(a))
            }
            Template::Succession => {
                holds(&response(&args[0], &args[1]), trace)
                    && holds(&precedence(&args[0], &args[1]), trace)
            }
            Template::AlternateResponse => {
                // after each a, a b occurs strictly before the next a (or
                // before the end of the trace)
                let (a, b) = (&args[0], &args[1]);
                positions(trace, a).iter().all(|&i| {
                    ev[i + 1..].iter().take_while(|e| *e != a).any(|e| e == b)
                })
            }
            Template::AlternatePrecedence => {
                // each b is preceded by an a with no b in between
                let (a, b) = (&args[0], &args[1]);
                positions(trace, b).iter().all(|&i| {
                    ev[..i]
                        .iter()
                        .rev()
                        .take_while(|e| *e != b)
                        .any(|e| e == a)
                })
            }
            Template::AlternateSuccession => {
                holds(&alt_response(&args[0], &args[1]), trace)
                    && holds(&alt_precedence(&args[0], &args[1]), trace)
                    && holds(&succession(&args[0], &args[1]), trace)
            }
            Template::CoExistence => {
                ev.contains(&args[0]) == ev.contains(&args[1])
            }
            Template::NotCoExistence => {
                !(ev.contains(&args[0]) && ev.contains(&args[1]))
            }
            Template::NotSuccession => {
                let (a, b) = (&args[0], &args[1]);
                match positions(trace, a).first() {
                    None => true,
                    Some(&i) => !ev[i + 1..].contains(b),
                }
            }
            Template::NotChainSuccession => {
                let (a, b) = (&args[0], &args[1]);
                !ev.windows(2).any(|w| &w[0] == a && &w[1] == b)
            }
            Template::Interposition => {
                // after each a, c is forbidden and b required until b occurs
                let (a, b, cc) = (&args[0], &args[1], &args[2]);
                positions(trace, a).iter().all(|&i| {
                    let mut j = i + 1;
                    loop {
                        if j >= ev.len() {
                            return false; // b never arrived
                        }
                        if &ev[j] == b {
                            return true;
                        }
                        if &ev[j] == cc {
                            return false;
                        }
                        j += 1;
                    }
                })
            }
            Template::BalancedEnablement => {
                let (a, b, cc) = (&args[0], &args[1], &args[2]);
                let mut diff: i64 = 0;
                for e in ev {
                    if e == a {
                        diff += 1;
                    } else if e == b {
                        diff -= 1;
                    } else if e == cc && diff != 0 {
                        return false;
                    }
                    if diff.abs() > 1 {
                        return false;
                    }
                }
                diff == 0
            }
        }
    }

    fn response(a: &Activity, b: &Activity) -> Constraint {
        Constraint::new(Template::Response, vec![a.clone(), b.clone()]).unwrap()
    }
    fn precedence(a: &Activity, b: &Activity) -> Constraint {
        Constraint::new(Template::Precedence, vec![a.clone(), b.clone()]).unwrap()
    }
    fn succession(a: &Activity, b: &Activity) -> Constraint {
        Constraint::new(Template::Succession, vec![a.clone(), b.clone()]).unwrap()
    }
    fn alt_response(a: &Activity, b: &Activity) -> Constraint {
        Constraint::new(Template::AlternateResponse, vec![a.clone(), b.clone()]).unwrap()
    }
    fn alt_precedence(a: &Activity, b: &Activity) -> Constraint {
        Constraint::new(Template::AlternatePrecedence, vec![a.clone(), b.clone()]).unwrap()
    }
}

/// All traces over `symbols` with length at most `max_len`.
pub fn all_traces(symbols: &[&str], max_len: usize) -> Vec<Trace> {
    let mut out = vec![Trace::empty()];
    let mut frontier = vec![Vec::<Activity>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &frontier {
            for s in symbols {
                let mut t = prefix.clone();
                t.push(act(s));
                out.push(Trace::new(t.clone()));
                next.push(t);
            }
        }
        frontier = next;
    }
    out
}

/// Event log from string traces.
pub fn log_of(traces: &[&[&str]]) -> EventLog {
    EventLog::new(traces.iter().map(|t| tr(t)).collect())
}
