//! Labeled Petri nets with silent transitions and explicit final markings.
//!
//! Nets are the procedural specification style: a trace is accepted when
//! some firing sequence from the initial marking to a final marking emits
//! exactly that sequence of visible labels. Conversion to a [`Dfa`] goes
//! through the reachability graph, ε-closure over silent transitions, and
//! subset determinization; within its own alphabet the resulting automaton
//! is closed (unknown activities lead to the trap), openness is added by
//! the frame layer via [`Dfa::embed`].

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::automata::Dfa;
use crate::events::{Activity, ActivitySet, Trace};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetError {
    #[error("transition {0:?} is not enabled")]
    NotEnabled(String),
    #[error("reachable markings exceed the cap of {cap} (the net may be unbounded)")]
    Unbounded { cap: usize },
    #[error("invalid net: {0}")]
    Invalid(String),
}

/// Token counts per place.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Marking(Vec<u32>);

impl Marking {
    pub fn tokens(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

#[derive(Clone, Debug)]
struct Transition {
    name: String,
    label: Option<Activity>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

/// A labeled place/transition net with arc multiplicity 1, an initial
/// marking, and a nonempty set of final markings.
#[derive(Clone, Debug)]
pub struct PetriNet {
    place_names: Vec<String>,
    transitions: Vec<Transition>,
    initial: Marking,
    finals: Vec<Marking>,
}

/// Incremental construction with validation at `build`.
#[derive(Default)]
pub struct NetBuilder {
    places: Vec<String>,
    place_index: BTreeMap<String, usize>,
    transitions: Vec<Transition>,
    transition_index: BTreeMap<String, usize>,
    raw_arcs: Vec<(String, String)>,
    initial: Vec<String>,
    finals: Vec<Vec<String>>,
}

impl NetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn place(&mut self, name: &str) -> &mut Self {
        if !self.place_index.contains_key(name) {
            self.place_index.insert(name.to_string(), self.places.len());
            self.places.push(name.to_string());
        }
        self
    }

    pub fn transition(&mut self, name: &str, label: Option<Activity>) -> &mut Self {
        if !self.transition_index.contains_key(name) {
            self.transition_index
                .insert(name.to_string(), self.transitions.len());
            self.transitions.push(Transition {
                name: name.to_string(),
                label,
                inputs: Vec::new(),
                outputs: Vec::new(),
            });
        }
        self
    }

    /// Arc from a place to a transition or from a transition to a place;
    /// endpoints are resolved by name at build time, so arcs may be
    /// declared before their endpoints.
    pub fn arc(&mut self, from: &str, to: &str) -> &mut Self {
        self.raw_arcs.push((from.to_string(), to.to_string()));
        self
    }

    pub fn initial_marking(&mut self, places: &[&str]) -> &mut Self {
        self.initial = places.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn final_marking(&mut self, places: &[&str]) -> &mut Self {
        self.finals.push(places.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn build(mut self) -> Result<PetriNet, NetError> {
        let raw_arcs = std::mem::take(&mut self.raw_arcs);
        for (from, to) in raw_arcs {
            match (
                self.place_index.get(&from).copied(),
                self.transition_index.get(&to).copied(),
            ) {
                (Some(p), Some(t)) => self.transitions[t].inputs.push(p),
                _ => match (
                    self.transition_index.get(&from).copied(),
                    self.place_index.get(&to).copied(),
                ) {
                    (Some(t), Some(p)) => self.transitions[t].outputs.push(p),
                    _ => {
                        return Err(NetError::Invalid(format!(
                            "arc {from} -> {to} references an undeclared place or transition"
                        )))
                    }
                },
            }
        }
        for t in &self.transitions {
            if t.inputs.is_empty() || t.outputs.is_empty() {
                return Err(NetError::Invalid(format!(
                    "transition {} must have at least one input and one output place",
                    t.name
                )));
            }
        }
        if self.finals.is_empty() {
            return Err(NetError::Invalid("no final marking declared".into()));
        }
        let to_marking = |names: &[String],
                          place_index: &BTreeMap<String, usize>,
                          n: usize|
         -> Result<Marking, NetError> {
            let mut counts = vec![0u32; n];
            for name in names {
                match place_index.get(name) {
                    Some(&p) => counts[p] += 1,
                    None => {
                        return Err(NetError::Invalid(format!(
                            "marking references undeclared place {name}"
                        )))
                    }
                }
            }
            Ok(Marking(counts))
        };
        let n = self.places.len();
        let initial = to_marking(&self.initial, &self.place_index, n)?;
        let finals = self
            .finals
            .iter()
            .map(|f| to_marking(f, &self.place_index, n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PetriNet {
            place_names: self.places,
            transitions: self.transitions,
            initial,
            finals,
        })
    }
}

impl PetriNet {
    pub fn builder() -> NetBuilder {
        NetBuilder::new()
    }

    pub fn place_names(&self) -> &[String] {
        &self.place_names
    }

    pub fn transition_names(&self) -> Vec<&str> {
        self.transitions.iter().map(|t| t.name.as_str()).collect()
    }

    pub fn transition_label(&self, name: &str) -> Option<Option<&Activity>> {
        self.transitions
            .iter()
            .find(|t| t.name == name)
            .map(|t| t.label.as_ref())
    }

    pub fn transition_arcs(&self, name: &str) -> Option<(Vec<&str>, Vec<&str>)> {
        self.transitions.iter().find(|t| t.name == name).map(|t| {
            (
                t.inputs
                    .iter()
                    .map(|&p| self.place_names[p].as_str())
                    .collect(),
                t.outputs
                    .iter()
                    .map(|&p| self.place_names[p].as_str())
                    .collect(),
            )
        })
    }

    pub fn initial_marking(&self) -> &Marking {
        &self.initial
    }

    pub fn final_markings(&self) -> &[Marking] {
        &self.finals
    }

    /// Marking given by one token in each of the named places.
    pub fn marking(&self, places: &[&str]) -> Result<Marking, NetError> {
        let mut counts = vec![0u32; self.place_names.len()];
        for name in places {
            let p = self
                .place_names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| NetError::Invalid(format!("unknown place {name}")))?;
            counts[p] += 1;
        }
        Ok(Marking(counts))
    }

    /// Visible labels of the net.
    pub fn alphabet(&self) -> ActivitySet {
        self.transitions
            .iter()
            .filter_map(|t| t.label.clone())
            .collect()
    }

    /// Names of transitions enabled in `m` (every input place has a token).
    pub fn enabled(&self, m: &Marking) -> Vec<&str> {
        self.transitions
            .iter()
            .enumerate()
            .filter(|(i, _)| self.enabled_idx(m, *i))
            .map(|(_, t)| t.name.as_str())
            .collect()
    }

    fn enabled_idx(&self, m: &Marking, t: usize) -> bool {
        let mut need: BTreeMap<usize, u32> = BTreeMap::new();
        for &p in &self.transitions[t].inputs {
            *need.entry(p).or_insert(0) += 1;
        }
        need.iter().all(|(&p, &k)| m.0[p] >= k)
    }

    /// Fires transition `name` in `m`.
    pub fn fire(&self, m: &Marking, name: &str) -> Result<Marking, NetError> {
        let idx = self
            .transitions
            .iter()
            .position(|t| t.name == name)
            .ok_or_else(|| NetError::Invalid(format!("unknown transition {name}")))?;
        if !self.enabled_idx(m, idx) {
            return Err(NetError::NotEnabled(name.to_string()));
        }
        Ok(self.fire_idx(m, idx))
    }

    fn fire_idx(&self, m: &Marking, t: usize) -> Marking {
        let mut counts = m.0.clone();
        for &p in &self.transitions[t].inputs {
            counts[p] -= 1;
        }
        for &p in &self.transitions[t].outputs {
            counts[p] += 1;
        }
        Marking(counts)
    }

    /// ε-closure of a set of markings under silent transitions, capped.
    fn silent_closure(
        &self,
        set: &BTreeSet<Marking>,
        cap: usize,
    ) -> Result<BTreeSet<Marking>, NetError> {
        let mut closure = set.clone();
        let mut queue: VecDeque<Marking> = set.iter().cloned().collect();
        while let Some(m) = queue.pop_front() {
            for (i, t) in self.transitions.iter().enumerate() {
                if t.label.is_none() && self.enabled_idx(&m, i) {
                    let next = self.fire_idx(&m, i);
                    if closure.insert(next.clone()) {
                        if closure.len() > cap {
                            return Err(NetError::Unbounded { cap });
                        }
                        queue.push_back(next);
                    }
                }
            }
        }
        Ok(closure)
    }

    /// Whether the net accepts `trace`, by marking-set simulation with
    /// silent closure. A trace containing an activity that labels no
    /// transition is rejected.
    pub fn accepts(&self, trace: &Trace, cap: usize) -> Result<bool, NetError> {
        let mut current = self.silent_closure(&BTreeSet::from([self.initial.clone()]), cap)?;
        for a in trace {
            let mut next = BTreeSet::new();
            for m in &current {
                for (i, t) in self.transitions.iter().enumerate() {
                    if t.label.as_ref() == Some(a) && self.enabled_idx(m, i) {
                        next.insert(self.fire_idx(m, i));
                    }
                }
            }
            if next.is_empty() {
                return Ok(false);
            }
            current = self.silent_closure(&next, cap)?;
        }
        Ok(current.iter().any(|m| self.finals.contains(m)))
    }

    /// All markings reachable from the initial marking, capped.
    pub fn reachable_markings(&self, cap: usize) -> Result<Vec<Marking>, NetError> {
        let mut seen: BTreeSet<Marking> = BTreeSet::from([self.initial.clone()]);
        let mut queue = VecDeque::from([self.initial.clone()]);
        let mut out = Vec::new();
        while let Some(m) = queue.pop_front() {
            out.push(m.clone());
            for i in 0..self.transitions.len() {
                if self.enabled_idx(&m, i) {
                    let next = self.fire_idx(&m, i);
                    if seen.insert(next.clone()) {
                        if seen.len() > cap {
                            return Err(NetError::Unbounded { cap });
                        }
                        queue.push_back(next);
                    }
                }
            }
        }
        Ok(out)
    }

    /// True when no reachable marking puts more than one token in a place.
    pub fn is_one_safe(&self, cap: usize) -> Result<bool, NetError> {
        Ok(self
            .reachable_markings(cap)?
            .iter()
            .all(|m| m.0.iter().all(|&k| k <= 1)))
    }

    /// The deterministic automaton of the net's visible-label language:
    /// reachability graph, silent closure, subset determinization, and
    /// minimization. The result is closed over the net's own alphabet —
    /// the default of every state is the trap.
    pub fn to_dfa(&self, cap: usize) -> Result<Dfa, NetError> {
        let symbols: Vec<Activity> = self.alphabet().into_iter().collect();
        let start = self.silent_closure(&BTreeSet::from([self.initial.clone()]), cap)?;

        let mut index: HashMap<BTreeSet<Marking>, usize> = HashMap::new();
        let mut subsets: Vec<BTreeSet<Marking>> = vec![start.clone()];
        index.insert(start, 0);
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut accepting: Vec<bool> = Vec::new();

        let mut next = 0;
        while next < subsets.len() {
            let current = subsets[next].clone();
            accepting.push(current.iter().any(|m| self.finals.contains(m)));
            let mut row = Vec::with_capacity(symbols.len());
            for a in &symbols {
                let mut succ = BTreeSet::new();
                for m in &current {
                    for (i, t) in self.transitions.iter().enumerate() {
                        if t.label.as_ref() == Some(a) && self.enabled_idx(m, i) {
                            succ.insert(self.fire_idx(m, i));
                        }
                    }
                }
                if succ.is_empty() {
                    row.push(usize::MAX); // patched to the trap below
                    continue;
                }
                let succ = self.silent_closure(&succ, cap)?;
                let id = match index.get(&succ) {
                    Some(&id) => id,
                    None => {
                        if subsets.len() >= cap {
                            return Err(NetError::Unbounded { cap });
                        }
                        let id = subsets.len();
                        index.insert(succ.clone(), id);
                        subsets.push(succ);
                        id
                    }
                };
                row.push(id);
            }
            delta.push(row);
            next += 1;
        }

        // Materialize the trap state; all defaults point there.
        let trap_id = subsets.len();
        accepting.push(false);
        delta.push(vec![trap_id; symbols.len()]);
        for row in &mut delta {
            for cell in row.iter_mut() {
                if *cell == usize::MAX {
                    *cell = trap_id;
                }
            }
        }
        let defaults = vec![trap_id; subsets.len() + 1];
        let dfa = Dfa::new(symbols, 0, accepting, delta, defaults)
            .map_err(|e| NetError::Invalid(e.to_string()))?;
        Ok(dfa.minimized())
    }

    /// Graphviz rendering: circles for places, boxes for transitions
    /// (filled for silent ones), filled places carry the initial marking.
    pub fn to_dot(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        s.push_str("digraph net {\n  rankdir=LR;\n");
        for (i, p) in self.place_names.iter().enumerate() {
            let marked = if self.initial.0[i] > 0 {
                ",style=filled"
            } else {
                ""
            };
            let _ = writeln!(s, "  p{i} [shape=circle,label=\"{p}\"{marked}];");
        }
        for (i, t) in self.transitions.iter().enumerate() {
            let label = match &t.label {
                Some(a) => a.name().to_string(),
                None => String::new(),
            };
            let style = if t.label.is_none() {
                ",style=filled,fillcolor=black,height=0.1"
            } else {
                ""
            };
            let _ = writeln!(s, "  t{i} [shape=box,label=\"{label}\"{style}];");
        }
        for (i, t) in self.transitions.iter().enumerate() {
            for &p in &t.inputs {
                let _ = writeln!(s, "  p{p} -> t{i};");
            }
            for &p in &t.outputs {
                let _ = writeln!(s, "  t{i} -> p{p};");
            }
        }
        s.push_str("}\n");
        s
    }
}

impl fmt::Display for PetriNet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "net({} places, {} transitions)",
            self.place_names.len(),
            self.transitions.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::DEFAULT_STATE_CAP;

    fn act(s: &str) -> Activity {
        Activity::new(s).unwrap()
    }

    fn tr(names: &[&str]) -> Trace {
        Trace::from_names(names.iter().copied()).unwrap()
    }

    /// p0 -A-> p1 -B-> p2, final {p2}
    fn sequence_net() -> PetriNet {
        let mut b = PetriNet::builder();
        b.place("p0").place("p1").place("p2");
        b.transition("tA", Some(act("A")));
        b.transition("tB", Some(act("B")));
        b.arc("p0", "tA").arc("tA", "p1").arc("p1", "tB").arc("tB", "p2");
        b.initial_marking(&["p0"]);
        b.final_marking(&["p2"]);
        b.build().unwrap()
    }

    #[test]
    fn enabled_and_fire() {
        let net = sequence_net();
        let m0 = net.initial_marking().clone();
        assert_eq!(net.enabled(&m0), vec!["tA"]);
        let m1 = net.fire(&m0, "tA").unwrap();
        assert_eq!(net.enabled(&m1), vec!["tB"]);
        assert_eq!(net.fire(&m0, "tB"), Err(NetError::NotEnabled("tB".into())));
        let empty = net.marking(&[]).unwrap();
        assert!(net.enabled(&empty).is_empty());
    }

    #[test]
    fn to_dfa_exact_language() {
        let net = sequence_net();
        let dfa = net.to_dfa(DEFAULT_STATE_CAP).unwrap();
        assert!(dfa.accepts(&tr(&["A", "B"])));
        assert!(!dfa.accepts(&tr(&["A"])));
        assert!(!dfa.accepts(&tr(&["B", "A"])));
        assert!(!dfa.accepts(&Trace::empty()));
        // closed over its own alphabet: unknown symbols die
        assert!(!dfa.accepts(&tr(&["A", "X", "B"])));
    }

    #[test]
    fn silent_transition_optionality() {
        let mut b = PetriNet::builder();
        b.place("p0").place("p1").place("p2");
        b.transition("tA", Some(act("A")));
        b.transition("tB", Some(act("B")));
        b.transition("skip", None);
        b.arc("p0", "tA").arc("tA", "p1");
        b.arc("p1", "tB").arc("tB", "p2");
        b.arc("p1", "skip").arc("skip", "p2");
        b.initial_marking(&["p0"]);
        b.final_marking(&["p2"]);
        let net = b.build().unwrap();
        let dfa = net.to_dfa(DEFAULT_STATE_CAP).unwrap();
        assert!(dfa.accepts(&tr(&["A"])));
        assert!(dfa.accepts(&tr(&["A", "B"])));
        assert!(!dfa.accepts(&tr(&["B"])));
        assert!(net.accepts(&tr(&["A"]), DEFAULT_STATE_CAP).unwrap());
    }

    #[test]
    fn unbounded_net_detected_by_cap() {
        let mut b = PetriNet::builder();
        b.place("p0");
        b.transition("t", Some(act("A")));
        // consumes one token, produces two back into its own input
        b.arc("p0", "t").arc("t", "p0").arc("t", "p0");
        b.initial_marking(&["p0"]);
        b.final_marking(&["p0"]);
        let net = b.build().unwrap();
        assert!(matches!(net.to_dfa(50), Err(NetError::Unbounded { .. })));
        assert!(!net.is_one_safe(50).unwrap_or(false));
    }

    #[test]
    fn accepts_agrees_with_dfa() {
        let net = sequence_net();
        let dfa = net.to_dfa(DEFAULT_STATE_CAP).unwrap();
        for t in [
            Trace::empty(),
            tr(&["A"]),
            tr(&["B"]),
            tr(&["A", "B"]),
            tr(&["A", "B", "A"]),
            tr(&["A", "A"]),
        ] {
            assert_eq!(net.accepts(&t, DEFAULT_STATE_CAP).unwrap(), dfa.accepts(&t));
        }
    }

    #[test]
    fn builder_validation() {
        let mut b = PetriNet::builder();
        b.place("p0");
        b.transition("t", Some(act("A")));
        b.arc("p0", "t");
        b.initial_marking(&["p0"]);
        b.final_marking(&["p0"]);
        // no output arc
        assert!(matches!(b.build(), Err(NetError::Invalid(_))));

        let mut b = PetriNet::builder();
        b.place("p0").place("p1");
        b.transition("t", Some(act("A")));
        b.arc("p0", "t").arc("t", "p1");
        b.initial_marking(&["p0"]);
        // no final marking
        assert!(matches!(b.build(), Err(NetError::Invalid(_))));
    }
}
