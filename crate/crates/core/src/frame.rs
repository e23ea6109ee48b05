//! Process frames: semi-concurrent composition of heterogeneous
//! specifications.
//!
//! A frame is an ordered set of named specifications, each carrying its own
//! alphabet and one of three bodies — a constraint set, a Petri net, or a
//! raw automaton. The frame accepts a trace when every specification
//! accepts the projection of that trace onto its own alphabet; activities a
//! specification does not know are invisible to it. The global behavior is
//! the product of the per-specification automata.
//!
//! `NotChainSuccession` constraints are the one place where projection is
//! not the whole story: an intervening activity of *any* kind breaks a
//! direct-succession pair. Specifications containing such constraints are
//! therefore embedded over the full task set of the frame, so sibling
//! activities can break chains, while truly unknown activities are still
//! ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::automata::{AutomataError, Dfa, DEFAULT_STATE_CAP};
use crate::declare::Constraint;
use crate::events::{Activity, ActivitySet, Trace};
use crate::petri::{NetError, PetriNet};

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("trace event {0:?} is not an activity of any specification")]
    UnknownActivity(String),
    #[error("no specification named {0:?}")]
    UnknownSpec(String),
    #[error("specification {0:?} has a net or raw-automaton body and cannot be split")]
    NotSplittable(String),
    #[error("specification names must be unique; {0:?} repeats")]
    DuplicateName(String),
    #[error("specification {name:?} references activities outside its alphabet: {missing:?}")]
    AlphabetTooSmall { name: String, missing: Vec<String> },
    #[error("constraint partition does not cover the original set exactly")]
    BadPartition,
    #[error("frame has no specifications")]
    Empty,
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Net(#[from] NetError),
}

/// The behavioral body of a specification.
#[derive(Clone, Debug)]
pub enum SpecBody {
    Declare(Vec<Constraint>),
    Net(PetriNet),
    Dfa(Dfa),
}

impl SpecBody {
    /// Activities referenced by the body itself.
    pub fn referenced_activities(&self) -> ActivitySet {
        match self {
            SpecBody::Declare(cs) => cs.iter().flat_map(|c| c.args().iter().cloned()).collect(),
            SpecBody::Net(net) => net.alphabet(),
            SpecBody::Dfa(d) => d.explicit_alphabet(),
        }
    }
}

/// A named specification: an alphabet plus a body constrained to it. The
/// alphabet may be strictly larger than the referenced activities — the
/// extra activities are visible to the specification but unconstrained.
#[derive(Clone, Debug)]
pub struct Specification {
    name: String,
    alphabet: ActivitySet,
    body: SpecBody,
}

impl Specification {
    /// Creates a specification with an explicit alphabet, which must cover
    /// everything the body references.
    pub fn new(
        name: impl Into<String>,
        alphabet: ActivitySet,
        body: SpecBody,
    ) -> Result<Specification, FrameError> {
        let name = name.into();
        let missing: Vec<String> = body
            .referenced_activities()
            .difference(&alphabet)
            .map(|a| a.name().to_string())
            .collect();
        if !missing.is_empty() {
            return Err(FrameError::AlphabetTooSmall { name, missing });
        }
        Ok(Specification {
            name,
            alphabet,
            body,
        })
    }

    /// Creates a specification whose alphabet is inferred from the body.
    pub fn inferred(name: impl Into<String>, body: SpecBody) -> Specification {
        Specification {
            name: name.into(),
            alphabet: body.referenced_activities(),
            body,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &ActivitySet {
        &self.alphabet
    }

    pub fn body(&self) -> &SpecBody {
        &self.body
    }

    fn contains_chain_constraints(&self) -> bool {
        matches!(&self.body, SpecBody::Declare(cs) if cs.iter().any(|c| c.is_chain_family()))
    }

    /// The specification's automaton, embedded over its own alphabet (plus
    /// `extra` when the body contains chain constraints — the frame passes
    /// its full task set so sibling activities can break chains).
    pub fn to_dfa_with(&self, extra: &ActivitySet, cap: usize) -> Result<Dfa, FrameError> {
        let mut alphabet = self.alphabet.clone();
        if self.contains_chain_constraints() {
            alphabet.extend(extra.iter().cloned());
        }
        let dfa = match &self.body {
            SpecBody::Declare(cs) => {
                if cs.is_empty() {
                    Dfa::universal()
                } else {
                    // Fold order keeps intermediates small: grow along the
                    // activity order (all constraints over the first k
                    // activities before any constraint touching the k+1st),
                    // and within a stage take the most restrictive templates
                    // first — response-style obligations alone need
                    // exponentially many states to track pending sets.
                    let mut index: BTreeMap<&Activity, usize> = BTreeMap::new();
                    for a in alphabet.iter().chain(cs.iter().flat_map(|c| c.args())) {
                        let next = index.len();
                        index.entry(a).or_insert(next);
                    }
                    let mut ordered: Vec<&Constraint> = cs.iter().collect();
                    ordered.sort_by_key(|c| {
                        let newest = c.args().iter().map(|a| index[a]).max().unwrap_or(0);
                        (newest, fold_priority(c.template()), *c)
                    });
                    let compiled: Vec<Dfa> = ordered.iter().map(|c| c.compile()).collect();
                    let refs: Vec<&Dfa> = compiled.iter().collect();
                    Dfa::intersect_all(&refs, cap)?
                }
            }
            SpecBody::Net(net) => net.to_dfa(cap)?,
            SpecBody::Dfa(d) => d.clone(),
        };
        Ok(dfa.embed(&alphabet)?.minimized())
    }

    /// The specification's automaton over its own alphabet.
    pub fn to_dfa(&self, cap: usize) -> Result<Dfa, FrameError> {
        self.to_dfa_with(&ActivitySet::new(), cap)
    }
}

/// An ordered set of specifications composed by synchronous execution of
/// shared activities.
#[derive(Clone, Debug, Default)]
pub struct ProcessFrame {
    specs: Vec<Specification>,
}

impl ProcessFrame {
    pub fn new(specs: Vec<Specification>) -> Result<ProcessFrame, FrameError> {
        let mut seen = BTreeSet::new();
        for s in &specs {
            if !seen.insert(s.name.clone()) {
                return Err(FrameError::DuplicateName(s.name.clone()));
            }
        }
        Ok(ProcessFrame { specs })
    }

    pub fn specs(&self) -> &[Specification] {
        &self.specs
    }

    pub fn spec(&self, name: &str) -> Option<&Specification> {
        self.specs.iter().find(|s| s.name == name)
    }

    /// Union of the specification alphabets.
    pub fn all_tasks(&self) -> ActivitySet {
        self.specs
            .iter()
            .flat_map(|s| s.alphabet.iter().cloned())
            .collect()
    }

    /// Intersection of the specification alphabets.
    pub fn common_tasks(&self) -> ActivitySet {
        let mut iter = self.specs.iter();
        let mut common = match iter.next() {
            Some(s) => s.alphabet.clone(),
            None => return ActivitySet::new(),
        };
        for s in iter {
            common = common.intersection(&s.alphabet).cloned().collect();
        }
        common
    }

    /// True iff every specification accepts the projection of `trace` onto
    /// its own alphabet. Events outside the frame's task set are an error.
    pub fn accepts(&self, trace: &Trace) -> Result<bool, FrameError> {
        Ok(self.violating_spec(trace)?.is_none())
    }

    /// The first specification (in frame order) rejecting its projection of
    /// `trace`, if any.
    pub fn violating_spec(&self, trace: &Trace) -> Result<Option<&str>, FrameError> {
        if self.specs.is_empty() {
            return Err(FrameError::Empty);
        }
        let tasks = self.all_tasks();
        for event in trace {
            if !tasks.contains(event) {
                return Err(FrameError::UnknownActivity(event.name().to_string()));
            }
        }
        for spec in &self.specs {
            let dfa = spec.to_dfa_with(&tasks, DEFAULT_STATE_CAP)?;
            if !dfa.accepts(trace) {
                return Ok(Some(spec.name.as_str()));
            }
        }
        Ok(None)
    }

    /// The product automaton of all specifications: the language of
    /// globally accepted traces.
    pub fn global_dfa(&self, cap: usize) -> Result<Dfa, FrameError> {
        if self.specs.is_empty() {
            return Err(FrameError::Empty);
        }
        let tasks = self.all_tasks();
        let dfas: Vec<Dfa> = self
            .specs
            .iter()
            .map(|s| s.to_dfa_with(&tasks, cap))
            .collect::<Result<_, _>>()?;
        let refs: Vec<&Dfa> = dfas.iter().collect();
        Ok(Dfa::intersect_all(&refs, cap)?)
    }

    /// Replaces the named specifications by a single raw-automaton
    /// specification over the union of their alphabets. The global language
    /// is unchanged.
    pub fn merge_specs(
        &self,
        names: &[&str],
        merged_name: &str,
        cap: usize,
    ) -> Result<ProcessFrame, FrameError> {
        for n in names {
            if self.spec(n).is_none() {
                return Err(FrameError::UnknownSpec(n.to_string()));
            }
        }
        let tasks = self.all_tasks();
        let mut kept: Vec<Specification> = Vec::new();
        let mut merged_alpha = ActivitySet::new();
        let mut merged_dfas: Vec<Dfa> = Vec::new();
        for s in &self.specs {
            if names.contains(&s.name.as_str()) {
                merged_alpha.extend(s.alphabet.iter().cloned());
                merged_dfas.push(s.to_dfa_with(&tasks, cap)?);
            } else {
                kept.push(s.clone());
            }
        }
        let refs: Vec<&Dfa> = merged_dfas.iter().collect();
        let product = Dfa::intersect_all(&refs, cap)?;
        // The merged automaton was built frame-aware, so keep every
        // explicit symbol it mentions in the alphabet.
        merged_alpha.extend(product.explicit_alphabet());
        kept.push(Specification::new(
            merged_name,
            merged_alpha,
            SpecBody::Dfa(product),
        )?);
        ProcessFrame::new(kept)
    }

    /// Splits a constraint-set specification into several, one per part of
    /// `parts`, which must partition the original constraint set. Each part
    /// keeps the full original alphabet, so the global language is
    /// unchanged.
    pub fn split_spec(
        &self,
        name: &str,
        parts: &[Vec<Constraint>],
    ) -> Result<ProcessFrame, FrameError> {
        let target = self
            .spec(name)
            .ok_or_else(|| FrameError::UnknownSpec(name.to_string()))?;
        let constraints = match &target.body {
            SpecBody::Declare(cs) => cs,
            _ => return Err(FrameError::NotSplittable(name.to_string())),
        };
        let mut original: Vec<&Constraint> = constraints.iter().collect();
        original.sort();
        let mut given: Vec<&Constraint> = parts.iter().flatten().collect();
        given.sort();
        if original != given {
            return Err(FrameError::BadPartition);
        }
        let mut specs: Vec<Specification> = Vec::new();
        for s in &self.specs {
            if s.name == name {
                for (i, part) in parts.iter().enumerate() {
                    specs.push(Specification::new(
                        format!("{name}.{i}"),
                        target.alphabet.clone(),
                        SpecBody::Declare(part.clone()),
                    )?);
                }
            } else {
                specs.push(s.clone());
            }
        }
        ProcessFrame::new(specs)
    }
}

/// Product fold order for constraint sets, most restrictive first.
fn fold_priority(t: crate::declare::Template) -> u8 {
    use crate::declare::Template as T;
    match t {
        T::Existence(_) | T::Absence(_) | T::Exactly(_) | T::Init => 0,
        T::AlternateSuccession => 1,
        T::NotChainSuccession => 2,
        T::AlternatePrecedence => 3,
        T::AlternateResponse => 4,
        T::Succession => 5,
        T::NotSuccession | T::NotCoExistence | T::CoExistence => 6,
        T::Interposition => 7,
        T::BalancedEnablement => 8,
        T::Precedence => 9,
        T::Response => 10,
    }
}

impl fmt::Display for ProcessFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "frame[")?;
        for (i, s) in self.specs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", s.name)?;
        }
        write!(f, "]")
    }
}
