//! Rigid-behavior detection: recognizing procedural constructs in a mined
//! constraint model and rewriting them into equivalent Petri-net fragments.
//!
//! Binary constraints bound the relative occurrence frequencies of activity
//! pairs. Reading those bounds as outgoing/incoming cardinality classes
//! (`1..1`, `1..n`, `0..1`, `0..n`) partitions the activities into blocks
//! and locates the frontiers where the execution cardinality changes; the
//! constraint signature across a frontier then identifies one of four
//! construct families — sequence, parallelism, exclusive choice, inclusive
//! choice — in one of four cardinality variants. Every proposed rewrite is
//! validated by language equivalence against the mined model and rolled
//! back on failure, so the returned frame never silently changes behavior.
//!
//! Repeatable inclusive choices are the known blind spot: constraints can
//! enforce branch completion but not re-entry discipline, so those
//! fragments are only reported, flagged approximate, and never installed
//! in the frame when the check fails.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::automata::{AutomataError, Dfa};
use crate::declare::{Constraint, Template};
use crate::events::{Activity, ActivitySet, EventLog, Trace};
use crate::frame::{FrameError, ProcessFrame, SpecBody, Specification};
use crate::miner::{mine, MineError, MinedModel, MinerConfig};
use crate::petri::{NetError, PetriNet};

#[derive(Debug, Error)]
pub enum RigidityError {
    #[error("model alphabet differs from log alphabet")]
    AlphabetMismatch,
    #[error(transparent)]
    Mine(#[from] MineError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Net(#[from] NetError),
}

/// Relative occurrence bound of one activity against another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cardinality {
    /// 1..1
    ExactlyOne,
    /// 1..n
    OneOrMore,
    /// 0..1
    AtMostOne,
    /// 0..n
    AnyNumber,
    /// no binary constraint relates the pair
    Unrelated,
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Cardinality::ExactlyOne => "1..1",
            Cardinality::OneOrMore => "1..n",
            Cardinality::AtMostOne => "0..1",
            Cardinality::AnyNumber => "0..n",
            Cardinality::Unrelated => "none",
        };
        f.write_str(s)
    }
}

/// Outgoing and incoming cardinality classes per ordered activity pair,
/// derived from which constraint templates were mined for the pair. The
/// most specific applicable class wins.
#[derive(Debug, Clone)]
pub struct CardinalityProfile {
    outgoing: BTreeMap<(Activity, Activity), Cardinality>,
    incoming: BTreeMap<(Activity, Activity), Cardinality>,
}

impl CardinalityProfile {
    /// Derives the profile from a mined model.
    pub fn of(model: &MinedModel) -> CardinalityProfile {
        let mut mined: BTreeSet<(Template, &Activity, &Activity)> = BTreeSet::new();
        for c in model.constraints() {
            if c.template().arity() == 2 {
                mined.insert((c.template(), &c.args()[0], &c.args()[1]));
            }
        }
        let has = |t: Template, a: &Activity, b: &Activity| mined.contains(&(t, a, b));
        let mut outgoing = BTreeMap::new();
        let mut incoming = BTreeMap::new();
        let pairs: BTreeSet<(&Activity, &Activity)> =
            mined.iter().map(|(_, a, b)| (*a, *b)).collect();
        for (a, b) in pairs {
            let out = if has(Template::AlternateSuccession, a, b) {
                Cardinality::ExactlyOne
            } else if has(Template::AlternateResponse, a, b) {
                // with or without Succession: one or more per activation
                Cardinality::OneOrMore
            } else if has(Template::AlternatePrecedence, a, b) {
                Cardinality::AtMostOne
            } else if has(Template::Precedence, a, b) {
                Cardinality::AnyNumber
            } else {
                Cardinality::Unrelated
            };
            let inc = if has(Template::AlternateSuccession, a, b) {
                Cardinality::ExactlyOne
            } else if has(Template::AlternatePrecedence, a, b) {
                Cardinality::OneOrMore
            } else if has(Template::AlternateResponse, a, b) {
                Cardinality::AtMostOne
            } else if has(Template::Response, a, b) {
                Cardinality::AnyNumber
            } else {
                Cardinality::Unrelated
            };
            if out != Cardinality::Unrelated {
                outgoing.insert((a.clone(), b.clone()), out);
            }
            if inc != Cardinality::Unrelated {
                incoming.insert((a.clone(), b.clone()), inc);
            }
        }
        CardinalityProfile { outgoing, incoming }
    }

    pub fn outgoing(&self, a: &Activity, b: &Activity) -> Cardinality {
        self.outgoing
            .get(&(a.clone(), b.clone()))
            .copied()
            .unwrap_or(Cardinality::Unrelated)
    }

    pub fn incoming(&self, a: &Activity, b: &Activity) -> Cardinality {
        self.incoming
            .get(&(a.clone(), b.clone()))
            .copied()
            .unwrap_or(Cardinality::Unrelated)
    }

    /// True when any cardinality class relates the ordered pair.
    pub fn related(&self, a: &Activity, b: &Activity) -> bool {
        self.outgoing(a, b) != Cardinality::Unrelated
            || self.incoming(a, b) != Cardinality::Unrelated
    }
}

/// The four construct families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construct {
    Sequence,
    Parallel,
    Xor,
    Or,
}

impl fmt::Display for Construct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Construct::Sequence => "sequence",
            Construct::Parallel => "parallel",
            Construct::Xor => "xor",
            Construct::Or => "or",
        };
        f.write_str(s)
    }
}

/// Cardinality variant of a construct (and of the surrounding repetition
/// wrapper).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// 1..1
    Mandatory,
    /// 0..1 — skippable
    Optional,
    /// 1..n — repeatable, at least once
    MandatoryRepeatable,
    /// 0..n — skippable and repeatable
    OptionalRepeatable,
}

impl Variant {
    pub fn skippable(self) -> bool {
        matches!(self, Variant::Optional | Variant::OptionalRepeatable)
    }

    pub fn repeatable(self) -> bool {
        matches!(self, Variant::MandatoryRepeatable | Variant::OptionalRepeatable)
    }

    fn of(c: Cardinality) -> Option<Variant> {
        match c {
            Cardinality::ExactlyOne => Some(Variant::Mandatory),
            Cardinality::AtMostOne => Some(Variant::Optional),
            Cardinality::OneOrMore => Some(Variant::MandatoryRepeatable),
            Cardinality::AnyNumber => Some(Variant::OptionalRepeatable),
            Cardinality::Unrelated => None,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variant::Mandatory => "mandatory",
            Variant::Optional => "optional",
            Variant::MandatoryRepeatable => "mandatory-repeatable",
            Variant::OptionalRepeatable => "optional-repeatable",
        };
        f.write_str(s)
    }
}

/// One recognized construct with its synthesized net.
#[derive(Debug, Clone)]
pub struct DetectedFragment {
    pub construct: Construct,
    pub variant: Variant,
    /// Repetition wrapper of the whole fragment, anchored on the artificial
    /// start activity's cardinality toward the fragment.
    pub outer: Variant,
    pub predecessor_group: Vec<Activity>,
    pub body_branches: Vec<Vec<Activity>>,
    pub follower_group: Vec<Activity>,
    pub consumed: BTreeSet<Constraint>,
    pub net: PetriNet,
    /// The two repeatable inclusive-choice variants cannot be captured
    /// exactly by the constraint templates; their fragments are reported
    /// but not installed when validation fails.
    pub approximate: bool,
    pub validation_failure: Option<Trace>,
}

impl DetectedFragment {
    pub fn activities(&self) -> ActivitySet {
        self.predecessor_group
            .iter()
            .chain(self.body_branches.iter().flatten())
            .chain(self.follower_group.iter())
            .cloned()
            .collect()
    }
}

/// Result of [`detect`]: fragments, leftover constraints, and the rewritten
/// frame (net specifications plus a residual constraint specification).
#[derive(Debug, Clone)]
pub struct FrameRewrite {
    pub fragments: Vec<DetectedFragment>,
    pub residual: Vec<Constraint>,
    pub frame: ProcessFrame,
}

/// Checks a rewritten frame against a reference automaton; `None` means
/// language-equivalent, otherwise a shortest distinguishing trace.
pub fn validate_rewrite(
    frame: &ProcessFrame,
    reference: &Dfa,
    cap: usize,
) -> Result<Option<Trace>, RigidityError> {
    let global = frame.global_dfa(cap)?;
    Ok(global.counterexample(reference))
}

/// True when some branch's first activity occurs at least twice while
/// another branch is activated but not yet completed (its first activity
/// has occurred and its last has not). This is the failure shape of
/// repeatable inclusive choices.
pub fn exhibits_branch_recurrence(trace: &Trace, branches: &[Vec<Activity>]) -> bool {
    let ev = trace.events();
    for (j, branch_j) in branches.iter().enumerate() {
        if branch_j.len() < 2 {
            continue;
        }
        let first_j = &branch_j[0];
        let last_j = branch_j.last().unwrap();
        let mut p = 0;
        while p < ev.len() {
            if &ev[p] == first_j {
                let mut q = p + 1;
                while q < ev.len() && &ev[q] != last_j {
                    q += 1;
                }
                // window (p, q): branch j pending
                for (i, branch_i) in branches.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let recurrences = ev[p + 1..q.min(ev.len())]
                        .iter()
                        .filter(|e| *e == &branch_i[0])
                        .count();
                    if recurrences >= 2 {
                        return true;
                    }
                }
                p = q;
            } else {
                p += 1;
            }
        }
    }
    false
}

/// Synthesizes a workflow-shaped net for a construct: a single source and
/// sink place, pred and follower chains, the construct body, skip/loop
/// silents realizing the inner variant, and an outer wrapper realizing the
/// fragment-level repetition.
pub fn synthesize_net(
    construct: Construct,
    variant: Variant,
    outer: Variant,
    pred: &[Activity],
    branches: &[Vec<Activity>],
    foll: &[Activity],
) -> Result<PetriNet, RigidityError> {
    struct Synth {
        b: crate::petri::NetBuilder,
        places: usize,
        silents: usize,
    }
    impl Synth {
        fn fresh_place(&mut self) -> String {
            let name = format!("p{}", self.places);
            self.places += 1;
            self.b.place(&name);
            name
        }
        fn silent_transition(&mut self) -> String {
            let name = format!("tau{}", self.silents);
            self.silents += 1;
            self.b.transition(&name, None);
            name
        }
        fn silent(&mut self, from: &str, to: &str) {
            let name = self.silent_transition();
            self.b.arc(from, &name);
            self.b.arc(&name, to);
        }
        fn labeled(&mut self, a: &Activity, from: &str, to: &str) {
            let name = format!("t_{}", a.name());
            self.b.transition(&name, Some(a.clone()));
            self.b.arc(from, &name);
            self.b.arc(&name, to);
        }
        fn chain(&mut self, acts: &[Activity], from: &str, to: &str) {
            let mut at = from.to_string();
            for (i, a) in acts.iter().enumerate() {
                let next = if i + 1 == acts.len() {
                    to.to_string()
                } else {
                    self.fresh_place()
                };
                self.labeled(a, &at, &next);
                at = next;
            }
        }
    }

    let mut s = Synth {
        b: PetriNet::builder(),
        places: 0,
        silents: 0,
    };
    s.b.place("src").place("sink");
    s.b.initial_marking(&["src"]);
    s.b.final_marking(&["sink"]);

    // pred chain: src -> region_in, foll chain: region_out -> sink
    let region_in = if pred.is_empty() {
        "src".to_string()
    } else {
        let r = s.fresh_place();
        s.chain(pred, "src", &r);
        r
    };
    let region_out = if foll.is_empty() {
        "sink".to_string()
    } else {
        let r = s.fresh_place();
        s.chain(foll, &r, "sink");
        r
    };

    match construct {
        Construct::Sequence => {
            assert_eq!(branches.len(), 1, "a sequence has a single branch");
            if branches[0].is_empty() {
                s.silent(&region_in, &region_out);
            } else {
                s.chain(&branches[0], &region_in, &region_out);
            }
        }
        Construct::Xor => {
            for branch in branches {
                s.chain(branch, &region_in, &region_out);
            }
        }
        Construct::Parallel => {
            let split = s.silent_transition();
            s.b.arc(&region_in, &split);
            let join = s.silent_transition();
            s.b.arc(&join, &region_out);
            for branch in branches {
                let start = s.fresh_place();
                let end = s.fresh_place();
                s.b.arc(&split, &start);
                s.b.arc(&end, &join);
                s.chain(branch, &start, &end);
            }
        }
        Construct::Or => {
            // one choice silent per nonempty subset of branches; chosen
            // branches run from their start place, unchosen ones are
            // completed immediately
            let starts: Vec<String> = branches.iter().map(|_| s.fresh_place()).collect();
            let ends: Vec<String> = branches.iter().map(|_| s.fresh_place()).collect();
            for (i, branch) in branches.iter().enumerate() {
                s.chain(branch, &starts[i], &ends[i]);
            }
            let k = branches.len();
            for subset in 1u32..(1 << k) {
                let choice = s.silent_transition();
                s.b.arc(&region_in, &choice);
                for i in 0..k {
                    if subset & (1 << i) != 0 {
                        s.b.arc(&choice, &starts[i]);
                    } else {
                        s.b.arc(&choice, &ends[i]);
                    }
                }
            }
            let join = s.silent_transition();
            for e in &ends {
                s.b.arc(e.as_str(), &join);
            }
            s.b.arc(&join, &region_out);
        }
    }

    // inner variant silents around the construct region
    if variant.skippable() {
        s.silent(&region_in, &region_out);
    }
    if variant.repeatable() {
        s.silent(&region_out, &region_in);
    }
    // outer wrapper: fragment-level skip and repetition
    if outer.skippable() {
        s.silent("src", "sink");
    }
    if outer.repeatable() {
        s.silent("sink", "src");
    }

    Ok(s.b.build()?)
}

/// Internal: the shape a detection pass proposes before validation.
struct ShapeCandidate {
    construct: Construct,
    variant: Variant,
    outer: Variant,
    pred: Vec<Activity>,
    branches: Vec<Vec<Activity>>,
    foll: Vec<Activity>,
}

/// Templates whose presence orients a pair in time.
const ORIENTING: [Template; 6] = [
    Template::Response,
    Template::Precedence,
    Template::Succession,
    Template::AlternateResponse,
    Template::AlternatePrecedence,
    Template::AlternateSuccession,
];

/// Detects rigid constructs in `model` (mined from `log`) and rewrites them
/// into net fragments, validating the rewritten frame against the model by
/// language equivalence. Worst case the result carries zero fragments and
/// every constraint stays residual.
pub fn detect(
    model: &MinedModel,
    log: &EventLog,
    cfg: &MinerConfig,
) -> Result<FrameRewrite, RigidityError> {
    if model.alphabet() != log.alphabet() {
        return Err(RigidityError::AlphabetMismatch);
    }
    let cap = crate::automata::DEFAULT_STATE_CAP;
    let reference = model.to_dfa(cap)?;
    let all_constraints: Vec<Constraint> = model.constraints().cloned().collect();

    let fallback = |fragments: Vec<DetectedFragment>| -> Result<FrameRewrite, RigidityError> {
        let frame = ProcessFrame::new(vec![Specification::new(
            "residual",
            model.alphabet().clone(),
            SpecBody::Declare(all_constraints.clone()),
        )?])?;
        Ok(FrameRewrite {
            fragments,
            residual: all_constraints.clone(),
            frame,
        })
    };

    // Re-mine with the artificial start activity: cardinalities against the
    // start anchor reveal the fragment-level repetition structure.
    let aug_cfg = MinerConfig {
        include_start: true,
        ..cfg.clone()
    };
    let aug_model = match mine(log, &aug_cfg) {
        Ok(m) => m,
        Err(MineError::Event(_)) => return fallback(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let start = Activity::new(&aug_cfg.start_name).expect("validated by mine");
    let profile = CardinalityProfile::of(&aug_model);

    let candidate = propose_shape(model, &aug_model, &profile, &start);
    let Some(shape) = candidate else {
        return fallback(Vec::new());
    };

    let fragment_acts: ActivitySet = shape
        .pred
        .iter()
        .chain(shape.branches.iter().flatten())
        .chain(shape.foll.iter())
        .cloned()
        .collect();
    let consumed: BTreeSet<Constraint> = all_constraints
        .iter()
        .filter(|c| c.args().iter().all(|a| fragment_acts.contains(a)))
        .cloned()
        .collect();
    let residual: Vec<Constraint> = all_constraints
        .iter()
        .filter(|c| !consumed.contains(c))
        .cloned()
        .collect();

    let net = synthesize_net(
        shape.construct,
        shape.variant,
        shape.outer,
        &shape.pred,
        &shape.branches,
        &shape.foll,
    )?;

    let mut specs = vec![Specification::new(
        "fragment_0",
        fragment_acts.clone(),
        SpecBody::Net(net.clone()),
    )?];
    if !residual.is_empty() {
        specs.push(Specification::new(
            "residual",
            model.alphabet().clone(),
            SpecBody::Declare(residual.clone()),
        )?);
    }
    let frame = ProcessFrame::new(specs)?;
    let failure = validate_rewrite(&frame, &reference, cap)?;

    let approximate_variant =
        shape.construct == Construct::Or && shape.variant.repeatable();
    // Post-processing for repeatable inclusive choices: look for a bounded
    // model trace in which one branch restarts while another is pending.
    let recurrence_witness = if approximate_variant {
        reference
            .enumerate_traces(2)
            .into_iter()
            .find(|t| exhibits_branch_recurrence(t, &shape.branches))
    } else {
        None
    };

    let fragment = DetectedFragment {
        construct: shape.construct,
        variant: shape.variant,
        outer: shape.outer,
        predecessor_group: shape.pred,
        body_branches: shape.branches,
        follower_group: shape.foll,
        consumed: consumed.clone(),
        net,
        approximate: approximate_variant,
        validation_failure: failure.clone().or(recurrence_witness.clone()),
    };

    if failure.is_none() && recurrence_witness.is_none() {
        return Ok(FrameRewrite {
            fragments: vec![fragment],
            residual,
            frame,
        });
    }
    if approximate_variant {
        // Keep the fragment for inspection, but do not install it: all
        // constraints stay residual and the frame is unchanged behavior.
        let mut frag = fragment;
        frag.consumed = BTreeSet::new();
        return fallback(vec![frag]);
    }
    // A non-approximate candidate failed validation: roll back entirely.
    fallback(Vec::new())
}

/// Shape analysis: groups activities by cardinality classes and matches the
/// construct signatures. Returns `None` whenever the structure is not
/// recognized (the caller then keeps everything residual).
fn propose_shape(
    model: &MinedModel,
    aug_model: &MinedModel,
    profile: &CardinalityProfile,
    start: &Activity,
) -> Option<ShapeCandidate> {
    let sigma: Vec<Activity> = model.alphabet().iter().cloned().collect();
    if sigma.len() < 2 {
        return None;
    }
    let mined: BTreeSet<(Template, Activity, Activity)> = aug_model
        .constraints()
        .filter(|c| c.template().arity() == 2)
        .map(|c| (c.template(), c.args()[0].clone(), c.args()[1].clone()))
        .collect();
    let oriented = |a: &Activity, b: &Activity| {
        ORIENTING
            .iter()
            .any(|&t| mined.contains(&(t, a.clone(), b.clone())))
    };
    let has_ncs = |a: &Activity, b: &Activity| {
        mined.contains(&(Template::NotChainSuccession, a.clone(), b.clone()))
    };

    // Incomparable pairs split branch activities from the linear backbone.
    let mut incomparable: BTreeSet<(Activity, Activity)> = BTreeSet::new();
    for a in &sigma {
        for b in &sigma {
            if a < b && !oriented(a, b) && !oriented(b, a) {
                incomparable.insert((a.clone(), b.clone()));
            }
        }
    }

    let outer_of = |anchor: &Activity| Variant::of(profile.outgoing(start, anchor));

    if incomparable.is_empty() {
        // Linear case: require a total temporal order.
        let order = topological_chain(&sigma, &oriented)?;
        let a0 = order[0].clone();
        let classes: Vec<Cardinality> = order[1..]
            .iter()
            .map(|x| profile.outgoing(&a0, x))
            .collect();
        // Interior = the contiguous run of non-1..1 classes.
        let interior_start = classes.iter().position(|&c| c != Cardinality::ExactlyOne);
        match interior_start {
            None => {
                // Uniform 1..1: one mandatory sequence. The first and last
                // chain elements act as the bracket so that variant
                // mutations stay observable next to the outer wrapper.
                let outer = outer_of(&a0)?;
                let (pred, body, foll) = if order.len() >= 3 {
                    (
                        vec![order[0].clone()],
                        order[1..order.len() - 1].to_vec(),
                        vec![order[order.len() - 1].clone()],
                    )
                } else {
                    (Vec::new(), order.clone(), Vec::new())
                };
                Some(ShapeCandidate {
                    construct: Construct::Sequence,
                    variant: Variant::Mandatory,
                    outer,
                    pred,
                    branches: vec![body],
                    foll,
                })
            }
            Some(s) => {
                let cls = classes[s];
                let mut e = s;
                while e < classes.len() && classes[e] == cls {
                    e += 1;
                }
                // everything after the interior must be 1..1 again
                if classes[e..].iter().any(|&c| c != Cardinality::ExactlyOne) {
                    return None;
                }
                let variant = Variant::of(cls)?;
                if variant == Variant::Mandatory {
                    return None;
                }
                let pred: Vec<Activity> = order[..s + 1].to_vec();
                let body: Vec<Activity> = order[s + 1..e + 1].to_vec();
                let foll: Vec<Activity> = order[e + 1..].to_vec();
                if body.is_empty() || foll.is_empty() {
                    return None;
                }
                let outer = outer_of(&a0)?;
                Some(ShapeCandidate {
                    construct: Construct::Sequence,
                    variant,
                    outer,
                    pred,
                    branches: vec![body],
                    foll,
                })
            }
        }
    } else {
        // Branch case: activities touched by incomparable pairs form the
        // branches (connected components of the comparability graph).
        let branch_acts: BTreeSet<Activity> = incomparable
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect();
        let branches = branch_components(&branch_acts, &oriented)?;

        let mut pred: Vec<Activity> = Vec::new();
        let mut foll: Vec<Activity> = Vec::new();
        for x in sigma.iter().filter(|x| !branch_acts.contains(*x)) {
            let to = branch_acts.iter().any(|b| oriented(x, b));
            let from = branch_acts.iter().any(|b| oriented(b, x));
            match (to, from) {
                (true, false) => pred.push(x.clone()),
                (false, true) => foll.push(x.clone()),
                _ => return None,
            }
        }
        let pred = topological_chain(&pred, &oriented)?;
        let foll = topological_chain(&foll, &oriented)?;
        if pred.is_empty() || foll.is_empty() {
            return None;
        }
        let p_last = pred.last().unwrap().clone();
        let f_first = foll[0].clone();

        // Uniform frontier class from the last predecessor into the body.
        let mut frontier: Option<Cardinality> = None;
        for x in branches.iter().flatten() {
            let c = profile.outgoing(&p_last, x);
            match frontier {
                None => frontier = Some(c),
                Some(f) if f == c => {}
                _ => return None,
            }
        }
        let frontier = frontier?;

        // Construct signatures.
        let has_cross_be = model.constraints().any(|c| {
            c.template() == Template::BalancedEnablement
                && branch_of(&branches, &c.args()[0]) != branch_of(&branches, &c.args()[1])
                && branch_of(&branches, &c.args()[0]).is_some()
                && branch_of(&branches, &c.args()[1]).is_some()
        });
        let construct = if has_cross_be {
            Construct::Parallel
        } else {
            // cross-branch direct-succession exclusions
            let mut missing: Vec<(Activity, Activity)> = Vec::new();
            for (i, bi) in branches.iter().enumerate() {
                for (j, bj) in branches.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    for x in bi {
                        for y in bj {
                            if !has_ncs(x, y) {
                                missing.push((x.clone(), y.clone()));
                            }
                        }
                    }
                }
            }
            let only_wraparound_missing = missing.iter().all(|(x, y)| {
                let from = branch_of(&branches, x).unwrap();
                let to = branch_of(&branches, y).unwrap();
                branches[from].last() == Some(x) && branches[to].first() == Some(y)
            });
            if only_wraparound_missing {
                Construct::Xor
            } else {
                let interposed = branches.iter().all(|b| {
                    b.len() >= 2
                        && aug_model.constraints().any(|c| {
                            c.template() == Template::Interposition
                                && c.args()[0] == b[0]
                                && c.args()[1] == *b.last().unwrap()
                                && c.args()[2] == f_first
                        })
                });
                if interposed {
                    Construct::Or
                } else {
                    return None;
                }
            }
        };

        let variant = match construct {
            Construct::Parallel => Variant::of(frontier)?,
            Construct::Xor | Construct::Or => {
                let repeatable = match frontier {
                    Cardinality::AtMostOne => false,
                    Cardinality::AnyNumber => true,
                    _ => return None,
                };
                let mandatory = has_ncs(&p_last, &f_first);
                match (repeatable, mandatory) {
                    (false, true) => Variant::Mandatory,
                    (false, false) => Variant::Optional,
                    (true, true) => Variant::MandatoryRepeatable,
                    (true, false) => Variant::OptionalRepeatable,
                }
            }
            Construct::Sequence => unreachable!(),
        };

        let outer = outer_of(&pred[0])?;
        Some(ShapeCandidate {
            construct,
            variant,
            outer,
            pred,
            branches,
            foll,
        })
    }
}

fn branch_of(branches: &[Vec<Activity>], a: &Activity) -> Option<usize> {
    branches.iter().position(|b| b.contains(a))
}

/// Orders `acts` into a single chain consistent with the orientation
/// relation; `None` when the relation is cyclic or not total enough to
/// determine consecutive neighbors.
fn topological_chain(
    acts: &[Activity],
    oriented: &dyn Fn(&Activity, &Activity) -> bool,
) -> Option<Vec<Activity>> {
    if acts.is_empty() {
        return Some(Vec::new());
    }
    let mut remaining: BTreeSet<Activity> = acts.iter().cloned().collect();
    let mut order = Vec::new();
    while !remaining.is_empty() {
        // the unique element with no predecessor among the remaining
        let mut sources = remaining
            .iter()
            .filter(|x| !remaining.iter().any(|y| y != *x && oriented(y, x)));
        let head = sources.next()?.clone();
        if sources.next().is_some() {
            return None;
        }
        remaining.remove(&head);
        order.push(head);
    }
    // consecutive elements must actually be oriented
    for w in order.windows(2) {
        if !oriented(&w[0], &w[1]) {
            return None;
        }
    }
    Some(order)
}

/// Splits branch activities into connected components of the comparability
/// graph and orders each component into a chain.
fn branch_components(
    acts: &BTreeSet<Activity>,
    oriented: &dyn Fn(&Activity, &Activity) -> bool,
) -> Option<Vec<Vec<Activity>>> {
    let comparable =
        |a: &Activity, b: &Activity| oriented(a, b) || oriented(b, a);
    let mut unassigned: BTreeSet<Activity> = acts.clone();
    let mut components: Vec<Vec<Activity>> = Vec::new();
    while let Some(seed) = unassigned.iter().next().cloned() {
        let mut component = vec![seed.clone()];
        unassigned.remove(&seed);
        loop {
            let next: Vec<Activity> = unassigned
                .iter()
                .filter(|x| component.iter().any(|c| comparable(c, x)))
                .cloned()
                .collect();
            if next.is_empty() {
                break;
            }
            for x in next {
                unassigned.remove(&x);
                component.push(x);
            }
        }
        let ordered = topological_chain(&component, oriented)?;
        components.push(ordered);
    }
    if components.len() < 2 {
        return None;
    }
    // canonical order: by first activity
    components.sort_by(|a, b| a[0].cmp(&b[0]));
    Some(components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::DEFAULT_STATE_CAP;

    fn act(s: &str) -> Activity {
        Activity::new(s).unwrap()
    }

    fn con(t: Template, args: &[&str]) -> Constraint {
        Constraint::new(t, args.iter().map(|s| act(s)).collect()).unwrap()
    }

    fn model_of(constraints: &[Constraint], alphabet: &[&str]) -> MinedModel {
        MinedModel::from_constraints(
            constraints.to_vec(),
            alphabet.iter().map(|s| act(s)).collect(),
        )
    }

    #[test]
    fn profile_follows_template_mapping() {
        let m = model_of(
            &[
                con(Template::AlternateSuccession, &["A", "B"]),
                con(Template::Succession, &["C", "D"]),
                con(Template::AlternateResponse, &["C", "D"]),
                con(Template::Precedence, &["E", "F"]),
                con(Template::Response, &["G", "H"]),
            ],
            &["A", "B", "C", "D", "E", "F", "G", "H"],
        );
        let p = CardinalityProfile::of(&m);
        assert_eq!(p.outgoing(&act("A"), &act("B")), Cardinality::ExactlyOne);
        assert_eq!(p.incoming(&act("A"), &act("B")), Cardinality::ExactlyOne);
        assert_eq!(p.outgoing(&act("C"), &act("D")), Cardinality::OneOrMore);
        assert_eq!(p.outgoing(&act("E"), &act("F")), Cardinality::AnyNumber);
        assert_eq!(p.incoming(&act("G"), &act("H")), Cardinality::AnyNumber);
        assert_eq!(p.outgoing(&act("G"), &act("H")), Cardinality::Unrelated);
        assert_eq!(p.outgoing(&act("B"), &act("A")), Cardinality::Unrelated);
    }

    #[test]
    fn alternate_precedence_classes() {
        let m = model_of(
            &[con(Template::AlternatePrecedence, &["A", "B"])],
            &["A", "B"],
        );
        let p = CardinalityProfile::of(&m);
        assert_eq!(p.outgoing(&act("A"), &act("B")), Cardinality::AtMostOne);
        assert_eq!(p.incoming(&act("A"), &act("B")), Cardinality::OneOrMore);
    }

    #[test]
    fn synthesized_sequence_language() {
        let net = synthesize_net(
            Construct::Sequence,
            Variant::Optional,
            Variant::OptionalRepeatable,
            &[act("A")],
            &[vec![act("B"), act("C")]],
            &[act("D")],
        )
        .unwrap();
        let dfa = net.to_dfa(DEFAULT_STATE_CAP).unwrap();
        let t = |names: &[&str]| Trace::from_names(names.iter().copied()).unwrap();
        assert!(dfa.accepts(&Trace::empty()));
        assert!(dfa.accepts(&t(&["A", "B", "C", "D"])));
        assert!(dfa.accepts(&t(&["A", "D"])));
        assert!(dfa.accepts(&t(&["A", "D", "A", "B", "C", "D"])));
        assert!(!dfa.accepts(&t(&["A", "B", "D"])));
        assert!(!dfa.accepts(&t(&["A", "B", "C", "B", "C", "D"]))); // not repeatable
        assert!(net.is_one_safe(DEFAULT_STATE_CAP).unwrap());
    }

    #[test]
    fn synthesized_mandatory_xor_without_silents() {
        let net = synthesize_net(
            Construct::Xor,
            Variant::Mandatory,
            Variant::Mandatory,
            &[],
            &[vec![act("B")], vec![act("C")]],
            &[],
        )
        .unwrap();
        assert!(net
            .transition_names()
            .iter()
            .all(|t| net.transition_label(t).unwrap().is_some()));
        let dfa = net.to_dfa(DEFAULT_STATE_CAP).unwrap();
        let t = |names: &[&str]| Trace::from_names(names.iter().copied()).unwrap();
        assert!(dfa.accepts(&t(&["B"])));
        assert!(dfa.accepts(&t(&["C"])));
        assert!(!dfa.accepts(&t(&["B", "C"])));
        assert!(!dfa.accepts(&Trace::empty()));
    }

    #[test]
    fn synthesized_or_requires_chosen_branches() {
        let net = synthesize_net(
            Construct::Or,
            Variant::Mandatory,
            Variant::Mandatory,
            &[act("A")],
            &[vec![act("B1"), act("B2")], vec![act("C1"), act("C2")]],
            &[act("D")],
        )
        .unwrap();
        let dfa = net.to_dfa(DEFAULT_STATE_CAP).unwrap();
        let t = |names: &[&str]| Trace::from_names(names.iter().copied()).unwrap();
        assert!(dfa.accepts(&t(&["A", "B1", "B2", "D"])));
        assert!(dfa.accepts(&t(&["A", "C1", "C2", "D"])));
        assert!(dfa.accepts(&t(&["A", "B1", "C1", "C2", "B2", "D"])));
        assert!(!dfa.accepts(&t(&["A", "D"]))); // at least one branch
        assert!(!dfa.accepts(&t(&["A", "B1", "C1", "B2", "D"]))); // c pending
        assert!(net.is_one_safe(DEFAULT_STATE_CAP).unwrap());
    }

    #[test]
    fn branch_recurrence_predicate() {
        let branches = vec![
            vec![act("B1"), act("B2")],
            vec![act("C1"), act("C2")],
        ];
        let t = |names: &[&str]| Trace::from_names(names.iter().copied()).unwrap();
        // B restarts twice while C is pending
        assert!(exhibits_branch_recurrence(
            &t(&["A", "C1", "B1", "B2", "B1", "B2", "C2", "D"]),
            &branches
        ));
        // single interleaving is fine
        assert!(!exhibits_branch_recurrence(
            &t(&["A", "B1", "C1", "B2", "C2", "D"]),
            &branches
        ));
        assert!(!exhibits_branch_recurrence(&t(&["A", "D"]), &branches));
    }

    #[test]
    fn validate_rewrite_identity() {
        let cs = vec![con(Template::Response, &["A", "B"])];
        let model = model_of(&cs, &["A", "B"]);
        let frame = ProcessFrame::new(vec![Specification::new(
            "residual",
            model.alphabet().clone(),
            SpecBody::Declare(cs),
        )
        .unwrap()])
        .unwrap();
        let reference = model.to_dfa(DEFAULT_STATE_CAP).unwrap();
        assert_eq!(
            validate_rewrite(&frame, &reference, DEFAULT_STATE_CAP).unwrap(),
            None
        );
    }
}
