//! Discovery of constraints from an event log at 100% support.
//!
//! A candidate constraint is included iff no trace of the log violates it
//! and at least one trace activates it (vacuity detection is deliberately
//! not applied beyond that positive-example requirement, and no redundancy
//! pruning is performed). Candidates are generated exhaustively: ordered
//! distinct pairs for binary templates — plus the diagonal `(a, a)` for
//! `NotChainSuccession`, which states that an activity never immediately
//! repeats — and ordered distinct triples for ternary templates.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::automata::{AutomataError, Dfa};
use crate::declare::{Constraint, Template};
use crate::events::{Activity, ActivitySet, EventLog, Trace, DEFAULT_START_NAME};
use crate::frame::{FrameError, SpecBody, Specification};

#[derive(Debug, Error)]
pub enum MineError {
    #[error("cannot mine from an empty log")]
    EmptyLog,
    #[error("support threshold is fixed at 1.0 in this release (got {0})")]
    UnsupportedThreshold(f64),
    #[error(transparent)]
    Event(#[from] crate::events::EventError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

/// Which templates to try and how to treat the artificial start activity.
#[derive(Clone, Debug)]
pub struct MinerConfig {
    pub templates: BTreeSet<Template>,
    /// Fixed at 1.0; the field exists for forward compatibility.
    pub support_threshold: f64,
    /// Prepend the artificial start activity to every trace before mining.
    pub include_start: bool,
    pub start_name: String,
    /// Strips ternary templates from the candidate set when false.
    pub ternary_enabled: bool,
}

impl MinerConfig {
    /// The default template set: the binary eventually-follows catalog plus
    /// `NotChainSuccession` and the two ternary templates.
    pub fn default_templates() -> BTreeSet<Template> {
        [
            Template::Response,
            Template::Precedence,
            Template::Succession,
            Template::AlternateResponse,
            Template::AlternatePrecedence,
            Template::AlternateSuccession,
            Template::NotChainSuccession,
            Template::Interposition,
            Template::BalancedEnablement,
        ]
        .into_iter()
        .collect()
    }
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig {
            templates: Self::default_templates(),
            support_threshold: 1.0,
            include_start: false,
            start_name: DEFAULT_START_NAME.to_string(),
            ternary_enabled: true,
        }
    }
}

/// Per-constraint discovery counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Provenance {
    /// Traces (with multiplicity) satisfying the constraint — at 100%
    /// support this is the whole log.
    pub satisfying_traces: usize,
    /// Traces (with multiplicity) containing at least one activation.
    pub activating_traces: usize,
}

/// The result of mining: a constraint set plus the alphabet it ranges over.
#[derive(Clone, Debug)]
pub struct MinedModel {
    constraints: Vec<(Constraint, Provenance)>,
    alphabet: ActivitySet,
}

impl MinedModel {
    pub fn from_constraints(constraints: Vec<Constraint>, alphabet: ActivitySet) -> MinedModel {
        MinedModel {
            constraints: constraints
                .into_iter()
                .map(|c| {
                    (
                        c,
                        Provenance {
                            satisfying_traces: 0,
                            activating_traces: 0,
                        },
                    )
                })
                .collect(),
            alphabet,
        }
    }

    pub fn constraints(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().map(|(c, _)| c)
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn contains(&self, c: &Constraint) -> bool {
        self.constraints.iter().any(|(x, _)| x == c)
    }

    pub fn provenance(&self, c: &Constraint) -> Option<Provenance> {
        self.constraints
            .iter()
            .find(|(x, _)| x == c)
            .map(|(_, p)| *p)
    }

    pub fn alphabet(&self) -> &ActivitySet {
        &self.alphabet
    }

    pub fn count_of(&self, template: Template) -> usize {
        self.constraints
            .iter()
            .filter(|(c, _)| c.template() == template)
            .count()
    }

    /// The automaton of the whole model: product of all compiled
    /// constraints, embedded over the model alphabet. With no constraints
    /// this is the universal automaton.
    pub fn to_dfa(&self, cap: usize) -> Result<Dfa, MineError> {
        let spec = Specification::new(
            "mined",
            self.alphabet.clone(),
            SpecBody::Declare(self.constraints().cloned().collect()),
        )?;
        Ok(spec.to_dfa(cap)?)
    }
}

/// Mines all enabled templates from `log` at 100% support.
pub fn mine(log: &EventLog, cfg: &MinerConfig) -> Result<MinedModel, MineError> {
    if log.is_empty() {
        return Err(MineError::EmptyLog);
    }
    if cfg.support_threshold != 1.0 {
        return Err(MineError::UnsupportedThreshold(cfg.support_threshold));
    }
    let log = if cfg.include_start {
        let start = Activity::new(&cfg.start_name)?;
        log.prepend_start(&start)?
    } else {
        log.clone()
    };

    let alphabet: Vec<Activity> = log.alphabet().iter().cloned().collect();
    let n = alphabet.len();

    // Unique traces with multiplicities; candidate evaluation only needs
    // one pass per distinct trace.
    let mut unique: Vec<(&Trace, usize)> = Vec::new();
    {
        let mut sorted: Vec<&Trace> = log.traces().iter().collect();
        sorted.sort();
        for t in sorted {
            match unique.last_mut() {
                Some((u, k)) if *u == t => *k += 1,
                _ => unique.push((t, 1)),
            }
        }
    }
    // Traces as alphabet indices, and per-trace occurrence counts.
    let index_of = |a: &Activity| alphabet.binary_search(a).expect("alphabet is complete");
    let encoded: Vec<(Vec<u16>, Vec<u32>, usize)> = unique
        .iter()
        .map(|(t, k)| {
            let ids: Vec<u16> = t.iter().map(|a| index_of(a) as u16).collect();
            let mut occ = vec![0u32; n];
            for &i in &ids {
                occ[i as usize] += 1;
            }
            (ids, occ, *k)
        })
        .collect();

    let mut discovered: Vec<(Constraint, Provenance)> = Vec::new();
    let templates: Vec<Template> = cfg
        .templates
        .iter()
        .copied()
        .filter(|t| cfg.ternary_enabled || !t.is_ternary())
        .collect();

    for &template in &templates {
        let candidates = candidate_tuples(template, &alphabet);
        for args in candidates {
            let constraint = match Constraint::new(template, args) {
                Ok(c) => c,
                Err(_) => continue,
            };
            if let Some(prov) = evaluate_candidate(&constraint, &alphabet, &encoded) {
                discovered.push((constraint, prov));
            }
        }
    }
    discovered.sort_by(|(a, _), (b, _)| a.cmp(b));
    Ok(MinedModel {
        constraints: discovered,
        alphabet: log.alphabet().clone(),
    })
}

/// All argument tuples to try for one template over the alphabet.
fn candidate_tuples(template: Template, alphabet: &[Activity]) -> Vec<Vec<Activity>> {
    let mut out = Vec::new();
    match template.arity() {
        1 => {
            for a in alphabet {
                out.push(vec![a.clone()]);
            }
        }
        2 => {
            for a in alphabet {
                for b in alphabet {
                    if a == b && !template.allows_repeated_args() {
                        continue;
                    }
                    out.push(vec![a.clone(), b.clone()]);
                }
            }
        }
        _ => {
            for a in alphabet {
                for b in alphabet {
                    if b == a {
                        continue;
                    }
                    for c in alphabet {
                        if c == a || c == b {
                            continue;
                        }
                        out.push(vec![a.clone(), b.clone(), c.clone()]);
                    }
                }
            }
        }
    }
    out
}

/// Runs the candidate over every distinct trace, bailing out on the first
/// violation. Returns provenance counts when the constraint holds on the
/// whole log and has at least one activating trace.
fn evaluate_candidate(
    constraint: &Constraint,
    alphabet: &[Activity],
    encoded: &[(Vec<u16>, Vec<u32>, usize)],
) -> Option<Provenance> {
    let dfa = constraint.compile();
    // alphabet index -> symbol column (or OTHER)
    const OTHER: u8 = u8::MAX;
    let lookup: Vec<u8> = alphabet
        .iter()
        .map(|a| match dfa.symbol_index(a) {
            Some(i) => i as u8,
            None => OTHER,
        })
        .collect();
    let arg_ids: Vec<u16> = constraint
        .args()
        .iter()
        .map(|a| alphabet.binary_search(a).unwrap() as u16)
        .collect();
    let unary = constraint.template().is_unary();

    let mut satisfying = 0usize;
    let mut activating = 0usize;
    for (ids, occ, mult) in encoded {
        let mut state = dfa.initial();
        for &ev in ids {
            let col = lookup[ev as usize];
            state = if col == OTHER {
                dfa.default_successor(state)
            } else {
                dfa.delta_at(state, col as usize)
            };
        }
        if !dfa.is_accepting(state) {
            return None;
        }
        satisfying += mult;
        let activated = if unary {
            !ids.is_empty()
        } else {
            activation_targets(constraint, &arg_ids)
                .iter()
                .any(|&i| occ[i as usize] > 0)
        };
        if activated {
            activating += mult;
        }
    }
    if activating == 0 {
        return None;
    }
    Some(Provenance {
        satisfying_traces: satisfying,
        activating_traces: activating,
    })
}

/// Which argument positions count as activations (mirrors
/// [`Constraint::activations`]).
fn activation_targets(constraint: &Constraint, arg_ids: &[u16]) -> Vec<u16> {
    match constraint.template() {
        Template::Response
        | Template::AlternateResponse
        | Template::NotSuccession
        | Template::Interposition
        | Template::NotChainSuccession => vec![arg_ids[0]],
        Template::Precedence | Template::AlternatePrecedence => vec![arg_ids[1]],
        Template::Succession
        | Template::AlternateSuccession
        | Template::CoExistence
        | Template::NotCoExistence => vec![arg_ids[0], arg_ids[1]],
        Template::BalancedEnablement => arg_ids.to_vec(),
        _ => arg_ids.to_vec(),
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

    fn con(t: Template, args: &[&str]) -> Constraint {
        Constraint::new(t, args.iter().map(|s| act(s)).collect()).unwrap()
    }

    #[test]
    fn response_discovered_and_reverse_rejected() {
        let log = EventLog::new(vec![tr(&["A", "B"]), tr(&["A", "C", "B"])]);
        let model = mine(&log, &MinerConfig::default()).unwrap();
        assert!(model.contains(&con(Template::Response, &["A", "B"])));
        assert!(!model.contains(&con(Template::Response, &["B", "A"])));
    }

    #[test]
    fn vacuous_constraints_not_discovered() {
        let log = EventLog::new(vec![tr(&["C"])]);
        let model = mine(&log, &MinerConfig::default()).unwrap();
        // Response(A,B) would need A or B in the alphabet at all; check the
        // analogous in-alphabet case: no candidate over {C} alone besides
        // NotChainSuccession(C,C).
        assert!(model.contains(&con(Template::NotChainSuccession, &["C", "C"])));
        for c in model.constraints() {
            assert!(c.args().iter().all(|a| a == &act("C")));
        }
    }

    #[test]
    fn empty_log_is_an_error() {
        let log = EventLog::new(vec![]);
        assert!(matches!(
            mine(&log, &MinerConfig::default()),
            Err(MineError::EmptyLog)
        ));
    }

    #[test]
    fn only_full_support_is_accepted() {
        let log = EventLog::new(vec![tr(&["A"])]);
        let cfg = MinerConfig {
            support_threshold: 0.8,
            ..MinerConfig::default()
        };
        assert!(matches!(
            mine(&log, &cfg),
            Err(MineError::UnsupportedThreshold(_))
        ));
    }

    #[test]
    fn not_chain_succession_diagonal() {
        let log = EventLog::new(vec![tr(&["A", "B", "A"]), tr(&["B", "B"])]);
        let model = mine(&log, &MinerConfig::default()).unwrap();
        // A never repeats immediately; B does.
        assert!(model.contains(&con(Template::NotChainSuccession, &["A", "A"])));
        assert!(!model.contains(&con(Template::NotChainSuccession, &["B", "B"])));
    }

    #[test]
    fn provenance_counts_multiplicity() {
        let log = EventLog::new(vec![tr(&["A", "B"]), tr(&["A", "B"]), tr(&["C"])]);
        let model = mine(&log, &MinerConfig::default()).unwrap();
        let prov = model
            .provenance(&con(Template::Response, &["A", "B"]))
            .unwrap();
        assert_eq!(prov.satisfying_traces, 3);
        assert_eq!(prov.activating_traces, 2);
    }

    #[test]
    fn mining_is_deterministic_and_order_insensitive() {
        let a = EventLog::new(vec![tr(&["A", "B"]), tr(&["B", "A", "B"])]);
        let b = EventLog::new(vec![tr(&["B", "A", "B"]), tr(&["A", "B"])]);
        let ma = mine(&a, &MinerConfig::default()).unwrap();
        let mb = mine(&b, &MinerConfig::default()).unwrap();
        let ca: Vec<_> = ma.constraints().cloned().collect();
        let cb: Vec<_> = mb.constraints().cloned().collect();
        assert_eq!(ca, cb);
    }

    #[test]
    fn adding_traces_only_removes_constraints() {
        let small = EventLog::new(vec![tr(&["A", "B"])]);
        let big = EventLog::new(vec![tr(&["A", "B"]), tr(&["B"])]);
        let ms = mine(&small, &MinerConfig::default()).unwrap();
        let mb = mine(&big, &MinerConfig::default()).unwrap();
        for c in mb.constraints() {
            assert!(ms.contains(c), "{c} appeared only in the larger log");
        }
    }

    #[test]
    fn include_start_adds_start_constraints() {
        let log = EventLog::new(vec![tr(&["A"]), Trace::empty()]);
        let cfg = MinerConfig {
            include_start: true,
            ..MinerConfig::default()
        };
        let model = mine(&log, &cfg).unwrap();
        assert!(model.alphabet().contains(&act(DEFAULT_START_NAME)));
        // A occurs only after the start activity
        assert!(model.contains(&con(Template::Precedence, &[DEFAULT_START_NAME, "A"])));
        // the empty trace becomes <start>, so Response(start, A) is violated
        assert!(!model.contains(&con(Template::Response, &[DEFAULT_START_NAME, "A"])));
    }

    #[test]
    fn mined_dfa_of_empty_model_is_universal() {
        let model = MinedModel::from_constraints(vec![], ActivitySet::new());
        let dfa = model.to_dfa(DEFAULT_STATE_CAP).unwrap();
        assert!(dfa.accepts(&Trace::empty()));
        assert!(dfa.accepts(&tr(&["X", "Y"])));
    }

    #[test]
    fn soundness_post_hoc() {
        let log = EventLog::new(vec![tr(&["A", "B", "C"]), tr(&["A", "C", "B", "C"])]);
        let model = mine(&log, &MinerConfig::default()).unwrap();
        for c in model.constraints() {
            let dfa = c.compile();
            for t in log.traces() {
                assert!(dfa.accepts(t), "{c} violated by {t}");
            }
        }
    }
}
