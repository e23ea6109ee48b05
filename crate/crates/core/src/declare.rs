//! Constraint templates, their compilation to automata, and per-trace
//! evaluation with activation counting.
//!
//! Every template compiles to a small minimal [`Dfa`] whose explicit symbols
//! are exactly the constraint's arguments. For most templates the default
//! transitions are self-loops, so activities outside the arguments are
//! ignored; `NotChainSuccession` is the exception — an intervening activity
//! of any kind breaks a direct-succession pair, so its defaults return to
//! the neutral state instead. `Init` is sensitive to what happens first and
//! routes unknown first events into the trap.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::automata::Dfa;
use crate::events::{Activity, Trace};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DeclareError {
    #[error("{template} takes {expected} argument(s), got {got}")]
    Arity {
        template: String,
        expected: usize,
        got: usize,
    },
    #[error("{template} requires pairwise distinct arguments")]
    RepeatedArgument { template: String },
    #[error("cardinality parameter must be at least 1")]
    ZeroCardinality,
    #[error("unknown template name {0:?}")]
    UnknownTemplate(String),
}

/// The supported constraint templates. Unary cardinality templates carry
/// their bound; `Absence(n)` means "fewer than n occurrences".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Template {
    Existence(u32),
    Absence(u32),
    Exactly(u32),
    Init,
    Response,
    Precedence,
    Succession,
    AlternateResponse,
    AlternatePrecedence,
    AlternateSuccession,
    CoExistence,
    NotCoExistence,
    NotSuccession,
    NotChainSuccession,
    Interposition,
    BalancedEnablement,
}

impl Template {
    pub fn arity(self) -> usize {
        match self {
            Template::Existence(_) | Template::Absence(_) | Template::Exactly(_) | Template::Init => 1,
            Template::Interposition | Template::BalancedEnablement => 3,
            _ => 2,
        }
    }

    pub fn is_unary(self) -> bool {
        self.arity() == 1
    }

    pub fn is_ternary(self) -> bool {
        self.arity() == 3
    }

    /// Templates whose defaults are not projection self-loops: they react to
    /// activities between a constrained pair, so composition must expose the
    /// full task alphabet to them.
    pub fn is_chain_family(self) -> bool {
        matches!(self, Template::NotChainSuccession)
    }

    /// Binary templates may repeat the same activity in both positions only
    /// for `NotChainSuccession` (no immediate self-repeat).
    pub fn allows_repeated_args(self) -> bool {
        matches!(self, Template::NotChainSuccession)
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Template::Existence(n) => write!(f, "Existence{n}"),
            Template::Absence(n) => write!(f, "Absence{n}"),
            Template::Exactly(n) => write!(f, "Exactly{n}"),
            Template::Init => write!(f, "Init"),
            Template::Response => write!(f, "Response"),
            Template::Precedence => write!(f, "Precedence"),
            Template::Succession => write!(f, "Succession"),
            Template::AlternateResponse => write!(f, "AlternateResponse"),
            Template::AlternatePrecedence => write!(f, "AlternatePrecedence"),
            Template::AlternateSuccession => write!(f, "AlternateSuccession"),
            Template::CoExistence => write!(f, "CoExistence"),
            Template::NotCoExistence => write!(f, "NotCoExistence"),
            Template::NotSuccession => write!(f, "NotSuccession"),
            Template::NotChainSuccession => write!(f, "NotChainSuccession"),
            Template::Interposition => write!(f, "Interposition"),
            Template::BalancedEnablement => write!(f, "BalancedEnablement"),
        }
    }
}

impl FromStr for Template {
    type Err = DeclareError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fixed = match s {
            "Init" => Some(Template::Init),
            "Response" => Some(Template::Response),
            "Precedence" => Some(Template::Precedence),
            "Succession" => Some(Template::Succession),
            "AlternateResponse" => Some(Template::AlternateResponse),
            "AlternatePrecedence" => Some(Template::AlternatePrecedence),
            "AlternateSuccession" => Some(Template::AlternateSuccession),
            "CoExistence" => Some(Template::CoExistence),
            "NotCoExistence" => Some(Template::NotCoExistence),
            "NotSuccession" => Some(Template::NotSuccession),
            "NotChainSuccession" => Some(Template::NotChainSuccession),
            "Interposition" => Some(Template::Interposition),
            "BalancedEnablement" => Some(Template::BalancedEnablement),
            _ => None,
        };
        if let Some(t) = fixed {
            return Ok(t);
        }
        for (prefix, make) in [
            ("Existence", Template::Existence as fn(u32) -> Template),
            ("Absence", Template::Absence as fn(u32) -> Template),
            ("Exactly", Template::Exactly as fn(u32) -> Template),
        ] {
            if let Some(rest) = s.strip_prefix(prefix) {
                if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                    let n: u32 = rest
                        .parse()
                        .map_err(|_| DeclareError::UnknownTemplate(s.to_string()))?;
                    if n == 0 {
                        return Err(DeclareError::ZeroCardinality);
                    }
                    return Ok(make(n));
                }
            }
        }
        Err(DeclareError::UnknownTemplate(s.to_string()))
    }
}

/// A template instantiated with concrete activities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    template: Template,
    args: Vec<Activity>,
}

impl Constraint {
    pub fn new(template: Template, args: Vec<Activity>) -> Result<Constraint, DeclareError> {
        if args.len() != template.arity() {
            return Err(DeclareError::Arity {
                template: template.to_string(),
                expected: template.arity(),
                got: args.len(),
            });
        }
        match template {
            Template::Existence(n) | Template::Absence(n) | Template::Exactly(n) if n == 0 => {
                return Err(DeclareError::ZeroCardinality)
            }
            _ => {}
        }
        let distinct_required = match template.arity() {
            2 => !template.allows_repeated_args(),
            3 => true,
            _ => false,
        };
        if distinct_required {
            for i in 0..args.len() {
                for j in i + 1..args.len() {
                    if args[i] == args[j] {
                        return Err(DeclareError::RepeatedArgument {
                            template: template.to_string(),
                        });
                    }
                }
            }
        }
        Ok(Constraint { template, args })
    }

    pub fn template(&self) -> Template {
        self.template
    }

    pub fn args(&self) -> &[Activity] {
        &self.args
    }

    pub fn is_chain_family(&self) -> bool {
        self.template.is_chain_family()
    }

    /// The minimal automaton accepting exactly the traces that satisfy this
    /// constraint, explicit over the argument activities.
    pub fn compile(&self) -> Dfa {
        let a = &self.args[0];
        let raw = match self.template {
            Template::Existence(n) => {
                let n = n as usize;
                // states 0..=n count occurrences, saturating at n (accepting)
                let mut delta = Vec::new();
                let mut defaults = Vec::new();
                for s in 0..=n {
                    delta.push(vec![(s + 1).min(n)]);
                    defaults.push(s);
                }
                let mut accepting = vec![false; n + 1];
                accepting[n] = true;
                Dfa::new(vec![a.clone()], 0, accepting, delta, defaults)
            }
            Template::Absence(n) => {
                let n = n as usize;
                // state n = too many (trap)
                let mut delta = Vec::new();
                let mut defaults = Vec::new();
                for s in 0..=n {
                    delta.push(vec![(s + 1).min(n)]);
                    defaults.push(s);
                }
                let mut accepting = vec![true; n + 1];
                accepting[n] = false;
                Dfa::new(vec![a.clone()], 0, accepting, delta, defaults)
            }
            Template::Exactly(n) => {
                let n = n as usize;
                let mut delta = Vec::new();
                let mut defaults = Vec::new();
                for s in 0..=n + 1 {
                    delta.push(vec![(s + 1).min(n + 1)]);
                    defaults.push(s);
                }
                let mut accepting = vec![false; n + 2];
                accepting[n] = true;
                Dfa::new(vec![a.clone()], 0, accepting, delta, defaults)
            }
            Template::Init => {
                // 0: start, 1: first event was the argument, 2: trap.
                // The default from the start state is the trap: whatever
                // comes first other than the argument violates the
                // constraint.
                Dfa::new(
                    vec![a.clone()],
                    0,
                    vec![false, true, false],
                    vec![vec![1], vec![1], vec![2]],
                    vec![2, 1, 2],
                )
            }
            Template::Response => {
                let b = &self.args[1];
                // 0: no pending activation, 1: pending
                Dfa::new(
                    vec![a.clone(), b.clone()],
                    0,
                    vec![true, false],
                    vec![vec![1, 0], vec![1, 0]],
                    vec![0, 1],
                )
            }
            Template::Precedence => {
                let b = &self.args[1];
                // 0: locked, 1: unlocked, 2: trap
                Dfa::new(
                    vec![a.clone(), b.clone()],
                    0,
                    vec![true, true, false],
                    vec![vec![1, 2], vec![1, 1], vec![2, 2]],
                    vec![0, 1, 2],
                )
            }
            Template::Succession => {
                let b = &self.args[1];
                // 0: untouched, 1: pending, 2: unlocked & settled, 3: trap
                Dfa::new(
                    vec![a.clone(), b.clone()],
                    0,
                    vec![true, false, true, false],
                    vec![vec![1, 3], vec![1, 2], vec![1, 2], vec![3, 3]],
                    vec![0, 1, 2, 3],
                )
            }
            Template::AlternateResponse => {
                let b = &self.args[1];
                // 0: idle, 1: pending (another activation violates), 2: trap
                Dfa::new(
                    vec![a.clone(), b.clone()],
                    0,
                    vec![true, false, false],
                    vec![vec![1, 0], vec![2, 0], vec![2, 2]],
                    vec![0, 1, 2],
                )
            }
            Template::AlternatePrecedence => {
                let b = &self.args[1];
                Dfa::new(
                    vec![a.clone(), b.clone()],
                    0,
                    vec![true, true, false],
                    vec![vec![1, 2], vec![1, 0], vec![2, 2]],
                    vec![0, 1, 2],
                )
            }
            Template::AlternateSuccession => {
                let b = &self.args[1];
                // strict alternation a b a b ... ending balanced
                Dfa::new(
                    vec![a.clone(), b.clone()],
                    0,
                    vec![true, false, false],
                    vec![vec![1, 2], vec![2, 0], vec![2, 2]],
                    vec![0, 1, 2],
                )
            }
            Template::CoExistence => {
                let b = &self.args[1];
                // 0: neither, 1: only a, 2: only b, 3: both
                Dfa::new(
                    vec![a.clone(), b.clone()],
                    0,
                    vec![true, false, false, true],
                    vec![vec![1, 2], vec![1, 3], vec![3, 2], vec![3, 3]],
                    vec![0, 1, 2, 3],
                )
            }
            Template::NotCoExistence => {
                let b = &self.args[1];
                Dfa::new(
                    vec![a.clone(), b.clone()],
                    0,
                    vec![true, true, true, false],
                    vec![vec![1, 2], vec![1, 3], vec![3, 2], vec![3, 3]],
                    vec![0, 1, 2, 3],
                )
            }
            Template::NotSuccession => {
                let b = &self.args[1];
                Dfa::new(
                    vec![a.clone(), b.clone()],
                    0,
                    vec![true, true, false],
                    vec![vec![1, 0], vec![1, 2], vec![2, 2]],
                    vec![0, 1, 2],
                )
            }
            Template::NotChainSuccession => {
                let b = &self.args[1];
                if a == b {
                    // no immediate self-repeat; any other activity resets
                    Dfa::new(
                        vec![a.clone()],
                        0,
                        vec![true, true, false],
                        vec![vec![1], vec![2], vec![2]],
                        vec![0, 0, 2],
                    )
                } else {
                    Dfa::new(
                        vec![a.clone(), b.clone()],
                        0,
                        vec![true, true, false],
                        vec![vec![1, 0], vec![1, 2], vec![2, 2]],
                        vec![0, 0, 2],
                    )
                }
            }
            Template::Interposition => {
                let b = &self.args[1];
                let c = &self.args[2];
                // 0: c enabled, 1: after a — c disabled, b required
                Dfa::new(
                    vec![a.clone(), b.clone(), c.clone()],
                    0,
                    vec![true, false, false],
                    vec![vec![1, 0, 0], vec![1, 0, 2], vec![2, 2, 2]],
                    vec![0, 1, 2],
                )
            }
            Template::BalancedEnablement => {
                let b = &self.args[1];
                let c = &self.args[2];
                // 0: balanced, 1: a ahead by one, 2: b ahead by one, 3: trap
                Dfa::new(
                    vec![a.clone(), b.clone(), c.clone()],
                    0,
                    vec![true, false, false, false],
                    vec![
                        vec![1, 2, 0],
                        vec![3, 0, 3],
                        vec![0, 3, 3],
                        vec![3, 3, 3],
                    ],
                    vec![0, 1, 2, 3],
                )
            }
        };
        raw.expect("template automata are well-formed").minimized()
    }

    /// Number of activation events of this constraint in `trace`.
    ///
    /// Response-style templates (Response, AlternateResponse, NotSuccession,
    /// Interposition, NotChainSuccession) activate on their first argument;
    /// precedence-style templates on their second; symmetric binary
    /// templates (Succession, AlternateSuccession, CoExistence,
    /// NotCoExistence) on either; BalancedEnablement on any of its three
    /// arguments; unary templates on every event.
    pub fn activations(&self, trace: &Trace) -> usize {
        let count_of = |targets: &[&Activity]| {
            trace.iter().filter(|e| targets.contains(e)).count()
        };
        match self.template {
            Template::Existence(_) | Template::Absence(_) | Template::Exactly(_) | Template::Init => {
                trace.len()
            }
            Template::Response
            | Template::AlternateResponse
            | Template::NotSuccession
            | Template::Interposition
            | Template::NotChainSuccession => count_of(&[&self.args[0]]),
            Template::Precedence | Template::AlternatePrecedence => count_of(&[&self.args[1]]),
            Template::Succession
            | Template::AlternateSuccession
            | Template::CoExistence
            | Template::NotCoExistence => count_of(&[&self.args[0], &self.args[1]]),
            Template::BalancedEnablement => {
                count_of(&[&self.args[0], &self.args[1], &self.args[2]])
            }
        }
    }

    /// Evaluates the constraint on one trace.
    pub fn evaluate(&self, trace: &Trace) -> EvaluationResult {
        let satisfied = self.compile().accepts(trace);
        let activations = self.activations(trace);
        let status = match (satisfied, activations) {
            (false, _) => ConstraintStatus::Violated,
            (true, 0) => ConstraintStatus::VacuouslySatisfied,
            (true, _) => ConstraintStatus::Satisfied,
        };
        EvaluationResult {
            status,
            activations,
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.template)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintStatus {
    Satisfied,
    Violated,
    VacuouslySatisfied,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvaluationResult {
    pub status: ConstraintStatus,
    pub activations: usize,
}

impl EvaluationResult {
    pub fn is_violated(&self) -> bool {
        self.status == ConstraintStatus::Violated
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::Trace;

    fn act(s: &str) -> Activity {
        Activity::new(s).unwrap()
    }

    fn con(t: Template, args: &[&str]) -> Constraint {
        Constraint::new(t, args.iter().map(|s| act(s)).collect()).unwrap()
    }

    fn tr(names: &[&str]) -> Trace {
        Trace::from_names(names.iter().copied()).unwrap()
    }

    #[test]
    fn response_examples() {
        let d = con(Template::Response, &["A", "B"]).compile();
        assert!(d.accepts(&tr(&["A", "C", "B"])));
        assert!(!d.accepts(&tr(&["A"])));
        assert!(d.accepts(&Trace::empty()));
    }

    #[test]
    fn interposition_examples() {
        let d = con(Template::Interposition, &["A", "B", "C"]).compile();
        assert!(d.accepts(&tr(&["A", "B", "C"])));
        assert!(!d.accepts(&tr(&["A", "C"])));
        assert!(!d.accepts(&tr(&["A"]))); // b becomes required
        assert!(d.accepts(&tr(&["C", "C"])));
    }

    #[test]
    fn balanced_enablement_examples() {
        let d = con(Template::BalancedEnablement, &["A", "B", "C"]).compile();
        assert!(!d.accepts(&tr(&["A", "A"])));
        assert!(!d.accepts(&tr(&["A", "C"])));
        assert!(d.accepts(&tr(&["A", "B", "C", "A", "B"])));
        assert!(!d.accepts(&tr(&["A"])));
    }

    #[test]
    fn not_chain_succession_self() {
        let d = con(Template::NotChainSuccession, &["A", "A"]).compile();
        assert!(d.accepts(&tr(&["A", "B", "A"])));
        assert!(!d.accepts(&tr(&["A", "A"])));
    }

    #[test]
    fn not_chain_succession_broken_by_any_activity() {
        let d = con(Template::NotChainSuccession, &["A", "B"]).compile();
        assert!(!d.accepts(&tr(&["A", "B"])));
        assert!(d.accepts(&tr(&["A", "C", "B"])));
    }

    #[test]
    fn evaluate_statuses() {
        let response = con(Template::Response, &["A", "B"]);
        let r = response.evaluate(&tr(&["C", "C"]));
        assert_eq!(r.status, ConstraintStatus::VacuouslySatisfied);
        assert_eq!(r.activations, 0);

        let precedence = con(Template::Precedence, &["A", "B"]);
        assert!(precedence.evaluate(&tr(&["B"])).is_violated());

        let r = response.evaluate(&tr(&["A", "B", "A", "B"]));
        assert_eq!(r.status, ConstraintStatus::Satisfied);
        assert_eq!(r.activations, 2);
    }

    #[test]
    fn relation_templates_accept_empty_trace() {
        for t in [
            Template::Response,
            Template::Precedence,
            Template::Succession,
            Template::AlternateResponse,
            Template::AlternatePrecedence,
            Template::AlternateSuccession,
            Template::CoExistence,
            Template::NotCoExistence,
            Template::NotSuccession,
            Template::NotChainSuccession,
        ] {
            assert!(con(t, &["A", "B"]).compile().accepts(&Trace::empty()), "{t}");
        }
        for t in [Template::Interposition, Template::BalancedEnablement] {
            assert!(con(t, &["A", "B", "C"]).compile().accepts(&Trace::empty()), "{t}");
        }
        assert!(!con(Template::Existence(1), &["A"]).compile().accepts(&Trace::empty()));
        assert!(!con(Template::Exactly(2), &["A"]).compile().accepts(&Trace::empty()));
        assert!(!con(Template::Init, &["A"]).compile().accepts(&Trace::empty()));
    }

    #[test]
    fn constraint_validation() {
        assert!(Constraint::new(Template::Response, vec![act("A"), act("A")]).is_err());
        assert!(Constraint::new(Template::NotChainSuccession, vec![act("A"), act("A")]).is_ok());
        assert!(Constraint::new(
            Template::Interposition,
            vec![act("A"), act("B"), act("A")]
        )
        .is_err());
        assert!(Constraint::new(Template::Existence(0), vec![act("A")]).is_err());
        assert!(Constraint::new(Template::Response, vec![act("A")]).is_err());
    }

    #[test]
    fn template_names_round_trip() {
        for t in [
            Template::Existence(3),
            Template::Absence(2),
            Template::Exactly(1),
            Template::Init,
            Template::Response,
            Template::AlternateSuccession,
            Template::NotChainSuccession,
            Template::BalancedEnablement,
        ] {
            assert_eq!(t.to_string().parse::<Template>().unwrap(), t);
        }
        assert!("Frobnicate".parse::<Template>().is_err());
        assert!("Existence0".parse::<Template>().is_err());
    }

    #[test]
    fn succession_equals_response_and_precedence() {
        let succ = con(Template::Succession, &["A", "B"]).compile();
        let resp = con(Template::Response, &["A", "B"]).compile();
        let prec = con(Template::Precedence, &["A", "B"]).compile();
        let combined = Dfa::product(&[&resp, &prec], 1000).unwrap();
        assert!(succ.equivalent(&combined));
    }

    #[test]
    fn alternate_succession_implies_succession() {
        let alt = con(Template::AlternateSuccession, &["A", "B"]).compile();
        let succ = con(Template::Succession, &["A", "B"]).compile();
        let both = Dfa::product(&[&alt, &succ], 1000).unwrap();
        assert!(both.equivalent(&alt));
    }

    #[test]
    fn response_vs_alternate_response_counterexample() {
        let resp = con(Template::Response, &["A", "B"]).compile();
        let alt = con(Template::AlternateResponse, &["A", "B"]).compile();
        let ce = resp.counterexample(&alt).expect("languages differ");
        assert!(resp.accepts(&ce) && !alt.accepts(&ce));
        assert_eq!(ce, tr(&["A", "A", "B"]));
    }
}
