//! Hybrid process frames: mining, composing, and rewriting behavioral
//! specifications over event logs.
//!
//! The crate models a process frame as a set of local specifications —
//! constraint sets, labeled Petri nets, or raw automata — that execute
//! semi-concurrently: a global trace is accepted when every specification
//! accepts its projection onto that specification's own activities. All
//! three specification styles share one semantic backend, a total DFA over
//! an open alphabet ([`automata::Dfa`]).
//!
//! On top of that sit a constraint miner ([`miner`]) that discovers
//! declarative constraints from an event log at 100% support, and a
//! detector ([`rigidity`]) that recognizes rigid sub-behaviors (sequences,
//! parallelism, exclusive and inclusive choices) in a mined model and
//! rewrites them into behaviorally equivalent Petri-net fragments, checking
//! every rewrite by language equivalence.

pub mod automata;
pub mod declare;
pub mod events;
pub mod formats;
pub mod frame;
pub mod miner;
pub mod petri;
pub mod rigidity;

pub use automata::{AutomataError, Dfa, Equivalence, DEFAULT_STATE_CAP};
pub use declare::{Constraint, ConstraintStatus, EvaluationResult, Template};
pub use events::{Activity, ActivitySet, EventLog, Trace, DEFAULT_START_NAME};
pub use frame::{ProcessFrame, SpecBody, Specification};
pub use miner::{MinedModel, MinerConfig};
pub use petri::{Marking, NetBuilder, PetriNet};
pub use rigidity::{CardinalityProfile, Construct, DetectedFragment, FrameRewrite, Variant};
