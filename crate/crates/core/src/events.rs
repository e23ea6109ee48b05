//! Activities, traces, and event logs.
//!
//! An [`Activity`] is an interned, validated name. A [`Trace`] is a finite
//! sequence of activities, and an [`EventLog`] is an ordered multiset of
//! traces together with its derived alphabet. Trace projection onto a
//! sub-alphabet is the basic operation every specification composes on.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Default name of the artificial start activity prepended before mining.
pub const DEFAULT_START_NAME: &str = "__START__";

/// Characters that cannot appear in activity names because the text formats
/// reserve them as separators.
const RESERVED_CHARS: [char; 4] = [',', ';', '\n', '\r'];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EventError {
    #[error("invalid activity name {0:?}: empty or contains a reserved character (',', ';', newline)")]
    InvalidActivityName(String),
    #[error("start activity {0:?} already occurs in the log")]
    StartSymbolClash(String),
}

/// A named activity. Cheap to clone; compared and ordered by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Activity(Arc<str>);

impl Activity {
    pub fn new(name: impl AsRef<str>) -> Result<Self, EventError> {
        let name = name.as_ref();
        if name.is_empty() || name.contains(RESERVED_CHARS) {
            return Err(EventError::InvalidActivityName(name.to_string()));
        }
        Ok(Activity(Arc::from(name)))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl std::str::FromStr for Activity {
    type Err = EventError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Activity::new(s)
    }
}

/// A set of activities, ordered for deterministic iteration.
pub type ActivitySet = BTreeSet<Activity>;

/// A finite, possibly empty sequence of activities.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Trace(Vec<Activity>);

impl Trace {
    pub fn new(events: Vec<Activity>) -> Self {
        Trace(events)
    }

    pub fn empty() -> Self {
        Trace(Vec::new())
    }

    /// Builds a trace from plain names. Fails on invalid names.
    pub fn from_names<I, S>(names: I) -> Result<Self, EventError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        names.into_iter().map(Activity::new).collect()
    }

    pub fn events(&self) -> &[Activity] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Activity> {
        self.0.iter()
    }

    /// The subsequence of events whose activity is in `alphabet`, order
    /// preserved. Total: projecting onto a disjoint alphabet yields ⟨⟩.
    pub fn project(&self, alphabet: &ActivitySet) -> Trace {
        Trace(
            self.0
                .iter()
                .filter(|a| alphabet.contains(a))
                .cloned()
                .collect(),
        )
    }

    pub fn activities(&self) -> ActivitySet {
        self.0.iter().cloned().collect()
    }
}

impl FromIterator<Activity> for Trace {
    fn from_iter<I: IntoIterator<Item = Activity>>(iter: I) -> Self {
        Trace(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Trace {
    type Item = &'a Activity;
    type IntoIter = std::slice::Iter<'a, Activity>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ">")
    }
}

impl fmt::Debug for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An ordered multiset of traces. Trace order and multiplicity are preserved;
/// the alphabet is derived at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EventLog {
    traces: Vec<Trace>,
    alphabet: ActivitySet,
}

impl EventLog {
    pub fn new(traces: Vec<Trace>) -> Self {
        let alphabet = traces
            .iter()
            .flat_map(|t| t.iter().cloned())
            .collect::<ActivitySet>();
        EventLog { traces, alphabet }
    }

    pub fn traces(&self) -> &[Trace] {
        &self.traces
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    /// The set of all activities occurring in any trace.
    pub fn alphabet(&self) -> &ActivitySet {
        &self.alphabet
    }

    /// Returns a log in which every trace gains `start` as its first event.
    pub fn prepend_start(&self, start: &Activity) -> Result<EventLog, EventError> {
        if self.alphabet.contains(start) {
            return Err(EventError::StartSymbolClash(start.name().to_string()));
        }
        let traces = self
            .traces
            .iter()
            .map(|t| {
                std::iter::once(start.clone())
                    .chain(t.iter().cloned())
                    .collect()
            })
            .collect();
        Ok(EventLog::new(traces))
    }
}
