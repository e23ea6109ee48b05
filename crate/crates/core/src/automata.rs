//! Total deterministic finite automata over an open alphabet.
//!
//! A [`Dfa`] distinguishes a finite set of explicit symbols and routes every
//! other activity through a per-state default successor (the "other" class).
//! This makes the automaton total over an unbounded universe of activities
//! without naming them, which is what lets specifications ignore activities
//! they do not talk about. Products compose the defaults, so the open-world
//! reading survives intersection.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::events::{Activity, ActivitySet, Trace};

/// Default cap on reachable states for product and reachability
/// constructions.
pub const DEFAULT_STATE_CAP: usize = 100_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutomataError {
    #[error("explicit symbols {missing:?} are not contained in the embedding alphabet")]
    AlphabetMismatch { missing: Vec<String> },
    #[error("state budget exceeded: more than {cap} reachable states")]
    StateBudgetExceeded { cap: usize },
    #[error("malformed automaton: {0}")]
    Malformed(String),
}

/// Outcome of a language-equivalence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    /// A shortest trace on which the two languages differ.
    Counterexample(Trace),
}

/// A total deterministic finite automaton with explicit symbols plus a
/// per-state default ("other") successor.
#[derive(Clone, PartialEq, Eq)]
pub struct Dfa {
    symbols: Vec<Activity>,
    initial: usize,
    accepting: Vec<bool>,
    /// delta[state][symbol index] -> state
    delta: Vec<Vec<usize>>,
    /// defaults[state] -> state, taken for any activity not in `symbols`
    defaults: Vec<usize>,
}

impl Dfa {
    /// Builds a DFA from parts. `symbols` may be given in any order; columns
    /// of `delta` must match that order and are re-sorted internally.
    pub fn new(
        symbols: Vec<Activity>,
        initial: usize,
        accepting: Vec<bool>,
        delta: Vec<Vec<usize>>,
        defaults: Vec<usize>,
    ) -> Result<Dfa, AutomataError> {
        let n = accepting.len();
        if n == 0 {
            return Err(AutomataError::Malformed("no states".into()));
        }
        if initial >= n {
            return Err(AutomataError::Malformed("initial state out of range".into()));
        }
        if delta.len() != n || defaults.len() != n {
            return Err(AutomataError::Malformed(
                "delta/defaults must have one row per state".into(),
            ));
        }
        {
            let uniq: BTreeSet<&Activity> = symbols.iter().collect();
            if uniq.len() != symbols.len() {
                return Err(AutomataError::Malformed("duplicate explicit symbol".into()));
            }
        }
        for (s, row) in delta.iter().enumerate() {
            if row.len() != symbols.len() {
                return Err(AutomataError::Malformed(format!(
                    "delta row {s} has wrong arity"
                )));
            }
            if row.iter().any(|&t| t >= n) || defaults[s] >= n {
                return Err(AutomataError::Malformed(format!(
                    "transition from state {s} out of range"
                )));
            }
        }
        // Sort symbols and permute delta columns to match.
        let mut order: Vec<usize> = (0..symbols.len()).collect();
        order.sort_by(|&a, &b| symbols[a].cmp(&symbols[b]));
        let symbols_sorted: Vec<Activity> = order.iter().map(|&i| symbols[i].clone()).collect();
        let delta_sorted: Vec<Vec<usize>> = delta
            .iter()
            .map(|row| order.iter().map(|&i| row[i]).collect())
            .collect();
        Ok(Dfa {
            symbols: symbols_sorted,
            initial,
            accepting,
            delta: delta_sorted,
            defaults,
        })
    }

    /// The one-state automaton accepting every trace.
    pub fn universal() -> Dfa {
        Dfa {
            symbols: Vec::new(),
            initial: 0,
            accepting: vec![true],
            delta: vec![Vec::new()],
            defaults: vec![0],
        }
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn symbols(&self) -> &[Activity] {
        &self.symbols
    }

    pub fn explicit_alphabet(&self) -> ActivitySet {
        self.symbols.iter().cloned().collect()
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn symbol_index(&self, activity: &Activity) -> Option<usize> {
        self.symbols.binary_search(activity).ok()
    }

    /// Successor of `state` on `activity` (explicit or default).
    pub fn step(&self, state: usize, activity: &Activity) -> usize {
        match self.symbol_index(activity) {
            Some(i) => self.delta[state][i],
            None => self.defaults[state],
        }
    }

    pub fn default_successor(&self, state: usize) -> usize {
        self.defaults[state]
    }

    /// Successor by precomputed symbol column, for callers that cache
    /// symbol lookups.
    pub fn delta_at(&self, state: usize, symbol: usize) -> usize {
        self.delta[state][symbol]
    }

    /// Runs `trace` from the initial state and reports acceptance.
    pub fn accepts(&self, trace: &Trace) -> bool {
        let mut state = self.initial;
        for a in trace {
            state = self.step(state, a);
        }
        self.accepting[state]
    }

    /// Extends the explicit symbol set to `alphabet` (transitions for the new
    /// symbols are materialized from the current defaults) and turns the
    /// default of every state into a self-loop, so activities outside
    /// `alphabet` are ignored. For automata whose defaults already are
    /// self-loops this realizes exactly the projection semantics
    /// `accepts(embed(d, Σ'), ρ) = accepts(d, ρ|Σ')`; chain-style automata
    /// keep their non-self-loop default behavior for symbols inside
    /// `alphabet`.
    pub fn embed(&self, alphabet: &ActivitySet) -> Result<Dfa, AutomataError> {
        let missing: Vec<String> = self
            .symbols
            .iter()
            .filter(|s| !alphabet.contains(s))
            .map(|s| s.name().to_string())
            .collect();
        if !missing.is_empty() {
            return Err(AutomataError::AlphabetMismatch { missing });
        }
        let symbols: Vec<Activity> = alphabet.iter().cloned().collect();
        let delta = (0..self.state_count())
            .map(|s| symbols.iter().map(|a| self.step(s, a)).collect())
            .collect();
        let defaults = (0..self.state_count()).collect();
        Dfa::new(symbols, self.initial, self.accepting.clone(), delta, defaults)
    }

    /// Intersection of the operand languages over the open alphabet. The
    /// explicit symbols of the result are the union of the operands'; a
    /// symbol explicit in one operand routes the others through their
    /// defaults. Only reachable product states are constructed.
    pub fn product(operands: &[&Dfa], cap: usize) -> Result<Dfa, AutomataError> {
        assert!(!operands.is_empty(), "product of zero automata");
        let symbols: Vec<Activity> = operands
            .iter()
            .flat_map(|d| d.symbols.iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        // Per-operand column of each union symbol, or None for its default.
        let columns: Vec<Vec<Option<usize>>> = operands
            .iter()
            .map(|d| symbols.iter().map(|a| d.symbol_index(a)).collect())
            .collect();

        let start: Vec<usize> = operands.iter().map(|d| d.initial).collect();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut states: Vec<Vec<usize>> = vec![start.clone()];
        index.insert(start, 0);
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut defaults: Vec<usize> = Vec::new();
        let mut accepting: Vec<bool> = Vec::new();

        let mut next = 0;
        while next < states.len() {
            let current = states[next].clone();
            accepting.push(
                current
                    .iter()
                    .zip(operands)
                    .all(|(&s, d)| d.accepting[s]),
            );
            let mut row = Vec::with_capacity(symbols.len());
            for sym in 0..=symbols.len() {
                // last iteration handles the shared default class
                let succ: Vec<usize> = current
                    .iter()
                    .zip(operands.iter().enumerate())
                    .map(|(&s, (op, d))| {
                        if sym < symbols.len() {
                            match columns[op][sym] {
                                Some(col) => d.delta[s][col],
                                None => d.defaults[s],
                            }
                        } else {
                            d.defaults[s]
                        }
                    })
                    .collect();
                let id = match index.get(&succ) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= cap {
                            return Err(AutomataError::StateBudgetExceeded { cap });
                        }
                        let id = states.len();
                        index.insert(succ.clone(), id);
                        states.push(succ);
                        id
                    }
                };
                if sym < symbols.len() {
                    row.push(id);
                } else {
                    defaults.push(id);
                }
            }
            delta.push(row);
            next += 1;
        }
        Dfa::new(symbols, 0, accepting, delta, defaults)
    }

    /// Intersection of many operands, folded pairwise with intermediate
    /// minimization so the working automaton tracks the (usually small)
    /// intersection language instead of the full joint state space.
    pub fn intersect_all(operands: &[&Dfa], cap: usize) -> Result<Dfa, AutomataError> {
        assert!(!operands.is_empty(), "intersection of zero automata");
        let mut acc = operands[0].minimized();
        for d in &operands[1..] {
            acc = Dfa::product(&[&acc, d], cap)?.minimized();
        }
        Ok(acc)
    }

    /// Complement language: flips acceptance of every state.
    pub fn complement(&self) -> Dfa {
        let mut c = self.clone();
        for a in &mut c.accepting {
            *a = !*a;
        }
        c
    }

    fn reachable_trim(&self) -> Dfa {
        let mut seen = vec![false; self.state_count()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for &t in self.delta[s].iter().chain(std::iter::once(&self.defaults[s])) {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        if order.len() == self.state_count() {
            return self.clone();
        }
        let mut renum = vec![usize::MAX; self.state_count()];
        for (new, &old) in order.iter().enumerate() {
            renum[old] = new;
        }
        Dfa {
            symbols: self.symbols.clone(),
            initial: renum[self.initial],
            accepting: order.iter().map(|&s| self.accepting[s]).collect(),
            delta: order
                .iter()
                .map(|&s| self.delta[s].iter().map(|&t| renum[t]).collect())
                .collect(),
            defaults: order.iter().map(|&s| renum[self.defaults[s]]).collect(),
        }
    }

    /// Language-preserving minimization (Hopcroft partition refinement over
    /// the explicit symbols plus the "other" class), followed by canonical
    /// state renumbering: breadth-first from the initial state, symbols in
    /// sorted order, the default class last. Minimized automata of the same
    /// language and symbol set are structurally equal.
    pub fn minimized(&self) -> Dfa {
        let trimmed = self.reachable_trim();
        let n = trimmed.state_count();
        let letters = trimmed.symbols.len() + 1;
        let step = |s: usize, l: usize| -> usize {
            if l + 1 < letters {
                trimmed.delta[s][l]
            } else {
                trimmed.defaults[s]
            }
        };
        let mut inverse: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; letters];
        for s in 0..n {
            for l in 0..letters {
                inverse[l][step(s, l)].push(s);
            }
        }

        let mut partition = RefinablePartition::new(n, &trimmed.accepting);
        // worklist of (block, letter) splitter pairs; on a split, a pending
        // parent keeps both halves pending, otherwise the smaller half
        // suffices (the classic Hopcroft discipline)
        let mut pending: Vec<Vec<bool>> = (0..partition.block_count())
            .map(|_| vec![true; letters])
            .collect();
        let mut worklist: VecDeque<(usize, usize)> = (0..partition.block_count())
            .flat_map(|b| (0..letters).map(move |l| (b, l)))
            .collect();
        let mut touched: Vec<usize> = Vec::new();

        while let Some((splitter, letter)) = worklist.pop_front() {
            pending[splitter][letter] = false;
            // preimage of the splitter under the letter, marked in place
            touched.clear();
            let members = partition.members(splitter).to_vec();
            for &t in &members {
                for &s in &inverse[letter][t] {
                    if partition.mark(s) {
                        touched.push(partition.block_of(s));
                    }
                }
            }
            for &b in &touched {
                match partition.split(b) {
                    None => partition.clear_marks(b),
                    Some(nb) => {
                        pending.push(vec![false; letters]);
                        for l in 0..letters {
                            let enqueue = if pending[b][l] {
                                nb
                            } else if partition.size(nb) < partition.size(b) {
                                nb
                            } else {
                                b
                            };
                            if !pending[enqueue][l] {
                                pending[enqueue][l] = true;
                                worklist.push_back((enqueue, l));
                            }
                        }
                    }
                }
            }
        }

        let count = partition.block_count();
        let block_of: Vec<usize> = (0..n).map(|s| partition.block_of(s)).collect();

        // Quotient automaton over the final partition.
        let mut rep: Vec<usize> = vec![usize::MAX; count];
        for s in 0..n {
            if rep[block_of[s]] == usize::MAX {
                rep[block_of[s]] = s;
            }
        }
        let quotient = Dfa {
            symbols: trimmed.symbols.clone(),
            initial: block_of[trimmed.initial],
            accepting: rep.iter().map(|&s| trimmed.accepting[s]).collect(),
            delta: (0..count)
                .map(|b| {
                    (0..trimmed.symbols.len())
                        .map(|l| block_of[step(rep[b], l)])
                        .collect()
                })
                .collect(),
            defaults: (0..count)
                .map(|b| block_of[trimmed.defaults[rep[b]]])
                .collect(),
        };
        quotient.canonical()
    }

    /// Renumbers states breadth-first from the initial state (symbols in
    /// sorted order, default last). Assumes all states reachable.
    fn canonical(&self) -> Dfa {
        let mut renum = vec![usize::MAX; self.state_count()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        renum[self.initial] = 0;
        order.push(self.initial);
        while let Some(s) = queue.pop_front() {
            for &t in self.delta[s].iter().chain(std::iter::once(&self.defaults[s])) {
                if renum[t] == usize::MAX {
                    renum[t] = order.len();
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        Dfa {
            symbols: self.symbols.clone(),
            initial: 0,
            accepting: order.iter().map(|&s| self.accepting[s]).collect(),
            delta: order
                .iter()
                .map(|&s| self.delta[s].iter().map(|&t| renum[t]).collect())
                .collect(),
            defaults: order.iter().map(|&s| renum[self.defaults[s]]).collect(),
        }
    }

    /// Checks language equivalence over the union of both explicit alphabets
    /// plus one fresh witness activity standing for the "other" class.
    /// Returns a shortest counterexample (ties broken by sorted symbol
    /// order, witness last) when the languages differ.
    pub fn counterexample(&self, other: &Dfa) -> Option<Trace> {
        let mut alphabet: Vec<Activity> = self
            .symbols
            .iter()
            .chain(other.symbols.iter())
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        alphabet.push(fresh_witness(&alphabet));

        let start = (self.initial, other.initial);
        if self.accepting[start.0] != other.accepting[start.1] {
            return Some(Trace::empty());
        }
        let mut parent: HashMap<(usize, usize), ((usize, usize), usize)> = HashMap::new();
        let mut queue = VecDeque::from([start]);
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::from([start]);
        while let Some(pair) = queue.pop_front() {
            for (li, a) in alphabet.iter().enumerate() {
                let succ = (self.step(pair.0, a), other.step(pair.1, a));
                if seen.contains(&succ) {
                    continue;
                }
                seen.insert(succ);
                parent.insert(succ, (pair, li));
                if self.accepting[succ.0] != other.accepting[succ.1] {
                    // Reconstruct the path back to the start pair.
                    let mut events = Vec::new();
                    let mut at = succ;
                    while at != start {
                        let (prev, li) = parent[&at];
                        events.push(alphabet[li].clone());
                        at = prev;
                    }
                    events.reverse();
                    return Some(Trace::new(events));
                }
                queue.push_back(succ);
            }
        }
        None
    }

    pub fn equivalent(&self, other: &Dfa) -> bool {
        self.counterexample(other).is_none()
    }

    pub fn equivalence(&self, other: &Dfa) -> Equivalence {
        match self.counterexample(other) {
            None => Equivalence::Equivalent,
            Some(t) => Equivalence::Counterexample(t),
        }
    }

    /// States from which an accepting state is reachable.
    fn co_reachable(&self) -> Vec<bool> {
        let n = self.state_count();
        let mut inverse: Vec<Vec<usize>> = vec![Vec::new(); n];
        for s in 0..n {
            for &t in self.delta[s].iter().chain(std::iter::once(&self.defaults[s])) {
                inverse[t].push(s);
            }
        }
        let mut live = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&s| self.accepting[s]).collect();
        for &s in &queue {
            live[s] = true;
        }
        while let Some(s) = queue.pop_front() {
            for &p in &inverse[s] {
                if !live[p] {
                    live[p] = true;
                    queue.push_back(p);
                }
            }
        }
        live
    }

    /// All accepted traces realizable by runs in which no state is visited
    /// more than `revisit_bound + 1` times. Traces use explicit symbols
    /// only; the result is sorted shortest-first (ties lexicographic).
    pub fn enumerate_traces(&self, revisit_bound: usize) -> Vec<Trace> {
        assert!(revisit_bound >= 1, "revisit bound must be at least 1");
        let limit = revisit_bound + 1;
        // Dead states can never contribute an accepted run; skipping them
        // does not change the result, only the search effort.
        let live = self.co_reachable();
        let mut visits = vec![0usize; self.state_count()];
        let mut prefix: Vec<Activity> = Vec::new();
        let mut out: Vec<Trace> = Vec::new();
        if live[self.initial] {
            self.enumerate_rec(self.initial, limit, &live, &mut visits, &mut prefix, &mut out);
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    fn enumerate_rec(
        &self,
        state: usize,
        limit: usize,
        live: &[bool],
        visits: &mut Vec<usize>,
        prefix: &mut Vec<Activity>,
        out: &mut Vec<Trace>,
    ) {
        visits[state] += 1;
        if self.accepting[state] {
            out.push(Trace::new(prefix.clone()));
        }
        for (i, a) in self.symbols.iter().enumerate() {
            let succ = self.delta[state][i];
            if live[succ] && visits[succ] < limit {
                prefix.push(a.clone());
                self.enumerate_rec(succ, limit, live, visits, prefix, out);
                prefix.pop();
            }
        }
        visits[state] -= 1;
    }

    /// The unique dead state (non-accepting and absorbing over every
    /// symbol including the default), if present.
    pub fn trap_state(&self) -> Option<usize> {
        (0..self.state_count()).find(|&s| {
            !self.accepting[s]
                && self.defaults[s] == s
                && self.delta[s].iter().all(|&t| t == s)
        })
    }

    /// Graphviz rendering. With `hide_trap`, the dead trap state and its
    /// incoming arcs are suppressed; default transitions are drawn as a
    /// single arc labeled with the negated list of symbols taking other
    /// arcs from that state (or `any` when there are none).
    pub fn to_dot(&self, hide_trap: bool) -> String {
        use std::fmt::Write;
        let trap = if hide_trap { self.trap_state() } else { None };
        let mut s = String::new();
        s.push_str("digraph dfa {\n  rankdir=LR;\n  __init [shape=point,label=\"\"];\n");
        for q in 0..self.state_count() {
            if Some(q) == trap {
                continue;
            }
            let shape = if self.accepting[q] { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  s{q} [shape={shape},label=\"s{q}\"];");
        }
        let _ = writeln!(s, "  __init -> s{};", self.initial);
        for q in 0..self.state_count() {
            if Some(q) == trap {
                continue;
            }
            let default_target = self.defaults[q];
            // Explicit symbols not folded into the default arc, grouped by target.
            let mut groups: Vec<(usize, Vec<&Activity>)> = Vec::new();
            let mut diverging: Vec<&Activity> = Vec::new();
            for (i, a) in self.symbols.iter().enumerate() {
                let t = self.delta[q][i];
                if t == default_target {
                    continue; // folded into the default arc
                }
                diverging.push(a);
                match groups.iter_mut().find(|(g, _)| *g == t) {
                    Some((_, list)) => list.push(a),
                    None => groups.push((t, vec![a])),
                }
            }
            for (t, list) in &groups {
                if Some(*t) == trap {
                    continue;
                }
                let label = list
                    .iter()
                    .map(|a| a.name())
                    .collect::<Vec<_>>()
                    .join(",");
                let _ = writeln!(s, "  s{q} -> s{t} [label=\"{label}\"];");
            }
            if Some(default_target) == trap {
                continue;
            }
            let label = if diverging.is_empty() {
                "any".to_string()
            } else {
                format!(
                    "!{{{}}}",
                    diverging
                        .iter()
                        .map(|a| a.name())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            };
            let _ = writeln!(s, "  s{q} -> s{default_target} [label=\"{label}\"];");
        }
        s.push_str("}\n");
        s
    }
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Dfa {{ states: {}, initial: {}, symbols: {:?}",
            self.state_count(),
            self.initial,
            self.symbols
        )?;
        for s in 0..self.state_count() {
            writeln!(
                f,
                "  s{}{}: {:?} other->{}",
                s,
                if self.accepting[s] { "*" } else { "" },
                self.delta[s],
                self.defaults[s]
            )?;
        }
        write!(f, "}}")
    }
}

/// The marked-prefix refinable partition backing Hopcroft minimization:
/// states live in one permutation array grouped by block; marking swaps a
/// state into the marked prefix of its block, and splitting peels that
/// prefix off as a new block in O(prefix).
struct RefinablePartition {
    elems: Vec<usize>,
    loc: Vec<usize>,
    block: Vec<usize>,
    start: Vec<usize>,
    end: Vec<usize>,
    marked: Vec<usize>,
}

impl RefinablePartition {
    fn new(n: usize, accepting: &[bool]) -> RefinablePartition {
        let mut elems: Vec<usize> = (0..n).collect();
        elems.sort_by_key(|&s| !accepting[s]);
        let mut loc = vec![0; n];
        for (i, &s) in elems.iter().enumerate() {
            loc[s] = i;
        }
        let accepting_count = accepting.iter().filter(|&&a| a).count();
        let mut start = Vec::new();
        let mut end = Vec::new();
        if accepting_count > 0 {
            start.push(0);
            end.push(accepting_count);
        }
        if accepting_count < n {
            start.push(accepting_count);
            end.push(n);
        }
        let mut block = vec![0; n];
        for (b, (&s0, &e0)) in start.iter().zip(end.iter()).enumerate() {
            for i in s0..e0 {
                block[elems[i]] = b;
            }
        }
        let marked = vec![0; start.len()];
        RefinablePartition {
            elems,
            loc,
            block,
            start,
            end,
            marked,
        }
    }

    fn block_count(&self) -> usize {
        self.start.len()
    }

    fn block_of(&self, s: usize) -> usize {
        self.block[s]
    }

    fn size(&self, b: usize) -> usize {
        self.end[b] - self.start[b]
    }

    fn members(&self, b: usize) -> &[usize] {
        &self.elems[self.start[b]..self.end[b]]
    }

    /// Marks `s`; returns true when this is the first mark in its block.
    fn mark(&mut self, s: usize) -> bool {
        let b = self.block[s];
        let i = self.loc[s];
        let boundary = self.start[b] + self.marked[b];
        if i < boundary {
            return false; // already marked
        }
        let other = self.elems[boundary];
        self.elems.swap(i, boundary);
        self.loc[s] = boundary;
        self.loc[other] = i;
        self.marked[b] += 1;
        self.marked[b] == 1
    }

    fn clear_marks(&mut self, b: usize) {
        self.marked[b] = 0;
    }

    /// Splits the marked prefix of `b` off as a new block, or `None` when
    /// everything (or nothing) was marked.
    fn split(&mut self, b: usize) -> Option<usize> {
        let m = self.marked[b];
        self.marked[b] = 0;
        if m == 0 || m == self.size(b) {
            return None;
        }
        let nb = self.start.len();
        self.start.push(self.start[b]);
        self.end.push(self.start[b] + m);
        self.marked.push(0);
        self.start[b] += m;
        for i in self.start[nb]..self.end[nb] {
            self.block[self.elems[i]] = nb;
        }
        Some(nb)
    }
}

/// A fresh activity not occurring among `used`, standing for the "other"
/// symbol class in equivalence checks.
fn fresh_witness(used: &[Activity]) -> Activity {
    let mut name = String::from("*");
    loop {
        match Activity::new(&name) {
            Ok(a) if !used.contains(&a) => return a,
            _ => name.push('*'),
        }
    }
}
