use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::alphabet::{Event, EventId, PartitionedAlphabet, Role, Word};
use crate::error::{Error, Result};

pub type StateId = usize;

/// Name of the accepting set whose language is the system behaviour L.
pub const F: &str = "F";
/// Name of the accepting set whose language is the secret φ.
pub const F_PHI: &str = "Fphi";

/// A finite deterministic labeled transition system with a partial transition
/// function and any number of named accepting sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lts {
    alphabet: PartitionedAlphabet,
    names: Vec<String>,
    // delta[state][event]
    delta: Vec<Vec<Option<StateId>>>,
    initial: StateId,
    accepting: BTreeMap<String, BTreeSet<StateId>>,
}

/// Incremental construction of an [`Lts`].
#[derive(Debug, Clone)]
pub struct LtsBuilder {
    alphabet: PartitionedAlphabet,
    names: Vec<String>,
    index: HashMap<String, StateId>,
    delta: Vec<Vec<Option<StateId>>>,
    initial: Option<StateId>,
    accepting: BTreeMap<String, BTreeSet<StateId>>,
}

impl LtsBuilder {
    pub fn new(alphabet: PartitionedAlphabet) -> Self {
        LtsBuilder {
            alphabet,
            names: Vec::new(),
            index: HashMap::new(),
            delta: Vec::new(),
            initial: None,
            accepting: BTreeMap::new(),
        }
    }

    pub fn alphabet(&self) -> &PartitionedAlphabet {
        &self.alphabet
    }

    /// Declares a new state.
    pub fn add_state(&mut self, name: impl Into<String>) -> Result<StateId> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateState(name));
        }
        Ok(self.state(name))
    }

    /// Returns the state called `name`, declaring it if needed.
    pub fn state(&mut self, name: impl Into<String>) -> StateId {
        let name = name.into();
        if let Some(&id) = self.index.get(&name) {
            return id;
        }
        let id = self.names.len();
        self.index.insert(name.clone(), id);
        self.names.push(name);
        self.delta.push(vec![None; self.alphabet.len()]);
        id
    }

    pub fn lookup(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn add_transition(&mut self, src: StateId, event: EventId, dst: StateId) -> Result<()> {
        match self.delta[src][event] {
            Some(existing) if existing != dst => Err(Error::Nondeterministic {
                state: self.names[src].clone(),
                event: self.alphabet.event(event).to_string(),
            }),
            Some(_) => Ok(()),
            None => {
                self.delta[src][event] = Some(dst);
                Ok(())
            }
        }
    }

    /// Adds `src --event--> dst`, declaring the states on first use.
    pub fn edge(&mut self, src: &str, event: &str, dst: &str) -> Result<&mut Self> {
        let e = self.alphabet.require(event)?;
        let s = self.state(src);
        let d = self.state(dst);
        self.add_transition(s, e, d)?;
        Ok(self)
    }

    pub fn set_initial(&mut self, q: StateId) -> &mut Self {
        self.initial = Some(q);
        self
    }

    pub fn set_accepting(&mut self, name: impl Into<String>, states: impl IntoIterator<Item = StateId>) -> &mut Self {
        self.accepting.insert(name.into(), states.into_iter().collect());
        self
    }

    /// Declares an accepting set by state names.
    pub fn accept_named<'a>(&mut self, name: &str, states: impl IntoIterator<Item = &'a str>) -> Result<&mut Self> {
        let ids = states
            .into_iter()
            .map(|s| self.lookup(s).ok_or_else(|| Error::UnknownState(s.to_string())))
            .collect::<Result<BTreeSet<_>>>()?;
        self.accepting.insert(name.to_string(), ids);
        Ok(self)
    }

    pub fn build(self) -> Result<Lts> {
        let initial = self.initial.ok_or(Error::MissingInitial)?;
        Ok(Lts {
            alphabet: self.alphabet,
            names: self.names,
            delta: self.delta,
            initial,
            accepting: self.accepting,
        })
    }
}

impl Lts {
    pub fn builder(alphabet: PartitionedAlphabet) -> LtsBuilder {
        LtsBuilder::new(alphabet)
    }

    pub(crate) fn from_parts(
        alphabet: PartitionedAlphabet,
        names: Vec<String>,
        delta: Vec<Vec<Option<StateId>>>,
        initial: StateId,
        accepting: BTreeMap<String, BTreeSet<StateId>>,
    ) -> Lts {
        debug_assert_eq!(names.len(), delta.len());
        debug_assert!(delta.iter().all(|row| row.len() == alphabet.len()));
        Lts { alphabet, names, delta, initial, accepting }
    }

    pub fn alphabet(&self) -> &PartitionedAlphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.names.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require_state(&self, name: &str) -> Result<StateId> {
        self.state_id(name).ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn successor(&self, q: StateId, event: EventId) -> Option<StateId> {
        self.delta[q][event]
    }

    /// Runs the extended transition function; `None` as soon as a step is undefined.
    pub fn step(&self, q: StateId, word: &[EventId]) -> Option<StateId> {
        word.iter().try_fold(q, |state, &e| self.delta[state][e])
    }

    /// [`Lts::step`] on named events.
    pub fn step_word(&self, q: StateId, word: &Word) -> Result<Option<StateId>> {
        if q >= self.num_states() {
            return Err(Error::UnknownState(q.to_string()));
        }
        let ids = self.alphabet.ids_of_word(word)?;
        Ok(self.step(q, &ids))
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, EventId, StateId)> + '_ {
        self.delta
            .iter()
            .enumerate()
            .flat_map(|(q, row)| row.iter().enumerate().filter_map(move |(e, t)| t.map(|t| (q, e, t))))
    }

    pub fn accepting_sets(&self) -> &BTreeMap<String, BTreeSet<StateId>> {
        &self.accepting
    }

    pub fn accepting(&self, name: &str) -> Result<&BTreeSet<StateId>> {
        self.accepting.get(name).ok_or_else(|| Error::MissingAcceptingSet(name.to_string()))
    }

    pub fn has_accepting(&self, name: &str) -> bool {
        self.accepting.contains_key(name)
    }

    /// Membership of `word` in the language of accepting set `set`.
    pub fn accepts(&self, word: &Word, set: &str) -> Result<bool> {
        let ids = self.alphabet.ids_of_word(word)?;
        let accepting = self.accepting(set)?;
        Ok(self.step(self.initial, &ids).is_some_and(|q| accepting.contains(&q)))
    }

    pub fn accepts_ids(&self, word: &[EventId], set: &str) -> Result<bool> {
        let accepting = self.accepting(set)?;
        Ok(self.step(self.initial, word).is_some_and(|q| accepting.contains(&q)))
    }

    /// A copy with accepting set `name` replaced by `states`.
    pub fn with_accepting(&self, name: impl Into<String>, states: BTreeSet<StateId>) -> Lts {
        let mut out = self.clone();
        out.accepting.insert(name.into(), states);
        out
    }

    /// A copy keeping only the named accepting sets.
    pub fn keep_accepting(&self, names: &[&str]) -> Lts {
        let mut out = self.clone();
        out.accepting.retain(|k, _| names.contains(&k.as_str()));
        out
    }

    pub(crate) fn with_state_names(mut self, names: Vec<String>) -> Lts {
        assert_eq!(names.len(), self.names.len());
        self.names = names;
        self
    }

    /// The same automaton started from `q`.
    pub fn rebase(&self, q: StateId) -> Result<Lts> {
        if q >= self.num_states() {
            return Err(Error::UnknownState(q.to_string()));
        }
        let mut out = self.clone();
        out.initial = q;
        Ok(out)
    }

    /// Removes every transition labeled in `events` and drops them from the alphabet.
    pub fn restrict(&self, events: &BTreeSet<Event>) -> Result<Lts> {
        let removed = self.alphabet.ids_of(events)?;
        let kept: Vec<EventId> = (0..self.alphabet.len()).filter(|e| !removed.contains(e)).collect();
        let alphabet = self.alphabet.retain(|e, _| !events.contains(e));
        let delta = self.delta.iter().map(|row| kept.iter().map(|&e| row[e]).collect()).collect();
        Ok(Lts::from_parts(alphabet, self.names.clone(), delta, self.initial, self.accepting.clone()))
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            for t in self.delta[q].iter().flatten() {
                if !seen[*t] {
                    seen[*t] = true;
                    queue.push_back(*t);
                }
            }
        }
        seen
    }

    /// Drops unreachable states, keeping the relative order of the rest.
    pub fn trim(&self) -> Lts {
        let keep = self.reachable();
        let mut renumber = vec![None; self.num_states()];
        let mut names = Vec::new();
        for q in self.states().filter(|&q| keep[q]) {
            renumber[q] = Some(names.len());
            names.push(self.names[q].clone());
        }
        let delta = self
            .states()
            .filter(|&q| keep[q])
            .map(|q| self.delta[q].iter().map(|t| t.and_then(|t| renumber[t])).collect())
            .collect();
        let accepting = self
            .accepting
            .iter()
            .map(|(k, set)| (k.clone(), set.iter().filter_map(|&q| renumber[q]).collect()))
            .collect();
        let initial = renumber[self.initial].expect("initial state is reachable");
        Lts::from_parts(self.alphabet.clone(), names, delta, initial, accepting)
    }

    pub fn is_complete(&self) -> bool {
        self.delta.iter().all(|row| row.iter().all(Option::is_some))
    }

    /// Adds a fresh non-accepting sink and routes every undefined move to it.
    /// The sink is added even when the automaton is already complete; it is then
    /// unreachable and [`Lts::trim`] removes it.
    pub fn complete(&self) -> Lts {
        let sink = self.names.len();
        let sink_name = fresh_name(&self.names, "sink");
        let mut names = self.names.clone();
        names.push(sink_name);
        let mut delta: Vec<Vec<Option<StateId>>> = self
            .delta
            .iter()
            .map(|row| row.iter().map(|t| Some(t.unwrap_or(sink))).collect())
            .collect();
        delta.push(vec![Some(sink); self.alphabet.len()]);
        Lts::from_parts(self.alphabet.clone(), names, delta, self.initial, self.accepting.clone())
    }

    /// Re-expresses the automaton over `alphabet`, which must contain every
    /// current event. New events get no transitions; event order and roles are
    /// taken from `alphabet`.
    pub fn extend_alphabet(&self, alphabet: &PartitionedAlphabet) -> Result<Lts> {
        let mapping: Vec<Option<EventId>> = alphabet.events().iter().map(|e| self.alphabet.id(e.as_str())).collect();
        if let Some((_, missing, _)) = self.alphabet.iter().find(|(_, e, _)| !alphabet.contains(e.as_str())) {
            return Err(Error::AlphabetMismatch(format!("event {missing} is not in the target alphabet")));
        }
        let delta = self
            .delta
            .iter()
            .map(|row| mapping.iter().map(|m| m.and_then(|e| row[e])).collect())
            .collect();
        Ok(Lts::from_parts(alphabet.clone(), self.names.clone(), delta, self.initial, self.accepting.clone()))
    }

    /// [`Lts::extend_alphabet`] followed by [`Lts::complete`].
    pub fn complete_over(&self, over: &PartitionedAlphabet) -> Result<Lts> {
        Ok(self.extend_alphabet(over)?.complete())
    }

    /// Completes the automaton and swaps membership of accepting set `set`;
    /// the result recognizes Σ* minus the original language of `set`.
    pub fn complement(&self, set: &str) -> Result<Lts> {
        let original = self.accepting(set)?.clone();
        let completed = self.complete();
        let flipped = completed.states().filter(|q| !original.contains(q)).collect();
        Ok(completed.with_accepting(set, flipped))
    }

    /// The initial state plus every reachable target of a downgrading transition.
    pub fn downgrade_entry_states(&self) -> BTreeSet<StateId> {
        let reachable = self.reachable();
        let mut out = BTreeSet::from([self.initial]);
        for (q, e, t) in self.transitions() {
            if reachable[q] && self.alphabet.role(e) == Role::Downgrading {
                out.insert(t);
            }
        }
        out
    }

    /// For every downgrade entry state q, the shortest-then-least word that is
    /// ε (when q is initial) or ends in a downgrading event and leads to q.
    pub fn downgrade_entry_words(&self) -> BTreeMap<StateId, Vec<EventId>> {
        let words = self.shortest_words();
        let mut out: BTreeMap<StateId, Vec<EventId>> = BTreeMap::new();
        out.insert(self.initial, Vec::new());
        for (p, e, q) in self.transitions() {
            if self.alphabet.role(e) != Role::Downgrading || q == self.initial {
                continue;
            }
            let Some(prefix) = &words[p] else { continue };
            let mut candidate = prefix.clone();
            candidate.push(e);
            let better = out
                .get(&q)
                .is_none_or(|best| (candidate.len(), &candidate) < (best.len(), best));
            if better {
                out.insert(q, candidate);
            }
        }
        out
    }

    /// Shortest, then lexicographically least (by event declaration order),
    /// word leading from the initial state to every reachable state.
    pub fn shortest_words(&self) -> Vec<Option<Vec<EventId>>> {
        let mut parent: Vec<Option<(StateId, EventId)>> = vec![None; self.num_states()];
        let mut seen = vec![false; self.num_states()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for (e, t) in self.delta[q].iter().enumerate() {
                if let Some(t) = *t {
                    if !seen[t] {
                        seen[t] = true;
                        parent[t] = Some((q, e));
                        queue.push_back(t);
                    }
                }
            }
        }
        let mut words: Vec<Option<Vec<EventId>>> = vec![None; self.num_states()];
        for q in order {
            words[q] = Some(match parent[q] {
                None => Vec::new(),
                Some((p, e)) => {
                    let mut w = words[p].clone().expect("parent settled first");
                    w.push(e);
                    w
                }
            });
        }
        words
    }

    /// Shortest-then-least word reaching any state of `targets`.
    pub fn shortest_word_into(&self, targets: &BTreeSet<StateId>) -> Option<Vec<EventId>> {
        let words = self.shortest_words();
        targets
            .iter()
            .filter_map(|&q| words[q].clone())
            .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
    }

    /// Shortest-then-least word of the language of accepting set `set`.
    pub fn shortest_accepted(&self, set: &str) -> Result<Option<Word>> {
        let targets = self.accepting(set)?;
        Ok(self.shortest_word_into(targets).map(|w| self.alphabet.word_from_ids(&w)))
    }
}

/// `base`, or `base_N` for the first N that avoids every existing name.
pub(crate) fn fresh_name(existing: &[String], base: &str) -> String {
    if !existing.iter().any(|n| n == base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}_{i}"))
        .find(|c| !existing.iter().any(|n| n == c))
        .expect("unbounded search")
}

/// Structural equality of the reachable parts of two deterministic automata,
/// matching events by name and accepting sets by name.
pub fn isomorphic(a: &Lts, b: &Lts) -> bool {
    if !a.alphabet.same_events(&b.alphabet) {
        return false;
    }
    let names_a: BTreeSet<_> = a.accepting.keys().collect();
    let names_b: BTreeSet<_> = b.accepting.keys().collect();
    if names_a != names_b {
        return false;
    }
    let events: Vec<(EventId, EventId)> = a
        .alphabet
        .iter()
        .map(|(i, e, _)| (i, b.alphabet.id(e.as_str()).expect("same events")))
        .collect();
    let mut map_ab: HashMap<StateId, StateId> = HashMap::new();
    let mut map_ba: HashMap<StateId, StateId> = HashMap::new();
    let mut queue = VecDeque::from([(a.initial, b.initial)]);
    map_ab.insert(a.initial, b.initial);
    map_ba.insert(b.initial, a.initial);
    while let Some((p, q)) = queue.pop_front() {
        for name in &names_a {
            if a.accepting[*name].contains(&p) != b.accepting[*name].contains(&q) {
                return false;
            }
        }
        for &(ea, eb) in &events {
            match (a.delta[p][ea], b.delta[q][eb]) {
                (None, None) => {}
                (Some(p2), Some(q2)) => match (map_ab.get(&p2), map_ba.get(&q2)) {
                    (None, None) => {
                        map_ab.insert(p2, q2);
                        map_ba.insert(q2, p2);
                        queue.push_back((p2, q2));
                    }
                    (Some(&x), Some(&y)) if x == q2 && y == p2 => {}
                    _ => return false,
                },
                _ => return false,
            }
        }
    }
    true
}
