use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::lts::{Lts, StateId};
use crate::alphabet::{EventId, PartitionedAlphabet, Word};
use crate::error::{Error, Result};

/// Transition label: an event, or `None` for a silent move.
pub type Label = Option<EventId>;

/// Nondeterministic automaton with silent transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonNfa {
    alphabet: PartitionedAlphabet,
    names: Vec<String>,
    transitions: Vec<(StateId, Label, StateId)>,
    initial: StateId,
    accepting: BTreeMap<String, BTreeSet<StateId>>,
}

impl EpsilonNfa {
    /// An automaton with a single initial state and no transitions.
    pub fn new(alphabet: PartitionedAlphabet, initial_name: impl Into<String>) -> Self {
        EpsilonNfa {
            alphabet,
            names: vec![initial_name.into()],
            transitions: Vec::new(),
            initial: 0,
            accepting: BTreeMap::new(),
        }
    }

    /// Copies a deterministic automaton, keeping its alphabet and accepting sets.
    pub fn from_lts(lts: &Lts) -> Self {
        EpsilonNfa {
            alphabet: lts.alphabet().clone(),
            names: lts.state_names().to_vec(),
            transitions: lts.transitions().map(|(q, e, t)| (q, Some(e), t)).collect(),
            initial: lts.initial(),
            accepting: lts.accepting_sets().clone(),
        }
    }

    pub fn alphabet(&self) -> &PartitionedAlphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn set_initial(&mut self, q: StateId) {
        assert!(q < self.names.len());
        self.initial = q;
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> StateId {
        self.names.push(name.into());
        self.names.len() - 1
    }

    pub fn add_transition(&mut self, src: StateId, label: Label, dst: StateId) {
        assert!(src < self.names.len() && dst < self.names.len(), "transition endpoints must exist");
        if let Some(e) = label {
            assert!(e < self.alphabet.len(), "label outside the alphabet");
        }
        self.transitions.push((src, label, dst));
    }

    pub fn transitions(&self) -> &[(StateId, Label, StateId)] {
        &self.transitions
    }

    pub fn set_accepting(&mut self, name: impl Into<String>, states: impl IntoIterator<Item = StateId>) {
        self.accepting.insert(name.into(), states.into_iter().collect());
    }

    pub fn accepting(&self, name: &str) -> Result<&BTreeSet<StateId>> {
        self.accepting.get(name).ok_or_else(|| Error::MissingAcceptingSet(name.to_string()))
    }

    pub fn accepting_sets(&self) -> &BTreeMap<String, BTreeSet<StateId>> {
        &self.accepting
    }

    /// The initial state plus every target of a downgrading-labeled transition.
    pub fn downgrade_entry_states(&self) -> BTreeSet<StateId> {
        let mut out = BTreeSet::from([self.initial]);
        for &(_, label, t) in &self.transitions {
            if label.is_some_and(|e| self.alphabet.role(e) == crate::alphabet::Role::Downgrading) {
                out.insert(t);
            }
        }
        out
    }

    fn adjacency(&self) -> Vec<Vec<(Label, StateId)>> {
        let mut adj = vec![Vec::new(); self.names.len()];
        for &(q, l, t) in &self.transitions {
            adj[q].push((l, t));
        }
        adj
    }

    fn closure(adj: &[Vec<(Label, StateId)>], seeds: impl IntoIterator<Item = StateId>) -> BTreeSet<StateId> {
        let mut out: BTreeSet<StateId> = BTreeSet::new();
        let mut stack: Vec<StateId> = Vec::new();
        for s in seeds {
            if out.insert(s) {
                stack.push(s);
            }
        }
        while let Some(q) = stack.pop() {
            for &(l, t) in &adj[q] {
                if l.is_none() && out.insert(t) {
                    stack.push(t);
                }
            }
        }
        out
    }

    /// Membership by direct set simulation.
    pub fn accepts(&self, word: &Word, set: &str) -> Result<bool> {
        let ids = self.alphabet.ids_of_word(word)?;
        let accepting = self.accepting(set)?;
        let adj = self.adjacency();
        let mut current = Self::closure(&adj, [self.initial]);
        for e in ids {
            let next: Vec<StateId> = current
                .iter()
                .flat_map(|&q| adj[q].iter().filter(|(l, _)| *l == Some(e)).map(|&(_, t)| t))
                .collect();
            current = Self::closure(&adj, next);
        }
        Ok(current.iter().any(|q| accepting.contains(q)))
    }

    /// Subset construction with ε-closure. The result is complete over the
    /// NFA's alphabet (the empty subset acts as the sink) and carries every
    /// accepting set: a subset belongs to a set iff it intersects it. Only
    /// subsets reachable from the initial closure are built.
    pub fn determinize(&self) -> Lts {
        let adj = self.adjacency();
        let start = Self::closure(&adj, [self.initial]);
        let mut index: HashMap<BTreeSet<StateId>, StateId> = HashMap::new();
        let mut subsets: Vec<BTreeSet<StateId>> = Vec::new();
        let mut delta: Vec<Vec<Option<StateId>>> = Vec::new();
        let mut queue = VecDeque::new();
        index.insert(start.clone(), 0);
        subsets.push(start);
        queue.push_back(0);
        while let Some(i) = queue.pop_front() {
            let mut row = Vec::with_capacity(self.alphabet.len());
            for e in 0..self.alphabet.len() {
                let moved: Vec<StateId> = subsets[i]
                    .iter()
                    .flat_map(|&q| adj[q].iter().filter(|(l, _)| *l == Some(e)).map(|&(_, t)| t))
                    .collect();
                let target = Self::closure(&adj, moved);
                let id = match index.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len();
                        index.insert(target.clone(), id);
                        subsets.push(target);
                        queue.push_back(id);
                        id
                    }
                };
                row.push(Some(id));
            }
            delta.push(row);
        }
        let names = subsets
            .iter()
            .map(|s| {
                let inner: Vec<&str> = s.iter().map(|&q| self.names[q].as_str()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        let accepting = self
            .accepting
            .iter()
            .map(|(k, set)| {
                let members = subsets
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.iter().any(|q| set.contains(q)))
                    .map(|(i, _)| i)
                    .collect();
                (k.clone(), members)
            })
            .collect();
        Lts::from_parts(self.alphabet.clone(), names, delta, 0, accepting)
    }
}
