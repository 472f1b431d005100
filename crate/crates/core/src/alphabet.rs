//! Events, words and role-partitioned alphabets.
//!
//! The same three-way partition serves both problem families: for opacity the
//! classes are observable / unobservable / downgrading, for interference they
//! are read as Low / High / Down.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Index of an event inside a [`PartitionedAlphabet`]. The index order is the
/// declaration order, which is also the order used to break ties between
/// equally short witnesses.
pub type EventId = usize;

/// A single event token.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event(String);

impl Event {
    pub fn new(token: impl Into<String>) -> Result<Self> {
        let token = token.into();
        if token.is_empty() || token.chars().any(char::is_whitespace) {
            return Err(Error::InvalidEvent(token));
        }
        Ok(Event(token))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::borrow::Borrow<str> for Event {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// Role of an event in the partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Observable,
    Unobservable,
    Downgrading,
}

impl Role {
    /// Public actions of the interference reading.
    pub const LOW: Role = Role::Observable;
    /// Private actions of the interference reading.
    pub const HIGH: Role = Role::Unobservable;
    /// Downgrading actions of the interference reading.
    pub const DOWN: Role = Role::Downgrading;

    /// Keyword used by the model file format.
    pub fn keyword(self) -> &'static str {
        match self {
            Role::Observable => "obs",
            Role::Unobservable => "unobs",
            Role::Downgrading => "down",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Role> {
        match word {
            "obs" => Some(Role::Observable),
            "unobs" => Some(Role::Unobservable),
            "down" => Some(Role::Downgrading),
            _ => None,
        }
    }
}

/// A finite alphabet whose events are split into pairwise disjoint role classes.
///
/// Disjointness holds by construction: each event carries exactly one role.
#[derive(Debug, Clone)]
pub struct PartitionedAlphabet {
    events: Vec<Event>,
    roles: Vec<Role>,
    index: HashMap<Event, EventId>,
}

impl PartialEq for PartitionedAlphabet {
    fn eq(&self, other: &Self) -> bool {
        self.events == other.events && self.roles == other.roles
    }
}

impl Eq for PartitionedAlphabet {}

impl PartitionedAlphabet {
    pub fn new<I, E>(events: I) -> Result<Self>
    where
        I: IntoIterator<Item = (E, Role)>,
        E: Into<String>,
    {
        let mut alphabet = PartitionedAlphabet {
            events: Vec::new(),
            roles: Vec::new(),
            index: HashMap::new(),
        };
        for (event, role) in events {
            alphabet.push(Event::new(event)?, role)?;
        }
        Ok(alphabet)
    }

    /// Builds an alphabet from three classes given in declaration order:
    /// observable events first, then unobservable, then downgrading.
    pub fn from_classes(observable: &[&str], unobservable: &[&str], downgrading: &[&str]) -> Result<Self> {
        let tagged = observable
            .iter()
            .map(|e| (*e, Role::Observable))
            .chain(unobservable.iter().map(|e| (*e, Role::Unobservable)))
            .chain(downgrading.iter().map(|e| (*e, Role::Downgrading)));
        Self::new(tagged)
    }

    pub(crate) fn push(&mut self, event: Event, role: Role) -> Result<EventId> {
        if self.index.contains_key(&event) {
            return Err(Error::DuplicateEvent(event.0));
        }
        let id = self.events.len();
        self.index.insert(event.clone(), id);
        self.events.push(event);
        self.roles.push(role);
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn event(&self, id: EventId) -> &Event {
        &self.events[id]
    }

    pub fn role(&self, id: EventId) -> Role {
        self.roles[id]
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn id(&self, event: &str) -> Option<EventId> {
        self.index.get(event).copied()
    }

    pub fn require(&self, event: &str) -> Result<EventId> {
        self.id(event).ok_or_else(|| Error::UnknownEvent(event.to_string()))
    }

    pub fn contains(&self, event: &str) -> bool {
        self.index.contains_key(event)
    }

    pub fn iter(&self) -> impl Iterator<Item = (EventId, &Event, Role)> + '_ {
        self.events.iter().zip(&self.roles).enumerate().map(|(i, (e, r))| (i, e, *r))
    }

    /// All events carrying `role`.
    pub fn class(&self, role: Role) -> BTreeSet<Event> {
        self.iter().filter(|(_, _, r)| *r == role).map(|(_, e, _)| e.clone()).collect()
    }

    pub fn observable(&self) -> BTreeSet<Event> {
        self.class(Role::Observable)
    }

    pub fn unobservable(&self) -> BTreeSet<Event> {
        self.class(Role::Unobservable)
    }

    pub fn downgrading(&self) -> BTreeSet<Event> {
        self.class(Role::Downgrading)
    }

    pub fn event_set(&self) -> BTreeSet<Event> {
        self.events.iter().cloned().collect()
    }

    /// Keeps the events satisfying `keep`, preserving order and roles.
    pub fn retain(&self, mut keep: impl FnMut(&Event, Role) -> bool) -> PartitionedAlphabet {
        let mut out = PartitionedAlphabet::new(std::iter::empty::<(String, Role)>()).expect("empty alphabet");
        for (_, e, r) in self.iter() {
            if keep(e, r) {
                out.push(e.clone(), r).expect("events are already distinct");
            }
        }
        out
    }

    /// Same events, reassigned roles.
    pub fn with_roles(&self, mut role_of: impl FnMut(&Event, Role) -> Role) -> PartitionedAlphabet {
        let mut out = self.clone();
        for (i, e) in self.events.iter().enumerate() {
            out.roles[i] = role_of(e, self.roles[i]);
        }
        out
    }

    /// A token not yet used as an event, derived from `base`.
    pub fn fresh_event(&self, base: &str) -> Event {
        if !self.contains(base) {
            return Event(base.to_string());
        }
        (1..)
            .map(|i| format!("{base}_{i}"))
            .find(|candidate| !self.contains(candidate))
            .map(Event)
            .expect("unbounded search")
    }

    /// True when both alphabets hold the same events, ignoring order and roles.
    pub fn same_events(&self, other: &PartitionedAlphabet) -> bool {
        self.len() == other.len() && self.events.iter().all(|e| other.contains(e.as_str()))
    }

    pub(crate) fn ids_of(&self, events: &BTreeSet<Event>) -> Result<BTreeSet<EventId>> {
        events.iter().map(|e| self.require(e.as_str())).collect()
    }

    pub fn word_from_ids(&self, ids: &[EventId]) -> Word {
        Word(ids.iter().map(|&i| self.events[i].clone()).collect())
    }

    pub fn ids_of_word(&self, word: &Word) -> Result<Vec<EventId>> {
        word.iter().map(|e| self.require(e.as_str())).collect()
    }
}

/// A finite sequence of events. The empty word is ε.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Event>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Parses whitespace-separated event tokens. Blank input is ε.
    pub fn parse(text: &str) -> Word {
        Word(text.split_whitespace().map(|t| Event(t.to_string())).collect())
    }

    pub fn from_events(events: Vec<Event>) -> Self {
        Word(events)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Event> {
        self.0.iter()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut events = self.0.clone();
        events.extend(other.0.iter().cloned());
        Word(events)
    }

    pub fn push(&mut self, event: Event) {
        self.0.push(event);
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn suffix(&self, from: usize) -> Word {
        Word(self.0[from..].to_vec())
    }

    /// Space-separated tokens; the empty word renders as the empty string.
    pub fn tokens(&self) -> String {
        self.0.iter().map(Event::as_str).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("ε")
        } else {
            f.write_str(&self.tokens())
        }
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.tokens())
    }
}

impl FromIterator<Event> for Word {
    fn from_iter<T: IntoIterator<Item = Event>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Event;
    type IntoIter = std::slice::Iter<'a, Event>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Convenience for building event sets in tests and callers.
pub fn event_set<'a>(tokens: impl IntoIterator<Item = &'a str>) -> BTreeSet<Event> {
    tokens.into_iter().map(|t| Event(t.to_string())).collect()
}
