//! Brute-force evaluation of opacity straight from its definition, on bounded
//! slices of the language. Shares no code with the automaton-based deciders
//! beyond stepping the transition function.

use std::collections::{BTreeSet, HashMap};

use crate::alphabet::{Event, EventId, Word};
use crate::automata::{Lts, StateId, F, F_PHI};
use crate::error::Result;
use crate::observation::ObservationKind;
use crate::opacity::OpacityVerdict;

/// Default length cap on the secret words the oracle examines.
pub const DEFAULT_SECRET_CAP: usize = 10;

/// The accepted words of length at most `bound`, in length-then-lexicographic
/// order (lexicographic by event declaration order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedLanguage {
    pub words: Vec<Word>,
    pub bound: usize,
    /// Every accepted word of at most this length is in `words`.
    pub complete_up_to: usize,
}

/// States from which `targets` can be reached through `allowed` events.
fn coreachable(lts: &Lts, allowed: &[bool], targets: &BTreeSet<StateId>) -> Vec<bool> {
    let mut live: Vec<bool> = lts.states().map(|q| targets.contains(&q)).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for (q, e, t) in lts.transitions() {
            if allowed[e] && live[t] && !live[q] {
                live[q] = true;
                changed = true;
            }
        }
    }
    live
}

/// Length-lexicographic walk from `start` using only `allowed` events, calling
/// `visit` on every word of length at most `maxlen` that can still be
/// extended into `targets`, together with the state it leads to. Stops as
/// soon as `visit` returns false.
fn walk(
    lts: &Lts,
    start: StateId,
    allowed: &[bool],
    targets: &BTreeSet<StateId>,
    maxlen: usize,
    mut visit: impl FnMut(&[EventId], StateId) -> bool,
) {
    let live = coreachable(lts, allowed, targets);
    if !live[start] {
        return;
    }
    let mut frontier: Vec<(Vec<EventId>, StateId)> = vec![(Vec::new(), start)];
    for len in 0..=maxlen {
        for (w, q) in &frontier {
            if !visit(w, *q) {
                return;
            }
        }
        if len == maxlen {
            break;
        }
        let mut next = Vec::new();
        for (w, q) in &frontier {
            for (e, &ok) in allowed.iter().enumerate() {
                if !ok {
                    continue;
                }
                if let Some(t) = lts.successor(*q, e).filter(|&t| live[t]) {
                    let mut longer = w.clone();
                    longer.push(e);
                    next.push((longer, t));
                }
            }
        }
        frontier = next;
    }
}

pub fn enumerate_language(lts: &Lts, set: &str, maxlen: usize) -> Result<BoundedLanguage> {
    let accepting = lts.accepting(set)?;
    let allowed = vec![true; lts.alphabet().len()];
    let mut words = Vec::new();
    walk(lts, lts.initial(), &allowed, accepting, maxlen, |w, q| {
        if accepting.contains(&q) {
            words.push(lts.alphabet().word_from_ids(w));
        }
        true
    });
    Ok(BoundedLanguage { words, bound: maxlen, complete_up_to: maxlen })
}

/// Longest word that must be searched to decide whether some word with an
/// observation of length `m` exists in the language of an `n`-state
/// automaton: each of the `m + 1` silent stretches between observed events
/// can be taken without repeating a state.
pub fn exactness_bound(m: usize, n: usize) -> usize {
    (m + 1) * n + m
}

/// Searches from `start`, through `allowed` events, for a word of length at
/// most `maxlen` ending in `targets` whose `visible` events spell `observation`.
/// Breadth-first over (state, matched prefix length).
fn search(
    lts: &Lts,
    start: StateId,
    allowed: &[bool],
    visible: &[bool],
    observation: &[EventId],
    targets: &BTreeSet<StateId>,
    maxlen: usize,
) -> Option<Vec<EventId>> {
    let m = observation.len();
    let mut seen: BTreeSet<(StateId, usize)> = BTreeSet::from([(start, 0)]);
    let mut layer: Vec<(StateId, usize, Vec<EventId>)> = vec![(start, 0, Vec::new())];
    for depth in 0..=maxlen {
        if let Some((_, _, w)) = layer.iter().find(|(q, i, _)| *i == m && targets.contains(q)) {
            return Some(w.clone());
        }
        if depth == maxlen {
            break;
        }
        let mut next = Vec::new();
        for (q, i, w) in &layer {
            for e in 0..allowed.len() {
                if !allowed[e] {
                    continue;
                }
                let Some(t) = lts.successor(*q, e) else { continue };
                let j = match (visible[e], observation.get(*i)) {
                    (false, _) => *i,
                    (true, Some(&o)) if o == e => i + 1,
                    _ => continue,
                };
                if seen.insert((t, j)) {
                    let mut longer = w.clone();
                    longer.push(e);
                    next.push((t, j, longer));
                }
            }
        }
        layer = next;
    }
    None
}

/// Event-indexed masks and sets derived from the observer and the system.
struct Setting<'a> {
    lts: &'a Lts,
    visible: Vec<bool>,
    downgrading: Vec<bool>,
    all: Vec<bool>,
    secret: BTreeSet<StateId>,
    public: BTreeSet<StateId>,
}

impl<'a> Setting<'a> {
    fn new(lts: &'a Lts, kind: &ObservationKind) -> Result<Self> {
        let f = lts.accepting(F)?;
        let phi = lts.accepting(F_PHI)?;
        let mask = |set: &BTreeSet<Event>| -> Vec<bool> { lts.alphabet().events().iter().map(|e| set.contains(e)).collect() };
        let (visible, downgrading) = match kind {
            ObservationKind::Natural { observable } => (mask(observable), vec![false; lts.alphabet().len()]),
            ObservationKind::Orwellian { observable, downgrading } => (mask(observable), mask(downgrading)),
        };
        Ok(Setting {
            lts,
            visible,
            downgrading,
            all: vec![true; lts.alphabet().len()],
            secret: f.intersection(phi).copied().collect(),
            public: f.difference(phi).copied().collect(),
        })
    }

    /// The state reached by the verbatim part of `word` and the observed
    /// events after it. Two words with the same key have the same candidates.
    fn key(&self, word: &[EventId]) -> (usize, Option<StateId>, Vec<EventId>) {
        let cut = word.iter().rposition(|&e| self.downgrading[e]).map_or(0, |i| i + 1);
        let (prefix, rest) = word.split_at(cut);
        let start = self.lts.step(self.lts.initial(), prefix);
        (cut, start, rest.iter().copied().filter(|&e| self.visible[e]).collect())
    }

    /// Some non-secret word observed like `word`, if one exists.
    fn equivalent_public(&self, word: &[EventId], slack: usize) -> Option<Vec<EventId>> {
        let (cut, start, observation) = self.key(word);
        let (prefix, start) = (&word[..cut], start?);
        // the unobserved part may use any event except downgrading ones
        let allowed: Vec<bool> = self.downgrading.iter().map(|d| !d).collect();
        let bound = exactness_bound(observation.len(), self.lts.num_states()) * slack;
        let tail = search(self.lts, start, &allowed, &self.visible, &observation, &self.public, bound)?;
        Some([prefix, &tail].concat())
    }
}

/// Whether `word` is a secret word whose observation class lies entirely in
/// the secret, deciding the class by search up to the exactness bound.
pub fn is_disclosing(lts: &Lts, kind: &ObservationKind, word: &Word) -> Result<bool> {
    let setting = Setting::new(lts, kind)?;
    let ids = lts.alphabet().ids_of_word(word)?;
    let secret = lts.step(lts.initial(), &ids).is_some_and(|q| setting.secret.contains(&q));
    Ok(secret && setting.equivalent_public(&ids, 1).is_none())
}

/// A non-secret word observed like `word`, searching candidates of length
/// up to `slack` times the exactness bound.
pub fn equivalent_public_word(lts: &Lts, kind: &ObservationKind, word: &Word, slack: usize) -> Result<Option<Word>> {
    let setting = Setting::new(lts, kind)?;
    let ids = lts.alphabet().ids_of_word(word)?;
    Ok(setting.equivalent_public(&ids, slack).map(|w| lts.alphabet().word_from_ids(&w)))
}

/// Opacity by definition: every secret word of length at most `secret_cap`
/// must share its observation with some non-secret word. The witness is the
/// first disclosing secret word in length-lexicographic order.
///
/// Within the cap the verdict is exact; a disclosing word longer than the cap
/// goes unnoticed.
pub fn oracle_check_opacity(lts: &Lts, kind: &ObservationKind, secret_cap: usize) -> Result<OpacityVerdict> {
    let setting = Setting::new(lts, kind)?;
    let mut witness: Option<Vec<EventId>> = None;
    let mut known: HashMap<(Option<StateId>, Vec<EventId>), bool> = HashMap::new();
    walk(lts, lts.initial(), &setting.all, &setting.secret, secret_cap, |w, q| {
        if !setting.secret.contains(&q) {
            return true;
        }
        let (_, start, observation) = setting.key(w);
        let confusable = *known
            .entry((start, observation))
            .or_insert_with(|| setting.equivalent_public(w, 1).is_some());
        if !confusable {
            witness = Some(w.to_vec());
        }
        confusable
    });
    Ok(OpacityVerdict {
        holds: witness.is_none(),
        witness: witness.map(|w| lts.alphabet().word_from_ids(&w)),
        breakdown: Vec::new(),
    })
}

/// Orwellian opacity through the decomposition over downgrade prefixes: for
/// every word s of length at most `cap` that is ε or ends in a downgrading
/// event, the secret continuations `{t : s·t ∈ φ, t downgrade-free}` must be
/// opaque within `{t : s·t ∈ L, t downgrade-free}` for the natural observer.
/// Continuations are examined up to `cap - |s|`.
pub fn oracle_check_by_prefixes(lts: &Lts, cap: usize) -> Result<bool> {
    let kind = ObservationKind::orwellian(lts.alphabet());
    let setting = Setting::new(lts, &kind)?;
    let free: Vec<bool> = setting.downgrading.iter().map(|d| !d).collect();
    let mut prefixes: BTreeSet<(usize, StateId)> = BTreeSet::new();
    let everything: BTreeSet<StateId> = lts.states().collect();
    walk(lts, lts.initial(), &setting.all, &everything, cap, |w, q| {
        if w.last().is_none_or(|&e| setting.downgrading[e]) {
            prefixes.insert((w.len(), q));
        }
        true
    });
    let mut opaque = true;
    let mut known: BTreeSet<(StateId, Vec<EventId>)> = BTreeSet::new();
    for (len, q) in prefixes {
        walk(lts, q, &free, &setting.secret, cap - len, |t, r| {
            if !setting.secret.contains(&r) {
                return true;
            }
            let observation: Vec<EventId> = t.iter().copied().filter(|&e| setting.visible[e]).collect();
            if known.contains(&(q, observation.clone())) {
                return true;
            }
            let bound = exactness_bound(observation.len(), lts.num_states());
            opaque = search(lts, q, &free, &setting.visible, &observation, &setting.public, bound).is_some();
            known.insert((q, observation));
            opaque
        });
        if !opaque {
            break;
        }
    }
    Ok(opaque)
}
