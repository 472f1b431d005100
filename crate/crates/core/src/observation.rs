//! Observation functions: the natural projection, the Orwellian projection and
//! the factorization of a word at its last downgrading event.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::alphabet::{Event, PartitionedAlphabet, Role, Word};
use crate::automata::{EpsilonNfa, Lts};
use crate::error::{Error, Result};

/// Which observer is attacking the system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObservationKind {
    /// Static observer: sees exactly the observable events.
    Natural { observable: BTreeSet<Event> },
    /// Sees observable events, and the whole prefix up to the last
    /// downgrading event verbatim.
    Orwellian { observable: BTreeSet<Event>, downgrading: BTreeSet<Event> },
}

impl ObservationKind {
    pub fn natural(alphabet: &PartitionedAlphabet) -> Self {
        ObservationKind::Natural { observable: alphabet.observable() }
    }

    pub fn orwellian(alphabet: &PartitionedAlphabet) -> Self {
        ObservationKind::Orwellian {
            observable: alphabet.observable(),
            downgrading: alphabet.downgrading(),
        }
    }

    pub fn observe(&self, word: &Word) -> Word {
        match self {
            ObservationKind::Natural { observable } => project_natural(word, observable),
            ObservationKind::Orwellian { observable, downgrading } => project_orwellian(word, observable, downgrading),
        }
    }
}

/// Erases every event outside `observable`, keeping order.
pub fn project_natural(word: &Word, observable: &BTreeSet<Event>) -> Word {
    word.iter().filter(|e| observable.contains(*e)).cloned().collect()
}

/// Keeps the prefix up to and including the last downgrading event verbatim
/// and projects the remainder onto `observable`.
pub fn project_orwellian(word: &Word, observable: &BTreeSet<Event>, downgrading: &BTreeSet<Event>) -> Word {
    let Factorization { prefix, continuation } = factorize(word, downgrading);
    prefix.concat(&project_natural(&continuation, observable))
}

/// Split of a word at its last downgrading event.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    /// ε, or a word ending in a downgrading event.
    pub prefix: Word,
    /// Contains no downgrading event.
    pub continuation: Word,
}

pub fn factorize(word: &Word, downgrading: &BTreeSet<Event>) -> Factorization {
    let cut = word.iter().rposition(|e| downgrading.contains(e)).map_or(0, |i| i + 1);
    Factorization {
        prefix: word.prefix(cut),
        continuation: word.suffix(cut),
    }
}

/// Deterministic automaton for the natural-projection image of every
/// accepting set of `lts`. Events outside `observable` become silent moves and
/// the result is determinized over the observable events (roles preserved).
pub fn project_language(lts: &Lts, observable: &BTreeSet<Event>) -> Result<Lts> {
    if let Some(e) = observable.iter().find(|e| !lts.alphabet().contains(e.as_str())) {
        return Err(Error::UnknownEvent(e.to_string()));
    }
    let source = lts.alphabet();
    let target = source.retain(|e, _| observable.contains(e));
    let relabel: Vec<Option<usize>> = source.events().iter().map(|e| target.id(e.as_str())).collect();
    let mut nfa = EpsilonNfa::new(target, lts.state_name(0));
    for q in 1..lts.num_states() {
        nfa.add_state(lts.state_name(q));
    }
    nfa.set_initial(lts.initial());
    for (q, e, t) in lts.transitions() {
        nfa.add_transition(q, relabel[e], t);
    }
    for (name, set) in lts.accepting_sets() {
        nfa.set_accepting(name.clone(), set.iter().copied());
    }
    Ok(nfa.determinize())
}

/// ε-NFA recognizing the Orwellian-projection image of every accepting set.
///
/// States come in two copies. The verbatim copy `(q,v)` replays the system
/// word for word; the projected copy `(q,o)` reads only observable events,
/// treats unobservable events as silent and has no downgrading moves. Control
/// passes from the verbatim copy to the projected one at the initial state or
/// across a downgrading transition, i.e. exactly at the downgrade entry states.
/// Accepting sets live on the projected copy.
pub fn orwellian_image_nfa(lts: &Lts) -> EpsilonNfa {
    let alphabet = lts.alphabet();
    let n = lts.num_states();
    let mut nfa = EpsilonNfa::new(alphabet.clone(), format!("({},v)", lts.state_name(0)));
    for q in 1..n {
        nfa.add_state(format!("({},v)", lts.state_name(q)));
    }
    for q in 0..n {
        nfa.add_state(format!("({},o)", lts.state_name(q)));
    }
    let verbatim = |q: usize| q;
    let projected = |q: usize| n + q;
    nfa.set_initial(verbatim(lts.initial()));
    nfa.add_transition(verbatim(lts.initial()), None, projected(lts.initial()));
    for (q, e, t) in lts.transitions() {
        nfa.add_transition(verbatim(q), Some(e), verbatim(t));
        match alphabet.role(e) {
            Role::Downgrading => nfa.add_transition(verbatim(q), Some(e), projected(t)),
            Role::Observable => nfa.add_transition(projected(q), Some(e), projected(t)),
            Role::Unobservable => nfa.add_transition(projected(q), None, projected(t)),
        }
    }
    for (name, set) in lts.accepting_sets() {
        nfa.set_accepting(name.clone(), set.iter().map(|&q| projected(q)));
    }
    nfa
}

/// Deterministic automaton for the Orwellian-projection image of every
/// accepting set of `lts`, over the full alphabet.
pub fn project_language_orwellian(lts: &Lts) -> Lts {
    orwellian_image_nfa(lts).determinize()
}
