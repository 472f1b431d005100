//! Opacity deciders for natural and Orwellian observers, with disclosing
//! witnesses.
//!
//! Systems are secret-incorporated automata: accepting set [`F`] recognizes
//! the behaviour L and [`F_PHI`] the secret φ. When `Fphi` is not contained in
//! `F`, the secret actually checked is `L ∩ φ`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::alphabet::{Event, EventId, Word};
use crate::automata::{is_subset, Lts, StateId, F, F_PHI};
use crate::error::{Error, Result};
use crate::observation::{project_language, ObservationKind};
use crate::oracle::enumerate_language;

const SECRET: &str = "secret";
const NON_SECRET: &str = "non-secret";

/// Result of one per-state sub-check of the Orwellian decision procedure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubVerdict {
    /// Name of the downgrade entry state.
    pub state: String,
    #[serde(skip)]
    pub state_id: StateId,
    pub holds: bool,
    /// Disclosing trace of the local problem started at `state`.
    pub local_witness: Option<Word>,
    /// The local witness prefixed by a downgrade-terminated path to `state`.
    pub witness: Option<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpacityVerdict {
    pub holds: bool,
    /// A disclosing trace over the system alphabet.
    pub witness: Option<Word>,
    /// Per downgrade entry state, in state order. Empty for static checks.
    pub breakdown: Vec<SubVerdict>,
}

impl OpacityVerdict {
    fn holds() -> Self {
        OpacityVerdict { holds: true, witness: None, breakdown: Vec::new() }
    }
}

/// `F`, and the secret states `Fphi ∩ F`.
fn language_sets(system: &Lts) -> Result<(BTreeSet<StateId>, BTreeSet<StateId>)> {
    let f = system.accepting(F)?.clone();
    let phi = system.accepting(F_PHI)?.intersection(&f).copied().collect();
    Ok((f, phi))
}

/// Shortest-then-least word of accepting set `set` whose natural projection
/// onto `observable` equals `observation`.
pub fn shortest_preimage(lts: &Lts, set: &str, observable: &BTreeSet<Event>, observation: &Word) -> Result<Option<Word>> {
    let accepting = lts.accepting(set)?;
    let alphabet = lts.alphabet();
    let target = alphabet.ids_of_word(observation)?;
    let visible: Vec<bool> = alphabet.events().iter().map(|e| observable.contains(e)).collect();
    let m = target.len();
    let key = |q: StateId, i: usize| q * (m + 1) + i;
    let mut parent: Vec<Option<(usize, EventId)>> = vec![None; lts.num_states() * (m + 1)];
    let mut seen = vec![false; lts.num_states() * (m + 1)];
    let start = key(lts.initial(), 0);
    seen[start] = true;
    let mut queue = VecDeque::from([(lts.initial(), 0usize)]);
    while let Some((q, i)) = queue.pop_front() {
        if i == m && accepting.contains(&q) {
            let mut word = Vec::new();
            let mut node = key(q, i);
            while let Some((prev, e)) = parent[node] {
                word.push(e);
                node = prev;
            }
            word.reverse();
            return Ok(Some(alphabet.word_from_ids(&word)));
        }
        for (e, &seen_by_observer) in visible.iter().enumerate() {
            let Some(t) = lts.successor(q, e) else { continue };
            let j = if seen_by_observer {
                if i < m && target[i] == e {
                    i + 1
                } else {
                    continue;
                }
            } else {
                i
            };
            let k = key(t, j);
            if !seen[k] {
                seen[k] = true;
                parent[k] = Some((key(q, i), e));
                queue.push_back((t, j));
            }
        }
    }
    Ok(None)
}

/// Shortest-then-least word of `lts` ending in `targets` whose observation
/// is accepted by `bad` in `bad_states`: a breadth-first search over the
/// system paired with the observation automaton.
fn shortest_with_observation(
    lts: &Lts,
    targets: &BTreeSet<StateId>,
    bad: &Lts,
    bad_states: &BTreeSet<StateId>,
) -> Option<Word> {
    let alphabet = lts.alphabet();
    let relabel: Vec<Option<EventId>> = alphabet.events().iter().map(|e| bad.alphabet().id(e.as_str())).collect();
    let start = (lts.initial(), bad.initial());
    let mut parent: HashMap<(StateId, StateId), ((StateId, StateId), EventId)> = HashMap::new();
    let mut seen: BTreeSet<(StateId, StateId)> = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((q, p)) = queue.pop_front() {
        if targets.contains(&q) && bad_states.contains(&p) {
            let mut word = Vec::new();
            let mut node = (q, p);
            while let Some(&(prev, e)) = parent.get(&node) {
                word.push(e);
                node = prev;
            }
            word.reverse();
            return Some(alphabet.word_from_ids(&word));
        }
        for (e, o) in relabel.iter().enumerate() {
            let Some(q2) = lts.successor(q, e) else { continue };
            let p2 = match o {
                Some(o) => bad.successor(p, *o).expect("determinized image is complete"),
                None => p,
            };
            if seen.insert((q2, p2)) {
                parent.insert((q2, p2), ((q, p), e));
                queue.push_back((q2, p2));
            }
        }
    }
    None
}

/// Opacity of `L_Fphi` for `L_F` against a static observer seeing `observable`,
/// decided as the inclusion `π(φ) ⊆ π(L \ φ)`.
///
/// On violation the witness is a shortest, then least, disclosing word: a
/// secret word whose observation lies in `π(φ) \ π(L \ φ)`.
pub fn check_opacity_static(system: &Lts, observable: &BTreeSet<Event>) -> Result<OpacityVerdict> {
    let (f, phi) = language_sets(system)?;
    let rest: BTreeSet<StateId> = f.difference(&phi).copied().collect();
    let marked = system.keep_accepting(&[]).with_accepting(SECRET, phi.clone()).with_accepting(NON_SECRET, rest);
    let image = project_language(&marked, observable)?;
    if is_subset(&image, SECRET, &image, NON_SECRET)?.holds() {
        return Ok(OpacityVerdict::holds());
    }
    let bad: BTreeSet<StateId> = image.accepting(SECRET)?.difference(image.accepting(NON_SECRET)?).copied().collect();
    let witness = shortest_with_observation(&marked, &phi, &image, &bad)
        .expect("an observation of the secret image has a secret preimage");
    Ok(OpacityVerdict { holds: false, witness: Some(witness), breakdown: Vec::new() })
}

/// Opacity against the Orwellian observer induced by the system's partition.
///
/// For every downgrade entry state q (in state order) the static check runs on
/// the system started at q with downgrading events removed; φ is opaque iff
/// every sub-check holds. The global witness is the shortest of the sub-check
/// witnesses, each being a downgrade-terminated path to q followed by the
/// local witness.
pub fn check_opacity_orwellian(system: &Lts) -> Result<OpacityVerdict> {
    language_sets(system)?;
    let system = system.trim();
    let alphabet = system.alphabet();
    let observable = alphabet.observable();
    let downgrading = alphabet.downgrading();
    let entries: Vec<(StateId, Vec<EventId>)> = system.downgrade_entry_words().into_iter().collect();
    let breakdown = entries
        .par_iter()
        .map(|(q, prefix)| -> Result<SubVerdict> {
            let local = system.rebase(*q)?.restrict(&downgrading)?.trim();
            let verdict = check_opacity_static(&local, &observable)?;
            let witness = verdict
                .witness
                .as_ref()
                .map(|t| alphabet.word_from_ids(prefix).concat(t));
            Ok(SubVerdict {
                state: system.state_name(*q).to_string(),
                state_id: *q,
                holds: verdict.holds,
                local_witness: verdict.witness,
                witness,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let holds = breakdown.iter().all(|s| s.holds);
    let witness = breakdown
        .iter()
        .filter_map(|s| s.witness.as_ref())
        .map(|w| (w.len(), alphabet.ids_of_word(w).expect("witness over the system alphabet"), w))
        .min_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)))
        .map(|(_, _, w)| w.clone());
    Ok(OpacityVerdict { holds, witness, breakdown })
}

/// The static check using the system's own observable class.
pub fn check_opacity_natural(system: &Lts) -> Result<OpacityVerdict> {
    check_opacity_static(system, &system.alphabet().observable())
}

/// Words of the `F`-language up to `bound` that `kind` cannot tell apart from `word`.
pub fn disclosing_class(system: &Lts, word: &Word, kind: &ObservationKind, bound: usize) -> Result<Vec<Word>> {
    if !system.accepts(word, F)? {
        return Err(Error::WordRejected(word.tokens()));
    }
    let target = kind.observe(word);
    Ok(enumerate_language(system, F, bound)?
        .words
        .into_iter()
        .filter(|w| kind.observe(w) == target)
        .collect())
}
