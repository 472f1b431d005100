//! Executable reductions between the two problem families:
//! static opacity to NI, Orwellian opacity to INI, and INI back to Orwellian
//! opacity. Each output records where its states come from so that results
//! can be reported in the source vocabulary.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::alphabet::{Event, PartitionedAlphabet, Role};
use crate::automata::{incorporate_with_pairs, EpsilonNfa, Lts, StateId, F, F_PHI};
use crate::error::{Error, Result};

/// Which copy of a source state a reduced state stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Layer {
    /// Layer 0: the system as seen by the observer.
    Observed,
    /// Layer 1: entered by the fresh High event from a secret state.
    Disclosed,
    /// Replays the system word for word before the last downgrade.
    Verbatim,
    /// No High event since the last downgrade (or since the start).
    Clean,
    /// Some High event since the last downgrade.
    Tainted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Origin {
    pub source: StateId,
    pub source_name: String,
    pub layer: Layer,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReducedAutomaton {
    Nfa(EpsilonNfa),
    Lts(Lts),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub automaton: ReducedAutomaton,
    /// Accepting sets meaningful for the target problem.
    pub accepting: Vec<String>,
    /// Roles for the target problem (observable = Low, unobservable = High,
    /// downgrading = Down).
    pub partition: PartitionedAlphabet,
    /// One entry per state of `automaton`.
    pub provenance: Vec<Origin>,
    /// The High event added by the construction, when there is one.
    pub fresh_event: Option<Event>,
}

impl ReductionOutput {
    /// The reduced problem as a deterministic automaton.
    pub fn to_lts(&self) -> Lts {
        match &self.automaton {
            ReducedAutomaton::Nfa(nfa) => nfa.determinize(),
            ReducedAutomaton::Lts(lts) => lts.clone(),
        }
    }

    pub fn nfa(&self) -> Option<&EpsilonNfa> {
        match &self.automaton {
            ReducedAutomaton::Nfa(nfa) => Some(nfa),
            ReducedAutomaton::Lts(_) => None,
        }
    }
}

/// Trimmed system with `F` and the secret states `Fphi ∩ F`.
fn secret_system(system: &Lts) -> Result<(Lts, BTreeSet<StateId>, BTreeSet<StateId>)> {
    system.accepting(F)?;
    system.accepting(F_PHI)?;
    let system = system.trim();
    let f = system.accepting(F)?.clone();
    let phi = system.accepting(F_PHI)?.intersection(&f).copied().collect();
    Ok((system, f, phi))
}

/// Builds the layered ε-NFA shared by the opacity-to-interference reductions.
struct Layered {
    nfa: EpsilonNfa,
    provenance: Vec<Origin>,
}

impl Layered {
    fn new(alphabet: PartitionedAlphabet, system: &Lts, first: Layer) -> Self {
        let q0 = system.initial();
        let name = layer_name(system, q0, first);
        Layered {
            nfa: EpsilonNfa::new(alphabet, name),
            provenance: vec![origin(system, q0, first)],
        }
    }

    fn add(&mut self, system: &Lts, q: StateId, layer: Layer) -> StateId {
        self.provenance.push(origin(system, q, layer));
        self.nfa.add_state(layer_name(system, q, layer))
    }
}

fn origin(system: &Lts, q: StateId, layer: Layer) -> Origin {
    Origin { source: q, source_name: system.state_name(q).to_string(), layer }
}

fn layer_name(system: &Lts, q: StateId, layer: Layer) -> String {
    let tag = match layer {
        Layer::Observed => "0",
        Layer::Disclosed => "1",
        Layer::Verbatim => "v",
        Layer::Clean => "clean",
        Layer::Tainted => "tainted",
    };
    format!("({},{tag})", system.state_name(q))
}

/// Adds the observed layer (keeping events with `keep`, silencing the rest
/// except those `drop` rejects outright), the disclosure layer entered by `h`,
/// and the accepting set `F = (F \ φ) × {0} ∪ φ × {1}`.
#[allow(clippy::too_many_arguments)]
fn observed_and_disclosed(
    builder: &mut Layered,
    system: &Lts,
    f: &BTreeSet<StateId>,
    phi: &BTreeSet<StateId>,
    observed: &[StateId],
    relabel: impl Fn(usize) -> Option<Option<usize>>,
    h: usize,
) {
    for (q, e, t) in system.transitions() {
        if let Some(label) = relabel(e) {
            builder.nfa.add_transition(observed[q], label, observed[t]);
        }
    }
    let mut accepting: BTreeSet<StateId> = f.difference(phi).map(|&q| observed[q]).collect();
    for &q in phi {
        let disclosed = builder.add(system, q, Layer::Disclosed);
        builder.nfa.add_transition(observed[q], Some(h), disclosed);
        accepting.insert(disclosed);
    }
    builder.nfa.set_accepting(F, accepting);
}

/// Static opacity of `Fphi` for `F` w.r.t. `observable` as an NI problem.
///
/// Observable transitions are kept, all others become silent, and every secret
/// state gets an `h`-move into a disclosure copy. `φ` is opaque iff the
/// resulting language satisfies NI with Low = `observable`, High = {h}.
pub fn opacity_to_ni(system: &Lts, observable: &BTreeSet<Event>) -> Result<ReductionOutput> {
    if let Some(e) = observable.iter().find(|e| !system.alphabet().contains(e.as_str())) {
        return Err(Error::UnknownEvent(e.to_string()));
    }
    let (system, f, phi) = secret_system(system)?;
    let source = system.alphabet();
    let h = source.fresh_event("h");
    let mut alphabet = source.retain(|e, _| observable.contains(e)).with_roles(|_, _| Role::LOW);
    let h_id = alphabet.push(h.clone(), Role::HIGH)?;
    let relabel: Vec<Option<usize>> = source.events().iter().map(|e| alphabet.id(e.as_str())).collect();

    let mut builder = Layered::new(alphabet.clone(), &system, Layer::Observed);
    let mut observed = vec![builder.nfa.initial(); system.num_states()];
    for q in system.states().filter(|&q| q != system.initial()) {
        observed[q] = builder.add(&system, q, Layer::Observed);
    }
    observed_and_disclosed(&mut builder, &system, &f, &phi, &observed, |e| Some(relabel[e]), h_id);
    Ok(ReductionOutput {
        automaton: ReducedAutomaton::Nfa(builder.nfa),
        accepting: vec![F.to_string()],
        partition: alphabet,
        provenance: builder.provenance,
        fresh_event: Some(h),
    })
}

/// Orwellian opacity as an INI problem.
///
/// On top of the NI construction, a verbatim layer replays every system word
/// exactly (unobservable events included) and hands over to the observed
/// layer at the start or across a downgrading transition. The observed layer
/// has no downgrading moves, so the hand-over happens at the last downgrade
/// and the language is `π_{o,d}(L \ φ) ∪ π_{o,d}(φ)·h`. Unobservable events
/// become High, `h` is High, downgrading events stay Down.
///
/// Without downgrading events the verbatim layer is omitted and the output
/// coincides with [`opacity_to_ni`].
pub fn opacity_to_ini(system: &Lts) -> Result<ReductionOutput> {
    let (system, f, phi) = secret_system(system)?;
    let source = system.alphabet();
    let has_down = source.iter().any(|(_, _, r)| r == Role::Downgrading);
    if !has_down {
        return opacity_to_ni(&system, &source.observable());
    }
    let h = source.fresh_event("h");
    let mut alphabet = source.clone();
    let h_id = alphabet.push(h.clone(), Role::HIGH)?;

    let mut builder = Layered::new(alphabet.clone(), &system, Layer::Verbatim);
    let mut verbatim = vec![builder.nfa.initial(); system.num_states()];
    for q in system.states().filter(|&q| q != system.initial()) {
        verbatim[q] = builder.add(&system, q, Layer::Verbatim);
    }
    let observed: Vec<StateId> = system.states().map(|q| builder.add(&system, q, Layer::Observed)).collect();
    builder.nfa.add_transition(verbatim[system.initial()], None, observed[system.initial()]);
    for (q, e, t) in system.transitions() {
        builder.nfa.add_transition(verbatim[q], Some(e), verbatim[t]);
        if source.role(e) == Role::Downgrading {
            builder.nfa.add_transition(verbatim[q], Some(e), observed[t]);
        }
    }
    observed_and_disclosed(
        &mut builder,
        &system,
        &f,
        &phi,
        &observed,
        |e| match source.role(e) {
            Role::Observable => Some(Some(e)),
            Role::Unobservable => Some(None),
            Role::Downgrading => None,
        },
        h_id,
    );
    Ok(ReductionOutput {
        automaton: ReducedAutomaton::Nfa(builder.nfa),
        accepting: vec![F.to_string()],
        partition: alphabet,
        provenance: builder.provenance,
        fresh_event: Some(h),
    })
}

/// The single-layer variant of [`opacity_to_ini`]: downgrading transitions are
/// kept inside the observed layer and unobservable events are silent
/// everywhere, including before a downgrade.
///
/// Its layer-0 downgrade entry states are exactly the source's, but it is not
/// verdict-preserving in general: silencing unobservable events before a
/// downgrade hides exactly what the Orwellian observer learns. Kept for
/// comparison; see the tests for a system where the two disagree.
pub fn opacity_to_ini_erasing(system: &Lts) -> Result<ReductionOutput> {
    let (system, f, phi) = secret_system(system)?;
    let source = system.alphabet();
    let h = source.fresh_event("h");
    let mut alphabet = source.retain(|_, r| r != Role::Unobservable);
    let h_id = alphabet.push(h.clone(), Role::HIGH)?;
    let relabel: Vec<Option<usize>> = source.events().iter().map(|e| alphabet.id(e.as_str())).collect();

    let mut builder = Layered::new(alphabet.clone(), &system, Layer::Observed);
    let mut observed = vec![builder.nfa.initial(); system.num_states()];
    for q in system.states().filter(|&q| q != system.initial()) {
        observed[q] = builder.add(&system, q, Layer::Observed);
    }
    observed_and_disclosed(&mut builder, &system, &f, &phi, &observed, |e| Some(relabel[e]), h_id);
    Ok(ReductionOutput {
        automaton: ReducedAutomaton::Nfa(builder.nfa),
        accepting: vec![F.to_string()],
        partition: alphabet,
        provenance: builder.provenance,
        fresh_event: Some(h),
    })
}

/// The two-state tracker whose `Fphi` language is the set of words changed
/// by the Orwellian projection: those with a High event after the last Down.
pub fn projection_mover(alphabet: &PartitionedAlphabet) -> Lts {
    let mut b = Lts::builder(alphabet.clone());
    let clean = b.state("clean");
    let tainted = b.state("tainted");
    for (e, _, role) in alphabet.iter() {
        let (from_clean, from_tainted) = match role {
            Role::Observable => (clean, tainted),
            Role::Unobservable => (tainted, tainted),
            Role::Downgrading => (clean, clean),
        };
        b.add_transition(clean, e, from_clean).expect("fresh state");
        b.add_transition(tainted, e, from_tainted).expect("fresh state");
    }
    b.set_initial(clean).set_accepting(F_PHI, [tainted]);
    b.build().expect("initial state set")
}

/// INI of `L_F(system)` as Orwellian opacity of the secret
/// `φ = {s ∈ L : π_{Low,Down}(s) ≠ s}`, returned already incorporated.
pub fn ini_to_opacity(system: &Lts) -> Result<ReductionOutput> {
    system.accepting(F)?;
    let base = system.keep_accepting(&[F]);
    let tracker = projection_mover(base.alphabet());
    let (lts, pairs) = incorporate_with_pairs(&base, F, &tracker, F_PHI)?;
    let provenance = pairs
        .iter()
        .map(|&(p, t)| Origin {
            source: p,
            source_name: base.state_name(p).to_string(),
            layer: if t == 0 { Layer::Clean } else { Layer::Tainted },
        })
        .collect();
    Ok(ReductionOutput {
        partition: lts.alphabet().clone(),
        automaton: ReducedAutomaton::Lts(lts),
        accepting: vec![F.to_string(), F_PHI.to_string()],
        provenance,
        fresh_event: None,
    })
}
