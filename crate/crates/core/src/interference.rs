//! Non-interference (NI) and intransitive non-interference (INI).
//!
//! Roles are read from the partition: observable = Low, unobservable = High,
//! downgrading = Down. INI uses the projection that keeps Low events, keeps
//! everything up to the last Down event verbatim and erases High events after it.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::alphabet::{EventId, Word};
use crate::automata::{is_subset, Inclusion, Lts, StateId, F};
use crate::error::{Error, Result};
use crate::observation::{factorize, project_language, project_language_orwellian};
use crate::opacity::{shortest_preimage, SubVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterferenceVerdict {
    pub holds: bool,
    /// A projected word that escapes the system language.
    pub witness: Option<Word>,
    /// A shortest system word projecting onto `witness`.
    pub preimage: Option<Word>,
    /// Per downgrade entry state, for the decomposed INI method.
    pub breakdown: Vec<SubVerdict>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IniMethod {
    /// Inclusion of the Orwellian-projection image in L.
    Direct,
    /// NI of the Down-free system started at every downgrade entry state.
    Decomposed,
    /// Both, with an agreement check.
    #[default]
    Both,
}

/// `π_Low(L) ⊆ L`. Down events, if any, are erased like High ones.
pub fn check_ni(system: &Lts) -> Result<InterferenceVerdict> {
    let base = system.keep_accepting(&[F]);
    base.accepting(F)?;
    let low = base.alphabet().observable();
    let image = project_language(&base, &low)?.extend_alphabet(base.alphabet())?;
    Ok(match is_subset(&image, F, &base, F)? {
        Inclusion::Holds => InterferenceVerdict { holds: true, witness: None, preimage: None, breakdown: Vec::new() },
        Inclusion::Violated(w) => {
            let preimage = shortest_preimage(&base, F, &low, &w)?;
            InterferenceVerdict { holds: false, witness: Some(w), preimage, breakdown: Vec::new() }
        }
    })
}

/// INI by inclusion of the Orwellian-projection image of L into L.
pub fn check_ini_direct(system: &Lts) -> Result<InterferenceVerdict> {
    let base = system.keep_accepting(&[F]);
    base.accepting(F)?;
    let image = project_language_orwellian(&base);
    Ok(match is_subset(&image, F, &base, F)? {
        Inclusion::Holds => InterferenceVerdict { holds: true, witness: None, preimage: None, breakdown: Vec::new() },
        Inclusion::Violated(w) => {
            let preimage = orwellian_preimage(&base, &w)?;
            InterferenceVerdict { holds: false, witness: Some(w), preimage, breakdown: Vec::new() }
        }
    })
}

/// Shortest word of L whose Orwellian projection is `observation`, found by
/// replaying the verbatim part and searching the Down-free remainder.
fn orwellian_preimage(system: &Lts, observation: &Word) -> Result<Option<Word>> {
    let alphabet = system.alphabet();
    let split = factorize(observation, &alphabet.downgrading());
    let prefix_ids = alphabet.ids_of_word(&split.prefix)?;
    let Some(q) = system.step(system.initial(), &prefix_ids) else {
        return Ok(None);
    };
    let local = system.rebase(q)?.restrict(&alphabet.downgrading())?;
    Ok(shortest_preimage(&local, F, &alphabet.observable(), &split.continuation)?.map(|t| split.prefix.concat(&t)))
}

/// INI as NI of `L_F(G^q \ Down)` for every downgrade entry state q.
pub fn check_ini_decomposed(system: &Lts) -> Result<InterferenceVerdict> {
    system.accepting(F)?;
    let system = system.keep_accepting(&[F]).trim();
    let alphabet = system.alphabet();
    let downgrading = alphabet.downgrading();
    let entries: Vec<(StateId, Vec<EventId>)> = system.downgrade_entry_words().into_iter().collect();
    let results = entries
        .par_iter()
        .map(|(q, prefix)| -> Result<(SubVerdict, Option<Word>)> {
            let local = system.rebase(*q)?.restrict(&downgrading)?.trim();
            let v = check_ni(&local)?;
            let s0 = alphabet.word_from_ids(prefix);
            let sub = SubVerdict {
                state: system.state_name(*q).to_string(),
                state_id: *q,
                holds: v.holds,
                witness: v.witness.as_ref().map(|w| s0.concat(w)),
                local_witness: v.witness,
            };
            Ok((sub, v.preimage.map(|p| s0.concat(&p))))
        })
        .collect::<Result<Vec<_>>>()?;
    let holds = results.iter().all(|(s, _)| s.holds);
    let best = results
        .iter()
        .filter_map(|(s, pre)| s.witness.as_ref().map(|w| (w, pre)))
        .min_by_key(|(w, _)| (w.len(), alphabet.ids_of_word(w).expect("witness over the system alphabet")));
    let (witness, preimage) = match best {
        Some((w, pre)) => (Some(w.clone()), pre.clone()),
        None => (None, None),
    };
    Ok(InterferenceVerdict {
        holds,
        witness,
        preimage,
        breakdown: results.into_iter().map(|(s, _)| s).collect(),
    })
}

pub fn check_ini(system: &Lts, method: IniMethod) -> Result<InterferenceVerdict> {
    match method {
        IniMethod::Direct => check_ini_direct(system),
        IniMethod::Decomposed => check_ini_decomposed(system),
        IniMethod::Both => {
            let direct = check_ini_direct(system)?;
            let decomposed = check_ini_decomposed(system)?;
            if direct.holds != decomposed.holds {
                return Err(Error::MethodDisagreement { direct: direct.holds, decomposed: decomposed.holds });
            }
            Ok(InterferenceVerdict { breakdown: decomposed.breakdown, ..direct })
        }
    }
}

/// States of the decomposed method whose sub-check fails.
pub fn failing_states(verdict: &InterferenceVerdict) -> BTreeSet<String> {
    verdict.breakdown.iter().filter(|s| !s.holds).map(|s| s.state.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::PartitionedAlphabet;
    use crate::fixtures;

    #[test]
    fn hdl_separates_ni_from_ini() {
        let g = fixtures::hdl();
        let ni = check_ni(&g).unwrap();
        assert!(!ni.holds);
        assert_eq!(ni.witness, Some(Word::parse("l")));
        assert_eq!(ni.preimage, Some(Word::parse("h d l")));
        for m in [IniMethod::Direct, IniMethod::Decomposed, IniMethod::Both] {
            assert!(check_ini(&g, m).unwrap().holds);
        }
        let dec = check_ini_decomposed(&g).unwrap();
        assert_eq!(dec.breakdown.len(), 2);
    }

    #[test]
    fn g2_violates_ini_at_initial_state() {
        let g = fixtures::g2();
        let direct = check_ini_direct(&g).unwrap();
        assert!(!direct.holds);
        assert_eq!(direct.witness, Some(Word::parse("l")));
        assert_eq!(direct.preimage, Some(Word::parse("h l")));
        let dec = check_ini_decomposed(&g).unwrap();
        assert!(!dec.holds);
        assert!(failing_states(&dec).contains("1"));
        assert_eq!(dec.witness, Some(Word::parse("l")));
    }

    #[test]
    fn trivial_languages() {
        let alphabet = PartitionedAlphabet::from_classes(&["l"], &["h"], &["d"]).unwrap();
        let mut b = Lts::builder(alphabet.clone());
        b.state("0");
        b.set_initial(0).set_accepting(F, [0]);
        let eps = b.build().unwrap();
        assert!(check_ni(&eps).unwrap().holds);
        assert!(check_ini(&eps, IniMethod::Both).unwrap().holds);

        let mut b = Lts::builder(alphabet);
        b.edge("0", "l", "1").unwrap().edge("1", "l", "1").unwrap();
        b.set_initial(0).set_accepting(F, [0, 1]);
        let low_only = b.build().unwrap();
        assert!(check_ni(&low_only).unwrap().holds);
    }

    #[test]
    fn no_high_events_means_ini() {
        let alphabet = PartitionedAlphabet::from_classes(&["l"], &[], &["d"]).unwrap();
        let mut b = Lts::builder(alphabet);
        b.edge("0", "l", "1").unwrap().edge("1", "d", "0").unwrap().edge("0", "d", "2").unwrap();
        b.set_initial(0).set_accepting(F, [1, 2]);
        let g = b.build().unwrap();
        assert!(check_ini(&g, IniMethod::Both).unwrap().holds);
    }
}
