mod common;

use std::collections::BTreeSet;

use opacity_core::alphabet::event_set;
use opacity_core::automata::{F, F_PHI};
use opacity_core::observation::{factorize, project_language, project_natural, project_orwellian, ObservationKind};
use opacity_core::opacity::shortest_preimage;
use opacity_core::{fixtures, oracle, Event, PartitionedAlphabet, Word};
use proptest::prelude::*;

/// A random 3-partitioned alphabet (possibly without downgrading events) and a
/// word over it of length at most 8.
fn arb_case() -> impl Strategy<Value = (PartitionedAlphabet, Word)> {
    (1usize..=3, 0usize..=3, 0usize..=2).prop_flat_map(|(o, u, d)| {
        let mut events = Vec::new();
        events.extend((0..o).map(|i| (format!("o{i}"), opacity_core::Role::Observable)));
        events.extend((0..u).map(|i| (format!("u{i}"), opacity_core::Role::Unobservable)));
        events.extend((0..d).map(|i| (format!("d{i}"), opacity_core::Role::Downgrading)));
        let alphabet = PartitionedAlphabet::new(events).unwrap();
        let n = alphabet.len();
        (Just(alphabet), prop::collection::vec(0..n, 0..=8))
    })
    .prop_map(|(alphabet, ids)| {
        let word = alphabet.word_from_ids(&ids);
        (alphabet, word)
    })
}

fn is_down(alphabet: &PartitionedAlphabet, e: &Event) -> bool {
    alphabet.downgrading().contains(e)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn orwellian_is_idempotent((alphabet, word) in arb_case()) {
        let (o, d) = (alphabet.observable(), alphabet.downgrading());
        let once = project_orwellian(&word, &o, &d);
        prop_assert_eq!(project_orwellian(&once, &o, &d), once);
    }

    #[test]
    fn factorization_identity((alphabet, word) in arb_case()) {
        let (o, d) = (alphabet.observable(), alphabet.downgrading());
        let split = factorize(&word, &d);
        prop_assert_eq!(
            project_orwellian(&split.prefix.concat(&split.continuation), &o, &d),
            split.prefix.concat(&project_natural(&split.continuation, &o))
        );
    }

    #[test]
    fn no_downgrading_means_natural((alphabet, word) in arb_case()) {
        let o = alphabet.observable();
        prop_assert_eq!(project_orwellian(&word, &o, &BTreeSet::new()), project_natural(&word, &o));
    }

    #[test]
    fn factorization_is_unique((alphabet, word) in arb_case(), cut in 0usize..=8) {
        let d = alphabet.downgrading();
        let split = factorize(&word, &d);
        prop_assert_eq!(split.prefix.concat(&split.continuation), word.clone());
        prop_assert!(split.prefix.events().last().is_none_or(|e| is_down(&alphabet, e)));
        prop_assert!(split.continuation.iter().all(|e| !is_down(&alphabet, e)));
        // any other split point violates the shape
        let cut = cut.min(word.len());
        if cut != split.prefix.len() {
            let (s, t) = (word.prefix(cut), word.suffix(cut));
            let shaped = s.events().last().is_none_or(|e| is_down(&alphabet, e)) && t.iter().all(|e| !is_down(&alphabet, e));
            prop_assert!(!shaped);
        }
    }
}

proptest! {
    #[test]
    fn language_and_word_projections_agree(seed: u64) {
        let g = common::system(&mut common::rng(seed), common::SMALL);
        let observable = g.alphabet().observable();
        let image = project_language(&g, &observable).unwrap();
        for w in oracle::enumerate_language(&g, F, 6).unwrap().words {
            prop_assert!(image.accepts(&project_natural(&w, &observable), F).unwrap());
        }
        for o in oracle::enumerate_language(&image, F, 4).unwrap().words {
            let pre = shortest_preimage(&g, F, &observable, &o).unwrap();
            prop_assert!(pre.is_some_and(|p| project_natural(&p, &observable) == o), "{}", o);
        }
    }

    #[test]
    fn full_observation_is_identity(seed: u64) {
        let g = common::system(&mut common::rng(seed), common::SMALL);
        let image = project_language(&g, &g.alphabet().event_set()).unwrap();
        for w in common::all_words(g.alphabet(), 4) {
            prop_assert_eq!(image.accepts(&w, F).unwrap(), g.accepts(&w, F).unwrap());
        }
    }
}

#[test]
fn g2_secret_image() {
    let g = fixtures::g2();
    let image = project_language(&g, &event_set(["l"])).unwrap();
    assert!(!image.accepts(&Word::empty(), F_PHI).unwrap());
    for n in 1..8 {
        assert!(image.accepts(&Word::parse(&vec!["l"; n].join(" ")), F_PHI).unwrap());
    }
    let empty = g.with_accepting(F_PHI, BTreeSet::new());
    let image = project_language(&empty, &event_set(["l"])).unwrap();
    assert!(image.shortest_accepted(F_PHI).unwrap().is_none());
}

#[test]
fn observers() {
    let g = fixtures::g2();
    let nat = ObservationKind::natural(g.alphabet());
    let orw = ObservationKind::orwellian(g.alphabet());
    assert_eq!(nat.observe(&Word::parse("h d h l")), Word::parse("l"));
    assert_eq!(orw.observe(&Word::parse("h d h l")), Word::parse("h d l"));
}
