#![allow(dead_code)]

use std::collections::BTreeSet;

use opacity_core::{Lts, PartitionedAlphabet, Role, F, F_PHI};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Shape of the random systems.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_states: usize,
    pub max_observable: usize,
    pub max_unobservable: usize,
    /// Downgrading events, each present with probability one half unless `always_down`.
    pub max_downgrading: usize,
    pub always_down: bool,
    /// Probability that a given (state, event) pair has a successor.
    pub density: f64,
}

pub const SMALL: Shape = Shape {
    max_states: 6,
    max_observable: 2,
    max_unobservable: 2,
    max_downgrading: 1,
    always_down: true,
    density: 0.45,
};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn alphabet(rng: &mut StdRng, shape: Shape) -> PartitionedAlphabet {
    let n_obs = rng.gen_range(1..=shape.max_observable);
    let n_unobs = rng.gen_range(0..=shape.max_unobservable);
    let n_down = if shape.always_down { shape.max_downgrading } else { rng.gen_range(0..=shape.max_downgrading) };
    let mut events = Vec::new();
    events.extend(["a", "b", "c"].iter().take(n_obs).map(|e| (e.to_string(), Role::Observable)));
    events.extend(["u", "v", "w"].iter().take(n_unobs).map(|e| (e.to_string(), Role::Unobservable)));
    events.extend(["d", "e"].iter().take(n_down).map(|e| (e.to_string(), Role::Downgrading)));
    // shuffle declaration order so tie-breaking is not tied to roles
    for i in (1..events.len()).rev() {
        let j = rng.gen_range(0..=i);
        events.swap(i, j);
    }
    PartitionedAlphabet::new(events).unwrap()
}

/// A random deterministic system with random `F` and `Fphi`.
pub fn system(rng: &mut StdRng, shape: Shape) -> Lts {
    let alphabet = alphabet(rng, shape);
    let n = rng.gen_range(1..=shape.max_states);
    let mut b = Lts::builder(alphabet.clone());
    for q in 0..n {
        b.state(q.to_string());
    }
    for q in 0..n {
        for e in 0..alphabet.len() {
            if rng.gen_bool(shape.density) {
                b.add_transition(q, e, rng.gen_range(0..n)).unwrap();
            }
        }
    }
    let f: BTreeSet<usize> = (0..n).filter(|_| rng.gen_bool(0.7)).collect();
    let phi: BTreeSet<usize> = (0..n).filter(|_| rng.gen_bool(0.35)).collect();
    b.set_initial(0).set_accepting(F, f).set_accepting(F_PHI, phi);
    b.build().unwrap()
}

pub fn systems(seed: u64, count: usize, shape: Shape) -> Vec<Lts> {
    let mut rng = rng(seed);
    (0..count).map(|_| system(&mut rng, shape)).collect()
}

/// Maps arbitrary indices onto a word over `alphabet` (empty if the alphabet is).
pub fn word_from_indices(alphabet: &PartitionedAlphabet, indices: &[usize]) -> opacity_core::Word {
    if alphabet.is_empty() {
        return opacity_core::Word::empty();
    }
    let ids: Vec<usize> = indices.iter().map(|i| i % alphabet.len()).collect();
    alphabet.word_from_ids(&ids)
}

/// Every word over `alphabet` of length at most `maxlen`, in length-lexicographic order.
pub fn all_words(alphabet: &PartitionedAlphabet, maxlen: usize) -> Vec<opacity_core::Word> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..maxlen {
        let mut next = Vec::new();
        for w in &layer {
            for e in 0..alphabet.len() {
                let mut longer = w.clone();
                longer.push(e);
                next.push(longer);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out.into_iter().map(|ids| alphabet.word_from_ids(&ids)).collect()
}
