//! Deterministic and nondeterministic automata and the constructions the
//! deciders are built from: product, inclusion with counterexamples, and
//! secret incorporation.

mod lts;
mod nfa;

use std::collections::{BTreeSet, HashMap, VecDeque};

pub use lts::{isomorphic, Lts, LtsBuilder, StateId, F, F_PHI};
pub use nfa::{EpsilonNfa, Label};

use crate::alphabet::{PartitionedAlphabet, Word};
use crate::error::{Error, Result};

/// Re-expresses `b` over `a`'s alphabet; both must hold the same events.
fn align(a: &PartitionedAlphabet, b: &Lts) -> Result<Lts> {
    if !a.same_events(b.alphabet()) {
        return Err(Error::AlphabetMismatch(format!(
            "{{{}}} vs {{{}}}",
            join(a.events()),
            join(b.alphabet().events())
        )));
    }
    b.extend_alphabet(a)
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Synchronous product restricted to reachable pairs, together with the pair
/// behind each product state.
///
/// Accepting sets: a name present on both sides becomes the pairwise
/// intersection; a name present on one side only is paired with every state
/// of the other side.
pub fn product_with_pairs(a: &Lts, b: &Lts) -> Result<(Lts, Vec<(StateId, StateId)>)> {
    let b = align(a.alphabet(), b)?;
    let n_events = a.alphabet().len();
    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs = vec![(a.initial(), b.initial())];
    index.insert(pairs[0], 0);
    let mut delta: Vec<Vec<Option<StateId>>> = Vec::new();
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        let (p, q) = pairs[i];
        let mut row = vec![None; n_events];
        for (e, slot) in row.iter_mut().enumerate() {
            if let (Some(p2), Some(q2)) = (a.successor(p, e), b.successor(q, e)) {
                let id = *index.entry((p2, q2)).or_insert_with(|| {
                    pairs.push((p2, q2));
                    queue.push_back(pairs.len() - 1);
                    pairs.len() - 1
                });
                *slot = Some(id);
            }
        }
        delta.push(row);
    }
    let mut accepting = std::collections::BTreeMap::new();
    let names: BTreeSet<&String> = a.accepting_sets().keys().chain(b.accepting_sets().keys()).collect();
    for name in names {
        let in_a = a.accepting_sets().get(name.as_str());
        let in_b = b.accepting_sets().get(name.as_str());
        let members = pairs
            .iter()
            .enumerate()
            .filter(|(_, (p, q))| in_a.is_none_or(|s| s.contains(p)) && in_b.is_none_or(|s| s.contains(q)))
            .map(|(i, _)| i)
            .collect();
        accepting.insert(name.clone(), members);
    }
    let state_names = pairs
        .iter()
        .map(|&(p, q)| format!("({},{})", a.state_name(p), b.state_name(q)))
        .collect();
    let lts = Lts::from_parts(a.alphabet().clone(), state_names, delta, 0, accepting);
    Ok((lts, pairs))
}

/// Synchronous product of two automata over the same events.
pub fn product(a: &Lts, b: &Lts) -> Result<Lts> {
    product_with_pairs(a, b).map(|(lts, _)| lts)
}

/// Outcome of a language inclusion check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inclusion {
    Holds,
    /// A shortest, then lexicographically least, word in the difference.
    Violated(Word),
}

impl Inclusion {
    pub fn holds(&self) -> bool {
        matches!(self, Inclusion::Holds)
    }

    pub fn counterexample(&self) -> Option<&Word> {
        match self {
            Inclusion::Holds => None,
            Inclusion::Violated(w) => Some(w),
        }
    }
}

/// Decides `L_a(A) ⊆ L_b(B)` through emptiness of `A × complement(B)`.
/// Tie-breaking follows `A`'s event declaration order.
pub fn is_subset(a: &Lts, a_set: &str, b: &Lts, b_set: &str) -> Result<Inclusion> {
    let a_accepting = a.accepting(a_set)?.clone();
    let b = align(a.alphabet(), b)?;
    let complement = b.complement(b_set)?;
    let outside = complement.accepting(b_set)?.clone();
    let left = a.keep_accepting(&[]);
    let right = complement.keep_accepting(&[]);
    let (prod, pairs) = product_with_pairs(&left, &right)?;
    let targets: BTreeSet<StateId> = pairs
        .iter()
        .enumerate()
        .filter(|(_, (p, q))| a_accepting.contains(p) && outside.contains(q))
        .map(|(i, _)| i)
        .collect();
    Ok(match prod.shortest_word_into(&targets) {
        None => Inclusion::Holds,
        Some(w) => Inclusion::Violated(prod.alphabet().word_from_ids(&w)),
    })
}

/// Builds the secret-incorporated product: `F` recognizes the system language
/// `L = L_F(system)` and `Fphi` recognizes `L ∩ L_{secret_set}(secret)`.
///
/// The secret automaton is completed first when it is partial, so the `F`
/// language is unchanged by the product. When every reachable product state
/// pairs with a distinct system state, product states take the system's state
/// names; otherwise they are named `(system,secret)`.
pub fn incorporate_secret(system: &Lts, system_set: &str, secret: &Lts, secret_set: &str) -> Result<Lts> {
    incorporate_with_pairs(system, system_set, secret, secret_set).map(|(lts, _)| lts)
}

/// [`incorporate_secret`], also returning the (system, secret) pair behind
/// each state. Secret-side indices refer to the completed secret automaton.
pub fn incorporate_with_pairs(
    system: &Lts,
    system_set: &str,
    secret: &Lts,
    secret_set: &str,
) -> Result<(Lts, Vec<(StateId, StateId)>)> {
    let f = system.accepting(system_set)?.clone();
    let f_phi = secret.accepting(secret_set)?.clone();
    let secret = align(system.alphabet(), secret)?;
    let secret = if secret.is_complete() { secret } else { secret.complete() };
    let (prod, pairs) = product_with_pairs(&system.keep_accepting(&[]), &secret.keep_accepting(&[]))?;
    let f_sharp: BTreeSet<StateId> = pairs.iter().enumerate().filter(|(_, (p, _))| f.contains(p)).map(|(i, _)| i).collect();
    let f_phi_sharp: BTreeSet<StateId> = pairs
        .iter()
        .enumerate()
        .filter(|(_, (p, q))| f.contains(p) && f_phi.contains(q))
        .map(|(i, _)| i)
        .collect();
    let mut out = prod.with_accepting(F, f_sharp).with_accepting(F_PHI, f_phi_sharp);
    let firsts: BTreeSet<StateId> = pairs.iter().map(|(p, _)| *p).collect();
    if firsts.len() == pairs.len() {
        let names = pairs.iter().map(|(p, _)| system.state_name(*p).to_string()).collect();
        out = out.with_state_names(names);
    }
    Ok((out, pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::PartitionedAlphabet;

    fn ab() -> PartitionedAlphabet {
        PartitionedAlphabet::from_classes(&["a", "b"], &[], &[]).unwrap()
    }

    fn language(pairs: &[(&str, &str, &str)], accept: &[&str]) -> Lts {
        let mut b = Lts::builder(ab());
        b.state("0");
        for (s, e, d) in pairs {
            b.edge(s, e, d).unwrap();
        }
        b.set_initial(0);
        b.accept_named(F, accept.iter().copied()).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn subset_of_self_holds() {
        let g = language(&[("0", "a", "1"), ("1", "b", "0")], &["0"]);
        assert_eq!(is_subset(&g, F, &g, F).unwrap(), Inclusion::Holds);
    }

    #[test]
    fn epsilon_not_in_empty() {
        let eps = language(&[], &["0"]);
        let empty = language(&[], &[]);
        assert_eq!(is_subset(&eps, F, &empty, F).unwrap(), Inclusion::Violated(Word::empty()));
    }

    #[test]
    fn counterexample_is_shortest_then_least() {
        // L_A = {ab, ba, aab}, L_B = {ab}
        let a = language(
            &[("0", "a", "1"), ("1", "b", "2"), ("0", "b", "3"), ("3", "a", "4"), ("1", "a", "5"), ("5", "b", "6")],
            &["2", "4", "6"],
        );
        let b = language(&[("0", "a", "1"), ("1", "b", "2")], &["2"]);
        assert_eq!(is_subset(&a, F, &b, F).unwrap(), Inclusion::Violated(Word::parse("b a")));
        assert!(is_subset(&b, F, &a, F).unwrap().holds());
    }

    #[test]
    fn alphabet_mismatch() {
        let a = language(&[], &["0"]);
        let other = PartitionedAlphabet::from_classes(&["a"], &[], &[]).unwrap();
        let mut b = Lts::builder(other);
        b.state("0");
        b.set_initial(0).set_accepting(F, [0]);
        let b = b.build().unwrap();
        assert!(matches!(product(&a, &b), Err(Error::AlphabetMismatch(_))));
        assert!(matches!(is_subset(&a, F, &b, F), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn product_with_universal_is_identity() {
        let g = language(&[("0", "a", "1"), ("1", "b", "0"), ("1", "a", "2")], &["2"]);
        let mut u = Lts::builder(ab());
        u.edge("u", "a", "u").unwrap().edge("u", "b", "u").unwrap();
        u.set_initial(0);
        let u = u.build().unwrap();
        assert!(isomorphic(&product(&g, &u).unwrap(), &g.trim()));
    }

    #[test]
    fn empty_secret_incorporates_to_nothing() {
        let g = language(&[("0", "a", "1")], &["0", "1"]);
        let mut s = Lts::builder(ab());
        s.state("s");
        s.set_initial(0).set_accepting(F_PHI, []);
        let s = s.build().unwrap();
        let inc = incorporate_secret(&g, F, &s, F_PHI).unwrap();
        assert!(inc.accepting(F_PHI).unwrap().is_empty());
        assert_eq!(inc.accepting(F).unwrap().len(), 2);
        // system states pair with distinct secret states, so names carry over
        assert_eq!(inc.state_names(), &["0".to_string(), "1".to_string()]);
    }
}
