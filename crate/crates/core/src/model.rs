//! The plain-text model format.
//!
//! ```text
//! # comment
//! alphabet obs l
//! alphabet unobs h
//! alphabet down d
//! states 1 2 3
//! init 1
//! accept F: all
//! accept Fphi: 3
//! trans 1 h 2
//! trans 2 l 3
//! ```
//!
//! Events are ordered by declaration, which fixes the tie-breaking order of
//! witnesses. `accept F` may be omitted, in which case every state accepts;
//! `accept Fphi` is optional. Declarations may appear in any order.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::alphabet::{Event, PartitionedAlphabet, Role};
use crate::automata::{Lts, StateId, F, F_PHI};
use crate::error::{Error, Result};

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Attaches a line number to errors raised by the automaton builder.
fn at(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { .. } => e,
        other => parse_error(line, other.to_string()),
    }
}

/// A line stripped of its comment and split into tokens.
struct Line<'a> {
    number: usize,
    text: &'a str,
    tokens: Vec<&'a str>,
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let text = raw.split('#').next().unwrap_or("").trim();
        let tokens: Vec<&str> = text.split_whitespace().collect();
        (!tokens.is_empty()).then_some(Line { number: i + 1, text, tokens })
    })
}

pub fn parse_model(text: &str) -> Result<Lts> {
    let mut events: Vec<(Event, Role)> = Vec::new();
    let mut states: Vec<(&str, usize)> = Vec::new();
    let mut rest: Vec<Line> = Vec::new();
    for line in lines(text) {
        match line.tokens[0] {
            "alphabet" => {
                let role = line
                    .tokens
                    .get(1)
                    .and_then(|k| Role::from_keyword(k))
                    .ok_or_else(|| parse_error(line.number, "expected `alphabet obs|unobs|down EVENT...`"))?;
                for token in &line.tokens[2..] {
                    let event = Event::new(*token).map_err(at(line.number))?;
                    if events.iter().any(|(e, _)| *e == event) {
                        return Err(parse_error(line.number, format!("event {token:?} declared more than once")));
                    }
                    events.push((event, role));
                }
            }
            "states" => states.extend(line.tokens[1..].iter().map(|s| (*s, line.number))),
            "init" | "accept" | "trans" => rest.push(line),
            other => return Err(parse_error(line.number, format!("unknown declaration {other:?}"))),
        }
    }
    let alphabet = PartitionedAlphabet::new(events.iter().map(|(e, r)| (e.as_str().to_string(), *r)))?;
    let mut builder = Lts::builder(alphabet);
    for (name, number) in &states {
        builder.add_state(*name).map_err(at(*number))?;
    }
    let state = |b: &crate::automata::LtsBuilder, line: usize, name: &str| -> Result<StateId> {
        b.lookup(name).ok_or_else(|| parse_error(line, format!("undeclared state {name:?}")))
    };
    let mut initial = None;
    let mut declared_sets: BTreeSet<String> = BTreeSet::new();
    for line in &rest {
        let n = line.number;
        match line.tokens[0] {
            "init" => {
                let [_, name] = line.tokens[..] else {
                    return Err(parse_error(n, "expected `init STATE`"));
                };
                if initial.is_some() {
                    return Err(parse_error(n, "initial state declared more than once"));
                }
                initial = Some(state(&builder, n, name)?);
            }
            "accept" => {
                let body = line.text["accept".len()..].trim_start();
                let Some((name, members)) = body.split_once(':') else {
                    return Err(parse_error(n, "expected `accept NAME: STATE...`"));
                };
                let name = name.trim();
                if name != F && name != F_PHI {
                    return Err(parse_error(n, format!("unknown accepting set {name:?}; expected F or Fphi")));
                }
                if !declared_sets.insert(name.to_string()) {
                    return Err(parse_error(n, format!("accepting set {name} declared more than once")));
                }
                let members: Vec<&str> = members.split_whitespace().collect();
                let ids: BTreeSet<StateId> = if members == ["all"] {
                    (0..builder.num_states()).collect()
                } else {
                    members.iter().map(|m| state(&builder, n, m)).collect::<Result<_>>()?
                };
                builder.set_accepting(name, ids);
            }
            "trans" => {
                let [_, src, event, dst] = line.tokens[..] else {
                    return Err(parse_error(n, "expected `trans SRC EVENT DST`"));
                };
                let src = state(&builder, n, src)?;
                let dst = state(&builder, n, dst)?;
                let event = builder
                    .alphabet()
                    .id(event)
                    .ok_or_else(|| parse_error(n, format!("undeclared event {event:?}")))?;
                builder.add_transition(src, event, dst).map_err(at(n))?;
            }
            _ => unreachable!("filtered above"),
        }
    }
    let Some(initial) = initial else {
        return Err(parse_error(text.lines().count().max(1), "missing `init` declaration"));
    };
    if !declared_sets.contains(F) {
        let all = 0..builder.num_states();
        builder.set_accepting(F, all);
    }
    builder.set_initial(initial);
    builder.build()
}

/// Renders `lts` in the model format. Only the `F` and `Fphi` sets are written.
/// Parsing the output yields an equal automaton.
pub fn render_model(lts: &Lts) -> String {
    let mut out = String::new();
    let alphabet = lts.alphabet();
    // one line per run of equal roles keeps the declaration order
    let mut runs: Vec<(Role, Vec<&str>)> = Vec::new();
    for (_, e, role) in alphabet.iter() {
        match runs.last_mut() {
            Some((r, events)) if *r == role => events.push(e.as_str()),
            _ => runs.push((role, vec![e.as_str()])),
        }
    }
    for (role, events) in runs {
        let _ = writeln!(out, "alphabet {} {}", role.keyword(), events.join(" "));
    }
    let _ = writeln!(out, "states {}", lts.state_names().join(" "));
    let _ = writeln!(out, "init {}", lts.state_name(lts.initial()));
    for name in [F, F_PHI] {
        if let Ok(set) = lts.accepting(name) {
            let members: Vec<&str> = set.iter().map(|&q| lts.state_name(q)).collect();
            let _ = writeln!(out, "accept {name}: {}", members.join(" "));
        }
    }
    for (q, e, t) in lts.transitions() {
        let _ = writeln!(out, "trans {} {} {}", lts.state_name(q), alphabet.event(e), lts.state_name(t));
    }
    out
}
