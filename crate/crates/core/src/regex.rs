//! Regular expressions over event tokens.
//!
//! Events are whitespace-separated tokens, juxtaposition is concatenation,
//! `+` is union, postfix `*` is Kleene star, parentheses group and `()`
//! denotes the empty word. Star binds tightest, then concatenation, then
//! union: `h l + h d h l l*` is `(h l) + (h d h l (l*))`.

use std::collections::{BTreeSet, HashMap};

use crate::alphabet::{EventId, PartitionedAlphabet};
use crate::automata::{EpsilonNfa, Lts, StateId, F};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regex {
    Epsilon,
    Event(EventId),
    Concat(Vec<Regex>),
    Union(Vec<Regex>),
    Star(Box<Regex>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token<'a> {
    Event(&'a str),
    Plus,
    Star,
    Open,
    Close,
}

fn is_operator(c: char) -> bool {
    matches!(c, '+' | '*' | '(' | ')')
}

fn lex(pattern: &str) -> Vec<(usize, Token<'_>)> {
    let mut out = Vec::new();
    let mut chars = pattern.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let token = match c {
            '+' => Token::Plus,
            '*' => Token::Star,
            '(' => Token::Open,
            ')' => Token::Close,
            _ => {
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if d.is_whitespace() || is_operator(d) {
                        break;
                    }
                    end = j + d.len_utf8();
                    chars.next();
                }
                out.push((i, Token::Event(&pattern[i..end])));
                continue;
            }
        };
        chars.next();
        out.push((i, token));
    }
    out
}

struct Parser<'a, 'b> {
    tokens: Vec<(usize, Token<'a>)>,
    pos: usize,
    end: usize,
    alphabet: &'b PartitionedAlphabet,
}

impl<'a> Parser<'a, '_> {
    fn peek(&self) -> Option<Token<'a>> {
        self.tokens.get(self.pos).map(|t| t.1)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Regex { offset: self.offset(), message: message.into() }
    }

    fn union(&mut self) -> Result<Regex> {
        let mut branches = vec![self.concat()?];
        while self.peek() == Some(Token::Plus) {
            self.pos += 1;
            branches.push(self.concat()?);
        }
        Ok(if branches.len() == 1 { branches.pop().expect("one branch") } else { Regex::Union(branches) })
    }

    fn concat(&mut self) -> Result<Regex> {
        let mut parts = Vec::new();
        while matches!(self.peek(), Some(Token::Event(_) | Token::Open)) {
            parts.push(self.starred()?);
        }
        match parts.len() {
            0 => Err(self.error(match self.peek() {
                None => "unexpected end of pattern".to_string(),
                Some(Token::Star) => "`*` must follow an expression".to_string(),
                Some(_) => "expected an event or `(`".to_string(),
            })),
            1 => Ok(parts.pop().expect("one part")),
            _ => Ok(Regex::Concat(parts)),
        }
    }

    fn starred(&mut self) -> Result<Regex> {
        let mut inner = self.atom()?;
        while self.peek() == Some(Token::Star) {
            self.pos += 1;
            inner = Regex::Star(Box::new(inner));
        }
        Ok(inner)
    }

    fn atom(&mut self) -> Result<Regex> {
        match self.peek() {
            Some(Token::Event(name)) => {
                let id = self.alphabet.id(name).ok_or_else(|| self.error(format!("unknown event {name:?}")))?;
                self.pos += 1;
                Ok(Regex::Event(id))
            }
            Some(Token::Open) => {
                self.pos += 1;
                if self.peek() == Some(Token::Close) {
                    self.pos += 1;
                    return Ok(Regex::Epsilon);
                }
                let inner = self.union()?;
                if self.peek() != Some(Token::Close) {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error("expected an event or `(`")),
        }
    }
}

pub fn parse_regex(pattern: &str, alphabet: &PartitionedAlphabet) -> Result<Regex> {
    let mut parser = Parser { tokens: lex(pattern), pos: 0, end: pattern.len(), alphabet };
    let regex = parser.union()?;
    if parser.pos < parser.tokens.len() {
        return Err(parser.error("unexpected token"));
    }
    Ok(regex)
}

impl Regex {
    /// Thompson construction: one entry and one exit state per subexpression.
    pub fn to_nfa(&self, alphabet: &PartitionedAlphabet) -> EpsilonNfa {
        let mut nfa = EpsilonNfa::new(alphabet.clone(), "0");
        let exit = self.build(&mut nfa, 0);
        nfa.set_accepting(F, [exit]);
        nfa
    }

    fn fresh(nfa: &mut EpsilonNfa) -> StateId {
        let n = nfa.num_states();
        nfa.add_state(n.to_string())
    }

    fn build(&self, nfa: &mut EpsilonNfa, entry: StateId) -> StateId {
        match self {
            Regex::Epsilon => {
                let exit = Self::fresh(nfa);
                nfa.add_transition(entry, None, exit);
                exit
            }
            Regex::Event(e) => {
                let exit = Self::fresh(nfa);
                nfa.add_transition(entry, Some(*e), exit);
                exit
            }
            Regex::Concat(parts) => parts.iter().fold(entry, |at, part| part.build(nfa, at)),
            Regex::Union(branches) => {
                let exit = Self::fresh(nfa);
                for branch in branches {
                    let start = Self::fresh(nfa);
                    nfa.add_transition(entry, None, start);
                    let end = branch.build(nfa, start);
                    nfa.add_transition(end, None, exit);
                }
                exit
            }
            Regex::Star(inner) => {
                let start = Self::fresh(nfa);
                let exit = Self::fresh(nfa);
                nfa.add_transition(entry, None, start);
                let end = inner.build(nfa, start);
                nfa.add_transition(end, None, start);
                nfa.add_transition(start, None, exit);
                exit
            }
        }
    }
}

/// Minimal complete automaton for the `set` language of `lts`, by Moore's
/// partition refinement. States are named by block index.
fn minimize(lts: &Lts, set: &str) -> Result<Lts> {
    let lts = lts.keep_accepting(&[set]).trim();
    let lts = if lts.is_complete() { lts } else { lts.complete().trim() };
    let accepting = lts.accepting(set)?;
    let n_events = lts.alphabet().len();
    let mut block: Vec<usize> = lts.states().map(|q| usize::from(accepting.contains(&q))).collect();
    loop {
        let mut signatures: HashMap<Vec<usize>, usize> = HashMap::new();
        let refined: Vec<usize> = lts
            .states()
            .map(|q| {
                let mut sig = vec![block[q]];
                sig.extend((0..n_events).map(|e| block[lts.successor(q, e).expect("complete")]));
                let next = signatures.len();
                *signatures.entry(sig).or_insert(next)
            })
            .collect();
        let stable = signatures.len() == block.iter().collect::<BTreeSet<_>>().len();
        block = refined;
        if stable {
            break;
        }
    }
    let n_blocks = block.iter().max().map_or(0, |m| m + 1);
    let mut b = Lts::builder(lts.alphabet().clone());
    for i in 0..n_blocks {
        b.state(i.to_string());
    }
    let mut seen = vec![false; n_blocks];
    for q in lts.states() {
        if std::mem::replace(&mut seen[block[q]], true) {
            continue;
        }
        for e in 0..n_events {
            b.add_transition(block[q], e, block[lts.successor(q, e).expect("complete")])?;
        }
    }
    b.set_initial(block[lts.initial()]);
    b.set_accepting(F, accepting.iter().map(|&q| block[q]));
    b.build()
}

/// Compiles `pattern` to a minimal complete deterministic automaton over
/// `alphabet` whose accepting set [`F`] recognizes the pattern's language.
pub fn compile_regex(pattern: &str, alphabet: &PartitionedAlphabet) -> Result<Lts> {
    let nfa = parse_regex(pattern, alphabet)?.to_nfa(alphabet);
    minimize(&nfa.determinize(), F)
}
